//! Run configuration: TOML file, region specs and flag overrides.

use crate::error::CliError;
use qd_core::lattice::{Axis, DeskCone, Direction};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: usize = 20;

fn one() -> u32 {
    1
}

/// A region to work on.
///
/// In TOML either a preset string (see [`RegionSpec::from_str`]) or a table
/// with a `kind` key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionSpec {
    Rectangle {
        #[serde(rename = "N")]
        n: u32,
        #[serde(default = "one")]
        n0: u32,
        #[serde(default = "one")]
        m0: u32,
    },
    Layers {
        #[serde(default)]
        y: i32,
        /// (first square x, number of squares) for each row, bottom to top.
        rows: Vec<(i32, u32)>,
    },
    /// One of the built-in cones with apex at the origin, cut by the rectangle (N, 2, 1).
    Desk {
        cone: DeskCone,
        #[serde(rename = "N", default = "one")]
        n: u32,
    },
    Cone(ConeSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeSpec {
    Angles {
        theta1: f64,
        theta2: f64,
        apex: (f64, f64),
        #[serde(rename = "N")]
        n: u32,
    },
    Paths {
        p1: Vec<(u32, u32)>,
        p2: Vec<(u32, u32)>,
        #[serde(rename = "N")]
        n: u32,
        n0: u32,
        m0: u32,
        #[serde(default = "up_right")]
        dir1: Direction,
        #[serde(default = "up_right")]
        dir2: Direction,
        #[serde(default)]
        tail1: TailSpec,
        #[serde(default)]
        tail2: TailSpec,
    },
}

fn up_right() -> Direction {
    Direction::UpRight
}

/// What a staircase does after its listed segments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailSpec {
    /// Repeat the segments forever.
    #[default]
    Periodic,
    Horizontal,
    Vertical,
}

impl TailSpec {
    pub fn axis(self) -> Option<Axis> {
        match self {
            TailSpec::Periodic => None,
            TailSpec::Horizontal => Some(Axis::Horizontal),
            TailSpec::Vertical => Some(Axis::Vertical),
        }
    }
}

impl RegionSpec {
    /// Short form for tables: the preset string when there is one, JSON otherwise.
    pub fn label(&self) -> String {
        match self {
            RegionSpec::Rectangle { n, n0: 1, m0: 1 } => format!("rect:{n}"),
            RegionSpec::Rectangle { n, n0, m0 } => format!("rect:{n},{n0},{m0}"),
            RegionSpec::Layers { y: 0, rows } => {
                let rows: Vec<String> = rows.iter().map(|(x, c)| format!("{x}:{c}")).collect();
                format!("layers:{}", rows.join(","))
            }
            RegionSpec::Desk { cone: DeskCone::Quarter, n } => format!("desk-quarter:{n}"),
            RegionSpec::Desk { cone: DeskCone::LShape, n } => format!("desk-l:{n}"),
            _ => serde_json::to_string(self).expect("region serializes"),
        }
    }
}

impl FromStr for RegionSpec {
    type Err = CliError;

    /// Accepts `plaquette`, `l-shape`, `rect:N[,n0,m0]`, `layers:x:c,x:c,...`,
    /// `desk-quarter[:N]`, `desk-l[:N]` and `cone:theta1,theta2,ax,ay,N`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("bad region `{s}`: {why}"));
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        let nums = |r: &str| -> Result<Vec<f64>, CliError> {
            r.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad("expected numbers"))).collect()
        };
        let uint = |x: f64| -> Result<u32, CliError> {
            if x.fract() == 0.0 && x >= 0.0 && x <= u32::MAX as f64 {
                Ok(x as u32)
            } else {
                Err(bad("expected a non-negative integer"))
            }
        };
        match (head, rest) {
            ("plaquette", None) => Ok(RegionSpec::Layers { y: 0, rows: vec![(0, 1)] }),
            ("l-shape", None) => Ok(RegionSpec::Layers { y: 0, rows: vec![(0, 3), (0, 2)] }),
            ("desk-quarter" | "desk-l", n) => {
                let cone = if head == "desk-l" { DeskCone::LShape } else { DeskCone::Quarter };
                let n = match n {
                    None => 1,
                    Some(r) => uint(nums(r)?.first().copied().ok_or_else(|| bad("missing N"))?)?,
                };
                Ok(RegionSpec::Desk { cone, n })
            }
            ("rect" | "rectangle", Some(r)) => match nums(r)?[..] {
                [n] => Ok(RegionSpec::Rectangle { n: uint(n)?, n0: 1, m0: 1 }),
                [n, a, b] => Ok(RegionSpec::Rectangle { n: uint(n)?, n0: uint(a)?, m0: uint(b)? }),
                _ => Err(bad("expected N or N,n0,m0")),
            },
            ("layers", Some(r)) => {
                let rows = r
                    .split(',')
                    .map(|row| {
                        let (x, c) = row.split_once(':').ok_or_else(|| bad("rows are x:count"))?;
                        let x = x.trim().parse::<i32>().map_err(|_| bad("row start"))?;
                        let c = c.trim().parse::<u32>().map_err(|_| bad("row length"))?;
                        Ok((x, c))
                    })
                    .collect::<Result<_, CliError>>()?;
                Ok(RegionSpec::Layers { y: 0, rows })
            }
            ("cone", Some(r)) => match nums(r)?[..] {
                [theta1, theta2, ax, ay, n] => {
                    Ok(RegionSpec::Cone(ConeSpec::Angles { theta1, theta2, apex: (ax, ay), n: uint(n)? }))
                }
                _ => Err(bad("expected theta1,theta2,ax,ay,N")),
            },
            _ => Err(bad("unknown form")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RegionField {
    Preset(String),
    Table(RegionSpec),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    group: Option<String>,
    groups: Option<Vec<String>>,
    region: Option<RegionField>,
    regions: Option<Vec<RegionField>>,
    checks: Option<Vec<String>>,
    seed: Option<u64>,
    budget: Option<u64>,
    samples: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub groups: Vec<String>,
    pub regions: Vec<RegionSpec>,
    pub checks: Vec<String>,
    pub seed: u64,
    pub budget: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Flag values before merging with a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub groups: Vec<String>,
    pub regions: Vec<String>,
    pub checks: Vec<String>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn region_of(f: RegionField) -> Result<RegionSpec, CliError> {
    match f {
        RegionField::Preset(s) => s.parse(),
        RegionField::Table(r) => Ok(r),
    }
}

fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> Result<Self, CliError> {
        let file = match &o.config {
            Some(p) => load(p)?,
            None => FileConfig::default(),
        };
        let groups = if !o.groups.is_empty() {
            o.groups
        } else {
            file.groups.or(file.group.map(|g| vec![g])).unwrap_or_default()
        };
        let regions = if !o.regions.is_empty() {
            o.regions.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        } else {
            let fields = file.regions.or(file.region.map(|r| vec![r])).unwrap_or_default();
            fields.into_iter().map(region_of).collect::<Result<_, _>>()?
        };
        let checks = if !o.checks.is_empty() { o.checks } else { file.checks.unwrap_or_default() };
        Ok(RunConfig {
            groups,
            regions,
            checks,
            seed: o.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            budget: o.budget.or(file.budget).unwrap_or(qd_core::configs::DEFAULT_BUDGET),
            samples: o.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            out: o.out.or(file.out),
            format: o.format.or(file.format).unwrap_or_default(),
        })
    }

    /// The single group and region that `count` and `verify` need.
    pub fn single(&self) -> Result<(&str, &RegionSpec), CliError> {
        match (&self.groups[..], &self.regions[..]) {
            ([g], [r]) => Ok((g, r)),
            ([], _) => Err(CliError::Usage("no group given (use --group)".into())),
            (_, []) => Err(CliError::Usage("no region given (use --region)".into())),
            _ => Err(CliError::Usage("exactly one group and one region are needed".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!("rect:2".parse::<RegionSpec>().unwrap(), RegionSpec::Rectangle { n: 2, n0: 1, m0: 1 });
        assert_eq!(
            "layers:0:3, 1:2".parse::<RegionSpec>().unwrap(),
            RegionSpec::Layers { y: 0, rows: vec![(0, 3), (1, 2)] }
        );
        assert_eq!("desk-l:2".parse::<RegionSpec>().unwrap(), RegionSpec::Desk { cone: DeskCone::LShape, n: 2 });
        assert!("rect:1.5".parse::<RegionSpec>().is_err());
        assert!("hexagon".parse::<RegionSpec>().is_err());
        for s in ["rect:2", "rect:1,2,1", "layers:0:3,1:2", "desk-quarter:1", "desk-l:2"] {
            assert_eq!(s.parse::<RegionSpec>().unwrap().label(), s);
        }
    }

    #[test]
    fn toml_tables_parse() {
        let text = r#"
            group = "Z2"
            checks = ["counting"]
            [region]
            kind = "cone"
            p1 = [[0, 1]]
            p2 = [[1, 0]]
            N = 2
            n0 = 1
            m0 = 1
            tail1 = "horizontal"
            tail2 = "vertical"
        "#;
        let f: FileConfig = toml::from_str(text).unwrap();
        let r = region_of(f.region.unwrap()).unwrap();
        assert!(matches!(r, RegionSpec::Cone(ConeSpec::Paths { n: 2, tail2: TailSpec::Vertical, .. })));

        let f: FileConfig = toml::from_str("region = { kind = \"rectangle\", N = 1 }").unwrap();
        assert_eq!(region_of(f.region.unwrap()).unwrap(), RegionSpec::Rectangle { n: 1, n0: 1, m0: 1 });
        let f: FileConfig = toml::from_str("region = \"desk-quarter\"").unwrap();
        assert_eq!(region_of(f.region.unwrap()).unwrap(), RegionSpec::Desk { cone: DeskCone::Quarter, n: 1 });
        assert!(toml::from_str::<FileConfig>("colour = 3").is_err());
    }
}
