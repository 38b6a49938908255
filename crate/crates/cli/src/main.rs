//! `qdouble`: counting, verification and benchmarks for quantum double ground states.

mod bench;
mod checks;
mod config;
mod error;
mod geometry;
mod report;

use clap::{Args, Parser, Subcommand};
use config::{Format, Overrides, RunConfig};
use error::CliError;
use geometry::Geometry;
use qd_core::configs::{count_admissible_bruteforce, verify_counting, FastEnumerator};
use qd_core::Group;
use report::{seconds, Report};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "qdouble", version, about = "Exact enumeration and state checks for quantum double models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count admissible configurations and their boundary-potential fibers.
    Count {
        #[command(flatten)]
        common: Common,
        /// Write every configuration, one line of edge labels per configuration.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run named checks; exit code 0 iff all pass.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Check to run (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Compare exhaustive and constructive enumeration throughput.
    Bench {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Group: Z<n>, D<n> or an x-separated product such as Z2xZ3.
    #[arg(long = "group")]
    groups: Vec<String>,
    /// Region: plaquette, l-shape, rect:N[,n0,m0], layers:x:c,..., desk-quarter[:N], desk-l[:N],
    /// cone:theta1,theta2,ax,ay,N.
    #[arg(long = "region")]
    regions: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest number of states any exhaustive loop may visit.
    #[arg(long)]
    budget: Option<u64>,
    /// Sample count for randomized checks.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn overrides(self, checks: Vec<String>) -> Overrides {
        Overrides {
            config: self.config,
            groups: self.groups,
            regions: self.regions,
            checks,
            seed: self.seed,
            budget: self.budget,
            samples: self.samples,
            out: self.out,
            format: self.format,
        }
    }
}

fn count(cfg: &RunConfig, dump: Option<PathBuf>) -> Result<(Report, bool), CliError> {
    let (g, spec) = cfg.single()?;
    let group = Group::parse(g)?;
    let geo = Geometry::build(spec)?;
    let lr = geo.layers();
    let fe = FastEnumerator::with_frame(lr, geo.frame(), &group)?;
    let start = Instant::now();
    let counting = verify_counting(lr, geo.frame(), &group, cfg.budget)?;
    let t_fast = start.elapsed();
    let start = Instant::now();
    let brute = match count_admissible_bruteforce(lr.region(), &group, cfg.budget) {
        Ok(n) => Some(n as u128),
        Err(qd_core::Error::Budget { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let t_brute = start.elapsed();
    let agree = brute.map(|b| b == counting.total);
    if let Some(path) = dump {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        for c in fe.enumerate()? {
            let line: Vec<String> = c.labels().iter().map(u8::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        w.flush()?;
    }
    let ok = agree != Some(false) && counting.total == fe.size();
    let brute_str = brute.map_or(bench::SKIPPED.to_string(), |b| b.to_string());
    let hist: Map<String, Value> =
        counting.fiber_histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut timings = Map::new();
    timings.insert("constructive".into(), seconds(t_fast));
    if brute.is_some() {
        timings.insert("brute_force".into(), seconds(t_brute));
    }
    let json = json!({
        "command": "count",
        "group": group.name(),
        "region": spec,
        "edges": lr.region().len(),
        "total": counting.total.to_string(),
        "brute_force": brute_str,
        "oracle_agreement": agree,
        "potentials": counting.potentials,
        "fiber_histogram": hist,
        "expected_fiber": counting.expected_fiber.to_string(),
        "timings": timings,
    });
    let rows = vec![
        vec!["group".into(), group.name().to_string()],
        vec!["edges".into(), lr.region().len().to_string()],
        vec!["total".into(), counting.total.to_string()],
        vec!["brute_force".into(), brute_str],
        vec!["oracle_agreement".into(), agree.map_or("n/a".into(), |a| a.to_string())],
        vec!["potentials".into(), counting.potentials.to_string()],
        vec!["expected_fiber".into(), counting.expected_fiber.to_string()],
    ];
    Ok((Report { json, header: vec!["key", "value"], rows }, ok))
}

fn verify(cfg: &RunConfig) -> Result<(Report, bool), CliError> {
    let (g, spec) = cfg.single()?;
    let group = Group::parse(g)?;
    let geo = Geometry::build(spec)?;
    let mut names = cfg.checks.clone();
    names.sort();
    names.dedup();
    checks::validate(&names, &geo)?;
    let cx = checks::Context {
        spec,
        geometry: &geo,
        group: &group,
        seed: cfg.seed,
        budget: cfg.budget,
        samples: cfg.samples,
    };
    let mut records = Vec::new();
    let mut timings = Map::new();
    for name in &names {
        let start = Instant::now();
        records.push(checks::run(name, &cx)?);
        timings.insert(name.clone(), seconds(start.elapsed()));
    }
    let all = records.iter().all(checks::CheckRecord::passed);
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.check.clone(),
                r.group.clone(),
                r.result.to_string(),
                r.details.lhs.clone(),
                r.details.rhs.clone(),
                r.details.seed.to_string(),
            ]
        })
        .collect();
    let json = json!({
        "command": "verify",
        "group": group.name(),
        "region": spec,
        "seed": cfg.seed,
        "budget": cfg.budget,
        "samples": cfg.samples,
        "all_pass": all,
        "checks": records,
        "timings": timings,
    });
    Ok((Report { json, header: vec!["check", "group", "result", "lhs", "rhs", "seed"], rows }, all))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count { common, dump } => {
            RunConfig::resolve(common.overrides(Vec::new())).and_then(|cfg| count(&cfg, dump).map(|r| (cfg, r)))
        }
        Command::Verify { common, checks } => {
            RunConfig::resolve(common.overrides(checks)).and_then(|cfg| verify(&cfg).map(|r| (cfg, r)))
        }
        Command::Bench { common } => {
            RunConfig::resolve(common.overrides(Vec::new())).and_then(|cfg| bench::run(&cfg).map(|r| (cfg, (r, true))))
        }
    };
    match result.and_then(|(cfg, (report, ok))| report.emit(&cfg).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
