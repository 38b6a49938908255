//! Throughput of exhaustive against constructive enumeration.

use crate::config::{RegionSpec, RunConfig};
use crate::error::CliError;
use crate::geometry::Geometry;
use crate::report::Report;
use qd_core::configs::{count_admissible_bruteforce, FastEnumerator};
use qd_core::{Error, Group};
use serde_json::{json, Value};
use std::time::Instant;

pub const SKIPPED: &str = "skipped(oracle)";

/// One region/group pair measured both ways.
struct Row {
    group: String,
    region: RegionSpec,
    edges: usize,
    constructive: Option<(u64, f64)>,
    brute: Option<(u64, f64)>,
}

fn per_second(n: u64, secs: f64) -> f64 {
    // a single timer tick still counts as a measurement
    (n as f64 / secs.max(1e-9)).round()
}

fn measure(spec: &RegionSpec, group: &Group, budget: u64) -> Result<Row, CliError> {
    let geo = Geometry::build(spec)?;
    let lr = geo.layers();
    let fe = FastEnumerator::with_frame(lr, geo.frame(), group)?;
    let constructive = if fe.size() <= budget as u128 {
        let start = Instant::now();
        let n = fe.count()?;
        Some((n, start.elapsed().as_secs_f64()))
    } else {
        None
    };
    let start = Instant::now();
    let brute = match count_admissible_bruteforce(lr.region(), group, budget) {
        Ok(n) => Some((n, start.elapsed().as_secs_f64())),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Row { group: group.name().to_string(), region: spec.clone(), edges: lr.region().len(), constructive, brute })
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let groups = if cfg.groups.is_empty() { vec!["Z2".to_string()] } else { cfg.groups.clone() };
    let regions = if cfg.regions.is_empty() {
        vec![RegionSpec::Rectangle { n: 1, n0: 1, m0: 1 }, RegionSpec::Rectangle { n: 2, n0: 1, m0: 1 }]
    } else {
        cfg.regions.clone()
    };
    let mut rows = Vec::new();
    for g in &groups {
        let group = Group::parse(g)?;
        for r in &regions {
            rows.push(measure(r, &group, cfg.budget)?);
        }
    }
    let cell = |m: Option<(u64, f64)>, f: &dyn Fn(u64, f64) -> String| m.map_or(SKIPPED.to_string(), |(n, s)| f(n, s));
    let count = |n: u64, _: f64| n.to_string();
    let rate = |n: u64, s: f64| per_second(n, s).to_string();
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.group.clone(),
                r.region.label(),
                r.edges.to_string(),
                cell(r.constructive, &count),
                cell(r.brute, &count),
                cell(r.constructive, &rate),
                cell(r.brute, &rate),
            ]
        })
        .collect();
    let json_cell = |m: Option<(u64, f64)>| -> Value {
        m.map_or(json!(SKIPPED), |(n, s)| json!({"configurations": n, "per_second": per_second(n, s)}))
    };
    let json = json!({
        "command": "bench",
        "rows": rows.iter().map(|r| json!({
            "group": r.group,
            "region": r.region,
            "edges": r.edges,
            "constructive": json_cell(r.constructive),
            "brute_force": json_cell(r.brute),
        })).collect::<Vec<_>>(),
    });
    Ok(Report {
        json,
        header: vec![
            "group",
            "region",
            "edges",
            "constructive_configurations",
            "brute_force_configurations",
            "constructive_per_second",
            "brute_force_per_second",
        ],
        rows: csv_rows,
    })
}
