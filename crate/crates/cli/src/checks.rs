//! The named verifications behind `verify`.

use crate::config::RegionSpec;
use crate::error::CliError;
use crate::geometry::Geometry;
use qd_core::configs::{
    boundary_potential_of, count_admissible_bruteforce, gluing_equivalence, rectangle_layers, verify_counting,
    verify_interior_uniqueness, verify_trichotomy, verify_xi_bijection, FastEnumerator,
};
use qd_core::lattice::{ConeTruncation, Edge};
use qd_core::paths::path_independence_check;
use qd_core::state::{
    build_support_projection, gauge_bijection_check, marginalization_check, ratio_int, ratio_string,
    restriction_consistency_check, stabilizer_expectations, support_and_monotonicity_check, trace_property_with,
    ConeState, LocalOperator, Ratio,
};
use qd_core::{Error, Group};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Which geometries a check accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Needs {
    Layered,
    Rectangle,
    Cone,
}

/// Registered checks, sorted by name.
pub const CHECKS: &[&str] = &[
    "admissible-count",
    "completion",
    "cone-state",
    "counting",
    "gauge-bijection",
    "gluing",
    "interior-completion",
    "path-independence",
    "restriction",
    "stabilizers",
    "support-monotonicity",
    "trace-property",
    "xi-bijection",
];

fn needs(name: &str) -> Option<Needs> {
    Some(match name {
        "admissible-count" | "completion" | "counting" | "path-independence" | "xi-bijection" => Needs::Layered,
        "gauge-bijection" | "restriction" | "stabilizers" => Needs::Rectangle,
        "cone-state" | "gluing" | "interior-completion" | "support-monotonicity" | "trace-property" => Needs::Cone,
        _ => return None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Details {
    pub lhs: String,
    pub rhs: String,
    pub seed: u64,
    pub counts: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub region: RegionSpec,
    pub group: String,
    pub result: &'static str,
    pub details: Details,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.result == "pass"
    }
}

pub struct Context<'a> {
    pub spec: &'a RegionSpec,
    pub geometry: &'a Geometry,
    pub group: &'a Group,
    pub seed: u64,
    pub budget: u64,
    pub samples: usize,
}

/// Outcome of one check before it is wrapped into a record.
struct Outcome {
    pass: bool,
    lhs: String,
    rhs: String,
    counts: BTreeMap<String, Value>,
}

fn counts<const N: usize>(items: [(&str, Value); N]) -> BTreeMap<String, Value> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Rejects unknown names and region mismatches before anything runs.
pub fn validate(names: &[String], geometry: &Geometry) -> Result<(), CliError> {
    if names.is_empty() {
        return Err(CliError::Usage(format!("no checks given; known checks: {}", CHECKS.join(", "))));
    }
    for name in names {
        let need = needs(name).ok_or_else(|| {
            CliError::Usage(format!("unknown check `{name}`; known checks: {}", CHECKS.join(", ")))
        })?;
        let ok = match need {
            Needs::Layered => true,
            Needs::Rectangle => geometry.rect().is_some(),
            Needs::Cone => geometry.cone_truncation().is_some(),
        };
        if !ok {
            let want = if need == Needs::Rectangle { "rectangle" } else { "cone" };
            return Err(CliError::Usage(format!("check `{name}` needs a {want} region, got {}", geometry.kind())));
        }
    }
    Ok(())
}

pub fn run(name: &str, cx: &Context<'_>) -> Result<CheckRecord, CliError> {
    let out = match name {
        "admissible-count" => admissible_count(cx),
        "completion" => completion(cx),
        "cone-state" => cone_state(cx),
        "counting" => counting(cx),
        "gauge-bijection" => gauge(cx),
        "gluing" => gluing(cx),
        "interior-completion" => interior(cx),
        "path-independence" => path_independence(cx),
        "restriction" => restriction(cx),
        "stabilizers" => stabilizers(cx),
        "support-monotonicity" => support(cx),
        "trace-property" => trace(cx),
        "xi-bijection" => xi(cx),
        _ => return Err(CliError::Usage(format!("unknown check `{name}`"))),
    }?;
    Ok(CheckRecord {
        check: name.to_string(),
        region: cx.spec.clone(),
        group: cx.group.name().to_string(),
        result: if out.pass { "pass" } else { "fail" },
        details: Details { lhs: out.lhs, rhs: out.rhs, seed: cx.seed, counts: out.counts },
    })
}

fn cone<'a>(cx: &Context<'a>) -> &'a ConeTruncation {
    cx.geometry.cone_truncation().expect("validated as a cone region")
}

fn admissible_count(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let g = cx.group;
    let fe = FastEnumerator::with_frame(cx.geometry.layers(), cx.geometry.frame(), g)?;
    if fe.size() > cx.budget as u128 {
        return Err(Error::Budget { needed: fe.size(), budget: cx.budget }.into());
    }
    let fast = fe.count()? as u128;
    let region = cx.geometry.layers().region();
    let brute = match count_admissible_bruteforce(region, g, cx.budget) {
        Ok(n) => Some(n as u128),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut c = counts([
        ("constructive", json!(fast.to_string())),
        ("edges", json!(region.len())),
        ("brute_force", json!(brute.map_or("skipped(oracle)".to_string(), |b| b.to_string()))),
    ]);
    let mut pass = fast == fe.size() && brute.is_none_or(|b| b == fast);
    let mut rhs = brute.unwrap_or(fe.size());
    if let Some(rect) = cx.geometry.rect() {
        let closed = g.power(region.vertices().len() - 1);
        c.insert("vertex_formula".into(), json!(closed.to_string()));
        pass &= fast == closed;
        if brute.is_none() {
            rhs = closed;
        }
        if rect.n0 == 1 && rect.m0 == 1 {
            let next = FastEnumerator::new(&rectangle_layers(&rect.grown())?, g)?.size();
            let ring = g.power(4 * (2 * rect.n as usize + 2));
            c.insert("next_size".into(), json!(next.to_string()));
            c.insert("ring_factor".into(), json!(ring.to_string()));
            pass &= ring.checked_mul(fast) == Some(next);
        }
    }
    Ok(Outcome { pass, lhs: fast.to_string(), rhs: rhs.to_string(), counts: c })
}

fn completion(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let lr = cx.geometry.layers();
    let r = verify_trichotomy(lr, cx.group, cx.budget)?;
    let per = cx.group.power(lr.e1().len());
    Ok(Outcome {
        pass: r.holds(cx.group.order(), lr.e1().len()),
        lhs: r.admissible.to_string(),
        rhs: (r.flat as u128 * per).to_string(),
        counts: counts([
            ("boundary_data", json!(r.boundary_data)),
            ("flat_boundary_data", json!(r.flat)),
            ("completions_per_datum", json!(per.to_string())),
            ("violations", json!(r.violations)),
        ]),
    })
}

fn interior(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let r = verify_interior_uniqueness(cone(cx), cx.group, cx.budget)?;
    let rhs = r.inner as u128 * r.outer as u128 * cx.group.order() as u128;
    Ok(Outcome {
        pass: r.holds(cx.group.order()),
        lhs: r.rectangle.to_string(),
        rhs: rhs.to_string(),
        counts: counts([
            ("rectangle", json!(r.rectangle)),
            ("inner", json!(r.inner)),
            ("outer", json!(r.outer)),
            ("mismatches", json!(r.mismatches)),
        ]),
    })
}

fn gluing(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let ct = cone(cx);
    let g = cx.group;
    let fe = FastEnumerator::for_cone(ct, g)?;
    if fe.size() > cx.budget as u128 {
        return Err(Error::Budget { needed: fe.size(), budget: cx.budget }.into());
    }
    let ks = fe.enumerate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
    let (mut consistent, mut same) = (0u64, 0u64);
    for i in 0..cx.samples {
        let k = ks.choose(&mut rng).expect("C is never empty").labels();
        let h = if i % 2 == 0 {
            let t = boundary_potential_of(ct.region(), g, &k, ct.v0, ct.boundary_vertices())?;
            fe.fiber(&t)?.choose(&mut rng).expect("fiber is never empty").labels()
        } else {
            ks.choose(&mut rng).expect("C is never empty").labels()
        };
        let r = gluing_equivalence(ct, g, &k, &h, cx.budget)?;
        consistent += r.consistent() as u64;
        same += r.potentials as u64;
    }
    Ok(Outcome {
        pass: consistent == cx.samples as u64,
        lhs: consistent.to_string(),
        rhs: cx.samples.to_string(),
        counts: counts([("pairs", json!(cx.samples)), ("equal_potentials", json!(same))]),
    })
}

fn xi(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let r = verify_xi_bijection(cx.geometry.layers(), cx.geometry.frame(), cx.group, cx.budget)?;
    Ok(Outcome {
        pass: r.holds(),
        lhs: r.image.to_string(),
        rhs: r.flat_boundary.to_string(),
        counts: counts([
            ("inputs", json!(r.inputs)),
            ("image_equals_flat", json!(r.image_equals_flat)),
            ("round_trip_failures", json!(r.round_trip_failures)),
            ("potential_failures", json!(r.potential_failures)),
        ]),
    })
}

fn counting(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let r = verify_counting(cx.geometry.layers(), cx.geometry.frame(), cx.group, cx.budget)?;
    let constant = r.fiber_histogram.len() == 1;
    let sizes: Vec<String> = r.fiber_histogram.keys().map(u64::to_string).collect();
    Ok(Outcome {
        pass: r.holds(),
        lhs: if constant { sizes[0].clone() } else { "varies".into() },
        rhs: r.expected_fiber.to_string(),
        counts: counts([
            ("per_t", json!(sizes)),
            ("constant", json!(constant)),
            ("potentials", json!(r.potentials)),
            ("total", json!(r.total.to_string())),
        ]),
    })
}

fn path_independence(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let lr = cx.geometry.layers();
    let fe = FastEnumerator::with_frame(lr, cx.geometry.frame(), cx.group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
    let mut failures = 0u64;
    let pairs = 32;
    for _ in 0..cx.samples {
        let labels = fe.sample(&mut rng)?;
        let seed = rng.gen();
        failures += path_independence_check(lr.region(), cx.group, &labels, pairs, seed)?.is_some() as u64;
    }
    Ok(Outcome {
        pass: failures == 0,
        lhs: failures.to_string(),
        rhs: "0".into(),
        counts: counts([("configurations", json!(cx.samples)), ("path_pairs_each", json!(pairs))]),
    })
}

fn stabilizers(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let rect = cx.geometry.rect().expect("validated as a rectangle");
    let r = stabilizer_expectations(rect, cx.group)?;
    let distinct = |xs: Vec<&Ratio>| {
        let mut v: Vec<String> = xs.into_iter().map(ratio_string).collect();
        v.sort();
        v.dedup();
        v
    };
    let av = distinct(r.vertices.iter().map(|x| &x.2).collect());
    let bp = distinct(r.plaquettes.iter().map(|x| &x.1).collect());
    let lhs = if av == bp && av.len() == 1 { av[0].clone() } else { "mixed".into() };
    Ok(Outcome {
        pass: r.all_one(),
        lhs,
        rhs: ratio_string(&ratio_int(1)),
        counts: counts([
            ("vertex_operators", json!(r.vertices.len())),
            ("plaquettes", json!(r.plaquettes.len())),
            ("vertex_values", json!(av)),
            ("plaquette_values", json!(bp)),
        ]),
    })
}

fn gauge(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let r = gauge_bijection_check(cx.geometry.rect().expect("validated"), cx.group, cx.budget)?;
    Ok(Outcome {
        pass: r.bijective && r.operator_agrees,
        lhs: r.configurations.to_string(),
        rhs: r.configurations.to_string(),
        counts: counts([
            ("configurations", json!(r.configurations)),
            ("maps", json!(r.maps)),
            ("bijective", json!(r.bijective)),
            ("operator_agrees", json!(r.operator_agrees)),
        ]),
    })
}

fn restriction(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let rect = cx.geometry.rect().expect("validated");
    let r = restriction_consistency_check(rect, cx.group, cx.samples, cx.seed, cx.budget)?;
    Ok(Outcome {
        pass: r.mismatches == 0 && r.identity_lhs == r.identity_rhs,
        lhs: ratio_string(&r.identity_lhs),
        rhs: ratio_string(&r.identity_rhs),
        counts: counts([
            ("pairs", json!(r.pairs)),
            ("sampled", json!(r.sampled)),
            ("mismatches", json!(r.mismatches)),
            ("extensions", json!(r.extensions)),
        ]),
    })
}

fn cone_state(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let ct = cone(cx);
    let state = ConeState::new(ct, cx.group)?;
    let from_rect = state.constant_from_rectangle(cx.budget)?;
    let r = marginalization_check(ct, cx.group, cx.budget)?;
    Ok(Outcome {
        pass: r.holds() && from_rect == r.constant,
        lhs: ratio_string(&r.constant),
        rhs: ratio_string(&r.diagonal),
        counts: counts([
            ("rectangle_configurations", json!(r.rectangle_configurations)),
            ("pairs_seen", json!(r.pairs_seen)),
            ("formula_nonzero", json!(r.formula_nonzero)),
            ("mismatches", json!(r.mismatches)),
            ("missing", json!(r.missing)),
            ("constant_from_rectangle", json!(ratio_string(&from_rect))),
            ("rank", json!(state.rank().to_string())),
            ("fiber", json!(state.fiber().to_string())),
        ]),
    })
}

/// Up to three distinct random edges of the cone region.
fn random_support(ct: &ConeTruncation, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let edges = ct.region().edges();
    let k = rng.gen_range(1..=3.min(edges.len()));
    let mut s: Vec<Edge> = edges.choose_multiple(rng, k).copied().collect();
    s.sort();
    s
}

fn trace(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let ct = cone(cx);
    let g = cx.group;
    let q = build_support_projection(ct, g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
    let (mut lhs, mut rhs) = (ratio_int(0), ratio_int(0));
    let mut failures = 0u64;
    let mut phi_q = ratio_int(1);
    for _ in 0..cx.samples {
        let a = LocalOperator::random(&random_support(ct, &mut rng), g, &mut rng, -3, 3)?;
        let b = LocalOperator::random(&random_support(ct, &mut rng), g, &mut rng, -3, 3)?;
        let r = trace_property_with(&q, &a, &b)?;
        failures += !r.holds() as u64;
        lhs += r.lhs;
        rhs += r.rhs;
        phi_q = r.phi_q;
    }
    Ok(Outcome {
        pass: failures == 0,
        lhs: ratio_string(&lhs),
        rhs: ratio_string(&rhs),
        counts: counts([
            ("pairs", json!(cx.samples)),
            ("failures", json!(failures)),
            ("rank", json!(q.rank())),
            ("phi_q", json!(ratio_string(&phi_q))),
            ("orthonormal", json!(q.is_orthonormal())),
        ]),
    })
}

fn support(cx: &Context<'_>) -> Result<Outcome, CliError> {
    let small = cone(cx);
    let large = cx.geometry.grown_cone().expect("validated as a cone")?;
    let size = FastEnumerator::for_cone(&large, cx.group)?.size();
    if size > cx.budget as u128 {
        return Err(Error::Budget { needed: size, budget: cx.budget }.into());
    }
    let r = support_and_monotonicity_check(small, &large, cx.group)?;
    Ok(Outcome {
        pass: r.holds(),
        lhs: ratio_string(&r.phi_q),
        rhs: ratio_string(&ratio_int(1)),
        counts: counts([
            ("rank", json!(r.rank_small)),
            ("rank_formula", json!(r.rank_formula.to_string())),
            ("rank_next", json!(r.rank_large)),
            ("orthonormal", json!(r.orthonormal)),
            ("groups", json!(r.groups)),
            ("violations", json!(r.violations)),
        ]),
    })
}
