//! Acceptance criteria 1-8. Each criterion is one test; run with
//! `--nocapture` to also see the summary lines.

use qd_core::configs::{
    count_admissible_bruteforce, enumerate_admissible_bruteforce, enumerate_admissible_fast, rectangle_layers,
    verify_counting, verify_interior_uniqueness, verify_trichotomy, verify_xi_bijection, FastEnumerator,
    DEFAULT_BUDGET,
};
use qd_core::lattice::{DeskCone, LayerRegion, Rect};
use qd_core::paths::vertex_potential;
use qd_core::state::{
    build_support_projection, marginalization_check, ratio_of, restriction_consistency_check,
    stabilizer_expectations, support_and_monotonicity_check, trace_property_with, ConeState, LocalOperator,
};
use qd_core::Group;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

fn z(n: usize) -> Group {
    Group::cyclic(n).unwrap()
}

fn d3() -> Group {
    Group::dihedral(3).unwrap()
}

/// Runs one criterion, prints a single PASS/FAIL line and re-raises any failure.
fn criterion(n: u32, what: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(body);
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} {what} ({:.1} s)", start.elapsed().as_secs_f64());
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

/// |G|^(|V|-1), counted independently of any enumeration: a flat connection
/// on a simply connected region is a potential on the vertices modulo one.
fn potential_count(rect: Rect, g: &Group) -> u128 {
    g.power(rect.region().vertices().len() - 1)
}

#[test]
fn criterion_1_admissible_counts() {
    criterion(1, "admissible counts on the N=1 and N=2 squares", || {
        let g = z(2);
        let r1 = Rect::square(1).unwrap();
        let r2 = Rect::square(2).unwrap();

        let start = Instant::now();
        let small = count_admissible_bruteforce(&r1.region(), &g, DEFAULT_BUDGET).unwrap();
        assert!(start.elapsed() < Duration::from_secs(1), "brute force took {:?}", start.elapsed());
        assert_eq!(small, 256);
        assert_eq!(small as u128, potential_count(r1, &g));

        let start = Instant::now();
        let l2 = rectangle_layers(&r2).unwrap();
        let large = FastEnumerator::new(&l2, &g).unwrap().count().unwrap();
        assert!(start.elapsed() < Duration::from_secs(60), "enumeration took {:?}", start.elapsed());
        assert_eq!(large, 1 << 24);
        assert_eq!(large as u128, potential_count(r2, &g));

        // ring of 4(2N+2) new edges at N=1
        assert_eq!(large, g.power(4 * (2 + 2)) as u64 * small);
        assert_eq!(large / small, 1 << 16);
    });
}

#[test]
fn criterion_2_fast_equals_bruteforce() {
    criterion(2, "constructive enumeration equals brute force as sets", || {
        let cases: Vec<(Vec<(i32, u32)>, Group)> = vec![
            (vec![(0, 1)], d3()),
            (vec![(0, 2)], d3()),
            (vec![(0, 1), (0, 1)], d3()),
            (vec![(0, 3), (0, 2)], z(2)),
            (vec![(0, 3), (0, 2)], z(3)),
            (vec![(0, 2), (1, 2), (0, 2)], z(2)),
            (vec![(0, 2), (-1, 2)], Group::parse("Z2xZ2").unwrap()),
        ];
        let start = Instant::now();
        for (rows, g) in &cases {
            let lr = LayerRegion::new(0, rows).unwrap();
            let fast: BTreeSet<_> = enumerate_admissible_fast(&lr, g).unwrap().into_iter().collect();
            let brute: BTreeSet<_> =
                enumerate_admissible_bruteforce(lr.region(), g, DEFAULT_BUDGET).unwrap().into_iter().collect();
            assert_eq!(fast, brute, "{rows:?} over {g}");
        }
        // D3: 6^3 on one plaquette and 6^5 on two side by side
        let sizes: Vec<usize> = cases[..2]
            .iter()
            .map(|(rows, g)| enumerate_admissible_fast(&LayerRegion::new(0, rows).unwrap(), g).unwrap().len())
            .collect();
        assert_eq!(sizes, [216, 7776]);
        assert!(start.elapsed() < Duration::from_secs(300));
    });
}

#[test]
fn criterion_3_completion() {
    criterion(3, "boundary completion trichotomy and interior uniqueness", || {
        let l_shape = LayerRegion::new(0, &[(0, 3), (0, 2)]).unwrap();
        for g in [z(2), z(3)] {
            let r = verify_trichotomy(&l_shape, &g, DEFAULT_BUDGET).unwrap();
            assert!(r.holds(g.order(), l_shape.e1().len()), "l-shape {g}: {r:?}");
            for cone in DeskCone::ALL {
                let ct = cone.small();
                if g.power(ct.region().len()) <= DEFAULT_BUDGET as u128 {
                    let r = verify_trichotomy(&ct.layers, &g, DEFAULT_BUDGET).unwrap();
                    assert!(r.holds(g.order(), ct.layers.e1().len()), "{} {g}: {r:?}", cone.name());
                }
                let r = verify_interior_uniqueness(&ct, &g, DEFAULT_BUDGET).unwrap();
                assert!(r.holds(g.order()), "{} {g}: {r:?}", cone.name());
            }
        }
    });
}

#[test]
fn criterion_4_xi_bijection() {
    criterion(4, "boundary bijection, round trip and potentials", || {
        for g in [z(2), z(3)] {
            for cone in DeskCone::ALL {
                let ct = cone.small();
                let r = verify_xi_bijection(&ct.layers, &ct.frame, &g, DEFAULT_BUDGET).unwrap();
                assert!(r.holds(), "{} {g}: {r:?}", cone.name());
                // |image| = |G|^(|∂V|-1+|J|)
                assert_eq!(r.image as u128, g.power(ct.boundary_vertices().len() - 1 + ct.j().len()));
            }
        }
    });
}

#[test]
fn criterion_5_counting_independence() {
    criterion(5, "fiber size constant over potentials on four geometries", || {
        let l_shape = LayerRegion::new(0, &[(0, 3), (0, 2)]).unwrap();
        let l_frame = qd_core::lattice::BoundaryLoop::new(&l_shape, l_shape.origin()).unwrap();
        let large = DeskCone::LShape.truncation(Rect::square(2).unwrap()).unwrap();
        let quarter = DeskCone::Quarter.small();
        let desk_l = DeskCone::LShape.small();
        let cases = [
            (&l_shape, &l_frame, z(2)),
            (&l_shape, &l_frame, z(3)),
            (&quarter.layers, &quarter.frame, z(3)),
            (&desk_l.layers, &desk_l.frame, z(2)),
            (&desk_l.layers, &desk_l.frame, z(3)),
            (&large.layers, &large.frame, z(2)),
        ];
        for (lr, frame, g) in cases {
            let r = verify_counting(lr, frame, &g, DEFAULT_BUDGET).unwrap();
            assert!(r.holds(), "{g}: {r:?}");
            let total: u64 = r.fiber_histogram.iter().map(|(f, n)| f * n).sum();
            assert_eq!(total as u128, r.total);
            assert_eq!(r.total, FastEnumerator::with_frame(lr, frame, &g).unwrap().size());
        }
        // frozen from the brute-force histogram of the 13-edge L-shape
        let r = verify_counting(&l_shape, &l_frame, &z(2), DEFAULT_BUDGET).unwrap();
        assert_eq!((r.potentials, r.fiber_histogram.get(&4).copied()), (256, Some(256)));
    });
}

#[test]
fn criterion_6_state_identities() {
    criterion(6, "stabilizer expectations at N=2 and restriction N=1 to N=2", || {
        for g in [z(2), z(3)] {
            let r = stabilizer_expectations(Rect::square(2).unwrap(), &g).unwrap();
            assert!(r.all_one(), "{g}");
            assert_eq!(r.vertices.len(), 9 * g.order());
            assert_eq!(r.plaquettes.len(), 16);
        }
        let r = restriction_consistency_check(Rect::square(1).unwrap(), &z(2), 1000, 7, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.mismatches, 0, "{r:?}");
        assert_eq!(r.identity_lhs, r.identity_rhs);
        assert_eq!(r.identity_rhs, ratio_of(1, 256));
    });
}

#[test]
fn criterion_7_cone_state() {
    criterion(7, "cone formula equals the marginalized rectangle state", || {
        let g = z(2);
        for cone in DeskCone::ALL {
            let ct = cone.small();
            assert!(ct.rect_region.len() <= 24);
            let state = ConeState::new(&ct, &g).unwrap();
            let r = marginalization_check(&ct, &g, 1 << 24).unwrap();
            assert!(r.holds(), "{}: {r:?}", cone.name());
            assert_eq!(r.pairs_seen, r.formula_nonzero);
            assert_eq!(state.constant(), r.diagonal);
            assert_eq!(state.constant_from_rectangle(DEFAULT_BUDGET).unwrap(), r.diagonal);
        }
        let ct = DeskCone::LShape.small();
        assert_eq!(ConeState::new(&ct, &g).unwrap().constant(), ratio_of(1, 2048));
    });
}

#[test]
fn criterion_8_trace_and_support() {
    criterion(8, "support projection, trace property and monotonicity", || {
        let g = z(2);
        let ct = DeskCone::LShape.small();
        let q = build_support_projection(&ct, &g).unwrap();
        assert!(q.is_orthonormal());

        // realizable potentials, from brute force and a fresh spanning tree
        let all = enumerate_admissible_bruteforce(ct.region(), &g, DEFAULT_BUDGET).unwrap();
        let realizable: BTreeSet<Vec<u8>> = all
            .iter()
            .map(|c| {
                let pot = vertex_potential(ct.region(), &g, &c.labels(), ct.v0).unwrap();
                ct.boundary_vertices().iter().map(|v| pot[v]).collect()
            })
            .collect();
        assert_eq!(q.rank(), realizable.len());
        assert_eq!(q.rank(), 1024);

        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let edges = ct.region().edges().to_vec();
        // two distinct edges per support
        let support = |rng: &mut ChaCha8Rng| {
            let mut s: Vec<_> = edges.choose_multiple(rng, 2).copied().collect();
            s.sort();
            s
        };
        for i in 0..100 {
            let sa = support(&mut rng);
            let a = LocalOperator::random(&sa, &g, &mut rng, -3, 3).unwrap();
            let sb = support(&mut rng);
            let b = LocalOperator::random(&sb, &g, &mut rng, -3, 3).unwrap();
            let r = trace_property_with(&q, &a, &b).unwrap();
            assert!(r.holds(), "pair {i}: {r:?}");
        }

        for cone in DeskCone::ALL {
            let small = cone.small();
            let large = cone.truncation(Rect::square(2).unwrap()).unwrap();
            let r = support_and_monotonicity_check(&small, &large, &g).unwrap();
            assert!(r.holds(), "{}: {r:?}", cone.name());
        }
    });
}
