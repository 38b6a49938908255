//! Admissible configurations: exhaustive and constructive enumeration,
//! unique completions, the boundary bijection and fiber counts.

mod brute;
mod complete;
mod fast;
mod interior;
mod packed;
mod xi;

pub use brute::{
    check_budget, count_admissible_bruteforce, enumerate_admissible_bruteforce, is_admissible, par_count,
    par_fold, par_scan, DEFAULT_BUDGET,
};
pub use complete::{
    boundary_holonomies, complete_from_boundary, complete_with_plan, is_flat_boundary, verify_trichotomy, CompletionPlan, Side, Solve, TrichotomyReport,
};
pub use fast::{
    boundary_potential_of, count_by_boundary_potential, enumerate_admissible_fast, potential_histogram,
    rectangle_layers, verify_counting, CountingReport, FastEnumerator, Free,
};
pub use interior::{
    complete_interior, gluing_equivalence, verify_interior_uniqueness, GluingReport, InteriorPlan, InteriorReport,
};
pub use packed::Configuration;
pub use xi::{verify_xi_bijection, BoundaryConfiguration, BoundaryPotential, XiMap, XiReport};
