//! The frustration-free ground state on rectangles and cone truncations,
//! local operators, and the support projections of the cone state.
//!
//! All values are exact rationals.

mod cone;
mod operator;
mod rect;
mod support;

pub use cone::{marginalization_check, ConeState, MarginalReport};
pub use operator::LocalOperator;
pub use rect::{
    apply_gauge, gauge_bijection_check, restriction_consistency_check, stabilizer_expectations, GaugeReport,
    RectState, RestrictionReport, StabilizerReport,
};
pub use support::{
    build_support_projection, support_and_monotonicity_check, trace_property_check, trace_property_with, SparseVector, StateVector,
    SupportProjection, SupportReport, TraceReport,
};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Ratio = BigRational;

pub fn ratio_int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// n / d for unsigned counts.
pub fn ratio_of(n: u128, d: u128) -> Ratio {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical "p/q" form, with q = 1 written out.
pub fn ratio_string(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(ratio_string(&ratio_int(1)), "1/1");
        assert_eq!(ratio_string(&ratio_of(2, 512)), "1/256");
        assert_eq!(ratio_string(&-ratio_of(3, 6)), "-1/2");
    }
}
