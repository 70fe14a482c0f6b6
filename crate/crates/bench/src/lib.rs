//! Shared fixtures for the criterion benches: representative instances at
//! the scales the engine is designed for.

use omega_nij_core::algebra::Context;
use omega_nij_core::builders::{triangular_rmult, truncated_poly, two_monoid_mixed};
use omega_nij_core::scalar::Rational;
use omega_nij_core::semigroup::Semigroup;

pub fn fixtures() -> Vec<(&'static str, Context<Rational>)> {
    vec![
        ("trunc_poly_4_1", truncated_poly(4, 1, &Semigroup::trivial())),
        ("triangular_rmult", triangular_rmult()),
        ("two_monoid_mixed", two_monoid_mixed()),
    ]
}
