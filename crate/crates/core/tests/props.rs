//! Property tests for the algebraic invariants that hold for *all* inputs:
//! field axioms of the scalar backends, scalar stability of the family
//! identity, and linearity of every differential.

use proptest::prelude::*;

use omega_nij_core::builders::{scalar_scale, truncated_poly, two_monoid_mixed};
use omega_nij_core::cochain::{Cochain, Complexes};
use omega_nij_core::rng::Rng;
use omega_nij_core::scalar::{PrimeField, Rational, Scalar};
use omega_nij_core::semigroup::Semigroup;
use omega_nij_core::validate::validate_nijenhuis_family;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn prime_elem() -> impl Strategy<Value = PrimeField> {
    (-1000i64..=1000).prop_map(|v| PrimeField::new(v, 97))
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Rational::one());
        }
    }

    #[test]
    fn prime_field_axioms(a in prime_elem(), b in prime_elem(), c in prime_elem()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), PrimeField::new(1, 97));
        }
    }

    /// The family identity is invariant under scaling the whole family.
    #[test]
    fn nijenhuis_family_is_scalar_stable(num in -6i64..=6, den in 1i64..=4) {
        let ctx = truncated_poly::<Rational>(4, 1, &Semigroup::trivial());
        let lambda = Rational::new(num, den);
        let scaled = scalar_scale(&ctx.nijenhuis, &lambda);
        prop_assert!(
            validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &scaled)
                .unwrap()
                .verdict()
        );
    }

    /// Differentials and the comparison map are linear, hence representable
    /// as matrices in the canonical basis.
    #[test]
    fn differentials_commute_with_linear_combinations(
        seed in 1u64..10_000,
        num in -5i64..=5,
        degree in 0usize..=2,
    ) {
        let cx = Complexes::new(two_monoid_mixed::<Rational>()).unwrap();
        let mut rng = Rng::new(seed);
        let f: Cochain<Rational> = rng.cochain(degree, cx.dims(), 3);
        let g: Cochain<Rational> = rng.cochain(degree, cx.dims(), 3);
        let lambda = Rational::new(num, 2);
        let combo = f.scale(&lambda).add(&g);
        let lhs = cx.delta(&combo).unwrap();
        let rhs = cx.delta(&f).unwrap().scale(&lambda).add(&cx.delta(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lhs = cx.nf_partial(&combo).unwrap();
        let rhs = cx
            .nf_partial(&f)
            .unwrap()
            .scale(&lambda)
            .add(&cx.nf_partial(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
        if degree >= 1 {
            let lhs = cx.phi(&combo).unwrap();
            let rhs = cx.phi(&f).unwrap().scale(&lambda).add(&cx.phi(&g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
