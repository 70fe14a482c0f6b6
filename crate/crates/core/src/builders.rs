//! Canonical instance builders used by tests, benches and the corpus:
//! truncated polynomial algebras, multiplication-operator families,
//! zero algebras, and small discriminating examples.

use thiserror::Error;

use crate::algebra::{Context, NfBimodule, OmegaAlgebra, OperatorFamily, OperatorMatrix};
use crate::scalar::Scalar;
use crate::semigroup::Semigroup;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BuilderError {
    #[error("builder requires an index-constant multiplication")]
    NonConstantProduct,
    #[error("element vector has length {got}, algebra dimension is {want}")]
    BadElement { got: usize, want: usize },
}

/// Wraps one classical associative multiplication into an index-constant
/// family over `sg`. `mu0` lists `(i, j, k, c)` structure constants.
pub fn trivial_wrap<S: Scalar>(
    dim: usize,
    sg: &Semigroup,
    mu0: &[(usize, usize, usize, S)],
) -> OmegaAlgebra<S> {
    let nw = sg.len();
    let mut alg = OmegaAlgebra::zero_algebra(dim, nw);
    for a in 0..nw {
        for b in 0..nw {
            for (i, j, k, c) in mu0 {
                alg.set_mu(a, b, *i, *j, *k, c.clone());
            }
        }
    }
    alg
}

fn is_index_constant<S: Scalar>(alg: &OmegaAlgebra<S>) -> bool {
    let d = alg.dim();
    let nw = alg.n_omega();
    for a in 0..nw {
        for b in 0..nw {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        if alg.mu(a, b, i, j, k) != alg.mu(0, 0, i, j, k) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The truncated polynomial algebra `k[a]/(a^trunc)` with the constant
/// multiplication over `sg`, the shift family `N(a^n) = a^(n+shift)`
/// (zero past degree `trunc - 1`), and the regular module.
pub fn truncated_poly<S: Scalar>(trunc: usize, shift: usize, sg: &Semigroup) -> Context<S> {
    assert!(trunc >= 1);
    let mut mu0 = Vec::new();
    for i in 0..trunc {
        for j in 0..trunc {
            if i + j < trunc {
                mu0.push((i, j, i + j, S::one()));
            }
        }
    }
    let alg = trivial_wrap(trunc, sg, &mu0);
    let mut n = OperatorMatrix::zeros(trunc, trunc);
    for i in 0..trunc {
        if i + shift < trunc {
            n.set(i + shift, i, S::one());
        }
    }
    let nij = OperatorFamily::constant(sg.len(), n);
    Context::with_regular_module(sg.clone(), alg, nij)
}

/// The one-dimensional unital algebra (the base field itself) with `N = 0`.
pub fn unit_line<S: Scalar>(sg: &Semigroup) -> Context<S> {
    let alg = trivial_wrap(1, sg, &[(0, 0, 0, S::one())]);
    let nij = OperatorFamily::zero(sg.len(), 1, 1);
    Context::with_regular_module(sg.clone(), alg, nij)
}

/// Zero multiplication, zero operators: every axiom holds trivially and all
/// differentials vanish.
pub fn zero_algebra<S: Scalar>(dim: usize, sg: &Semigroup) -> Context<S> {
    let alg = OmegaAlgebra::zero_algebra(dim, sg.len());
    let nij = OperatorFamily::zero(sg.len(), dim, dim);
    Context::with_regular_module(sg.clone(), alg, nij)
}

fn mult_matrix<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    elem: &[S],
    on_left: bool,
) -> OperatorMatrix<S> {
    let d = alg.dim();
    let mut m = OperatorMatrix::zeros(d, d);
    for j in 0..d {
        let mut ej = vec![S::zero(); d];
        ej[j] = S::one();
        let image = if on_left {
            alg.apply_mu(0, 0, elem, &ej)
        } else {
            alg.apply_mu(0, 0, &ej, elem)
        };
        for (i, v) in image.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// The constant family of left multiplications `x -> elem . x`. Defined for
/// index-constant multiplications, where it is always a Nijenhuis family.
pub fn left_mult<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    elem: &[S],
) -> Result<OperatorFamily<S>, BuilderError> {
    if elem.len() != alg.dim() {
        return Err(BuilderError::BadElement {
            got: elem.len(),
            want: alg.dim(),
        });
    }
    if !is_index_constant(alg) {
        return Err(BuilderError::NonConstantProduct);
    }
    Ok(OperatorFamily::constant(
        alg.n_omega(),
        mult_matrix(alg, elem, true),
    ))
}

/// The constant family of right multiplications `x -> x . elem`.
pub fn right_mult<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    elem: &[S],
) -> Result<OperatorFamily<S>, BuilderError> {
    if elem.len() != alg.dim() {
        return Err(BuilderError::BadElement {
            got: elem.len(),
            want: alg.dim(),
        });
    }
    if !is_index_constant(alg) {
        return Err(BuilderError::NonConstantProduct);
    }
    Ok(OperatorFamily::constant(
        alg.n_omega(),
        mult_matrix(alg, elem, false),
    ))
}

/// Rescales a whole operator family by one scalar.
pub fn scalar_scale<S: Scalar>(family: &OperatorFamily<S>, lambda: &S) -> OperatorFamily<S> {
    family.scale(lambda)
}

/// Upper triangular 2x2 matrices, basis `E11, E12, E22`, trivial monoid,
/// with the Nijenhuis family "right multiplication by `E12 + E22`".
///
/// This instance is genuinely noncommutative and separates several
/// constructions that collapse on commutative examples.
pub fn triangular_rmult<S: Scalar>() -> Context<S> {
    let sg = Semigroup::trivial();
    // E11*E11 = E11, E11*E12 = E12, E12*E22 = E12, E22*E22 = E22
    let mu0 = vec![
        (0, 0, 0, S::one()),
        (0, 1, 1, S::one()),
        (1, 2, 1, S::one()),
        (2, 2, 2, S::one()),
    ];
    let alg = trivial_wrap(3, &sg, &mu0);
    let c = vec![S::zero(), S::one(), S::one()];
    let nij = right_mult(&alg, &c).expect("constant multiplication");
    Context::with_regular_module(sg, alg, nij)
}

/// A two-element monoid instance whose multiplication genuinely depends on
/// the index pair and whose operator family differs per index.
///
/// Carrier: the 2-dimensional algebra spanned by an idempotent `p` and `x`
/// with `px = x`, `xp = 0 = xx`; the `(e,e)`-indexed product is scaled by 2;
/// `N_1` is right multiplication by `p`, `N_e = 0`.
pub fn two_monoid_mixed<S: Scalar>() -> Context<S> {
    let sg = Semigroup::two_idempotent();
    let base: Vec<(usize, usize, usize, S)> =
        vec![(0, 0, 0, S::one()), (0, 1, 1, S::one())];
    let mut alg = OmegaAlgebra::zero_algebra(2, 2);
    let two = S::one().add(&S::one());
    for a in 0..2 {
        for b in 0..2 {
            let scale = if (a, b) == (1, 1) { two.clone() } else { S::one() };
            for (i, j, k, c) in &base {
                alg.set_mu(a, b, *i, *j, *k, c.mul(&scale));
            }
        }
    }
    let mut n1 = OperatorMatrix::zeros(2, 2);
    n1.set(0, 0, S::one()); // p.p = p, x.p = 0
    let nij = OperatorFamily::new(vec![n1, OperatorMatrix::zeros(2, 2)]);
    Context::with_regular_module(sg, alg, nij)
}

/// A module with zero actions and a prescribed module operator family; a
/// Nijenhuis bimodule over any instance.
pub fn zero_action_module<S: Scalar>(
    alg_dim: usize,
    dim: usize,
    nm: OperatorFamily<S>,
) -> NfBimodule<S> {
    let nw = nm.len();
    NfBimodule::zero_actions(alg_dim, dim, nw, nm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::validate::{
        validate_nf_bimodule, validate_nijenhuis_family, validate_omega_associativity,
    };

    #[test]
    fn truncated_poly_passes_all_validators() {
        let ctx: Context<Rational> = truncated_poly(4, 1, &Semigroup::trivial());
        assert!(validate_omega_associativity(&ctx.algebra, &ctx.semigroup)
            .unwrap()
            .verdict());
        assert!(
            validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                .unwrap()
                .verdict()
        );
        assert!(
            validate_nf_bimodule(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis, &ctx.module)
                .unwrap()
                .verdict()
        );
    }

    #[test]
    fn truncated_poly_shift_oracle() {
        // brute-force monomial oracle over the stated parameter range
        for trunc in 1..=6usize {
            for shift in 0..=3usize {
                let ctx: Context<Rational> = truncated_poly(trunc, shift, &Semigroup::trivial());
                let report =
                    validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                        .unwrap();
                assert!(report.verdict(), "trunc {trunc} shift {shift}");
                // independent oracle: both sides on monomials via degree bookkeeping
                for i in 0..trunc {
                    for j in 0..trunc {
                        let lhs_deg = i + j + 2 * shift;
                        let lhs = lhs_deg < trunc && i + shift < trunc && j + shift < trunc;
                        let rhs = lhs_deg < trunc;
                        // lhs nonzero iff rhs nonzero given shift >= 0
                        assert_eq!(lhs, rhs, "monomials a^{i}, a^{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_zero_and_scaled_families_are_nijenhuis() {
        let ctx: Context<Rational> = truncated_poly(4, 1, &Semigroup::trivial());
        let id = OperatorFamily::identity(1, 4);
        assert!(validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &id)
            .unwrap()
            .verdict());
        let zero = scalar_scale(&ctx.nijenhuis, &Rational::zero());
        assert!(zero.is_zero());
        assert!(validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &zero)
            .unwrap()
            .verdict());
        for num in [-3i64, 2, 7] {
            let scaled = scalar_scale(&ctx.nijenhuis, &Rational::new(num, 2));
            assert!(
                validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &scaled)
                    .unwrap()
                    .verdict(),
                "lambda = {num}/2"
            );
        }
    }

    #[test]
    fn multiplication_operators_are_nijenhuis_families() {
        let ctx: Context<Rational> = triangular_rmult();
        assert!(
            validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                .unwrap()
                .verdict()
        );
        // every left/right multiplication on the triangular algebra works
        for e in 0..3usize {
            let mut v = vec![Rational::zero(); 3];
            v[e] = Rational::one();
            let l = left_mult(&ctx.algebra, &v).unwrap();
            let r = right_mult(&ctx.algebra, &v).unwrap();
            assert!(validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &l)
                .unwrap()
                .verdict());
            assert!(validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &r)
                .unwrap()
                .verdict());
        }
    }

    #[test]
    fn two_monoid_mixed_is_valid() {
        let ctx: Context<Rational> = two_monoid_mixed();
        assert!(validate_omega_associativity(&ctx.algebra, &ctx.semigroup)
            .unwrap()
            .verdict());
        assert!(
            validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)
                .unwrap()
                .verdict()
        );
        assert!(
            validate_nf_bimodule(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis, &ctx.module)
                .unwrap()
                .verdict()
        );
    }

    #[test]
    fn perturbed_structure_constant_fails_with_witness() {
        let ctx: Context<Rational> = truncated_poly(4, 1, &Semigroup::trivial());
        let mut alg = ctx.algebra.clone();
        let bumped = alg.mu(0, 0, 3, 1, 2).add(&Rational::one());
        alg.set_mu(0, 0, 3, 1, 2, bumped);
        let report = validate_omega_associativity(&alg, &ctx.semigroup).unwrap();
        assert!(!report.verdict());
        // the witness re-evaluates to a genuine inequality
        let v = &report.violations[0];
        assert_ne!(v.lhs, v.rhs);
    }
}
