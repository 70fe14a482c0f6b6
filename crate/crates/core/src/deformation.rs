//! Truncated one-parameter formal deformations of an instance: order-by-order
//! validity of the deformed associativity and operator-family identities,
//! infinitesimals as cone 2-cocycles, gauge equivalence by invertible
//! truncated series, and one trivialization step.
//!
//! All statements are checked coefficient-wise, so truncation at a finite
//! order loses nothing for the checks performed. Deformation data lives in
//! the regular-module context (coefficients in the algebra itself).

use thiserror::Error;

use crate::algebra::{zeros, OmegaAlgebra, OperatorFamily, OperatorMatrix};
use crate::cochain::{Cochain, CochainError, Complexes, ConeCochain};
use crate::cohomology::{coboundary_primitive_cone, CohomologyError};
use crate::scalar::Scalar;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DeformError {
    #[error("deformation needs order at least {want}, has {got}")]
    OrderTooLow { got: usize, want: usize },
    #[error("gauge order {gauge} does not match deformation order {deformation}")]
    OrderMismatch { gauge: usize, deformation: usize },
    #[error("order-one class is not a coboundary; this step is obstructed")]
    NotCoboundary,
    #[error("deformation data must live in the regular-module context")]
    NotRegularContext,
    #[error("coefficient shapes do not match the base instance")]
    ShapeMismatch,
    #[error("gauge family must start at the identity")]
    GaugeNotUnital,
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// `mu_t = mu_0 + mu_1 t + ... + mu_K t^K`, `N_t` likewise, truncated at
/// order `K`. Order-zero coefficients are the base instance.
#[derive(Clone, Debug)]
pub struct TruncatedDeformation<S: Scalar> {
    /// degree-2 cochains valued in the algebra; `mu[0]` is the base product
    mu: Vec<Cochain<S>>,
    /// operator families; `n[0]` is the base family
    n: Vec<OperatorFamily<S>>,
}

/// `psi_t = id + psi_1 t + ... + psi_K t^K`, invertible as a truncated
/// series because it starts at the identity.
#[derive(Clone, Debug)]
pub struct GaugeFamily<S: Scalar> {
    psi: Vec<OperatorFamily<S>>,
}

/// The base product as a degree-2 cochain valued in the algebra.
pub fn mu_as_cochain<S: Scalar>(alg: &OmegaAlgebra<S>) -> Cochain<S> {
    let d = alg.dim();
    let nw = alg.n_omega();
    let mut c = Cochain::zero(2, (nw, d, d));
    for (a, b, i, j, k, v) in alg.entries() {
        c.set(&[a, b], &[i, j], k, v);
    }
    c
}

/// An operator family as a degree-1 cochain valued in the algebra.
pub fn family_as_cochain<S: Scalar>(fam: &OperatorFamily<S>, nw: usize, d: usize) -> Cochain<S> {
    let mut c = Cochain::zero(1, (nw, d, d));
    for w in 0..nw {
        for j in 0..d {
            for i in 0..d {
                let v = fam.map(w).at(i, j);
                if !v.is_zero() {
                    c.set(&[w], &[j], i, v.clone());
                }
            }
        }
    }
    c
}

/// The inverse conversion: a degree-1 cochain valued in the algebra as an
/// operator family.
pub fn cochain_as_family<S: Scalar>(c: &Cochain<S>) -> OperatorFamily<S> {
    let (nw, d, m) = c.dims();
    assert_eq!(d, m, "expected an algebra-valued degree-1 cochain");
    let mut maps = Vec::with_capacity(nw);
    for w in 0..nw {
        let mut mat = OperatorMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..d {
                let v = c.at(&[w], &[j], i);
                if !v.is_zero() {
                    mat.set(i, j, v.clone());
                }
            }
        }
        maps.push(mat);
    }
    OperatorFamily::new(maps)
}

fn require_regular<S: Scalar>(cx: &Complexes<S>) -> Result<(), DeformError> {
    let ctx = cx.context();
    let regular = crate::algebra::NfBimodule::regular(&ctx.algebra, ctx.nijenhuis.clone());
    if ctx.module != regular {
        return Err(DeformError::NotRegularContext);
    }
    Ok(())
}

/// Bilinear evaluation of a degree-2 algebra-valued cochain at basis pair
/// `(i, j)` with indices `(a, b)`.
fn eval_bilinear<S: Scalar>(c: &Cochain<S>, a: usize, b: usize, i: usize, j: usize) -> Vec<S> {
    let (_, _, m) = c.dims();
    (0..m).map(|k| c.at(&[a, b], &[i, j], k).clone()).collect()
}

fn eval_bilinear_vec<S: Scalar>(c: &Cochain<S>, a: usize, b: usize, x: &[S], y: &[S]) -> Vec<S> {
    let (_, d, m) = c.dims();
    let mut out: Vec<S> = zeros(m);
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let coeff = x[i].mul(&y[j]);
            for k in 0..m {
                let v = c.at(&[a, b], &[i, j], k);
                if !v.is_zero() {
                    out[k] = out[k].add(&coeff.mul(v));
                }
            }
        }
    }
    out
}

impl<S: Scalar> TruncatedDeformation<S> {
    /// The trivial deformation: all higher coefficients zero.
    pub fn trivial(cx: &Complexes<S>, order: usize) -> Result<Self, DeformError> {
        require_regular(cx)?;
        let ctx = cx.context();
        let (nw, d, _) = cx.dims();
        let mut mu = vec![mu_as_cochain(&ctx.algebra)];
        let mut n = vec![ctx.nijenhuis.clone()];
        for _ in 0..order {
            mu.push(Cochain::zero(2, (nw, d, d)));
            n.push(OperatorFamily::zero(nw, d, d));
        }
        Ok(TruncatedDeformation { mu, n })
    }

    /// Builds a deformation from higher-order coefficients; order zero is
    /// taken from the base instance.
    pub fn from_higher(
        cx: &Complexes<S>,
        higher_mu: Vec<Cochain<S>>,
        higher_n: Vec<OperatorFamily<S>>,
    ) -> Result<Self, DeformError> {
        require_regular(cx)?;
        if higher_mu.len() != higher_n.len() {
            return Err(DeformError::ShapeMismatch);
        }
        let (nw, d, _) = cx.dims();
        for c in &higher_mu {
            if c.degree() != 2 || c.dims() != (nw, d, d) {
                return Err(DeformError::ShapeMismatch);
            }
        }
        for f in &higher_n {
            if f.len() != nw || !f.has_shape(d, d) {
                return Err(DeformError::ShapeMismatch);
            }
        }
        let mut out = Self::trivial(cx, higher_mu.len())?;
        for (k, c) in higher_mu.into_iter().enumerate() {
            out.mu[k + 1] = c;
        }
        for (k, f) in higher_n.into_iter().enumerate() {
            out.n[k + 1] = f;
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu_coeff(&self, k: usize) -> &Cochain<S> {
        &self.mu[k]
    }

    pub fn n_coeff(&self, k: usize) -> &OperatorFamily<S> {
        &self.n[k]
    }
}

impl<S: Scalar> GaugeFamily<S> {
    /// `id + sum_{k>=1} psi_k t^k`.
    pub fn new(nw: usize, dim: usize, higher: Vec<OperatorFamily<S>>) -> Result<Self, DeformError> {
        for f in &higher {
            if f.len() != nw || !f.has_shape(dim, dim) {
                return Err(DeformError::ShapeMismatch);
            }
        }
        let mut psi = vec![OperatorFamily::identity(nw, dim)];
        psi.extend(higher);
        Ok(GaugeFamily { psi })
    }

    pub fn identity(nw: usize, dim: usize, order: usize) -> Self {
        GaugeFamily {
            psi: (0..=order)
                .map(|k| {
                    if k == 0 {
                        OperatorFamily::identity(nw, dim)
                    } else {
                        OperatorFamily::zero(nw, dim, dim)
                    }
                })
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &OperatorFamily<S> {
        &self.psi[k]
    }

    /// Coefficients of the truncated series inverse: `eta_t psi_t = id`.
    pub fn inverse_coeffs(&self) -> Vec<OperatorFamily<S>> {
        let nw = self.psi[0].len();
        let dim = self.psi[0].map(0).rows();
        let mut eta: Vec<OperatorFamily<S>> = vec![OperatorFamily::identity(nw, dim)];
        for k in 1..=self.order() {
            let mut acc = OperatorFamily::zero(nw, dim, dim);
            for j in 1..=k {
                // eta_k = - sum_j eta_{k-j} psi_j
                let mut term = OperatorFamily::zero(nw, dim, dim);
                for w in 0..nw {
                    *term.map_mut(w) = eta[k - j].map(w).compose(self.psi[j].map(w));
                }
                acc = acc.add(&term);
            }
            eta.push(OperatorFamily::zero(nw, dim, dim).sub(&acc));
        }
        eta
    }
}

/// One violated coefficient equation.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformViolation<S: Scalar> {
    pub equation: &'static str,
    pub order: usize,
    pub indices: Vec<usize>,
    pub basis: Vec<usize>,
    pub lhs: Vec<S>,
    pub rhs: Vec<S>,
}

/// Per-order verdicts of the two coefficient equations.
#[derive(Clone, Debug)]
pub struct DeformReport<S: Scalar> {
    pub order_ok: Vec<bool>,
    pub violations: Vec<DeformViolation<S>>,
}

impl<S: Scalar> DeformReport<S> {
    pub fn passes_through(&self, order: usize) -> bool {
        self.order_ok.iter().take(order + 1).all(|&b| b)
    }

    pub fn first_failing_order(&self) -> Option<usize> {
        self.order_ok.iter().position(|&b| !b)
    }
}

/// Checks, for every order `0 <= k <= K`, the coefficient equations of the
/// deformed associativity and the deformed operator-family identity, on all
/// basis and index tuples. Diagnostic: never errors on math failures.
pub fn check_deformation<S: Scalar>(
    cx: &Complexes<S>,
    def: &TruncatedDeformation<S>,
) -> Result<DeformReport<S>, DeformError> {
    require_regular(cx)?;
    let ctx = cx.context();
    let sg = &ctx.semigroup;
    let (nw, d, _) = cx.dims();
    let order = def.order();
    let mut order_ok = vec![true; order + 1];
    let mut violations = Vec::new();
    let cap = 16usize;
    let record = |equation, order_k: usize, indices: &[usize], basis: &[usize], lhs: Vec<S>, rhs: Vec<S>, ok: &mut Vec<bool>, out: &mut Vec<DeformViolation<S>>| {
        ok[order_k] = false;
        if out.len() < cap {
            out.push(DeformViolation {
                equation,
                order: order_k,
                indices: indices.to_vec(),
                basis: basis.to_vec(),
                lhs,
                rhs,
            });
        }
    };

    for k in 0..=order {
        // associativity coefficients
        for a in 0..nw {
            for b in 0..nw {
                let ab = sg.product(a, b);
                for c in 0..nw {
                    let bc = sg.product(b, c);
                    for i in 0..d {
                        for j in 0..d {
                            for l in 0..d {
                                let mut lhs: Vec<S> = zeros(d);
                                let mut rhs: Vec<S> = zeros(d);
                                for p in 0..=k {
                                    let inner = eval_bilinear(&def.mu[k - p], a, b, i, j);
                                    let mut el = vec![S::zero(); d];
                                    el[l] = S::one();
                                    let v = eval_bilinear_vec(&def.mu[p], ab, c, &inner, &el);
                                    for (acc, t) in lhs.iter_mut().zip(&v) {
                                        *acc = acc.add(t);
                                    }
                                    let inner = eval_bilinear(&def.mu[k - p], b, c, j, l);
                                    let mut ei = vec![S::zero(); d];
                                    ei[i] = S::one();
                                    let v = eval_bilinear_vec(&def.mu[p], a, bc, &ei, &inner);
                                    for (acc, t) in rhs.iter_mut().zip(&v) {
                                        *acc = acc.add(t);
                                    }
                                }
                                if lhs != rhs {
                                    record(
                                        "deformed-associativity",
                                        k,
                                        &[a, b, c],
                                        &[i, j, l],
                                        lhs,
                                        rhs,
                                        &mut order_ok,
                                        &mut violations,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        // operator-family coefficients
        for a in 0..nw {
            for b in 0..nw {
                let ab = sg.product(a, b);
                for i in 0..d {
                    for j in 0..d {
                        let mut ei = vec![S::zero(); d];
                        ei[i] = S::one();
                        let mut ej = vec![S::zero(); d];
                        ej[j] = S::one();
                        let mut lhs: Vec<S> = zeros(d);
                        let mut rhs: Vec<S> = zeros(d);
                        // sum mu_p(N_q x, N_r y)
                        for p in 0..=k {
                            for q in 0..=k - p {
                                let r = k - p - q;
                                let nx = def.n[q].apply(a, &ei);
                                let ny = def.n[r].apply(b, &ej);
                                let v = eval_bilinear_vec(&def.mu[p], a, b, &nx, &ny);
                                for (acc, t) in lhs.iter_mut().zip(&v) {
                                    *acc = acc.add(t);
                                }
                                // N_p( mu_q(x, N_r y) ) + N_p( mu_q(N_r x, y) )
                                let v = eval_bilinear_vec(&def.mu[q], a, b, &ei, &ny);
                                let v = def.n[p].apply(ab, &v);
                                for (acc, t) in rhs.iter_mut().zip(&v) {
                                    *acc = acc.add(t);
                                }
                                let nrx = def.n[r].apply(a, &ei);
                                let v = eval_bilinear_vec(&def.mu[q], a, b, &nrx, &ej);
                                let v = def.n[p].apply(ab, &v);
                                for (acc, t) in rhs.iter_mut().zip(&v) {
                                    *acc = acc.add(t);
                                }
                                // - N_p N_q ( mu_r(x, y) ), the series square
                                let v = eval_bilinear_vec(&def.mu[r], a, b, &ei, &ej);
                                let v = def.n[q].apply(ab, &v);
                                let v = def.n[p].apply(ab, &v);
                                for (acc, t) in rhs.iter_mut().zip(&v) {
                                    *acc = acc.sub(t);
                                }
                            }
                        }
                        if lhs != rhs {
                            record(
                                "deformed-operator-family",
                                k,
                                &[a, b],
                                &[i, j],
                                lhs,
                                rhs,
                                &mut order_ok,
                                &mut violations,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(DeformReport {
        order_ok,
        violations,
    })
}

/// The infinitesimal `(mu_1, N_1)` packaged as a cone 2-cochain.
pub fn infinitesimal<S: Scalar>(
    cx: &Complexes<S>,
    def: &TruncatedDeformation<S>,
) -> Result<ConeCochain<S>, DeformError> {
    if def.order() < 1 {
        return Err(DeformError::OrderTooLow {
            got: def.order(),
            want: 1,
        });
    }
    let (nw, d, _) = cx.dims();
    Ok(ConeCochain {
        alg: def.mu[1].clone(),
        nf: Some(family_as_cochain(&def.n[1], nw, d)),
    })
}

/// The gauge action: `mu'_t = psi_t^-1 . mu_t . (psi_t x psi_t)` and
/// `N'_t = psi_t^-1 . N_t . psi_t`, truncated to the shared order.
pub fn gauge_transform<S: Scalar>(
    cx: &Complexes<S>,
    def: &TruncatedDeformation<S>,
    gauge: &GaugeFamily<S>,
) -> Result<TruncatedDeformation<S>, DeformError> {
    require_regular(cx)?;
    if gauge.order() != def.order() {
        return Err(DeformError::OrderMismatch {
            gauge: gauge.order(),
            deformation: def.order(),
        });
    }
    if gauge.psi[0] != OperatorFamily::identity(cx.dims().0, cx.dims().1) {
        return Err(DeformError::GaugeNotUnital);
    }
    let sg = &cx.context().semigroup;
    let (nw, d, _) = cx.dims();
    let order = def.order();
    let eta = gauge.inverse_coeffs();
    let mut mu_out = Vec::with_capacity(order + 1);
    let mut n_out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut muk = Cochain::zero(2, (nw, d, d));
        for a in 0..nw {
            for b in 0..nw {
                let ab = sg.product(a, b);
                for i in 0..d {
                    let mut ei = vec![S::zero(); d];
                    ei[i] = S::one();
                    for j in 0..d {
                        let mut ej = vec![S::zero(); d];
                        ej[j] = S::one();
                        let mut acc: Vec<S> = zeros(d);
                        for p in 0..=k {
                            for q in 0..=k - p {
                                for r in 0..=k - p - q {
                                    let s = k - p - q - r;
                                    let x = gauge.psi[r].apply(a, &ei);
                                    let y = gauge.psi[s].apply(b, &ej);
                                    let v = eval_bilinear_vec(&def.mu[q], a, b, &x, &y);
                                    let v = eta[p].apply(ab, &v);
                                    for (acc_k, t) in acc.iter_mut().zip(&v) {
                                        *acc_k = acc_k.add(t);
                                    }
                                }
                            }
                        }
                        for (out_k, v) in acc.into_iter().enumerate() {
                            if !v.is_zero() {
                                muk.set(&[a, b], &[i, j], out_k, v);
                            }
                        }
                    }
                }
            }
        }
        mu_out.push(muk);
        let mut nk = OperatorFamily::zero(nw, d, d);
        for w in 0..nw {
            let mut acc = OperatorMatrix::zeros(d, d);
            for p in 0..=k {
                for q in 0..=k - p {
                    let r = k - p - q;
                    let m = eta[p]
                        .map(w)
                        .compose(def.n[q].map(w))
                        .compose(gauge.psi[r].map(w));
                    acc = acc.add(&m);
                }
            }
            *nk.map_mut(w) = acc;
        }
        n_out.push(nk);
    }
    Ok(TruncatedDeformation {
        mu: mu_out,
        n: n_out,
    })
}

/// Result of one trivialization step: the degree-one cochain used and the
/// gauged deformation, whose order-one coefficients vanish exactly.
#[derive(Clone, Debug)]
pub struct TrivializationStep<S: Scalar> {
    pub psi1: OperatorFamily<S>,
    pub gauged: TruncatedDeformation<S>,
}

/// If the infinitesimal is a coboundary, gauges the deformation by
/// `id - psi_1 t` so that the order-one coefficients vanish; otherwise the
/// class is a genuine obstruction and `NotCoboundary` is returned.
///
/// Primitives are searched in the full degree-one cone space; a component in
/// the degree-zero part is absorbed into the algebra part through the
/// degree-zero differential, so a pure `(psi_1, 0)` primitive always exists
/// when any primitive does.
pub fn trivialization_step<S: Scalar>(
    cx: &Complexes<S>,
    def: &TruncatedDeformation<S>,
) -> Result<TrivializationStep<S>, DeformError> {
    let inf = infinitesimal(cx, def)?;
    let primitive = coboundary_primitive_cone(cx, &inf)?.ok_or(DeformError::NotCoboundary)?;
    let mut alg_part = primitive.alg.clone();
    if let Some(g0) = &primitive.nf {
        // absorb the degree-zero component: psi_1 = f + delta(g0)
        alg_part = alg_part.add(&cx.delta(g0)?);
    }
    let psi1 = cochain_as_family(&alg_part);
    let (nw, d, _) = cx.dims();
    let mut higher = vec![OperatorFamily::zero(nw, d, d); def.order()];
    higher[0] = OperatorFamily::zero(nw, d, d).sub(&psi1);
    let gauge = GaugeFamily::new(nw, d, higher)?;
    let gauged = gauge_transform(cx, def, &gauge)?;
    assert!(
        gauged.mu_coeff(1).is_zero() && gauged.n_coeff(1).is_zero(),
        "order-one coefficients must vanish after the trivializing gauge"
    );
    Ok(TrivializationStep { psi1, gauged })
}


#[cfg(test)]
mod gauge_invariance_tests {
    use super::*;
    use crate::builders::truncated_poly;
    use crate::cochain::Complexes;
    use crate::rng::Rng;
    use crate::scalar::Rational;
    use crate::semigroup::Semigroup;

    /// Gauging preserves the per-order verdicts even for invalid data.
    #[test]
    fn check_verdicts_are_gauge_invariant() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 1, &Semigroup::trivial())).unwrap();
        let (nw, d, _) = cx.dims();
        let mut rng = Rng::new(61);
        for _ in 0..5 {
            let mu1 = rng.cochain::<Rational>(2, (nw, d, d), 2);
            let mu2 = rng.cochain::<Rational>(2, (nw, d, d), 2);
            let n1 = cochain_as_family(&rng.cochain::<Rational>(1, (nw, d, d), 2));
            let n2 = cochain_as_family(&rng.cochain::<Rational>(1, (nw, d, d), 2));
            let def = TruncatedDeformation::from_higher(&cx, vec![mu1, mu2], vec![n1, n2]).unwrap();
            let mut maps = Vec::new();
            for _ in 0..nw {
                let mut m = OperatorMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..d {
                        m.set(i, j, rng.scalar(2));
                    }
                }
                maps.push(m);
            }
            let gauge =
                GaugeFamily::new(nw, d, vec![OperatorFamily::new(maps), OperatorFamily::zero(nw, d, d)])
                    .unwrap();
            let before = check_deformation(&cx, &def).unwrap();
            let after = check_deformation(&cx, &gauge_transform(&cx, &def, &gauge).unwrap()).unwrap();
            assert_eq!(before.order_ok, after.order_ok);
        }
    }
}
