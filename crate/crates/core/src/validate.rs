//! Exhaustive axiom validators with exact witnesses.
//!
//! Every axiom here is multilinear, so checking it on basis tuples is
//! equivalent to checking it on all elements. Reports keep at most
//! `witness_cap` violations (default 16) but always count all of them.

use thiserror::Error;

use crate::algebra::{zeros, NfBimodule, OmegaAlgebra, OperatorFamily};
use crate::scalar::Scalar;
use crate::semigroup::Semigroup;

pub const DEFAULT_WITNESS_CAP: usize = 16;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("underlying bimodule axioms fail; run validate_bimodule for witnesses")]
    BimoduleAxiomsFail,
}

/// One failed axiom instance: which axiom, at which semigroup indices and
/// basis indices, with both exactly evaluated sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<S: Scalar> {
    pub axiom: &'static str,
    pub indices: Vec<usize>,
    pub basis: Vec<usize>,
    pub lhs: Vec<S>,
    pub rhs: Vec<S>,
}

/// Outcome of a validator run. `verdict()` is true iff no violation exists,
/// including any beyond the storage cap.
#[derive(Clone, Debug)]
pub struct ValidationReport<S: Scalar> {
    pub violations: Vec<Violation<S>>,
    pub total_violations: usize,
    pub witness_cap: usize,
}

impl<S: Scalar> ValidationReport<S> {
    fn new(cap: usize) -> Self {
        ValidationReport {
            violations: Vec::new(),
            total_violations: 0,
            witness_cap: cap,
        }
    }

    fn record(
        &mut self,
        axiom: &'static str,
        indices: &[usize],
        basis: &[usize],
        lhs: Vec<S>,
        rhs: Vec<S>,
    ) {
        self.total_violations += 1;
        if self.violations.len() < self.witness_cap {
            self.violations.push(Violation {
                axiom,
                indices: indices.to_vec(),
                basis: basis.to_vec(),
                lhs,
                rhs,
            });
        }
    }

    pub fn verdict(&self) -> bool {
        self.total_violations == 0
    }

    fn merge(&mut self, other: ValidationReport<S>) {
        self.total_violations += other.total_violations;
        for v in other.violations {
            if self.violations.len() < self.witness_cap {
                self.violations.push(v);
            }
        }
    }
}

fn check_eq<S: Scalar>(
    report: &mut ValidationReport<S>,
    axiom: &'static str,
    indices: &[usize],
    basis: &[usize],
    lhs: Vec<S>,
    rhs: Vec<S>,
) {
    if lhs != rhs {
        report.record(axiom, indices, basis, lhs, rhs);
    }
}

fn basis_vec<S: Scalar>(dim: usize, i: usize) -> Vec<S> {
    let mut v = zeros(dim);
    v[i] = S::one();
    v
}

fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// Index-matched associativity on every basis and index triple.
pub fn validate_omega_associativity<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
) -> Result<ValidationReport<S>, ShapeError> {
    validate_omega_associativity_capped(alg, sg, DEFAULT_WITNESS_CAP)
}

/// As [`validate_omega_associativity`], storing at most `witness_cap`
/// violations (all are still counted).
pub fn validate_omega_associativity_capped<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    witness_cap: usize,
) -> Result<ValidationReport<S>, ShapeError> {
    if alg.n_omega() != sg.len() {
        return Err(ShapeError::ShapeMismatch(format!(
            "algebra is indexed by {} elements, semigroup has {}",
            alg.n_omega(),
            sg.len()
        )));
    }
    let d = alg.dim();
    let nw = sg.len();
    let mut report = ValidationReport::new(witness_cap);
    for a in 0..nw {
        for b in 0..nw {
            for c in 0..nw {
                let ab = sg.product(a, b);
                let bc = sg.product(b, c);
                for i in 0..d {
                    let ei = basis_vec::<S>(d, i);
                    for j in 0..d {
                        let ej = basis_vec::<S>(d, j);
                        let ij = alg.apply_mu(a, b, &ei, &ej);
                        for k in 0..d {
                            let ek = basis_vec::<S>(d, k);
                            let lhs = alg.apply_mu(ab, c, &ij, &ek);
                            let jk = alg.apply_mu(b, c, &ej, &ek);
                            let rhs = alg.apply_mu(a, bc, &ei, &jk);
                            check_eq(
                                &mut report,
                                "omega-associativity",
                                &[a, b, c],
                                &[i, j, k],
                                lhs,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The Nijenhuis family identity on every basis and index pair:
/// `N_a(x) . N_b(y) = N_ab( N_a(x).y + x.N_b(y) - N_ab(x.y) )`.
pub fn validate_nijenhuis_family<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    nij: &OperatorFamily<S>,
) -> Result<ValidationReport<S>, ShapeError> {
    validate_nijenhuis_family_capped(alg, sg, nij, DEFAULT_WITNESS_CAP)
}

/// As [`validate_nijenhuis_family`] with an explicit witness cap.
pub fn validate_nijenhuis_family_capped<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    nij: &OperatorFamily<S>,
    witness_cap: usize,
) -> Result<ValidationReport<S>, ShapeError> {
    let d = alg.dim();
    if nij.len() != sg.len() || !nij.has_shape(d, d) {
        return Err(ShapeError::ShapeMismatch(format!(
            "operator family must consist of {} square matrices of size {d}",
            sg.len()
        )));
    }
    let nw = sg.len();
    let mut report = ValidationReport::new(witness_cap);
    for a in 0..nw {
        for b in 0..nw {
            let ab = sg.product(a, b);
            for i in 0..d {
                let ei = basis_vec::<S>(d, i);
                let ni = nij.apply(a, &ei);
                for j in 0..d {
                    let ej = basis_vec::<S>(d, j);
                    let nj = nij.apply(b, &ej);
                    let lhs = alg.apply_mu(a, b, &ni, &nj);
                    let t1 = alg.apply_mu(a, b, &ni, &ej);
                    let t2 = alg.apply_mu(a, b, &ei, &nj);
                    let t3 = nij.apply(ab, &alg.apply_mu(a, b, &ei, &ej));
                    let inner = sub_vec(&add_vec(&t1, &t2), &t3);
                    let rhs = nij.apply(ab, &inner);
                    check_eq(&mut report, "nijenhuis-family", &[a, b], &[i, j], lhs, rhs);
                }
            }
        }
    }
    Ok(report)
}

/// The three bimodule compatibility axioms on all basis and index triples.
pub fn validate_bimodule<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    module: &NfBimodule<S>,
) -> Result<ValidationReport<S>, ShapeError> {
    validate_bimodule_capped(alg, sg, module, DEFAULT_WITNESS_CAP)
}

/// As [`validate_bimodule`] with an explicit witness cap.
pub fn validate_bimodule_capped<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    module: &NfBimodule<S>,
    witness_cap: usize,
) -> Result<ValidationReport<S>, ShapeError> {
    if module.alg_dim() != alg.dim() || module.n_omega() != sg.len() {
        return Err(ShapeError::ShapeMismatch(
            "module action tensors do not match the algebra context".into(),
        ));
    }
    let d = alg.dim();
    let m = module.dim();
    let nw = sg.len();
    let mut report = ValidationReport::new(witness_cap);
    for a in 0..nw {
        for b in 0..nw {
            let ab = sg.product(a, b);
            for c in 0..nw {
                let bc = sg.product(b, c);
                for i in 0..d {
                    let ei = basis_vec::<S>(d, i);
                    for j in 0..d {
                        let ej = basis_vec::<S>(d, j);
                        let prod = alg.apply_mu(a, b, &ei, &ej);
                        let prod_bc = alg.apply_mu(b, c, &ei, &ej);
                        for x in 0..m {
                            let fx = basis_vec::<S>(m, x);
                            // (a.b).m = a.(b.m)
                            let lhs = module.act_left(ab, c, &prod, &fx);
                            let rhs = module.act_left(
                                a,
                                bc,
                                &ei,
                                &module.act_left(b, c, &ej, &fx),
                            );
                            check_eq(
                                &mut report,
                                "bimodule-left",
                                &[a, b, c],
                                &[i, j, x],
                                lhs,
                                rhs,
                            );
                            // (a.m).b = a.(m.b)
                            let lhs = module.act_right(
                                ab,
                                c,
                                &module.act_left(a, b, &ei, &fx),
                                &ej,
                            );
                            let rhs = module.act_left(
                                a,
                                bc,
                                &ei,
                                &module.act_right(b, c, &fx, &ej),
                            );
                            check_eq(
                                &mut report,
                                "bimodule-middle",
                                &[a, b, c],
                                &[i, x, j],
                                lhs,
                                rhs,
                            );
                            // (m.a).b = m.(a.b)
                            let lhs = module.act_right(
                                ab,
                                c,
                                &module.act_right(a, b, &fx, &ei),
                                &ej,
                            );
                            let rhs = module.act_right(a, bc, &fx, &prod_bc);
                            check_eq(
                                &mut report,
                                "bimodule-right",
                                &[a, b, c],
                                &[x, i, j],
                                lhs,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Nijenhuis-bimodule compatibility: the underlying bimodule axioms plus the
/// two operator identities coupling the module family to the algebra family.
pub fn validate_nf_bimodule<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    nij: &OperatorFamily<S>,
    module: &NfBimodule<S>,
) -> Result<ValidationReport<S>, ShapeError> {
    validate_nf_bimodule_capped(alg, sg, nij, module, DEFAULT_WITNESS_CAP)
}

/// As [`validate_nf_bimodule`] with an explicit witness cap.
pub fn validate_nf_bimodule_capped<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    nij: &OperatorFamily<S>,
    module: &NfBimodule<S>,
    witness_cap: usize,
) -> Result<ValidationReport<S>, ShapeError> {
    let base = validate_bimodule_capped(alg, sg, module, witness_cap)?;
    if !base.verdict() {
        return Err(ShapeError::BimoduleAxiomsFail);
    }
    let d = alg.dim();
    let m = module.dim();
    let nw = sg.len();
    if !nij.has_shape(d, d) || nij.len() != nw {
        return Err(ShapeError::ShapeMismatch("Nijenhuis family shape".into()));
    }
    if !module.nm().has_shape(m, m) || module.nm().len() != nw {
        return Err(ShapeError::ShapeMismatch("module operator family shape".into()));
    }
    let nm = module.nm();
    let mut report = ValidationReport::new(witness_cap);
    for a in 0..nw {
        for b in 0..nw {
            let ab = sg.product(a, b);
            for i in 0..d {
                let ei = basis_vec::<S>(d, i);
                let ni = nij.apply(a, &ei);
                let nbi = nij.apply(b, &ei);
                for x in 0..m {
                    let fx = basis_vec::<S>(m, x);
                    let nmx = nm.apply(b, &fx);
                    // N_a(e_i) . N_{M,b}(f_x) = N_{M,ab}( e_i.N_{M,b}(f_x) + N_a(e_i).f_x - N_{M,ab}(e_i.f_x) )
                    let lhs = module.act_left(a, b, &ni, &nmx);
                    let t1 = module.act_left(a, b, &ei, &nmx);
                    let t2 = module.act_left(a, b, &ni, &fx);
                    let t3 = nm.apply(ab, &module.act_left(a, b, &ei, &fx));
                    let rhs = nm.apply(ab, &sub_vec(&add_vec(&t1, &t2), &t3));
                    check_eq(&mut report, "nf-bimodule-left", &[a, b], &[i, x], lhs, rhs);
                    // N_{M,a}(f_x) . N_b(e_i) = N_{M,ab}( f_x.N_b(e_i) + N_{M,a}(f_x).e_i - N_{M,ab}(f_x.e_i) )
                    let nma = nm.apply(a, &fx);
                    let lhs = module.act_right(a, b, &nma, &nbi);
                    let t1 = module.act_right(a, b, &fx, &nbi);
                    let t2 = module.act_right(a, b, &nma, &ei);
                    let t3 = nm.apply(ab, &module.act_right(a, b, &fx, &ei));
                    let rhs = nm.apply(ab, &sub_vec(&add_vec(&t1, &t2), &t3));
                    check_eq(&mut report, "nf-bimodule-right", &[a, b], &[x, i], lhs, rhs);
                }
            }
        }
    }
    report.merge(base);
    Ok(report)
}

/// Which square-pattern each operator family satisfies, and whether the
/// corresponding Rota-Baxter style identity then agrees with the Nijenhuis
/// verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbRelationReport {
    pub nijenhuis: bool,
    /// `N^2 = 0` holds componentwise.
    pub square_zero: bool,
    /// `N^2 = N` holds componentwise.
    pub square_idempotent: bool,
    /// `N^2 = id` holds componentwise.
    pub square_identity: bool,
    /// Verdict of `N_a(x).N_b(y) = N_ab(N_a(x).y + x.N_b(y))`.
    pub rota_baxter_weight0: Option<bool>,
    /// Verdict of `N_a(x).N_b(y) = N_ab(N_a(x).y + x.N_b(y) - x.y)`.
    pub rota_baxter_weight_minus1: Option<bool>,
    /// Verdict of `N_a(x).N_b(y) = N_ab(N_a(x).y + x.N_b(y)) - x.y`.
    pub modified_weight_minus1: Option<bool>,
}

/// Evaluates the square-pattern predicates and, for each case that holds,
/// whether the matching Rota-Baxter style verdict coincides with the
/// Nijenhuis one. Purely diagnostic.
pub fn rb_relation_check<S: Scalar>(
    alg: &OmegaAlgebra<S>,
    sg: &Semigroup,
    nij: &OperatorFamily<S>,
) -> Result<RbRelationReport, ShapeError> {
    let d = alg.dim();
    let nw = sg.len();
    if !nij.has_shape(d, d) || nij.len() != nw {
        return Err(ShapeError::ShapeMismatch("operator family shape".into()));
    }
    let id = crate::algebra::OperatorMatrix::identity(d);
    let mut square_zero = true;
    let mut square_idempotent = true;
    let mut square_identity = true;
    for w in 0..nw {
        let sq = nij.map(w).pow(2);
        square_zero &= sq.is_zero();
        square_idempotent &= sq == *nij.map(w);
        square_identity &= sq == id;
    }

    let nijenhuis = validate_nijenhuis_family(alg, sg, nij)?.verdict();

    let eval = |variant: u8| -> bool {
        for a in 0..nw {
            for b in 0..nw {
                let ab = sg.product(a, b);
                for i in 0..d {
                    let ei = basis_vec::<S>(d, i);
                    let ni = nij.apply(a, &ei);
                    for j in 0..d {
                        let ej = basis_vec::<S>(d, j);
                        let nj = nij.apply(b, &ej);
                        let lhs = alg.apply_mu(a, b, &ni, &nj);
                        let t1 = alg.apply_mu(a, b, &ni, &ej);
                        let t2 = alg.apply_mu(a, b, &ei, &nj);
                        let plain = alg.apply_mu(a, b, &ei, &ej);
                        let rhs = match variant {
                            0 => nij.apply(ab, &add_vec(&t1, &t2)),
                            1 => nij.apply(ab, &sub_vec(&add_vec(&t1, &t2), &plain)),
                            _ => sub_vec(&nij.apply(ab, &add_vec(&t1, &t2)), &plain),
                        };
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };

    Ok(RbRelationReport {
        nijenhuis,
        square_zero,
        square_idempotent,
        square_identity,
        rota_baxter_weight0: square_zero.then(|| eval(0)),
        rota_baxter_weight_minus1: square_idempotent.then(|| eval(1)),
        modified_weight_minus1: square_identity.then(|| eval(2)),
    })
}

/// Morphism of semigroup-indexed algebras:
/// `f_ab(x ._{a,b} y) = f_a(x) .'_{a,b} f_b(y)`.
pub fn check_omega_morphism<S: Scalar>(
    f: &OperatorFamily<S>,
    source: &OmegaAlgebra<S>,
    target: &OmegaAlgebra<S>,
    sg: &Semigroup,
) -> Result<ValidationReport<S>, ShapeError> {
    let nw = sg.len();
    if f.len() != nw || !f.has_shape(target.dim(), source.dim()) {
        return Err(ShapeError::ShapeMismatch(format!(
            "morphism family must be {} maps of shape {}x{}",
            nw,
            target.dim(),
            source.dim()
        )));
    }
    let d = source.dim();
    let mut report = ValidationReport::new(DEFAULT_WITNESS_CAP);
    for a in 0..nw {
        for b in 0..nw {
            let ab = sg.product(a, b);
            for i in 0..d {
                let ei = basis_vec::<S>(d, i);
                let fi = f.apply(a, &ei);
                for j in 0..d {
                    let ej = basis_vec::<S>(d, j);
                    let fj = f.apply(b, &ej);
                    let lhs = f.apply(ab, &source.apply_mu(a, b, &ei, &ej));
                    let rhs = target.apply_mu(a, b, &fi, &fj);
                    check_eq(&mut report, "omega-morphism", &[a, b], &[i, j], lhs, rhs);
                }
            }
        }
    }
    Ok(report)
}

/// Morphism of Nijenhuis family algebras: an algebra morphism intertwining
/// the operator families, `f_w . N_w = N'_w . f_w`.
pub fn check_nf_morphism<S: Scalar>(
    f: &OperatorFamily<S>,
    source: (&OmegaAlgebra<S>, &OperatorFamily<S>),
    target: (&OmegaAlgebra<S>, &OperatorFamily<S>),
    sg: &Semigroup,
) -> Result<ValidationReport<S>, ShapeError> {
    let mut report = check_omega_morphism(f, source.0, target.0, sg)?;
    let d = source.0.dim();
    for w in 0..sg.len() {
        for j in 0..d {
            let ej = basis_vec::<S>(d, j);
            let lhs = f.apply(w, &source.1.apply(w, &ej));
            let rhs = target.1.apply(w, &f.apply(w, &ej));
            if lhs != rhs {
                report.record("nf-morphism-intertwine", &[w], &[j], lhs, rhs);
            }
        }
    }
    Ok(report)
}
