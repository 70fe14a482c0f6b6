//! Cochain spaces and exact differentials.
//!
//! Three complexes share the same underlying cochain spaces
//! (families of multilinear maps `A ⊗ ... ⊗ A -> M` indexed by semigroup
//! tuples):
//!
//! - the algebra complex with the Hochschild differential `delta`,
//! - the operator-family complex with differential `nf_partial`,
//! - their mapping cone (`C^n = C^n_alg + C^(n-1)_nf`) with differential
//!   `d(f, g) = (delta f, -nf_partial g - phi f)`.
//!
//! `nf_partial` is the Hochschild differential of the deformed product with
//! the induced module actions, corrected in every inner slot by the module
//! operator applied to the plain-product collapse:
//!
//! ```text
//! (-1)^(n-i+1) [ g(..., u_i * u_{i+1}, ...) - N_M( g(..., u_i u_{i+1}, ...) ) ]
//! ```
//!
//! The correction is forced by linearizing the operator-family identity: the
//! degree-one kernel is then exactly the space of infinitesimal family
//! deformations, `phi` is a chain map, and the cone squares to zero. Without
//! it each of these fails on noncommutative instances (the induced actions
//! alone do not even form a module over the deformed product; see the tests
//! in `derived` and the complex-law suite).
//!
//! Signs follow the convention with `(-1)^(n+1)` on the left-action term,
//! `(-1)^(n-i+1)` on inner collapses and `+1` on the right-action term; in
//! degree zero `delta(m)(a) = a.m - m.a` with index pairs `(w, 1)` and
//! `(1, w)`, which requires a unit in the semigroup.

use thiserror::Error;

use crate::algebra::{zeros, Context, NfBimodule, OmegaAlgebra, OperatorFamily, OperatorMatrix};
use crate::derived::{induced_bimodule_unchecked, star_product_unchecked, DerivedError};
use crate::scalar::Scalar;
use crate::semigroup::Semigroup;
use crate::validate::{validate_nf_bimodule, validate_nijenhuis_family};

/// Subset enumeration in the comparison map is capped here; cochain space
/// dimensions explode far earlier, so the cap never binds in practice.
pub const PHI_DEGREE_CAP: usize = 12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CochainError {
    #[error("degree-0 differentials need a unit in the semigroup")]
    NoUnit,
    #[error("degree {0} exceeds the subset-enumeration cap {PHI_DEGREE_CAP}")]
    DegreeTooLarge(usize),
    #[error("cochain has degree {got}, expected {want}")]
    WrongDegree { got: usize, want: usize },
    #[error("cochain dims {got:?} do not match the context {want:?}")]
    DimsMismatch {
        got: (usize, usize, usize),
        want: (usize, usize, usize),
    },
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    Shape(#[from] crate::validate::ShapeError),
}

/// Which of the three complexes an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexKind {
    Alg,
    Nf,
    Nfa,
}

impl ComplexKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "alg" => Some(ComplexKind::Alg),
            "nf" => Some(ComplexKind::Nf),
            "nfa" => Some(ComplexKind::Nfa),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ComplexKind::Alg => "alg",
            ComplexKind::Nf => "nf",
            ComplexKind::Nfa => "nfa",
        }
    }
}

/// A degree-`n` cochain: a family of `n`-linear maps `A^n -> M`, one per
/// `n`-tuple of semigroup indices, stored densely. Degree 0 is a single
/// module vector.
///
/// The dense layout is the canonical basis order: lexicographic in
/// (semigroup tuple, input basis tuple, output index).
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<S: Scalar> {
    degree: usize,
    nw: usize,
    d: usize,
    m: usize,
    data: Vec<S>,
}

/// `(|semigroup|, dim A, dim M)` triple a cochain is shaped by.
pub type Dims = (usize, usize, usize);

impl<S: Scalar> Cochain<S> {
    pub fn zero(degree: usize, dims: Dims) -> Self {
        let (nw, d, m) = dims;
        Cochain {
            degree,
            nw,
            d,
            m,
            data: zeros(space_dim(degree, dims)),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dims(&self) -> Dims {
        (self.nw, self.d, self.m)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn from_data(degree: usize, dims: Dims, data: Vec<S>) -> Self {
        assert_eq!(data.len(), space_dim(degree, dims));
        let (nw, d, m) = dims;
        Cochain {
            degree,
            nw,
            d,
            m,
            data,
        }
    }

    /// Basis cochain with a one at flat position `idx`.
    pub fn unit(degree: usize, dims: Dims, idx: usize) -> Self {
        let mut c = Self::zero(degree, dims);
        c.data[idx] = S::one();
        c
    }

    #[inline]
    pub fn flat_index(&self, ws: &[usize], inputs: &[usize], out: usize) -> usize {
        debug_assert_eq!(ws.len(), self.degree);
        debug_assert_eq!(inputs.len(), self.degree);
        let mut idx = 0usize;
        for &w in ws {
            idx = idx * self.nw + w;
        }
        for &i in inputs {
            idx = idx * self.d + i;
        }
        idx * self.m + out
    }

    #[inline]
    pub fn at(&self, ws: &[usize], inputs: &[usize], out: usize) -> &S {
        &self.data[self.flat_index(ws, inputs, out)]
    }

    pub fn set(&mut self, ws: &[usize], inputs: &[usize], out: usize, v: S) {
        let idx = self.flat_index(ws, inputs, out);
        self.data[idx] = v;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Cochain { data, ..self.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub(b))
            .collect();
        Cochain { data, ..self.clone() }
    }

    pub fn scale(&self, c: &S) -> Self {
        let data = self.data.iter().map(|a| a.mul(c)).collect();
        Cochain { data, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(S::neg).collect();
        Cochain { data, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// Nonzero entries as `(semigroup tuple, input tuple, output, value)`.
    pub fn entries(&self) -> Vec<(Vec<usize>, Vec<usize>, usize, S)> {
        let mut out = Vec::new();
        let mut ws = vec![0usize; self.degree];
        let mut ins = vec![0usize; self.degree];
        loop {
            for (o, _) in (0..self.m).enumerate() {
                let v = self.at(&ws, &ins, o);
                if !v.is_zero() {
                    out.push((ws.clone(), ins.clone(), o, v.clone()));
                }
            }
            if !advance(&mut ins, self.d) && !advance(&mut ws, self.nw) {
                break;
            }
        }
        out
    }
}

/// Dimension of the degree-`n` cochain space for the given shape.
pub fn space_dim(degree: usize, dims: Dims) -> usize {
    let (nw, d, m) = dims;
    if degree == 0 {
        m
    } else {
        nw.pow(degree as u32) * d.pow(degree as u32) * m
    }
}

/// Odometer increment over tuples with `base` digits; false on wrap to zero.
fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// An element of the mapping-cone complex: an algebra cochain of degree `n`
/// plus an operator-family cochain of degree `n - 1` (absent in degree 0,
/// and in degree 1 over a semigroup without unit).
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCochain<S: Scalar> {
    pub alg: Cochain<S>,
    pub nf: Option<Cochain<S>>,
}

impl<S: Scalar> ConeCochain<S> {
    pub fn degree(&self) -> usize {
        self.alg.degree()
    }

    pub fn zero(degree: usize, dims: Dims, unital: bool) -> Self {
        let nf = if degree >= 1 && (degree >= 2 || unital) {
            Some(Cochain::zero(degree - 1, dims))
        } else {
            None
        };
        ConeCochain {
            alg: Cochain::zero(degree, dims),
            nf,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ConeCochain {
            alg: self.alg.add(&rhs.alg),
            nf: match (&self.nf, &rhs.nf) {
                (Some(a), Some(b)) => Some(a.add(b)),
                (None, None) => None,
                _ => panic!("cone parts disagree"),
            },
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ConeCochain {
            alg: self.alg.sub(&rhs.alg),
            nf: match (&self.nf, &rhs.nf) {
                (Some(a), Some(b)) => Some(a.sub(b)),
                (None, None) => None,
                _ => panic!("cone parts disagree"),
            },
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        ConeCochain {
            alg: self.alg.scale(c),
            nf: self.nf.as_ref().map(|g| g.scale(c)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alg.is_zero() && self.nf.as_ref().is_none_or(Cochain::is_zero)
    }
}

fn sign_of<S: Scalar>(exponent: usize) -> S {
    if exponent % 2 == 0 {
        S::one()
    } else {
        S::one().neg()
    }
}

/// The Hochschild differential of `collapse`-products with the given module
/// actions, in the sign convention described at module level. Independent of
/// any operator family.
pub fn hochschild_delta<S: Scalar>(
    sg: &Semigroup,
    collapse: &OmegaAlgebra<S>,
    actions: &NfBimodule<S>,
    cochain: &Cochain<S>,
) -> Result<Cochain<S>, CochainError> {
    delta_with_twist(sg, collapse, actions, None, cochain)
}

/// Shared skeleton for `delta` and `nf_partial`. When `twist` is given as
/// `(plain multiplication, module operators)`, every inner collapse term is
/// corrected by the module operator applied to the plain-product collapse.
fn delta_with_twist<S: Scalar>(
    sg: &Semigroup,
    collapse: &OmegaAlgebra<S>,
    actions: &NfBimodule<S>,
    twist: Option<(&OmegaAlgebra<S>, &OperatorFamily<S>)>,
    cochain: &Cochain<S>,
) -> Result<Cochain<S>, CochainError> {
    let (nw, d, m) = cochain.dims();
    if collapse.dim() != d || actions.dim() != m || sg.len() != nw {
        return Err(CochainError::DimsMismatch {
            got: cochain.dims(),
            want: (sg.len(), collapse.dim(), actions.dim()),
        });
    }
    let n = cochain.degree();
    if n == 0 {
        let unit = sg.unit().ok_or(CochainError::NoUnit)?;
        let mut out = Cochain::zero(1, cochain.dims());
        for w in 0..nw {
            for j in 0..d {
                for y in 0..m {
                    let mut acc = S::zero();
                    for x in 0..m {
                        let gx = &cochain.data()[x];
                        if gx.is_zero() {
                            continue;
                        }
                        let l = actions.left(w, unit, j, x, y);
                        if !l.is_zero() {
                            acc = acc.add(&gx.mul(l));
                        }
                        let r = actions.right(unit, w, x, j, y);
                        if !r.is_zero() {
                            acc = acc.sub(&gx.mul(r));
                        }
                    }
                    if !acc.is_zero() {
                        out.set(&[w], &[j], y, acc);
                    }
                }
            }
        }
        return Ok(out);
    }

    let out_deg = n + 1;
    let mut out = Cochain::zero(out_deg, cochain.dims());
    let mut ws = vec![0usize; out_deg];
    let mut ins = vec![0usize; out_deg];
    let mut merged_ws = vec![0usize; n];
    let mut merged_ins = vec![0usize; n];
    let first_sign = sign_of::<S>(out_deg); // (-1)^(n+1)
    loop {
        // products of index prefixes/suffixes for the action terms
        let tail_prod = sg.product_seq(&ws[1..]);
        let head_prod = sg.product_seq(&ws[..n]);
        let full_prod = sg.product(head_prod, ws[n]);
        loop {
            for y in 0..m {
                let mut acc = S::zero();

                // (-1)^(n+1) u_1 . g(u_2, ..., u_{n+1})
                for x in 0..m {
                    let l = actions.left(ws[0], tail_prod, ins[0], x, y);
                    if l.is_zero() {
                        continue;
                    }
                    let g = cochain.at(&ws[1..], &ins[1..], x);
                    if !g.is_zero() {
                        acc = acc.add(&first_sign.mul(&l.mul(g)));
                    }
                }

                // inner collapses
                for slot in 0..n {
                    merged_ws[..slot].copy_from_slice(&ws[..slot]);
                    merged_ws[slot] = sg.product(ws[slot], ws[slot + 1]);
                    merged_ws[slot + 1..].copy_from_slice(&ws[slot + 2..]);
                    let sign = sign_of::<S>(n - slot); // (-1)^(n-i+1), i = slot+1
                    let mut term = S::zero();
                    merged_ins[..slot].copy_from_slice(&ins[..slot]);
                    merged_ins[slot + 1..].copy_from_slice(&ins[slot + 2..]);
                    for k in 0..d {
                        let c = collapse.mu(ws[slot], ws[slot + 1], ins[slot], ins[slot + 1], k);
                        if c.is_zero() {
                            continue;
                        }
                        merged_ins[slot] = k;
                        let g = cochain.at(&merged_ws, &merged_ins, y);
                        if !g.is_zero() {
                            term = term.add(&c.mul(g));
                        }
                    }
                    if let Some((plain, nm)) = twist {
                        let nm_mat = nm.map(full_prod);
                        for z in 0..m {
                            let nv = nm_mat.at(y, z);
                            if nv.is_zero() {
                                continue;
                            }
                            for k in 0..d {
                                let c =
                                    plain.mu(ws[slot], ws[slot + 1], ins[slot], ins[slot + 1], k);
                                if c.is_zero() {
                                    continue;
                                }
                                merged_ins[slot] = k;
                                let g = cochain.at(&merged_ws, &merged_ins, z);
                                if !g.is_zero() {
                                    term = term.sub(&nv.mul(&c.mul(g)));
                                }
                            }
                        }
                    }
                    if !term.is_zero() {
                        acc = acc.add(&sign.mul(&term));
                    }
                }

                // + g(u_1, ..., u_n) . u_{n+1}
                for x in 0..m {
                    let r = actions.right(head_prod, ws[n], x, ins[n], y);
                    if r.is_zero() {
                        continue;
                    }
                    let g = cochain.at(&ws[..n], &ins[..n], x);
                    if !g.is_zero() {
                        acc = acc.add(&r.mul(g));
                    }
                }

                if !acc.is_zero() {
                    out.set(&ws, &ins, y, acc);
                }
            }
            if !advance(&mut ins, d) {
                break;
            }
        }
        if !advance(&mut ws, nw) {
            break;
        }
    }
    Ok(out)
}

/// Precomputed evaluation context for the three complexes of one instance:
/// the deformed product, the induced actions over it, and the validated
/// base data.
#[derive(Clone, Debug)]
pub struct Complexes<S: Scalar> {
    ctx: Context<S>,
    star: OmegaAlgebra<S>,
    induced: NfBimodule<S>,
}

impl<S: Scalar> Complexes<S> {
    /// Validates the instance (Nijenhuis family and Nijenhuis bimodule) and
    /// precomputes the derived tensors.
    pub fn new(ctx: Context<S>) -> Result<Self, CochainError> {
        if !validate_nijenhuis_family(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis)?.verdict() {
            return Err(DerivedError::NotNijenhuis.into());
        }
        if !validate_nf_bimodule(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis, &ctx.module)?
            .verdict()
        {
            return Err(DerivedError::NotNfBimodule.into());
        }
        Ok(Self::new_unchecked(ctx))
    }

    /// Skips the validity checks; differentials on invalid data have no
    /// guaranteed properties.
    pub fn new_unchecked(ctx: Context<S>) -> Self {
        let star = star_product_unchecked(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis);
        let induced =
            induced_bimodule_unchecked(&ctx.algebra, &ctx.semigroup, &ctx.nijenhuis, &ctx.module);
        Complexes { ctx, star, induced }
    }

    pub fn context(&self) -> &Context<S> {
        &self.ctx
    }

    pub fn star(&self) -> &OmegaAlgebra<S> {
        &self.star
    }

    pub fn induced(&self) -> &NfBimodule<S> {
        &self.induced
    }

    pub fn dims(&self) -> Dims {
        self.ctx.dims()
    }

    pub fn unital(&self) -> bool {
        self.ctx.semigroup.unit().is_some()
    }

    /// Dimension of the degree-`n` space of the chosen complex. Degree-0
    /// spaces are empty without a unit.
    pub fn dim(&self, kind: ComplexKind, degree: usize) -> usize {
        let dims = self.dims();
        match kind {
            ComplexKind::Alg | ComplexKind::Nf => {
                if degree == 0 && !self.unital() {
                    0
                } else {
                    space_dim(degree, dims)
                }
            }
            ComplexKind::Nfa => {
                if degree == 0 {
                    self.dim(ComplexKind::Alg, 0)
                } else {
                    self.dim(ComplexKind::Alg, degree) + self.dim(ComplexKind::Nf, degree - 1)
                }
            }
        }
    }

    /// The algebra-complex differential.
    pub fn delta(&self, cochain: &Cochain<S>) -> Result<Cochain<S>, CochainError> {
        hochschild_delta(&self.ctx.semigroup, &self.ctx.algebra, &self.ctx.module, cochain)
    }

    /// The operator-family differential: Hochschild over the deformed
    /// product and induced actions, with the per-slot module-operator
    /// correction.
    pub fn nf_partial(&self, cochain: &Cochain<S>) -> Result<Cochain<S>, CochainError> {
        delta_with_twist(
            &self.ctx.semigroup,
            &self.star,
            &self.induced,
            Some((&self.ctx.algebra, self.ctx.module.nm())),
            cochain,
        )
    }

    /// Term-by-term evaluation of the operator-family differential straight
    /// from the raw structure tensors, without the precomputed deformed
    /// product or induced actions. Used as an independent cross-check of
    /// [`Complexes::nf_partial`]; defined for degree >= 1.
    pub fn nf_partial_explicit(&self, cochain: &Cochain<S>) -> Result<Cochain<S>, CochainError> {
        let n = cochain.degree();
        if n == 0 {
            return self.nf_partial(cochain);
        }
        let (nw, d, m) = cochain.dims();
        let dims_want = self.dims();
        if cochain.dims() != dims_want {
            return Err(CochainError::DimsMismatch {
                got: cochain.dims(),
                want: dims_want,
            });
        }
        let sg = &self.ctx.semigroup;
        let alg = &self.ctx.algebra;
        let module = &self.ctx.module;
        let nij = &self.ctx.nijenhuis;
        let nm = self.ctx.module.nm();
        let out_deg = n + 1;
        let mut out = Cochain::zero(out_deg, cochain.dims());
        let first_sign = sign_of::<S>(out_deg);
        let mut ws = vec![0usize; out_deg];
        let mut ins = vec![0usize; out_deg];
        let mut merged_ws = vec![0usize; n];
        let mut merged_ins = vec![0usize; n];
        loop {
            let tail_prod = sg.product_seq(&ws[1..]);
            let head_prod = sg.product_seq(&ws[..n]);
            let full_prod = sg.product(head_prod, ws[n]);
            let nm_full = nm.map(full_prod);
            loop {
                for y in 0..m {
                    let mut acc = S::zero();

                    // N(u_1) . g(...) - N_M( u_1 . g(...) ), sign (-1)^(n+1)
                    for x in 0..m {
                        let g = cochain.at(&ws[1..], &ins[1..], x);
                        if g.is_zero() {
                            continue;
                        }
                        let mut coeff = S::zero();
                        for i in 0..d {
                            let nv = nij.map(ws[0]).at(i, ins[0]);
                            if nv.is_zero() {
                                continue;
                            }
                            let l = module.left(ws[0], tail_prod, i, x, y);
                            if !l.is_zero() {
                                coeff = coeff.add(&nv.mul(l));
                            }
                        }
                        for z in 0..m {
                            let nv = nm_full.at(y, z);
                            if nv.is_zero() {
                                continue;
                            }
                            let l = module.left(ws[0], tail_prod, ins[0], x, z);
                            if !l.is_zero() {
                                coeff = coeff.sub(&nv.mul(l));
                            }
                        }
                        if !coeff.is_zero() {
                            acc = acc.add(&first_sign.mul(&coeff.mul(g)));
                        }
                    }

                    // inner collapses: deformed-product substitution minus
                    // the module operator on the plain collapse
                    for slot in 0..n {
                        merged_ws[..slot].copy_from_slice(&ws[..slot]);
                        merged_ws[slot] = sg.product(ws[slot], ws[slot + 1]);
                        merged_ws[slot + 1..].copy_from_slice(&ws[slot + 2..]);
                        merged_ins[..slot].copy_from_slice(&ins[..slot]);
                        merged_ins[slot + 1..].copy_from_slice(&ins[slot + 2..]);
                        let sign = sign_of::<S>(n - slot);
                        let (wa, wb) = (ws[slot], ws[slot + 1]);
                        let (ja, jb) = (ins[slot], ins[slot + 1]);
                        let mut term = S::zero();
                        for k in 0..d {
                            // star coefficient of e_k in u_slot * u_{slot+1}
                            let mut c = S::zero();
                            for q in 0..d {
                                let nv = nij.map(wa).at(q, ja);
                                if !nv.is_zero() {
                                    let mu = alg.mu(wa, wb, q, jb, k);
                                    if !mu.is_zero() {
                                        c = c.add(&nv.mul(mu));
                                    }
                                }
                                let nv = nij.map(wb).at(q, jb);
                                if !nv.is_zero() {
                                    let mu = alg.mu(wa, wb, ja, q, k);
                                    if !mu.is_zero() {
                                        c = c.add(&nv.mul(mu));
                                    }
                                }
                            }
                            for t in 0..d {
                                let mu = alg.mu(wa, wb, ja, jb, t);
                                if !mu.is_zero() {
                                    let nv = nij.map(merged_ws[slot]).at(k, t);
                                    if !nv.is_zero() {
                                        c = c.sub(&mu.mul(nv));
                                    }
                                }
                            }
                            if c.is_zero() {
                                continue;
                            }
                            merged_ins[slot] = k;
                            let g = cochain.at(&merged_ws, &merged_ins, y);
                            if !g.is_zero() {
                                term = term.add(&c.mul(g));
                            }
                        }
                        for z in 0..m {
                            let nv = nm_full.at(y, z);
                            if nv.is_zero() {
                                continue;
                            }
                            for k in 0..d {
                                let mu = alg.mu(wa, wb, ja, jb, k);
                                if mu.is_zero() {
                                    continue;
                                }
                                merged_ins[slot] = k;
                                let g = cochain.at(&merged_ws, &merged_ins, z);
                                if !g.is_zero() {
                                    term = term.sub(&nv.mul(&mu.mul(g)));
                                }
                            }
                        }
                        if !term.is_zero() {
                            acc = acc.add(&sign.mul(&term));
                        }
                    }

                    // g(...) . N(u_{n+1}) - N_M( g(...) . u_{n+1} ), sign +1
                    for x in 0..m {
                        let g = cochain.at(&ws[..n], &ins[..n], x);
                        if g.is_zero() {
                            continue;
                        }
                        let mut coeff = S::zero();
                        for q in 0..d {
                            let nv = nij.map(ws[n]).at(q, ins[n]);
                            if nv.is_zero() {
                                continue;
                            }
                            let r = module.right(head_prod, ws[n], x, q, y);
                            if !r.is_zero() {
                                coeff = coeff.add(&nv.mul(r));
                            }
                        }
                        for z in 0..m {
                            let nv = nm_full.at(y, z);
                            if nv.is_zero() {
                                continue;
                            }
                            let r = module.right(head_prod, ws[n], x, ins[n], z);
                            if !r.is_zero() {
                                coeff = coeff.sub(&nv.mul(r));
                            }
                        }
                        if !coeff.is_zero() {
                            acc = acc.add(&coeff.mul(g));
                        }
                    }

                    if !acc.is_zero() {
                        out.set(&ws, &ins, y, acc);
                    }
                }
                if !advance(&mut ins, d) {
                    break;
                }
            }
            if !advance(&mut ws, nw) {
                break;
            }
        }
        Ok(out)
    }

    fn nm_powers(&self, up_to: usize) -> Vec<Vec<OperatorMatrix<S>>> {
        let nm = self.ctx.module.nm();
        (0..self.ctx.semigroup.len())
            .map(|w| {
                let mut pows = Vec::with_capacity(up_to + 1);
                pows.push(OperatorMatrix::identity(self.ctx.module.dim()));
                for k in 1..=up_to {
                    pows.push(pows[k - 1].compose(nm.map(w)));
                }
                pows
            })
            .collect()
    }

    /// The comparison map from the algebra complex to the operator-family
    /// complex: the alternating subset sum applying the family at a set of
    /// input slots and a power of the module operator outside,
    ///
    /// ```text
    /// phi(f)(u_1..u_n) = sum_S (-1)^(n-|S|) N_M^(n-|S|)( f(.., N(u_i) at i in S, ..) )
    /// ```
    ///
    /// with all semigroup indices of `f` unchanged. Degree 0 is the identity.
    pub fn phi(&self, cochain: &Cochain<S>) -> Result<Cochain<S>, CochainError> {
        let n = cochain.degree();
        if n == 0 {
            return Ok(cochain.clone());
        }
        if n > PHI_DEGREE_CAP {
            return Err(CochainError::DegreeTooLarge(n));
        }
        let (nw, d, m) = cochain.dims();
        if cochain.dims() != self.dims() {
            return Err(CochainError::DimsMismatch {
                got: cochain.dims(),
                want: self.dims(),
            });
        }
        let sg = &self.ctx.semigroup;
        let nij = &self.ctx.nijenhuis;
        let pows = self.nm_powers(n);
        let mut out = Cochain::zero(n, cochain.dims());
        let mut ws = vec![0usize; n];
        let mut ins = vec![0usize; n];
        let mut twisted = vec![0usize; n];
        loop {
            let full_prod = sg.product_seq(&ws);
            loop {
                for y in 0..m {
                    let mut acc = S::zero();
                    for mask in 0..(1usize << n) {
                        let k = mask.count_ones() as usize;
                        let sign = sign_of::<S>(n - k);
                        let pow = &pows[full_prod][n - k];
                        // enumerate twisted input rows for slots in the mask
                        twisted.copy_from_slice(&ins);
                        let mut term = S::zero();
                        enumerate_twists(
                            nij,
                            &ws,
                            &ins,
                            mask,
                            0,
                            &S::one(),
                            &mut twisted,
                            &mut |rows, coeff| {
                                for x in 0..m {
                                    let p = pow.at(y, x);
                                    if p.is_zero() {
                                        continue;
                                    }
                                    let f = cochain.at(&ws, rows, x);
                                    if !f.is_zero() {
                                        term = term.add(&coeff.mul(&p.mul(f)));
                                    }
                                }
                            },
                        );
                        if !term.is_zero() {
                            acc = acc.add(&sign.mul(&term));
                        }
                    }
                    if !acc.is_zero() {
                        out.set(&ws, &ins, y, acc);
                    }
                }
                if !advance(&mut ins, d) {
                    break;
                }
            }
            if !advance(&mut ws, nw) {
                break;
            }
        }
        Ok(out)
    }

    /// Sparse columns of the matrix of `phi` in degree `n`, in basis order.
    /// Exploits that `phi` preserves the semigroup tuple.
    pub fn phi_columns(&self, n: usize) -> Result<Vec<Vec<(usize, S)>>, CochainError> {
        if n > PHI_DEGREE_CAP {
            return Err(CochainError::DegreeTooLarge(n));
        }
        let dims = self.dims();
        let (nw, d, m) = dims;
        let dim = space_dim(n, dims);
        if n == 0 {
            return Ok((0..dim).map(|i| vec![(i, S::one())]).collect());
        }
        let sg = &self.ctx.semigroup;
        let nij = &self.ctx.nijenhuis;
        let pows = self.nm_powers(n);
        let mut cols: Vec<Vec<(usize, S)>> = vec![Vec::new(); dim];
        let mut ws = vec![0usize; n];
        let mut ins = vec![0usize; n];
        let probe = Cochain::<S>::zero(n, dims);
        loop {
            let full_prod = sg.product_seq(&ws);
            loop {
                for x0 in 0..m {
                    let col_idx = probe.flat_index(&ws, &ins, x0);
                    let col = &mut cols[col_idx];
                    for mask in 0..(1usize << n) {
                        let k = mask.count_ones() as usize;
                        let sign = sign_of::<S>(n - k);
                        let pow = &pows[full_prod][n - k];
                        // unit input fixes the f-slot rows; output columns of
                        // the twisted slots range over the family's rows
                        let mut outs = ins.clone();
                        enumerate_twist_outputs(
                            nij,
                            &ws,
                            &ins,
                            mask,
                            0,
                            &S::one(),
                            &mut outs,
                            &mut |cols_choice, coeff| {
                                for y in 0..m {
                                    let p = pow.at(y, x0);
                                    if p.is_zero() {
                                        continue;
                                    }
                                    let row = probe.flat_index(&ws, cols_choice, y);
                                    col.push((row, sign.mul(&coeff.mul(p))));
                                }
                            },
                        );
                    }
                    // merge duplicate rows
                    col.sort_by_key(|(r, _)| *r);
                    let mut merged: Vec<(usize, S)> = Vec::with_capacity(col.len());
                    for (r, v) in col.drain(..) {
                        match merged.last_mut() {
                            Some((lr, lv)) if *lr == r => *lv = lv.add(&v),
                            _ => merged.push((r, v)),
                        }
                    }
                    merged.retain(|(_, v)| !v.is_zero());
                    *col = merged;
                }
                if !advance(&mut ins, d) {
                    break;
                }
            }
            if !advance(&mut ws, nw) {
                break;
            }
        }
        Ok(cols)
    }

    /// The mapping-cone differential
    /// `d(f, g) = (delta f, -nf_partial g - phi f)`; in degree 0 this is
    /// `d(m) = (delta m, -m)`.
    pub fn cone_differential(&self, c: &ConeCochain<S>) -> Result<ConeCochain<S>, CochainError> {
        let n = c.degree();
        let alg = self.delta(&c.alg)?;
        let mut nf = self.phi(&c.alg)?.neg();
        if let Some(g) = &c.nf {
            nf = nf.sub(&self.nf_partial(g)?);
        }
        debug_assert_eq!(alg.degree(), n + 1);
        debug_assert_eq!(nf.degree(), n);
        Ok(ConeCochain { alg, nf: Some(nf) })
    }
}

/// Recursively enumerate row choices for the twisted slots of the dense
/// `phi` evaluation, calling `emit(rows, coefficient)` for each nonzero
/// product of family entries.
fn enumerate_twists<S: Scalar>(
    nij: &OperatorFamily<S>,
    ws: &[usize],
    ins: &[usize],
    mask: usize,
    slot: usize,
    coeff: &S,
    rows: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], &S),
) {
    if slot == ws.len() {
        emit(rows, coeff);
        return;
    }
    if mask & (1 << slot) == 0 {
        rows[slot] = ins[slot];
        enumerate_twists(nij, ws, ins, mask, slot + 1, coeff, rows, emit);
        return;
    }
    let mat = nij.map(ws[slot]);
    for r in 0..mat.rows() {
        let v = mat.at(r, ins[slot]);
        if v.is_zero() {
            continue;
        }
        rows[slot] = r;
        let c = coeff.mul(v);
        enumerate_twists(nij, ws, ins, mask, slot + 1, &c, rows, emit);
    }
}

/// Column-side analogue for the sparse matrix of `phi`: the unit input is
/// `ins`, and twisted slots range over the output indices they can reach.
fn enumerate_twist_outputs<S: Scalar>(
    nij: &OperatorFamily<S>,
    ws: &[usize],
    ins: &[usize],
    mask: usize,
    slot: usize,
    coeff: &S,
    outs: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], &S),
) {
    if slot == ws.len() {
        emit(outs, coeff);
        return;
    }
    if mask & (1 << slot) == 0 {
        outs[slot] = ins[slot];
        enumerate_twist_outputs(nij, ws, ins, mask, slot + 1, coeff, outs, emit);
        return;
    }
    let mat = nij.map(ws[slot]);
    for j in 0..mat.cols() {
        let v = mat.at(ins[slot], j);
        if v.is_zero() {
            continue;
        }
        outs[slot] = j;
        let c = coeff.mul(v);
        enumerate_twist_outputs(nij, ws, ins, mask, slot + 1, &c, outs, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{truncated_poly, two_monoid_mixed, unit_line};
    use crate::scalar::Rational;
    use crate::semigroup::Semigroup;

    #[test]
    fn space_dims_count_families() {
        // n=2, |W|=2, d=2, m=2 -> 2^2 * 2^2 * 2 = 32
        assert_eq!(space_dim(2, (2, 2, 2)), 32);
        assert_eq!(space_dim(0, (2, 2, 5)), 5);
    }

    #[test]
    fn cone_dims_stack_the_two_complexes() {
        let cx = Complexes::new(two_monoid_mixed::<Rational>()).unwrap();
        assert_eq!(
            cx.dim(ComplexKind::Nfa, 2),
            cx.dim(ComplexKind::Alg, 2) + cx.dim(ComplexKind::Nf, 1)
        );
        assert_eq!(cx.dim(ComplexKind::Nfa, 0), 2);
    }

    #[test]
    fn delta_of_identity_on_unit_line() {
        // f = id in degree 1 on the one-dimensional algebra:
        // (delta f)(1,1) = 1.f(1) - f(1.1) + f(1).1 = 1
        let cx = Complexes::new(unit_line::<Rational>(&Semigroup::trivial())).unwrap();
        let f = Cochain::unit(1, cx.dims(), 0);
        let df = cx.delta(&f).unwrap();
        assert_eq!(df.at(&[0, 0], &[0, 0], 0), &Rational::one());
    }

    #[test]
    fn degree_zero_delta_vanishes_on_commutative_regular_module() {
        let cx = Complexes::new(truncated_poly::<Rational>(4, 1, &Semigroup::trivial())).unwrap();
        for x in 0..4 {
            let g = Cochain::unit(0, cx.dims(), x);
            assert!(cx.delta(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_zero_needs_a_unit() {
        let cx = Complexes::new(unit_line::<Rational>(&Semigroup::left_zero_pair())).unwrap();
        let g = Cochain::unit(0, cx.dims(), 0);
        assert_eq!(cx.delta(&g).unwrap_err(), CochainError::NoUnit);
        assert_eq!(cx.dim(ComplexKind::Alg, 0), 0);
        assert_eq!(cx.dim(ComplexKind::Nfa, 1), cx.dim(ComplexKind::Alg, 1));
    }

    #[test]
    fn nf_partial_degree_one_kernel_on_unit_line_with_identity_family() {
        // every operator on the one-dimensional algebra deforms the identity
        // family, so the degree-one differential must vanish identically
        let sg = Semigroup::trivial();
        let ctx = truncated_poly::<Rational>(1, 0, &sg);
        let cx = Complexes::new(ctx).unwrap();
        let g = Cochain::unit(1, cx.dims(), 0);
        assert!(cx.nf_partial(&g).unwrap().is_zero());
    }

    #[test]
    fn phi_is_identity_in_degree_zero_and_collapses_identity_family() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 0, &Semigroup::trivial())).unwrap();
        let m0 = Cochain::unit(0, cx.dims(), 1);
        assert_eq!(cx.phi(&m0).unwrap(), m0);
        // N = N_M = id: phi^2(f) = f - 2f + f = 0 for every f
        let dims = cx.dims();
        for idx in 0..space_dim(2, dims) {
            let f = Cochain::unit(2, dims, idx);
            assert!(cx.phi(&f).unwrap().is_zero());
        }
        // and phi^1(f) = f(N(a)) - N_M(f(a)) = 0
        for idx in 0..space_dim(1, dims) {
            let f = Cochain::unit(1, dims, idx);
            assert!(cx.phi(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn cone_differential_in_degree_zero() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 1, &Semigroup::trivial())).unwrap();
        let m0 = Cochain::unit(0, cx.dims(), 2);
        let c = ConeCochain {
            alg: m0.clone(),
            nf: None,
        };
        let dc = cx.cone_differential(&c).unwrap();
        assert_eq!(dc.nf.unwrap(), m0.neg());
        // d1 after d0 vanishes
        let ddc = cx
            .cone_differential(&ConeCochain {
                alg: dc.alg.clone(),
                nf: Some(m0.neg()),
            })
            .unwrap();
        assert!(ddc.is_zero());
    }

    #[test]
    fn differentials_are_linear() {
        let cx = Complexes::new(two_monoid_mixed::<Rational>()).unwrap();
        let dims = cx.dims();
        let f = Cochain::unit(1, dims, 3);
        let g = Cochain::unit(1, dims, 7);
        let lam = Rational::new(-3, 2);
        let combo = f.scale(&lam).add(&g);
        for op in [Complexes::delta, Complexes::nf_partial] {
            let lhs = op(&cx, &combo).unwrap();
            let rhs = op(&cx, &f).unwrap().scale(&lam).add(&op(&cx, &g).unwrap());
            assert_eq!(lhs, rhs);
        }
        let lhs = cx.phi(&combo).unwrap();
        let rhs = cx.phi(&f).unwrap().scale(&lam).add(&cx.phi(&g).unwrap());
        assert_eq!(lhs, rhs);
    }
}
