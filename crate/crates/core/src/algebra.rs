//! Core carriers: semigroup-indexed algebras, operator families and
//! Nijenhuis bimodules, stored as dense exact structure-constant tensors.

use crate::scalar::Scalar;
use crate::semigroup::Semigroup;


pub(crate) fn zeros<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

/// An associative algebra relative to a finite semigroup: one bilinear
/// multiplication per index pair, stored as a `d x d x d` tensor.
///
/// `mu[(alpha,beta)][i][j][k]` is the coefficient of `e_k` in
/// `e_i . e_j` taken with indices `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaAlgebra<S: Scalar> {
    dim: usize,
    n_omega: usize,
    mu: Vec<S>,
}

impl<S: Scalar> OmegaAlgebra<S> {
    pub fn zero_algebra(dim: usize, n_omega: usize) -> Self {
        OmegaAlgebra {
            dim,
            n_omega,
            mu: zeros(n_omega * n_omega * dim * dim * dim),
        }
    }

    pub fn from_entries(
        dim: usize,
        n_omega: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, usize, usize, S)>,
    ) -> Self {
        let mut alg = Self::zero_algebra(dim, n_omega);
        for (a, b, i, j, k, c) in entries {
            let idx = alg.mu_index(a, b, i, j, k);
            alg.mu[idx] = alg.mu[idx].add(&c);
        }
        alg
    }

    #[inline]
    fn mu_index(&self, a: usize, b: usize, i: usize, j: usize, k: usize) -> usize {
        ((((a * self.n_omega + b) * self.dim + i) * self.dim) + j) * self.dim + k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_omega(&self) -> usize {
        self.n_omega
    }

    /// Structure constant of `e_k` in `e_i ._{a,b} e_j`.
    #[inline]
    pub fn mu(&self, a: usize, b: usize, i: usize, j: usize, k: usize) -> &S {
        &self.mu[self.mu_index(a, b, i, j, k)]
    }

    pub fn set_mu(&mut self, a: usize, b: usize, i: usize, j: usize, k: usize, c: S) {
        let idx = self.mu_index(a, b, i, j, k);
        self.mu[idx] = c;
    }

    /// Product of two coefficient vectors under the `(a, b)` multiplication.
    pub fn apply_mu(&self, a: usize, b: usize, x: &[S], y: &[S]) -> Vec<S> {
        let d = self.dim;
        let mut out: Vec<S> = zeros(d);
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let c = x[i].mul(&y[j]);
                for k in 0..d {
                    let t = self.mu(a, b, i, j, k);
                    if !t.is_zero() {
                        out[k] = out[k].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries as `(alpha, beta, i, j, k, coefficient)`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, usize, usize, S)> {
        let mut out = Vec::new();
        for a in 0..self.n_omega {
            for b in 0..self.n_omega {
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        for k in 0..self.dim {
                            let c = self.mu(a, b, i, j, k);
                            if !c.is_zero() {
                                out.push((a, b, i, j, k, c.clone()));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A dense exact matrix acting on column vectors: `M(e_j) = sum_i m[i][j] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        OperatorMatrix {
            rows,
            cols,
            entries: zeros(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        OperatorMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        let mut out: Vec<S> = zeros(self.rows);
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let m = self.at(i, j);
                if !m.is_zero() {
                    out[i] = out[i].add(&m.mul(xj));
                }
            }
        }
        out
    }

    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(self.cols, inner.rows);
        let mut out = Self::zeros(self.rows, inner.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..inner.cols {
                    let b = inner.at(k, j);
                    if !b.is_zero() {
                        let idx = i * inner.cols + j;
                        out.entries[idx] = out.entries[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        OperatorMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        OperatorMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        OperatorMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(S::is_zero)
    }

    pub fn pow(&self, k: usize) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }
}

/// One linear operator per semigroup element. Reused for Nijenhuis families,
/// module operator families, morphism families, sections and cocycle data
/// of degree one.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily<S: Scalar> {
    maps: Vec<OperatorMatrix<S>>,
}

impl<S: Scalar> OperatorFamily<S> {
    pub fn new(maps: Vec<OperatorMatrix<S>>) -> Self {
        OperatorFamily { maps }
    }

    pub fn zero(n_omega: usize, rows: usize, cols: usize) -> Self {
        OperatorFamily {
            maps: (0..n_omega).map(|_| OperatorMatrix::zeros(rows, cols)).collect(),
        }
    }

    pub fn identity(n_omega: usize, dim: usize) -> Self {
        OperatorFamily {
            maps: (0..n_omega).map(|_| OperatorMatrix::identity(dim)).collect(),
        }
    }

    /// The same operator at every index.
    pub fn constant(n_omega: usize, m: OperatorMatrix<S>) -> Self {
        OperatorFamily {
            maps: (0..n_omega).map(|_| m.clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, omega: usize) -> &OperatorMatrix<S> {
        &self.maps[omega]
    }

    pub fn map_mut(&mut self, omega: usize) -> &mut OperatorMatrix<S> {
        &mut self.maps[omega]
    }

    pub fn maps(&self) -> &[OperatorMatrix<S>] {
        &self.maps
    }

    pub fn apply(&self, omega: usize, x: &[S]) -> Vec<S> {
        self.maps[omega].apply(x)
    }

    pub fn scale(&self, c: &S) -> Self {
        OperatorFamily {
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.maps.len(), rhs.maps.len());
        OperatorFamily {
            maps: self
                .maps
                .iter()
                .zip(&rhs.maps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.maps.len(), rhs.maps.len());
        OperatorFamily {
            maps: self
                .maps
                .iter()
                .zip(&rhs.maps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(OperatorMatrix::is_zero)
    }

    /// Checks every map has the given shape.
    pub fn has_shape(&self, rows: usize, cols: usize) -> bool {
        self.maps.iter().all(|m| m.rows() == rows && m.cols() == cols)
    }
}

/// A bimodule over an `OmegaAlgebra` together with a module operator family.
///
/// `left[(a,b)][i][x][y]` is the coefficient of `f_y` in `e_i ._{a,b} f_x`;
/// `right[(a,b)][x][j][y]` that of `f_y` in `f_x ._{a,b} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct NfBimodule<S: Scalar> {
    alg_dim: usize,
    dim: usize,
    n_omega: usize,
    left: Vec<S>,
    right: Vec<S>,
    nm: OperatorFamily<S>,
}

impl<S: Scalar> NfBimodule<S> {
    pub fn zero_actions(alg_dim: usize, dim: usize, n_omega: usize, nm: OperatorFamily<S>) -> Self {
        assert!(nm.has_shape(dim, dim));
        assert_eq!(nm.len(), n_omega);
        NfBimodule {
            alg_dim,
            dim,
            n_omega,
            left: zeros(n_omega * n_omega * alg_dim * dim * dim),
            right: zeros(n_omega * n_omega * alg_dim * dim * dim),
            nm,
        }
    }

    /// The regular bimodule: `M = A`, both actions the multiplication,
    /// module operators `nm`.
    pub fn regular(alg: &OmegaAlgebra<S>, nm: OperatorFamily<S>) -> Self {
        let d = alg.dim();
        let nw = alg.n_omega();
        let mut m = Self::zero_actions(d, d, nw, nm);
        for a in 0..nw {
            for b in 0..nw {
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let c = alg.mu(a, b, i, j, k);
                            if !c.is_zero() {
                                m.set_left(a, b, i, j, k, c.clone());
                                m.set_right(a, b, i, j, k, c.clone());
                            }
                        }
                    }
                }
            }
        }
        m
    }

    #[inline]
    fn left_index(&self, a: usize, b: usize, i: usize, x: usize, y: usize) -> usize {
        (((a * self.n_omega + b) * self.alg_dim + i) * self.dim + x) * self.dim + y
    }

    #[inline]
    fn right_index(&self, a: usize, b: usize, x: usize, j: usize, y: usize) -> usize {
        (((a * self.n_omega + b) * self.dim + x) * self.alg_dim + j) * self.dim + y
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_omega(&self) -> usize {
        self.n_omega
    }

    #[inline]
    pub fn left(&self, a: usize, b: usize, i: usize, x: usize, y: usize) -> &S {
        &self.left[self.left_index(a, b, i, x, y)]
    }

    #[inline]
    pub fn right(&self, a: usize, b: usize, x: usize, j: usize, y: usize) -> &S {
        &self.right[self.right_index(a, b, x, j, y)]
    }

    pub fn set_left(&mut self, a: usize, b: usize, i: usize, x: usize, y: usize, c: S) {
        let idx = self.left_index(a, b, i, x, y);
        self.left[idx] = c;
    }

    pub fn set_right(&mut self, a: usize, b: usize, x: usize, j: usize, y: usize, c: S) {
        let idx = self.right_index(a, b, x, j, y);
        self.right[idx] = c;
    }

    pub fn nm(&self) -> &OperatorFamily<S> {
        &self.nm
    }

    pub fn nm_mut(&mut self) -> &mut OperatorFamily<S> {
        &mut self.nm
    }

    /// `a ._{(a,b)} x` for coefficient vectors `a` over the algebra basis
    /// and `x` over the module basis.
    pub fn act_left(&self, a: usize, b: usize, av: &[S], xv: &[S]) -> Vec<S> {
        let mut out: Vec<S> = zeros(self.dim);
        for i in 0..self.alg_dim {
            if av[i].is_zero() {
                continue;
            }
            for x in 0..self.dim {
                if xv[x].is_zero() {
                    continue;
                }
                let c = av[i].mul(&xv[x]);
                for y in 0..self.dim {
                    let t = self.left(a, b, i, x, y);
                    if !t.is_zero() {
                        out[y] = out[y].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    /// `x ._{(a,b)} a` with `x` over the module basis, `a` over the algebra.
    pub fn act_right(&self, a: usize, b: usize, xv: &[S], av: &[S]) -> Vec<S> {
        let mut out: Vec<S> = zeros(self.dim);
        for x in 0..self.dim {
            if xv[x].is_zero() {
                continue;
            }
            for j in 0..self.alg_dim {
                if av[j].is_zero() {
                    continue;
                }
                let c = xv[x].mul(&av[j]);
                for y in 0..self.dim {
                    let t = self.right(a, b, x, j, y);
                    if !t.is_zero() {
                        out[y] = out[y].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    pub fn left_entries(&self) -> Vec<(usize, usize, usize, usize, usize, S)> {
        let mut out = Vec::new();
        for a in 0..self.n_omega {
            for b in 0..self.n_omega {
                for i in 0..self.alg_dim {
                    for x in 0..self.dim {
                        for y in 0..self.dim {
                            let c = self.left(a, b, i, x, y);
                            if !c.is_zero() {
                                out.push((a, b, i, x, y, c.clone()));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn right_entries(&self) -> Vec<(usize, usize, usize, usize, usize, S)> {
        let mut out = Vec::new();
        for a in 0..self.n_omega {
            for b in 0..self.n_omega {
                for x in 0..self.dim {
                    for j in 0..self.alg_dim {
                        for y in 0..self.dim {
                            let c = self.right(a, b, x, j, y);
                            if !c.is_zero() {
                                out.push((a, b, x, j, y, c.clone()));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// A full working context: semigroup, algebra, Nijenhuis family, and a
/// Nijenhuis bimodule (the regular one unless stated otherwise).
#[derive(Clone, Debug)]
pub struct Context<S: Scalar> {
    pub semigroup: Semigroup,
    pub algebra: OmegaAlgebra<S>,
    pub nijenhuis: OperatorFamily<S>,
    pub module: NfBimodule<S>,
}

impl<S: Scalar> Context<S> {
    /// Context with the regular bimodule and module operators equal to the
    /// Nijenhuis family itself.
    pub fn with_regular_module(
        semigroup: Semigroup,
        algebra: OmegaAlgebra<S>,
        nijenhuis: OperatorFamily<S>,
    ) -> Self {
        let module = NfBimodule::regular(&algebra, nijenhuis.clone());
        Context {
            semigroup,
            algebra,
            nijenhuis,
            module,
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.semigroup.len(), self.algebra.dim(), self.module.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn truncated_poly_mu(d: usize) -> OmegaAlgebra<Rational> {
        let mut alg = OmegaAlgebra::zero_algebra(d, 1);
        for i in 0..d {
            for j in 0..d {
                if i + j < d {
                    alg.set_mu(0, 0, i, j, i + j, Rational::one());
                }
            }
        }
        alg
    }

    #[test]
    fn apply_mu_multiplies_monomials() {
        let alg = truncated_poly_mu(4);
        let mut a = zeros::<Rational>(4);
        a[1] = Rational::one(); // a
        let sq = alg.apply_mu(0, 0, &a, &a);
        assert_eq!(sq[2], Rational::one());
        let cube = alg.apply_mu(0, 0, &sq, &a);
        assert_eq!(cube[3], Rational::one());
        let zero = alg.apply_mu(0, 0, &cube, &a);
        assert!(zero.iter().all(Rational::is_zero));
    }

    #[test]
    fn operator_matrix_compose_and_pow() {
        // shift on k[a]/(a^3): e_i -> e_{i+1}
        let mut n = OperatorMatrix::<Rational>::zeros(3, 3);
        n.set(1, 0, Rational::one());
        n.set(2, 1, Rational::one());
        let n2 = n.pow(2);
        assert_eq!(n2.at(2, 0), &Rational::one());
        assert!(n.pow(3).is_zero());
        let id = OperatorMatrix::<Rational>::identity(3);
        assert_eq!(id.compose(&n), n);
    }

    #[test]
    fn regular_bimodule_actions_match_multiplication() {
        let alg = truncated_poly_mu(3);
        let m = NfBimodule::regular(&alg, OperatorFamily::zero(1, 3, 3));
        let mut a = zeros::<Rational>(3);
        a[1] = Rational::one();
        let ax = m.act_left(0, 0, &a, &a);
        assert_eq!(ax, alg.apply_mu(0, 0, &a, &a));
        let xa = m.act_right(0, 0, &a, &a);
        assert_eq!(xa, alg.apply_mu(0, 0, &a, &a));
    }
}
