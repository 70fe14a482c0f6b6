//! Dense exact matrices and plain fraction-based Gaussian elimination.
//!
//! Pivots are searched over the whole active submatrix, preferring entries
//! of least `complexity`; no fraction-free tricks. At the scales this crate
//! targets (a few thousand columns) this is simple and fast enough, and the
//! elimination is easy to audit.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("the system has no solution")]
    NoSolution,
}

/// A dense rows x cols matrix of exact scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
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
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from sparse columns of `(row, value)` pairs.
    pub fn from_sparse_columns(rows: usize, cols: Vec<Vec<(usize, S)>>) -> Self {
        let c = cols.len();
        let mut m = Self::zeros(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                let idx = i * c + j;
                m.data[idx] = m.data[idx].add(&v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// Matrix product, skipping zero entries of `self` column-wise; suited
    /// to the sparse differential matrices handled here.
    pub fn mul(&self, rhs: &ExactMatrix<S>) -> ExactMatrix<S> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out: ExactMatrix<S> = ExactMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..rhs.rows {
                let b = rhs.at(k, j);
                if b.is_zero() {
                    continue;
                }
                for i in 0..self.rows {
                    let a = self.at(i, k);
                    if !a.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![S::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.at(i, j);
                if !a.is_zero() {
                    out[i] = out[i].add(&a.mul(x));
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &ExactMatrix<S>) -> ExactMatrix<S> {
        assert_eq!(self.rows, rhs.rows);
        let mut m = ExactMatrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..rhs.cols {
                m.set(i, self.cols + j, rhs.at(i, j).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.clone()).rank()
    }

    /// A basis of the right kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        Echelon::reduce(self.clone()).kernel_basis()
    }

    /// One solution of `self . x = b`, if any.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::DimMismatch(format!(
                "rhs has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        Echelon::reduce_with_rhs(self.clone(), vec![b.to_vec()])
            .solve(0)
            .ok_or(MatrixError::NoSolution)
    }

    /// Indices of a maximal independent set of columns (pivot columns).
    /// The full-pivot search may select them in any order; use
    /// [`ExactMatrix::greedy_independent_columns`] when left-to-right
    /// precedence matters.
    pub fn independent_columns(&self) -> Vec<usize> {
        Echelon::reduce(self.clone()).pivot_columns()
    }

    /// Leftmost maximal independent column set: a column is selected exactly
    /// when it is not in the span of the selected columns to its left.
    pub fn greedy_independent_columns(&self) -> Vec<usize> {
        let mut selected: Vec<usize> = Vec::new();
        // rows of the incremental elimination: (pivot_row, reduced column)
        let mut pivots: Vec<(usize, Vec<S>)> = Vec::new();
        for c in 0..self.cols {
            let mut col = self.column(c);
            for (pr, pcol) in &pivots {
                let factor = col[*pr].clone();
                if factor.is_zero() {
                    continue;
                }
                for (x, p) in col.iter_mut().zip(pcol) {
                    if !p.is_zero() {
                        *x = x.sub(&factor.mul(p));
                    }
                }
            }
            if let Some(pr) = (0..self.rows).find(|&r| !col[r].is_zero()) {
                let inv = col[pr].inv().expect("nonzero entry");
                for x in col.iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&inv);
                    }
                }
                pivots.push((pr, col));
                selected.push(c);
            }
        }
        selected
    }
}

/// Row-reduced form, remembering pivot positions. Pivot columns may come in
/// any order since the search ranges over the full active submatrix.
pub struct Echelon<S: Scalar> {
    m: ExactMatrix<S>,
    rhs: Vec<Vec<S>>,
    /// (row, col) of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
}

impl<S: Scalar> Echelon<S> {
    pub fn reduce(m: ExactMatrix<S>) -> Self {
        Self::reduce_with_rhs(m, Vec::new())
    }

    /// Forward and backward elimination, carrying optional right-hand sides.
    pub fn reduce_with_rhs(mut m: ExactMatrix<S>, mut rhs: Vec<Vec<S>>) -> Self {
        let rows = m.rows;
        let cols = m.cols;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut pivot_row_of_col = vec![usize::MAX; cols];
        let mut next_row = 0usize;
        while next_row < rows {
            // full pivot search: cheapest nonzero entry of the active block
            let mut best: Option<(usize, usize, u64)> = None;
            for r in next_row..rows {
                for c in 0..cols {
                    if pivot_row_of_col[c] != usize::MAX {
                        continue;
                    }
                    let v = m.at(r, c);
                    if v.is_zero() {
                        continue;
                    }
                    let w = v.complexity();
                    if best.as_ref().is_none_or(|&(_, _, bw)| w < bw) {
                        best = Some((r, c, w));
                        if w <= 1 {
                            break;
                        }
                    }
                }
                if matches!(best, Some((_, _, w)) if w <= 1) {
                    break;
                }
            }
            let Some((pr, pc, _)) = best else { break };
            if pr != next_row {
                for c in 0..cols {
                    m.data.swap(pr * cols + c, next_row * cols + c);
                }
                for col in rhs.iter_mut() {
                    col.swap(pr, next_row);
                }
            }
            let pr = next_row;
            let pivot = m.at(pr, pc).clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for c in 0..cols {
                let v = m.at(pr, c);
                if !v.is_zero() {
                    m.set(pr, c, v.mul(&inv));
                }
            }
            for col in rhs.iter_mut() {
                if !col[pr].is_zero() {
                    col[pr] = col[pr].mul(&inv);
                }
            }
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = m.at(r, pc).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..cols {
                    let v = m.at(pr, c);
                    if !v.is_zero() {
                        let cur = m.at(r, c).clone();
                        m.set(r, c, cur.sub(&factor.mul(v)));
                    }
                }
                for col in rhs.iter_mut() {
                    if !col[pr].is_zero() {
                        col[r] = col[r].sub(&factor.mul(&col[pr]));
                    }
                }
            }
            pivot_row_of_col[pc] = pr;
            pivots.push((pr, pc));
            next_row += 1;
        }
        Echelon { m, rhs, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.pivots.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        cols
    }

    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let cols = self.m.cols;
        let mut is_pivot = vec![false; cols];
        for &(_, c) in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for &(r, c) in &self.pivots {
                // row r reads: x_c + sum_{non-pivot} m[r][j] x_j = 0
                let coeff = self.m.at(r, free);
                if !coeff.is_zero() {
                    v[c] = coeff.neg();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solution of the `idx`-th carried right-hand side, free variables zero.
    pub fn solve(&self, idx: usize) -> Option<Vec<S>> {
        let col = &self.rhs[idx];
        let mut in_pivot_row = vec![false; self.m.rows];
        for &(r, _) in &self.pivots {
            in_pivot_row[r] = true;
        }
        // rows without pivots must have zero rhs
        for (r, flag) in in_pivot_row.iter().enumerate() {
            if !flag && !col[r].is_zero() {
                return None;
            }
        }
        let mut x = vec![S::zero(); self.m.cols];
        for &(r, c) in &self.pivots {
            x[c] = col[r].clone();
        }
        Some(x)
    }
}

/// Naive elimination without any pivot strategy, over a column permutation.
/// Deliberately independent of [`Echelon`]; rank comparisons between the two
/// serve as a dual-path oracle in tests.
pub fn naive_rank_permuted<S: Scalar>(m: &ExactMatrix<S>, col_perm: &[usize]) -> usize {
    assert_eq!(col_perm.len(), m.cols());
    let mut a: Vec<Vec<S>> = (0..m.rows())
        .map(|r| col_perm.iter().map(|&c| m.at(r, c).clone()).collect())
        .collect();
    let mut rank = 0usize;
    for c in 0..m.cols() {
        let Some(pr) = (rank..m.rows()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][c].inv().unwrap();
        for v in a[rank].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        for r in 0..m.rows() {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for cc in 0..m.cols() {
                    let t = a[rank][cc].clone();
                    if !t.is_zero() {
                        a[r][cc] = a[r][cc].sub(&f.mul(&t));
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}
