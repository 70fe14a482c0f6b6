//! Exact cohomology engine: differential matrices in the canonical basis
//! order, ranks and kernels, cohomology tables, cocycle and coboundary
//! queries, and the long-exact-sequence verifier for the mapping cone.

use std::env;

use thiserror::Error;

use crate::cochain::{space_dim, Cochain, CochainError, ComplexKind, Complexes, ConeCochain};
use crate::matrix::{Echelon, ExactMatrix};
use crate::scalar::Scalar;

/// Default cap on the dimension of any cochain space touched by the engine.
pub const DEFAULT_SPACE_BUDGET: usize = 20_000;

/// Environment variable capping internal parallelism of matrix assembly.
pub const THREADS_ENV: &str = "OMEGA_NIJ_THREADS";

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("degree-0 spaces need a unit in the semigroup")]
    NoUnit,
    #[error("cochain space at degree {degree} has dimension {dim}, over the budget {budget}")]
    BudgetExceeded {
        degree: usize,
        dim: usize,
        budget: usize,
    },
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

fn thread_count(cols: usize) -> usize {
    let cap = env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    cap.unwrap_or(avail).min(cols.max(1))
}

/// Applies `column` to every index in `0..cols`, in parallel when allowed,
/// assembling results in index order so output is deterministic.
fn assemble_columns<S: Scalar>(
    cols: usize,
    column: impl Fn(usize) -> Vec<(usize, S)> + Sync,
) -> Vec<Vec<(usize, S)>> {
    let threads = thread_count(cols);
    if threads <= 1 || cols < 8 {
        return (0..cols).map(column).collect();
    }
    let mut out: Vec<Vec<(usize, S)>> = vec![Vec::new(); cols];
    let chunk = cols.div_ceil(threads);
    std::thread::scope(|scope| {
        for (t, slot) in out.chunks_mut(chunk).enumerate() {
            let column = &column;
            scope.spawn(move || {
                for (off, cell) in slot.iter_mut().enumerate() {
                    *cell = column(t * chunk + off);
                }
            });
        }
    });
    out
}

fn sparse_of<S: Scalar>(c: &Cochain<S>) -> Vec<(usize, S)> {
    c.data()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// The matrix of the degree-`n` differential of the chosen complex, columns
/// indexed by the canonical basis of degree `n`, rows by degree `n + 1`.
pub fn differential_matrix<S: Scalar>(
    cx: &Complexes<S>,
    kind: ComplexKind,
    degree: usize,
) -> Result<ExactMatrix<S>, CohomologyError> {
    let rows = cx.dim(kind, degree + 1);
    let cols = cx.dim(kind, degree);
    let dims = cx.dims();
    match kind {
        ComplexKind::Alg | ComplexKind::Nf => {
            if degree == 0 && !cx.unital() {
                return Err(CohomologyError::NoUnit);
            }
            let columns = assemble_columns(cols, |j| {
                let unit = Cochain::unit(degree, dims, j);
                let image = match kind {
                    ComplexKind::Alg => cx.delta(&unit),
                    _ => cx.nf_partial(&unit),
                }
                .expect("validated context");
                sparse_of(&image)
            });
            Ok(ExactMatrix::from_sparse_columns(rows, columns))
        }
        ComplexKind::Nfa => {
            if degree == 0 && !cx.unital() {
                return Err(CohomologyError::NoUnit);
            }
            // block structure: d(f, g) = (delta f, -phi f - partial g)
            let alg_cols = cx.dim(ComplexKind::Alg, degree);
            let nf_cols = cols - alg_cols;
            let alg_rows = cx.dim(ComplexKind::Alg, degree + 1);
            let d_alg = differential_matrix(cx, ComplexKind::Alg, degree)?;
            let phi_cols = cx.phi_columns(degree)?;
            let d_nf = if nf_cols > 0 {
                Some(differential_matrix(cx, ComplexKind::Nf, degree - 1)?)
            } else {
                None
            };
            let mut m = ExactMatrix::zeros(rows, cols);
            for j in 0..alg_cols {
                for i in 0..alg_rows {
                    let v = d_alg.at(i, j);
                    if !v.is_zero() {
                        m.set(i, j, v.clone());
                    }
                }
                for (i, v) in &phi_cols[j] {
                    m.set(alg_rows + i, j, v.neg());
                }
            }
            if let Some(d_nf) = d_nf {
                for j in 0..nf_cols {
                    for i in 0..d_nf.rows() {
                        let v = d_nf.at(i, j);
                        if !v.is_zero() {
                            m.set(alg_rows + i, alg_cols + j, v.neg());
                        }
                    }
                }
            }
            Ok(m)
        }
    }
}

/// The matrix of the comparison map in degree `n` (square, basis order on
/// both sides).
pub fn phi_matrix<S: Scalar>(
    cx: &Complexes<S>,
    degree: usize,
) -> Result<ExactMatrix<S>, CohomologyError> {
    let dim = space_dim(degree, cx.dims());
    Ok(ExactMatrix::from_sparse_columns(
        dim,
        cx.phi_columns(degree)?,
    ))
}

/// One degree of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: usize,
    pub dim_space: usize,
    pub rank_out: usize,
    pub dim_kernel: usize,
    pub rank_in: usize,
    pub dim_h: usize,
}

/// Exact cohomology dimensions per degree, with optional representatives
/// (kernel vectors completing the coboundary image to the kernel).
#[derive(Clone, Debug)]
pub struct CohomologyTable<S: Scalar> {
    pub kind: ComplexKind,
    pub start_degree: usize,
    pub rows: Vec<DegreeRow>,
    pub notices: Vec<String>,
    pub representatives: Option<Vec<Vec<Vec<S>>>>,
}

/// Engine options: space budget and representative emission.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub space_budget: usize,
    pub representatives: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            space_budget: DEFAULT_SPACE_BUDGET,
            representatives: false,
        }
    }
}

/// Kernel vectors of `columns` completing `image` to a basis of the kernel;
/// the returned vectors represent a basis of the quotient.
fn quotient_basis<S: Scalar>(image: &[Vec<S>], kernel: &[Vec<S>], len: usize) -> Vec<Vec<S>> {
    if kernel.is_empty() {
        return Vec::new();
    }
    let mut cols = Vec::with_capacity(image.len() + kernel.len());
    cols.extend(image.iter().cloned());
    cols.extend(kernel.iter().cloned());
    let m = ExactMatrix::from_rows(transpose(cols, len));
    // left-to-right selection so that image columns take precedence and the
    // surviving kernel columns are independent of the whole image
    let pivots = m.greedy_independent_columns();
    pivots
        .into_iter()
        .filter(|&c| c >= image.len())
        .map(|c| kernel[c - image.len()].clone())
        .collect()
}

fn transpose<S: Scalar>(cols: Vec<Vec<S>>, len: usize) -> Vec<Vec<S>> {
    let mut rows = vec![Vec::with_capacity(cols.len()); len];
    for col in &cols {
        for (i, v) in col.iter().enumerate() {
            rows[i].push(v.clone());
        }
    }
    rows
}

/// Cohomology of the chosen complex through `max_degree`. Over a semigroup
/// without unit the table starts at degree 1 with a notice.
pub fn cohomology<S: Scalar>(
    cx: &Complexes<S>,
    kind: ComplexKind,
    max_degree: usize,
    opts: &EngineOptions,
) -> Result<CohomologyTable<S>, CohomologyError> {
    let mut notices = Vec::new();
    let start = if cx.unital() {
        0
    } else {
        notices.push(
            "semigroup has no unit: degree-0 spaces are empty, table starts at degree 1".into(),
        );
        1
    };
    for n in start..=max_degree + 1 {
        let dim = cx.dim(kind, n);
        if dim > opts.space_budget {
            return Err(CohomologyError::BudgetExceeded {
                degree: n,
                dim,
                budget: opts.space_budget,
            });
        }
    }
    let mut mats = Vec::new();
    for n in start..=max_degree {
        mats.push(differential_matrix(cx, kind, n)?);
    }
    let mut rows = Vec::new();
    let mut reps = opts.representatives.then(Vec::new);
    let mut prev_image: Vec<Vec<S>> = Vec::new();
    let mut prev_rank = 0usize;
    for (i, n) in (start..=max_degree).enumerate() {
        let ech = Echelon::reduce(mats[i].clone());
        let rank_out = ech.rank();
        let dim_space = cx.dim(kind, n);
        let dim_kernel = dim_space - rank_out;
        let dim_h = dim_kernel - prev_rank;
        rows.push(DegreeRow {
            degree: n,
            dim_space,
            rank_out,
            dim_kernel,
            rank_in: prev_rank,
            dim_h,
        });
        if let Some(reps) = reps.as_mut() {
            let kernel = ech.kernel_basis();
            reps.push(quotient_basis(&prev_image, &kernel, dim_space));
        }
        prev_rank = rank_out;
        prev_image = mats[i]
            .independent_columns()
            .into_iter()
            .map(|c| mats[i].column(c))
            .collect();
    }
    Ok(CohomologyTable {
        kind,
        start_degree: start,
        rows,
        notices,
        representatives: reps,
    })
}

/// Flat coordinates of a cone cochain in the canonical basis order of the
/// mapping cone (algebra block first, then the operator-family block).
pub fn cone_coords<S: Scalar>(c: &ConeCochain<S>) -> Vec<S> {
    let mut v = c.alg.data().to_vec();
    if let Some(nf) = &c.nf {
        v.extend_from_slice(nf.data());
    }
    v
}

/// Rebuilds a cone cochain of the given degree from flat coordinates.
pub fn cone_from_coords<S: Scalar>(
    cx: &Complexes<S>,
    degree: usize,
    coords: &[S],
) -> ConeCochain<S> {
    let dims = cx.dims();
    let alg_dim = cx.dim(ComplexKind::Alg, degree);
    let alg = Cochain::from_data(degree, dims, coords[..alg_dim].to_vec());
    let nf = (coords.len() > alg_dim)
        .then(|| Cochain::from_data(degree - 1, dims, coords[alg_dim..].to_vec()));
    ConeCochain { alg, nf }
}

/// Whether the cochain is a cocycle of the plain (`alg` or `nf`) complex.
pub fn is_cocycle_plain<S: Scalar>(
    cx: &Complexes<S>,
    kind: ComplexKind,
    c: &Cochain<S>,
) -> Result<bool, CohomologyError> {
    let image = match kind {
        ComplexKind::Alg => cx.delta(c)?,
        ComplexKind::Nf => cx.nf_partial(c)?,
        ComplexKind::Nfa => panic!("use is_cocycle_cone for the mapping cone"),
    };
    Ok(image.is_zero())
}

/// Whether the cone cochain is a cocycle of the mapping cone.
pub fn is_cocycle_cone<S: Scalar>(
    cx: &Complexes<S>,
    c: &ConeCochain<S>,
) -> Result<bool, CohomologyError> {
    Ok(cx.cone_differential(c)?.is_zero())
}

/// A primitive of `c` under the plain differential, or `None` when `c` is
/// not a coboundary. At the starting degree of the complex only the zero
/// cochain is a coboundary; since no lower degree exists, the returned
/// "primitive" is then the zero cochain of the same degree, a sentinel.
pub fn coboundary_primitive_plain<S: Scalar>(
    cx: &Complexes<S>,
    kind: ComplexKind,
    c: &Cochain<S>,
) -> Result<Option<Cochain<S>>, CohomologyError> {
    let n = c.degree();
    let start = if cx.unital() { 0 } else { 1 };
    if n == start {
        return Ok(c.is_zero().then(|| Cochain::zero(n, c.dims())));
    }
    let d = differential_matrix(cx, kind, n - 1)?;
    match d.solve(c.data()) {
        Ok(x) => Ok(Some(Cochain::from_data(n - 1, c.dims(), x))),
        Err(_) => Ok(None),
    }
}

/// A primitive of `c` under the cone differential, or `None`; the same
/// starting-degree sentinel convention as the plain version applies.
pub fn coboundary_primitive_cone<S: Scalar>(
    cx: &Complexes<S>,
    c: &ConeCochain<S>,
) -> Result<Option<ConeCochain<S>>, CohomologyError> {
    let n = c.degree();
    let start = if cx.unital() { 0 } else { 1 };
    if n == start {
        return Ok(c
            .is_zero()
            .then(|| ConeCochain::zero(n, c.alg.dims(), cx.unital())));
    }
    let d = differential_matrix(cx, ComplexKind::Nfa, n - 1)?;
    match d.solve(&cone_coords(c)) {
        Ok(x) => Ok(Some(cone_from_coords(cx, n - 1, &x))),
        Err(_) => Ok(None),
    }
}

/// Exactness data for one slot of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesSlot {
    /// e.g. "H^1(alg)"
    pub at: String,
    pub dim_h: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composition_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub slots: Vec<LesSlot>,
    pub all_exact: bool,
}

/// Chooses between the canonical quotient bases and a reversed variant;
/// exactness verdicts must not depend on this choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BasisVariant {
    #[default]
    Canonical,
    Reversed,
}

struct HSpace<S: Scalar> {
    dim_space: usize,
    image: Vec<Vec<S>>,
    quotient: Vec<Vec<S>>,
}

impl<S: Scalar> HSpace<S> {
    fn dim_h(&self) -> usize {
        self.quotient.len()
    }

    /// Coordinates of kernel vectors modulo the image, batched.
    fn reduce_classes(&self, vectors: &[Vec<S>]) -> Vec<Vec<S>> {
        if vectors.is_empty() {
            return Vec::new();
        }
        let mut cols = Vec::with_capacity(self.image.len() + self.quotient.len());
        cols.extend(self.image.iter().cloned());
        cols.extend(self.quotient.iter().cloned());
        let m = ExactMatrix::from_rows(transpose(cols, self.dim_space));
        let ech = Echelon::reduce_with_rhs(m, vectors.to_vec());
        vectors
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let x = ech
                    .solve(i)
                    .expect("vector is a cocycle, so lies in image + quotient span");
                x[self.image.len()..].to_vec()
            })
            .collect()
    }
}

/// Verifies image = kernel at every slot of
/// `H^n(nfa) -> H^n(alg) -> H^n(nf) -> H^(n+1)(nfa)` for `n <= max_degree`.
/// The connecting map is induced by the comparison map with the cone sign.
pub fn les_check<S: Scalar>(
    cx: &Complexes<S>,
    max_degree: usize,
    variant: BasisVariant,
) -> Result<LesReport, CohomologyError> {
    if !cx.unital() {
        return Err(CohomologyError::NoUnit);
    }
    let dims_budget = DEFAULT_SPACE_BUDGET;
    for n in 0..=max_degree + 2 {
        let dim = cx.dim(ComplexKind::Nfa, n);
        if dim > dims_budget {
            return Err(CohomologyError::BudgetExceeded {
                degree: n,
                dim,
                budget: dims_budget,
            });
        }
    }

    // H-space data for alg and nf through max_degree, nfa through max_degree+1
    let build = |kind: ComplexKind, top: usize| -> Result<Vec<HSpace<S>>, CohomologyError> {
        let mut spaces = Vec::new();
        let mut prev_image: Vec<Vec<S>> = Vec::new();
        for n in 0..=top {
            let d = differential_matrix(cx, kind, n)?;
            let ech = Echelon::reduce(d.clone());
            let mut kernel = ech.kernel_basis();
            if variant == BasisVariant::Reversed {
                kernel.reverse();
            }
            let dim_space = cx.dim(kind, n);
            let quotient = quotient_basis(&prev_image, &kernel, dim_space);
            spaces.push(HSpace {
                dim_space,
                image: prev_image.clone(),
                quotient,
            });
            prev_image = d
                .independent_columns()
                .into_iter()
                .map(|c| d.column(c))
                .collect();
        }
        Ok(spaces)
    };
    let h_alg = build(ComplexKind::Alg, max_degree)?;
    let h_nf = build(ComplexKind::Nf, max_degree)?;
    let h_nfa = build(ComplexKind::Nfa, max_degree + 1)?;

    // chain-level maps applied to quotient representatives
    let dims = cx.dims();
    let alg_dim = |n: usize| cx.dim(ComplexKind::Alg, n);
    // projection: cone -> alg
    let project = |n: usize, v: &Vec<S>| -> Vec<S> { v[..alg_dim(n)].to_vec() };
    // inclusion: nf(n-1) -> cone(n)
    let include = |n: usize, v: &Vec<S>| -> Vec<S> {
        let mut out = vec![S::zero(); alg_dim(n)];
        out.extend_from_slice(v);
        out
    };
    // connecting: alg(n) -> nf(n), f -> -phi(f)
    let connect = |n: usize, v: &Vec<S>| -> Result<Vec<S>, CohomologyError> {
        let c = Cochain::from_data(n, dims, v.clone());
        Ok(cx.phi(&c)?.neg().data().to_vec())
    };

    // induced maps as matrices between quotient coordinates
    let induced = |source: &HSpace<S>,
                   target: &HSpace<S>,
                   map: &dyn Fn(&Vec<S>) -> Result<Vec<S>, CohomologyError>|
     -> Result<ExactMatrix<S>, CohomologyError> {
        let images: Vec<Vec<S>> = source
            .quotient
            .iter()
            .map(map)
            .collect::<Result<_, _>>()?;
        let classes = target.reduce_classes(&images);
        let rows = target.dim_h();
        let mut m = ExactMatrix::zeros(rows, classes.len());
        for (j, cls) in classes.iter().enumerate() {
            for (i, v) in cls.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        Ok(m)
    };

    let mut maps_proj = Vec::new(); // H^n(nfa) -> H^n(alg)
    let mut maps_conn = Vec::new(); // H^n(alg) -> H^n(nf)
    let mut maps_incl = Vec::new(); // H^n(nf) -> H^(n+1)(nfa)
    for n in 0..=max_degree {
        maps_proj.push(induced(&h_nfa[n], &h_alg[n], &|v| Ok(project(n, v)))?);
        maps_conn.push(induced(&h_alg[n], &h_nf[n], &|v| connect(n, v))?);
        maps_incl.push(induced(&h_nf[n], &h_nfa[n + 1], &|v| {
            Ok(include(n + 1, v))
        })?);
    }

    let mut slots = Vec::new();
    let mut push_slot =
        |at: String, dim_h: usize, t_in: Option<&ExactMatrix<S>>, t_out: &ExactMatrix<S>| {
            let rank_in = t_in.map_or(0, ExactMatrix::rank);
            let rank_out = t_out.rank();
            let composition_zero = match t_in {
                Some(m) => t_out.mul(m).is_zero(),
                None => true,
            };
            let exact = composition_zero && rank_in + rank_out == dim_h;
            slots.push(LesSlot {
                at,
                dim_h,
                rank_in,
                rank_out,
                composition_zero,
                exact,
            });
        };

    for n in 0..=max_degree {
        let incoming = if n == 0 { None } else { Some(&maps_incl[n - 1]) };
        push_slot(
            format!("H^{n}(nfa)"),
            h_nfa[n].dim_h(),
            incoming,
            &maps_proj[n],
        );
        push_slot(
            format!("H^{n}(alg)"),
            h_alg[n].dim_h(),
            Some(&maps_proj[n]),
            &maps_conn[n],
        );
        push_slot(
            format!("H^{n}(nf)"),
            h_nf[n].dim_h(),
            Some(&maps_conn[n]),
            &maps_incl[n],
        );
    }
    let all_exact = slots.iter().all(|s| s.exact);
    Ok(LesReport { slots, all_exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{truncated_poly, unit_line, zero_algebra};
    use crate::rng::Rng;
    use crate::scalar::Rational;
    use crate::semigroup::Semigroup;

    #[test]
    fn unit_line_algebra_cohomology_matches_hand_elimination() {
        // 1-dim unital algebra, N = 0: spaces are 1-dim in every degree and
        // the differentials alternate 0, id, 0, id, ...
        let cx = Complexes::new(unit_line::<Rational>(&Semigroup::trivial())).unwrap();
        let table = cohomology(&cx, ComplexKind::Alg, 3, &EngineOptions::default()).unwrap();
        let dims: Vec<usize> = table.rows.iter().map(|r| r.dim_h).collect();
        assert_eq!(dims, vec![1, 0, 0, 0]);
        for (n, row) in table.rows.iter().enumerate() {
            assert_eq!(row.dim_space, 1);
            assert_eq!(row.rank_out, if n % 2 == 1 { 1 } else { 0 });
        }
    }

    #[test]
    fn zero_algebra_cohomology_is_the_whole_space() {
        let cx = Complexes::new(zero_algebra::<Rational>(2, &Semigroup::trivial())).unwrap();
        for kind in [ComplexKind::Alg, ComplexKind::Nf] {
            let table = cohomology(&cx, kind, 2, &EngineOptions::default()).unwrap();
            for row in &table.rows {
                assert_eq!(row.dim_h, row.dim_space, "kind {kind:?}");
            }
        }
        // the cone differential never vanishes in degree 0 (its second
        // component is minus the identity), so H^0 dies and H^1 loses m
        let table = cohomology(&cx, ComplexKind::Nfa, 2, &EngineOptions::default()).unwrap();
        let m = cx.dims().2;
        assert_eq!(table.rows[0].dim_h, 0);
        assert_eq!(table.rows[1].dim_h, table.rows[1].dim_space - m);
        assert_eq!(table.rows[2].dim_h, table.rows[2].dim_space);
    }

    #[test]
    fn consecutive_matrices_compose_to_zero() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 1, &Semigroup::trivial())).unwrap();
        for kind in [ComplexKind::Alg, ComplexKind::Nf, ComplexKind::Nfa] {
            for n in 0..=1usize {
                let d0 = differential_matrix(&cx, kind, n).unwrap();
                let d1 = differential_matrix(&cx, kind, n + 1).unwrap();
                assert!(d1.mul(&d0).is_zero(), "kind {kind:?} degree {n}");
            }
        }
    }

    #[test]
    fn matrices_agree_with_evaluators_on_random_cochains() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 1, &Semigroup::trivial())).unwrap();
        let mut rng = Rng::new(3);
        for n in 0..=2usize {
            let d = differential_matrix(&cx, ComplexKind::Alg, n).unwrap();
            let p = differential_matrix(&cx, ComplexKind::Nf, n).unwrap();
            let phi_m = phi_matrix(&cx, n).unwrap();
            for _ in 0..3 {
                let f = rng.cochain::<Rational>(n, cx.dims(), 3);
                assert_eq!(d.apply(f.data()), cx.delta(&f).unwrap().data());
                assert_eq!(p.apply(f.data()), cx.nf_partial(&f).unwrap().data());
                assert_eq!(phi_m.apply(f.data()), cx.phi(&f).unwrap().data());
            }
        }
    }

    #[test]
    fn coboundary_round_trip() {
        let cx = Complexes::new(truncated_poly::<Rational>(3, 1, &Semigroup::trivial())).unwrap();
        let mut rng = Rng::new(19);
        let b = rng.cochain::<Rational>(1, cx.dims(), 3);
        let c = cx.delta(&b).unwrap();
        assert!(is_cocycle_plain(&cx, ComplexKind::Alg, &c).unwrap());
        let primitive = coboundary_primitive_plain(&cx, ComplexKind::Alg, &c)
            .unwrap()
            .expect("constructed coboundary");
        assert_eq!(cx.delta(&primitive).unwrap(), c);
        // a cocycle that is not a coboundary: the zero-algebra cone in degree 2
        let zx = Complexes::new(zero_algebra::<Rational>(2, &Semigroup::trivial())).unwrap();
        let nonzero = ConeCochain {
            alg: rng.cochain::<Rational>(2, zx.dims(), 2),
            nf: Some(rng.cochain::<Rational>(1, zx.dims(), 2)),
        };
        if !nonzero.is_zero() {
            assert!(is_cocycle_cone(&zx, &nonzero).unwrap());
            assert!(coboundary_primitive_cone(&zx, &nonzero).unwrap().is_none());
        }
    }

    #[test]
    fn les_is_exact_on_small_instances() {
        for ctx in [
            unit_line::<Rational>(&Semigroup::trivial()),
            truncated_poly::<Rational>(3, 1, &Semigroup::trivial()),
            zero_algebra::<Rational>(2, &Semigroup::trivial()),
        ] {
            let cx = Complexes::new(ctx).unwrap();
            let report = les_check(&cx, 1, BasisVariant::Canonical).unwrap();
            assert!(report.all_exact, "{:#?}", report.slots);
            let reversed = les_check(&cx, 1, BasisVariant::Reversed).unwrap();
            assert_eq!(
                report
                    .slots
                    .iter()
                    .map(|s| s.exact)
                    .collect::<Vec<_>>(),
                reversed.slots.iter().map(|s| s.exact).collect::<Vec<_>>()
            );
        }
    }
}
