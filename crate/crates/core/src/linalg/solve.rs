//! Gaussian elimination, nullspaces, range projections and commutants.

use std::collections::BTreeMap;

use super::mat::Mat;
use super::scalar::Field;

type SparseRow<F> = BTreeMap<usize, F>;

/// Incremental row reduction over sparse rows.
///
/// Rows are kept in echelon form keyed by their leading column; the pivot
/// column of a row is always its first nonzero column, so results do not
/// depend on insertion order beyond which rows are kept.
#[derive(Clone, Debug)]
pub struct Eliminator<F> {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow<F>>,
}

impl<F: Field> Eliminator<F> {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduce `row` against the stored pivots. Returns what is left.
    fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, _)) = row.iter().find(|(c, _)| self.rows.contains_key(c)) else {
                return row;
            };
            let coef = row[&lead].clone();
            for (c, v) in &self.rows[&lead] {
                let entry = row.entry(*c).or_insert_with(F::zero);
                *entry = entry.sub(&coef.mul(v));
            }
            row.retain(|_, v| !v.is_zero());
        }
    }

    /// Insert a row; returns `true` if it was independent of the rows so far.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return false;
        };
        let inv = lead_val.inv().expect("nonzero leading entry");
        let row: SparseRow<F> = row.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        self.rows.insert(lead, row);
        true
    }

    pub fn insert_dense(&mut self, row: &[F]) -> bool {
        assert_eq!(row.len(), self.ncols);
        self.insert(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
        )
    }

    /// Whether `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: SparseRow<F>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Fully reduced rows keyed by pivot column.
    pub fn reduced_rows(&self) -> BTreeMap<usize, SparseRow<F>> {
        let mut rows = self.rows.clone();
        let pivots: Vec<usize> = rows.keys().rev().copied().collect();
        for p in pivots {
            let prow = rows[&p].clone();
            for (_, other) in rows.range_mut(..p) {
                let Some(coef) = other.get(&p).cloned() else { continue };
                for (c, v) in &prow {
                    let entry = other.entry(*c).or_insert_with(F::zero);
                    *entry = entry.sub(&coef.mul(v));
                }
                other.retain(|_, v| !v.is_zero());
            }
        }
        rows
    }

    /// Basis of `{x : row · x = 0 for all inserted rows}`, one vector per
    /// free column in increasing order.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let reduced = self.reduced_rows();
        (0..self.ncols)
            .filter(|c| !reduced.contains_key(c))
            .map(|free| {
                let mut x = vec![F::zero(); self.ncols];
                x[free] = F::one();
                for (&p, row) in &reduced {
                    if let Some(v) = row.get(&free) {
                        x[p] = v.neg();
                    }
                }
                x
            })
            .collect()
    }
}

/// Row-reduced echelon form of a dense matrix with its pivot columns.
pub fn rref<F: Field>(m: &Mat<F>) -> (Mat<F>, Vec<usize>) {
    let mut elim = Eliminator::new(m.cols());
    for r in 0..m.rows() {
        elim.insert_dense(&m.row_vec(r));
    }
    let reduced = elim.reduced_rows();
    let mut out = Mat::zeros(m.rows(), m.cols());
    let pivots: Vec<usize> = reduced.keys().copied().collect();
    for (i, row) in reduced.values().enumerate() {
        for (c, v) in row {
            out.set(i, *c, v.clone());
        }
    }
    (out, pivots)
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    rref(m).1.len()
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: &Mat<F>) -> Vec<Vec<F>> {
    let mut elim = Eliminator::new(m.cols());
    for r in 0..m.rows() {
        elim.insert_dense(&m.row_vec(r));
    }
    elim.nullspace()
}

pub fn inverse<F: Field>(m: &Mat<F>) -> Option<Mat<F>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = Mat::hcat(&[m.clone(), Mat::identity(n)]);
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}

/// Indices of a maximal linearly independent subset of `vectors`, greedily
/// in order.
pub fn independent_subset<F: Field>(vectors: &[Vec<F>]) -> Vec<usize> {
    let Some(first) = vectors.first() else { return Vec::new() };
    let mut elim = Eliminator::new(first.len());
    (0..vectors.len()).filter(|&i| elim.insert_dense(&vectors[i])).collect()
}

/// Coefficients expressing `target` in terms of `basis`, if it lies in the
/// span. `basis` is assumed linearly independent.
pub fn span_coefficients<F: Field>(basis: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let n = target.len();
    let k = basis.len();
    let m = Mat::from_fn(n, k + 1, |r, c| if c < k { basis[c][r].clone() } else { target[r].clone() });
    let (red, pivots) = rref(&m);
    if pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![F::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        coeffs[p] = red.get(i, k).clone();
    }
    Some(coeffs)
}

/// Orthogonal projection onto the span of all columns of `mats`.
///
/// With `B` a column basis of the span, the projection is `B (B*B)⁻¹ B*`,
/// which stays rational for rational input.
pub fn range_projection<F: Field>(mats: &[Mat<F>]) -> Mat<F> {
    let d = mats.first().map_or(0, Mat::rows);
    assert!(mats.iter().all(|m| m.rows() == d), "range_projection row mismatch");
    let cols: Vec<Vec<F>> = mats
        .iter()
        .flat_map(|m| (0..m.cols()).map(move |c| m.col_vec(c)))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let chosen = independent_subset(&cols);
    if chosen.is_empty() {
        return Mat::zeros(d, d);
    }
    let b = Mat::from_fn(d, chosen.len(), |r, c| cols[chosen[c]][r].clone());
    let bstar = b.adjoint();
    let gram_inv = inverse(&bstar.mul(&b)).expect("Gram matrix of independent columns is invertible");
    b.mul(&gram_inv).mul(&bstar)
}

/// Basis of `{X : XG = GX, XG* = G*X for every generator G}` in `M_d`.
pub fn commutant_basis<F: Field>(generators: &[Mat<F>], d: usize) -> Vec<Mat<F>> {
    let idx = |i: usize, j: usize| i * d + j;
    let mut elim = Eliminator::new(d * d);
    let mut push = |g: &Mat<F>| {
        assert_eq!((g.rows(), g.cols()), (d, d), "generator has wrong size");
        for i in 0..d {
            for j in 0..d {
                // (XG - GX)_ij = Σ_k X_ik G_kj - G_ik X_kj
                let mut row: SparseRow<F> = BTreeMap::new();
                for k in 0..d {
                    let gkj = g.get(k, j);
                    if !gkj.is_zero() {
                        let e = row.entry(idx(i, k)).or_insert_with(F::zero);
                        *e = e.add(gkj);
                    }
                    let gik = g.get(i, k);
                    if !gik.is_zero() {
                        let e = row.entry(idx(k, j)).or_insert_with(F::zero);
                        *e = e.sub(gik);
                    }
                }
                elim.insert(row);
            }
        }
    };
    for g in generators {
        push(g);
        if !g.is_self_adjoint() {
            push(&g.adjoint());
        }
    }
    elim.nullspace().into_iter().map(|v| Mat::from_vector(d, d, v)).collect()
}

/// Whether the Hermitian matrix `m` is positive semidefinite, decided by
/// symmetric pivoting (an LDL* factorisation without square roots).
pub fn is_positive_semidefinite<F: Field>(m: &Mat<F>) -> bool {
    use std::cmp::Ordering;
    if !m.is_self_adjoint() {
        return false;
    }
    let mut a = m.clone();
    let mut n = a.rows();
    while n > 0 {
        // a diagonal entry that is negative (or not real) refutes PSD
        let mut pivot = None;
        for i in 0..n {
            match a.get(i, i).real_sign() {
                None | Some(Ordering::Less) => return false,
                Some(Ordering::Greater) => {
                    pivot = Some(i);
                    break;
                }
                Some(Ordering::Equal) => {}
            }
        }
        let Some(p) = pivot else {
            // zero diagonal on a PSD matrix forces the whole block to vanish
            return a.sub_block(0, n).is_zero();
        };
        // Schur complement of the pivot
        let inv = a.get(p, p).inv().expect("positive pivot");
        let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        let next = Mat::from_fn(n - 1, n - 1, |r, c| {
            let (i, j) = (keep[r], keep[c]);
            a.get(i, j).sub(&a.get(i, p).mul(&inv).mul(a.get(p, j)))
        });
        a = next;
        n -= 1;
    }
    true
}
