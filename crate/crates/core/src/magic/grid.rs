use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{generated_algebra, GeneratedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{rank, Field, Mat};

/// Whether a grid is a complete magic unitary or a `K×K` corner of an
/// infinite one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridKind {
    Finite,
    Truncated { declared_infinite: bool },
}

/// A square grid of projections on a common `ℂ^d`.
///
/// Entry accessors are 0-based; report positions are 1-based, matching the
/// usual `q_ij` labels.
#[derive(Clone, Debug)]
pub struct MagicUnitary<F: Field> {
    kind: GridKind,
    size: usize,
    ambient_dim: usize,
    entries: Vec<Mat<F>>,
    ambient: OnceLock<GeneratedAlgebra<F>>,
}

impl<F: Field> MagicUnitary<F> {
    pub fn new(kind: GridKind, rows: Vec<Vec<Mat<F>>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidArgument("a grid needs at least one entry".into()));
        }
        let ambient_dim = rows[0][0].rows();
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    what: format!("length of grid row {}", i + 1),
                    expected: size,
                    found: row.len(),
                });
            }
            for m in row {
                if m.rows() != ambient_dim || m.cols() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        what: "grid entry size".into(),
                        expected: ambient_dim,
                        found: m.rows().max(m.cols()),
                    });
                }
                entries.push(m);
            }
        }
        Ok(Self { kind, size, ambient_dim, entries, ambient: OnceLock::new() })
    }

    pub fn finite(rows: Vec<Vec<Mat<F>>>) -> Result<Self> {
        Self::new(GridKind::Finite, rows)
    }

    pub fn truncated(rows: Vec<Vec<Mat<F>>>, declared_infinite: bool) -> Result<Self> {
        Self::new(GridKind::Truncated { declared_infinite }, rows)
    }

    pub(crate) fn from_fn(
        kind: GridKind,
        size: usize,
        ambient_dim: usize,
        f: impl FnMut(usize, usize) -> Mat<F>,
    ) -> Self {
        let mut f = f;
        let entries = (0..size * size).map(|c| f(c / size, c % size)).collect();
        Self { kind, size, ambient_dim, entries, ambient: OnceLock::new() }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Mat<F> {
        &self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<Mat<F>>> {
        self.entries.chunks(self.size).map(<[Mat<F>]>::to_vec).collect()
    }

    /// `Σ_{j < k} q_ij`.
    pub fn row_partial_sum(&self, i: usize, k: usize) -> Mat<F> {
        (0..k).fold(Mat::zeros(self.ambient_dim, self.ambient_dim), |acc, j| acc.add(self.entry(i, j)))
    }

    /// `Σ_{i < k} q_ij`.
    pub fn col_partial_sum(&self, j: usize, k: usize) -> Mat<F> {
        (0..k).fold(Mat::zeros(self.ambient_dim, self.ambient_dim), |acc, i| acc.add(self.entry(i, j)))
    }

    /// `1 − Σ_j q_ij`.
    pub fn row_defect(&self, i: usize) -> Mat<F> {
        self.row_partial_sum(i, self.size).complement()
    }

    /// `1 − Σ_i q_ij`.
    pub fn col_defect(&self, j: usize) -> Mat<F> {
        self.col_partial_sum(j, self.size).complement()
    }

    /// The von Neumann algebra generated by the entries, computed on first use.
    pub fn ambient(&self) -> &GeneratedAlgebra<F> {
        self.ambient
            .get_or_init(|| generated_algebra(&self.entries, self.ambient_dim).expect("entries share one size"))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.kind, self.size, self.ambient_dim, |i, j| self.entry(j, i).clone())
    }
}

/// Outcome of checking the magic relations on a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MagicReport {
    pub kind: GridKind,
    pub size: usize,
    /// Positions `(i, j)` whose entry is not a projection.
    pub not_projections: Vec<(usize, usize)>,
    /// `(i, j, k)` with `q_ij q_ik ≠ 0`.
    pub row_overlaps: Vec<(usize, usize, usize)>,
    /// `(j, i, k)` with `q_ij q_kj ≠ 0`.
    pub col_overlaps: Vec<(usize, usize, usize)>,
    pub row_defect_ranks: Vec<usize>,
    pub col_defect_ranks: Vec<usize>,
    /// Rank of each partial sum `Σ_{j ≤ k} q_ij`, for `k = 1..=K`.
    pub row_partial_ranks: Vec<Vec<usize>>,
    pub col_partial_ranks: Vec<Vec<usize>>,
    /// Smallest `k` with `Σ_{j ≤ k} q_ij` equal to the whole row sum.
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
    /// Rows and columns with a partial sum that is not a projection.
    pub bad_partial_sums: Vec<String>,
}

impl MagicReport {
    /// `q = q* = q²` for every entry.
    pub fn projections_hold(&self) -> bool {
        self.not_projections.is_empty()
    }

    /// Entries in a common row or column are orthogonal.
    pub fn orthogonality_holds(&self) -> bool {
        self.row_overlaps.is_empty() && self.col_overlaps.is_empty()
    }

    /// Every row and column sums to the identity.
    pub fn sums_exact(&self) -> bool {
        self.row_defect_ranks.iter().chain(&self.col_defect_ranks).all(|&r| r == 0)
    }

    /// All relations required of this kind of grid.
    pub fn passes(&self) -> bool {
        let base = self.projections_hold() && self.orthogonality_holds() && self.bad_partial_sums.is_empty();
        match self.kind {
            GridKind::Finite => base && self.sums_exact(),
            GridKind::Truncated { .. } => base,
        }
    }
}

pub fn verify_magic<F: Field>(u: &MagicUnitary<F>) -> MagicReport {
    let k = u.size;
    let not_projections: Vec<(usize, usize)> = (0..k * k)
        .into_par_iter()
        .filter(|&c| !u.entries[c].is_projection())
        .map(|c| (c / k + 1, c % k + 1))
        .collect();
    let pairs: Vec<(usize, usize, usize)> = (0..k)
        .flat_map(|line| (0..k).flat_map(move |a| (a + 1..k).map(move |b| (line, a, b))))
        .collect();
    let row_overlaps = pairs
        .par_iter()
        .filter(|&&(i, a, b)| !u.entry(i, a).mul(u.entry(i, b)).is_zero())
        .map(|&(i, a, b)| (i + 1, a + 1, b + 1))
        .collect();
    let col_overlaps = pairs
        .par_iter()
        .filter(|&&(j, a, b)| !u.entry(a, j).mul(u.entry(b, j)).is_zero())
        .map(|&(j, a, b)| (j + 1, a + 1, b + 1))
        .collect();

    let mut bad_partial_sums = Vec::new();
    let mut profile = |sums: Vec<Mat<F>>, label: &str, line: usize| {
        let full = sums.last().expect("nonempty grid").clone();
        if !sums.iter().all(Mat::is_projection) {
            bad_partial_sums.push(format!("{label} {}", line + 1));
        }
        let ranks: Vec<usize> = sums.iter().map(rank).collect();
        let support = sums.iter().position(|s| s.approx_eq(&full)).map_or(0, |p| p + 1);
        let support = if full.is_zero() { 0 } else { support };
        (ranks, support, rank(&full.complement()))
    };
    let mut row_partial_ranks = Vec::with_capacity(k);
    let mut row_support = Vec::with_capacity(k);
    let mut row_defect_ranks = Vec::with_capacity(k);
    for i in 0..k {
        let sums = (1..=k).map(|m| u.row_partial_sum(i, m)).collect();
        let (ranks, support, defect) = profile(sums, "row", i);
        row_partial_ranks.push(ranks);
        row_support.push(support);
        row_defect_ranks.push(defect);
    }
    let mut col_partial_ranks = Vec::with_capacity(k);
    let mut col_support = Vec::with_capacity(k);
    let mut col_defect_ranks = Vec::with_capacity(k);
    for j in 0..k {
        let sums = (1..=k).map(|m| u.col_partial_sum(j, m)).collect();
        let (ranks, support, defect) = profile(sums, "column", j);
        col_partial_ranks.push(ranks);
        col_support.push(support);
        col_defect_ranks.push(defect);
    }
    MagicReport {
        kind: u.kind,
        size: k,
        not_projections,
        row_overlaps,
        col_overlaps,
        row_defect_ranks,
        col_defect_ranks,
        row_partial_ranks,
        col_partial_ranks,
        row_support,
        col_support,
        bad_partial_sums,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    type M = Mat<Exact>;

    fn flip(p: &M) -> MagicUnitary<Exact> {
        MagicUnitary::finite(vec![vec![p.clone(), p.complement()], vec![p.complement(), p.clone()]]).unwrap()
    }

    #[test]
    fn identity_grid_is_magic() {
        let u = MagicUnitary::finite(vec![vec![M::identity(3)]]).unwrap();
        assert!(verify_magic(&u).passes());
    }

    #[test]
    fn two_by_two_flip_is_magic() {
        let r = verify_magic(&flip(&M::unit(2, 0, 0)));
        assert!(r.passes());
        assert_eq!(r.row_partial_ranks, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(r.row_support, vec![2, 2]);
    }

    #[test]
    fn overlapping_row_is_reported() {
        let e = M::unit(2, 0, 0);
        let u = MagicUnitary::finite(vec![vec![e.clone(), e.clone()], vec![M::zeros(2, 2), M::zeros(2, 2)]])
            .unwrap();
        let r = verify_magic(&u);
        assert!(!r.passes());
        assert_eq!(r.row_overlaps, vec![(1, 1, 2)]);
        assert_eq!(r.bad_partial_sums, vec!["row 1".to_string()]);
    }

    #[test]
    fn non_projection_entry_is_reported() {
        let u = MagicUnitary::finite(vec![vec![M::unit(2, 0, 1)]]).unwrap();
        assert_eq!(verify_magic(&u).not_projections, vec![(1, 1)]);
    }

    #[test]
    fn ragged_grid_is_rejected() {
        let e = M::identity(1);
        assert!(MagicUnitary::finite(vec![vec![e.clone(), e.clone()], vec![e]]).is_err());
    }

    #[test]
    fn transpose_swaps_rows_and_columns() {
        let e = M::unit(2, 0, 0);
        let u = MagicUnitary::truncated(vec![vec![e.clone(), M::zeros(2, 2)], vec![e.complement(), e]], true)
            .unwrap();
        let t = u.transpose();
        assert_eq!(t.entry(0, 1), u.entry(1, 0));
        let (ru, rt) = (verify_magic(&u), verify_magic(&t));
        assert_eq!(ru.row_defect_ranks, rt.col_defect_ranks);
        assert_eq!(t.transpose().rows(), u.rows());
    }
}
