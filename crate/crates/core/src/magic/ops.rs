use super::grid::{verify_magic, GridKind, MagicUnitary};
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

fn require_magic<F: Field>(u: &MagicUnitary<F>) -> Result<()> {
    let report = verify_magic(u);
    if !report.passes() {
        return Err(Error::NotMagic(format!("{}×{} grid fails its relations", u.size(), u.size())));
    }
    Ok(())
}

fn require_finite<F: Field>(u: &MagicUnitary<F>) -> Result<()> {
    require_magic(u)?;
    if u.kind() != GridKind::Finite {
        return Err(Error::InvalidArgument("operation needs a finite grid".into()));
    }
    Ok(())
}

/// Extend an `n×n` magic unitary by zeros to an `m×m` truncated grid; the new
/// rows and columns carry full defect.
pub fn pad_to<F: Field>(u: &MagicUnitary<F>, m: usize) -> Result<MagicUnitary<F>> {
    require_finite(u)?;
    let n = u.size();
    if m <= n {
        return Err(Error::InvalidArgument(format!("cannot pad a {n}×{n} grid to {m}")));
    }
    let d = u.ambient_dim();
    Ok(MagicUnitary::from_fn(GridKind::Truncated { declared_infinite: true }, m, d, |i, j| {
        if i < n && j < n {
            u.entry(i, j).clone()
        } else {
            Mat::zeros(d, d)
        }
    }))
}

/// `P ↦ [[P, 0], [0, 1]]`.
pub fn corner_embed<F: Field>(u: &MagicUnitary<F>) -> Result<MagicUnitary<F>> {
    require_finite(u)?;
    let n = u.size();
    let d = u.ambient_dim();
    Ok(MagicUnitary::from_fn(GridKind::Finite, n + 1, d, |i, j| match (i < n, j < n) {
        (true, true) => u.entry(i, j).clone(),
        (false, false) => Mat::identity(d),
        _ => Mat::zeros(d, d),
    }))
}

/// `[[P, 0], [0, 1]] ↦ P`; fails unless the last row and column have that
/// shape.
pub fn corner_restrict<F: Field>(u: &MagicUnitary<F>) -> Result<MagicUnitary<F>> {
    require_finite(u)?;
    let n = u.size();
    if n < 2 {
        return Err(Error::InvalidArgument("a 1×1 grid has no corner".into()));
    }
    let last = n - 1;
    let shaped = u.entry(last, last).approx_eq(&Mat::identity(u.ambient_dim()))
        && (0..last).all(|k| u.entry(last, k).is_zero() && u.entry(k, last).is_zero());
    if !shaped {
        return Err(Error::NotMagic(format!("row and column {n} are not the trivial corner")));
    }
    Ok(MagicUnitary::from_fn(GridKind::Finite, last, u.ambient_dim(), |i, j| u.entry(i, j).clone()))
}

/// `x_ij = Σ_k q_ik ⊗ q_kj` on `ℂ^d ⊗ ℂ^d`.
pub fn comultiply_grid<F: Field>(u: &MagicUnitary<F>) -> Result<MagicUnitary<F>> {
    let report = verify_magic(u);
    if !report.passes() {
        return Err(Error::NotMagic(format!("{}×{} grid fails its relations", u.size(), u.size())));
    }
    if !report.sums_exact() {
        return Err(Error::NonzeroDefects);
    }
    let (n, d) = (u.size(), u.ambient_dim());
    let x = MagicUnitary::from_fn(u.kind(), n, d * d, |i, j| {
        (0..n).fold(Mat::zeros(d * d, d * d), |acc, k| acc.add(&u.entry(i, k).kron(u.entry(k, j))))
    });
    let check = verify_magic(&x);
    if !(check.passes() && check.sums_exact()) {
        return Err(Error::Inconsistent("comultiplied grid is not magic".into()));
    }
    Ok(x)
}

/// `q_ij ↦ q_ji`.
pub fn transpose_grid<F: Field>(u: &MagicUnitary<F>) -> MagicUnitary<F> {
    u.transpose()
}

/// The `K×K` corner of the grid
///
/// ```text
/// d_1   0    d_2   d_3  …
/// d_1⊥  d_1  0     0    …
/// 0     d_2  d_2⊥  0    …
/// 0     d_3  0     d_3⊥ …
/// ```
///
/// built from mutually orthogonal nonzero projections summing to the
/// identity. With `m` projections the `(m+1)×(m+1)` corner is already a
/// finite magic unitary.
pub fn block_unitary<F: Field>(d: &[Mat<F>], k: usize) -> Result<MagicUnitary<F>> {
    let m = d.len();
    if m == 0 || k == 0 || k > m + 1 {
        return Err(Error::InvalidArgument(format!("need 1 ≤ K ≤ {} for {m} projections, got {k}", m + 1)));
    }
    let dim = d[0].rows();
    for (i, p) in d.iter().enumerate() {
        if p.rows() != dim || p.cols() != dim {
            return Err(Error::DimensionMismatch { what: "projection size".into(), expected: dim, found: p.rows() });
        }
        if !p.is_projection() {
            return Err(Error::NotProjection { index: i });
        }
        if p.is_zero() {
            return Err(Error::ZeroProjection(i));
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if !d[a].mul(&d[b]).is_zero() {
                return Err(Error::NotOrthogonal(a, b));
            }
        }
    }
    let total = d.iter().fold(Mat::zeros(dim, dim), |acc, p| acc.add(p));
    if !total.approx_eq(&Mat::identity(dim)) {
        return Err(Error::NotPartitionOfUnity);
    }
    let kind = if k == m + 1 { GridKind::Finite } else { GridKind::Truncated { declared_infinite: true } };
    Ok(MagicUnitary::from_fn(kind, k, dim, |i, j| match (i, j) {
        (0, 0) | (1, 1) => d[0].clone(),
        (0, j) if j >= 2 => d[j - 1].clone(),
        (1, 0) => d[0].complement(),
        (i, 1) if i >= 2 => d[i - 1].clone(),
        (i, j) if i >= 2 && i == j => d[i - 1].complement(),
        _ => Mat::zeros(dim, dim),
    }))
}

/// Append `[[t, t⊥], [t⊥, t]]` blocks along the diagonal.
pub fn gadget_append<F: Field>(u: &MagicUnitary<F>, ts: &[Mat<F>]) -> Result<MagicUnitary<F>> {
    require_magic(u)?;
    let d = u.ambient_dim();
    for (i, t) in ts.iter().enumerate() {
        if t.rows() != d || t.cols() != d {
            return Err(Error::DimensionMismatch { what: "gadget size".into(), expected: d, found: t.rows() });
        }
        if !t.is_projection() {
            return Err(Error::NotProjection { index: i });
        }
    }
    let n = u.size();
    Ok(MagicUnitary::from_fn(u.kind(), n + 2 * ts.len(), d, |i, j| {
        if i < n && j < n {
            return u.entry(i, j).clone();
        }
        if i < n || j < n || (i - n) / 2 != (j - n) / 2 {
            return Mat::zeros(d, d);
        }
        let t = &ts[(i - n) / 2];
        if (i - n) % 2 == (j - n) % 2 {
            t.clone()
        } else {
            t.complement()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    type M = Mat<Exact>;

    fn rank_one_diagonals(n: usize) -> Vec<M> {
        (0..n).map(|i| M::unit(n, i, i)).collect()
    }

    #[test]
    fn pad_one_by_one() {
        let u = MagicUnitary::finite(vec![vec![M::identity(2)]]).unwrap();
        let p = pad_to(&u, 2).unwrap();
        assert_eq!(p.entry(1, 1), &M::zeros(2, 2));
        let r = verify_magic(&p);
        assert!(r.passes());
        assert_eq!(r.row_defect_ranks, vec![0, 2]);
        assert_eq!(r.col_defect_ranks, vec![0, 2]);
    }

    #[test]
    fn corner_round_trip() {
        let u = MagicUnitary::finite(vec![vec![M::identity(2)]]).unwrap();
        let c = corner_embed(&u).unwrap();
        assert_eq!(c.rows(), vec![vec![M::identity(2), M::zeros(2, 2)], vec![M::zeros(2, 2), M::identity(2)]]);
        assert_eq!(corner_restrict(&c).unwrap().rows(), u.rows());
    }

    #[test]
    fn comultiply_flip() {
        let p = M::unit(2, 0, 0);
        let u = MagicUnitary::finite(vec![vec![p.clone(), p.complement()], vec![p.complement(), p.clone()]])
            .unwrap();
        let x = comultiply_grid(&u).unwrap();
        let expected = p.kron(&p).add(&p.complement().kron(&p.complement()));
        assert_eq!(x.entry(0, 0), &expected);
        assert_eq!(x.ambient_dim(), 4);
    }

    #[test]
    fn comultiply_rejects_defects() {
        let u = MagicUnitary::finite(vec![vec![M::identity(1)]]).unwrap();
        let padded = pad_to(&u, 2).unwrap();
        assert_eq!(comultiply_grid(&padded).unwrap_err(), Error::NonzeroDefects);
    }

    #[test]
    fn paper_block_exact_at_m_plus_one() {
        let u = block_unitary(&rank_one_diagonals(3), 4).unwrap();
        assert_eq!(u.kind(), GridKind::Finite);
        let r = verify_magic(&u);
        assert!(r.passes() && r.sums_exact());
    }

    #[test]
    fn paper_block_truncation_defects() {
        let d = rank_one_diagonals(3);
        let u = block_unitary(&d, 3).unwrap();
        assert_eq!(u.row_defect(0), d[2]);
        assert_eq!(u.col_defect(1), d[2]);
        let r = verify_magic(&u);
        assert!(r.passes() && !r.sums_exact());
        assert_eq!(r.row_partial_ranks[0], vec![1, 1, 2]);
        assert_eq!(r.row_defect_ranks, vec![1, 0, 0]);
        assert_eq!(r.col_defect_ranks, vec![0, 1, 0]);
    }

    #[test]
    fn paper_block_rejects_overlap() {
        let d = vec![M::unit(2, 0, 0), M::unit(2, 0, 0)];
        assert_eq!(block_unitary(&d, 2).unwrap_err(), Error::NotOrthogonal(0, 1));
    }

    #[test]
    fn gadget_shapes() {
        let u = MagicUnitary::finite(vec![vec![M::identity(2)]]).unwrap();
        let g = gadget_append(&u, &[M::zeros(2, 2)]).unwrap();
        assert_eq!(g.size(), 3);
        assert_eq!(g.entry(1, 2), &M::identity(2));
        assert_eq!(g.entry(1, 1), &M::zeros(2, 2));
        assert!(verify_magic(&g).passes());
    }
}
