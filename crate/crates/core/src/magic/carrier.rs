use serde::Serialize;

use super::grid::MagicUnitary;
use crate::error::{Error, Result};
use crate::linalg::{range_projection, rank, Field, Mat};

/// Central carrier of one complemented partial sum.
#[derive(Clone, Debug)]
pub struct CarrierLine<F: Field> {
    /// 1-based row or column index.
    pub index: usize,
    pub partial_sum: Mat<F>,
    pub carrier: Mat<F>,
}

/// `w_k = ⋁_j z((p_j^{(k)})⊥) ∨ ⋁_j z((q_j^{(k)})⊥)` in the algebra generated
/// by the grid, where `p_j^{(k)}` and `q_j^{(k)}` are the first `k` partial
/// sums of row and column `j`.
#[derive(Clone, Debug)]
pub struct CarrierCertificate<F: Field> {
    pub k: usize,
    pub rows: Vec<CarrierLine<F>>,
    pub cols: Vec<CarrierLine<F>>,
    pub w: Mat<F>,
    pub center_dim: usize,
    pub is_factor: bool,
}

/// Rank data of a certificate, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub k: usize,
    pub center_dim: usize,
    pub is_factor: bool,
    pub row_complement_ranks: Vec<usize>,
    pub row_carrier_ranks: Vec<usize>,
    pub col_complement_ranks: Vec<usize>,
    pub col_carrier_ranks: Vec<usize>,
    pub w_rank: usize,
    pub w_is_identity: bool,
}

impl<F: Field> CarrierCertificate<F> {
    pub fn w_is_identity(&self) -> bool {
        self.w.approx_eq(&Mat::identity(self.w.rows()))
    }

    pub fn w_is_zero(&self) -> bool {
        self.w.is_zero()
    }

    pub fn summary(&self) -> CertificateSummary {
        let complement_ranks = |lines: &[CarrierLine<F>]| -> Vec<usize> {
            lines.iter().map(|l| rank(&l.partial_sum.complement())).collect()
        };
        let carrier_ranks =
            |lines: &[CarrierLine<F>]| -> Vec<usize> { lines.iter().map(|l| rank(&l.carrier)).collect() };
        CertificateSummary {
            k: self.k,
            center_dim: self.center_dim,
            is_factor: self.is_factor,
            row_complement_ranks: complement_ranks(&self.rows),
            row_carrier_ranks: carrier_ranks(&self.rows),
            col_complement_ranks: complement_ranks(&self.cols),
            col_carrier_ranks: carrier_ranks(&self.cols),
            w_rank: rank(&self.w),
            w_is_identity: self.w_is_identity(),
        }
    }
}

pub fn carrier_certificate<F: Field>(u: &MagicUnitary<F>, k: usize) -> Result<CarrierCertificate<F>> {
    if k > u.size() {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds grid size {}", u.size())));
    }
    let g = u.ambient();
    let d = u.ambient_dim();
    let line = |index: usize, partial_sum: Mat<F>, what: &str| -> Result<CarrierLine<F>> {
        if !partial_sum.is_projection() {
            return Err(Error::NotMagic(format!("{what} {} partial sum is not a projection", index + 1)));
        }
        let complement = partial_sum.complement();
        let carrier = if complement.is_zero() { Mat::zeros(d, d) } else { g.central_carrier(&complement)? };
        Ok(CarrierLine { index: index + 1, partial_sum, carrier })
    };
    let rows = (0..u.size()).map(|j| line(j, u.row_partial_sum(j, k), "row")).collect::<Result<Vec<_>>>()?;
    let cols = (0..u.size()).map(|j| line(j, u.col_partial_sum(j, k), "column")).collect::<Result<Vec<_>>>()?;
    let carriers: Vec<Mat<F>> = rows.iter().chain(&cols).map(|l| l.carrier.clone()).collect();
    let w = range_projection(&carriers);
    Ok(CarrierCertificate { k, rows, cols, w, center_dim: g.center_dim(), is_factor: g.is_factor() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;
    use crate::magic::{gadget_append, block_unitary};

    type M = Mat<Exact>;

    fn block_example() -> MagicUnitary<Exact> {
        block_unitary(&(0..3).map(|i| M::unit(3, i, i)).collect::<Vec<_>>(), 4).unwrap()
    }

    fn line_projection(v: &[i64]) -> M {
        range_projection(&[M::column(v.iter().map(|&x| Exact::from_ratio(x, 1)).collect())])
    }

    #[test]
    fn diagonal_ambient_keeps_carriers_small() {
        let u = block_example();
        let c = carrier_certificate(&u, 1).unwrap();
        assert!(!c.is_factor);
        assert_eq!(c.center_dim, 3);
        assert_eq!(c.rows[0].carrier, M::diag(&[Exact::zero(), Exact::one(), Exact::one()]));
    }

    #[test]
    fn factor_ambient_gives_full_carriers() {
        let t = [line_projection(&[1, 1, 0]), line_projection(&[0, 1, 1])];
        let u = gadget_append(&block_example(), &t).unwrap();
        let c = carrier_certificate(&u, 1).unwrap();
        assert!(c.is_factor);
        assert_eq!(c.rows[0].carrier, M::identity(3));
        assert!(c.w_is_identity());
    }

    #[test]
    fn exact_grid_at_full_depth_has_no_defects() {
        let u = block_example();
        let c = carrier_certificate(&u, 4).unwrap();
        assert!(c.w_is_zero());
    }
}
