use crate::error::{Error, Result};
use crate::linalg::{commutant_basis, range_projection, Eliminator, Field, Mat};

/// The von Neumann algebra generated by a set of `d×d` matrices, computed
/// as a bicommutant.
#[derive(Clone, Debug)]
pub struct GeneratedAlgebra<F: Field> {
    ambient_dim: usize,
    generators: Vec<Mat<F>>,
    algebra_basis: Vec<Mat<F>>,
    commutant_basis: Vec<Mat<F>>,
    center_basis: Vec<Mat<F>>,
    span: Eliminator<F>,
}

/// Bicommutant of `generators ∪ adjoints` together with its commutant and
/// center.
pub fn generated_algebra<F: Field>(generators: &[Mat<F>], d: usize) -> Result<GeneratedAlgebra<F>> {
    if let Some(g) = generators.iter().find(|g| g.rows() != d || g.cols() != d) {
        return Err(Error::DimensionMismatch {
            what: "generator size".into(),
            expected: d,
            found: g.rows().max(g.cols()),
        });
    }
    let commutant = commutant_basis(generators, d);
    let algebra = commutant_basis(&commutant, d);
    // Z(A) = A ∩ A' = (A ∪ A')'
    let both: Vec<Mat<F>> = algebra.iter().chain(&commutant).cloned().collect();
    let center = commutant_basis(&both, d);
    let mut span = Eliminator::new(d * d);
    for a in &algebra {
        span.insert_dense(a.entries());
    }
    Ok(GeneratedAlgebra {
        ambient_dim: d,
        generators: generators.to_vec(),
        algebra_basis: algebra,
        commutant_basis: commutant,
        center_basis: center,
        span,
    })
}

impl<F: Field> GeneratedAlgebra<F> {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Mat<F>] {
        &self.generators
    }

    pub fn algebra_basis(&self) -> &[Mat<F>] {
        &self.algebra_basis
    }

    pub fn dim(&self) -> usize {
        self.algebra_basis.len()
    }

    pub fn commutant_basis(&self) -> &[Mat<F>] {
        &self.commutant_basis
    }

    pub fn commutant_dim(&self) -> usize {
        self.commutant_basis.len()
    }

    pub fn center_basis(&self) -> &[Mat<F>] {
        &self.center_basis
    }

    pub fn center_dim(&self) -> usize {
        self.center_basis.len()
    }

    pub fn is_factor(&self) -> bool {
        self.center_basis.len() == 1
    }

    pub fn contains(&self, x: &Mat<F>) -> bool {
        x.rows() == self.ambient_dim
            && x.cols() == self.ambient_dim
            && self.span.contains(
                x.entries().iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect(),
            )
    }

    /// Central elements are those of the algebra commuting with every basis
    /// element.
    pub fn is_central(&self, x: &Mat<F>) -> bool {
        self.contains(x) && self.algebra_basis.iter().all(|a| a.commutes_with(x))
    }

    /// Central carrier of a projection `p` of the algebra: the projection
    /// onto `span{a p ξ}` over the algebra basis and all vectors `ξ`.
    pub fn central_carrier(&self, p: &Mat<F>) -> Result<Mat<F>> {
        if !p.is_projection() {
            return Err(Error::NotProjection { index: 0 });
        }
        if !self.contains(p) {
            return Err(Error::NotInAlgebra);
        }
        let ranges: Vec<Mat<F>> = self.algebra_basis.iter().map(|a| a.mul(p)).collect();
        let z = range_projection(&ranges);
        if !self.is_central(&z) {
            return Err(Error::Inconsistent("carrier is not central".into()));
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    type M = Mat<Exact>;

    #[test]
    fn scalars_generate_scalars() {
        let g = generated_algebra(&[M::identity(3)], 3).unwrap();
        assert_eq!(g.dim(), 1);
        assert_eq!(g.commutant_dim(), 9);
        assert!(g.is_factor());
    }

    #[test]
    fn full_matrix_algebra() {
        let flip = M::unit(2, 0, 1).add(&M::unit(2, 1, 0));
        let g = generated_algebra(&[M::unit(2, 0, 0), flip], 2).unwrap();
        assert_eq!(g.dim(), 4);
        assert_eq!(g.commutant_dim(), 1);
        assert!(g.is_factor());
    }

    #[test]
    fn diagonal_algebra() {
        let g = generated_algebra(&[M::unit(3, 0, 0), M::unit(3, 1, 1)], 3).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.center_dim(), 3);
        assert!(!g.is_factor());
        assert!(g.contains(&M::unit(3, 2, 2)));
        assert!(!g.contains(&M::unit(3, 0, 1)));
    }

    #[test]
    fn concrete_carriers() {
        let diag = generated_algebra(&[M::unit(3, 0, 0), M::unit(3, 1, 1)], 3).unwrap();
        assert_eq!(diag.central_carrier(&M::identity(3)).unwrap(), M::identity(3));
        assert_eq!(diag.central_carrier(&M::unit(3, 0, 0)).unwrap(), M::unit(3, 0, 0));

        let full = generated_algebra(&[M::unit(3, 0, 1), M::unit(3, 1, 2)], 3).unwrap();
        assert!(full.is_factor());
        assert_eq!(full.central_carrier(&M::unit(3, 2, 2)).unwrap(), M::identity(3));
        assert_eq!(diag.central_carrier(&M::unit(3, 0, 1)), Err(Error::NotProjection { index: 0 }));
    }

    #[test]
    fn carrier_rejects_outside_element() {
        let diag = generated_algebra(&[M::unit(2, 0, 0)], 2).unwrap();
        let half = Exact::from_ratio(1, 2);
        let p = M::from_rows(vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]);
        assert_eq!(diag.central_carrier(&p), Err(Error::NotInAlgebra));
    }
}
