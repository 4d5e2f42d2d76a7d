use std::collections::BTreeSet;

use serde::Serialize;

use super::coords::Coords;
use super::map::StarHom;
use super::multi::{Element, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{range_projection, Field};

/// A central projection: the identity on the supported blocks, zero
/// elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralProjection {
    #[serde(skip)]
    algebra: MultiMatrixAlgebra,
    support: BTreeSet<usize>,
}

impl CentralProjection {
    pub fn new(algebra: MultiMatrixAlgebra, support: BTreeSet<usize>) -> Result<Self> {
        if let Some(&bad) = support.iter().find(|&&b| b >= algebra.num_blocks()) {
            return Err(Error::InvalidArgument(format!("block {bad} out of range")));
        }
        Ok(Self { algebra, support })
    }

    pub fn zero(algebra: &MultiMatrixAlgebra) -> Self {
        Self { algebra: algebra.clone(), support: BTreeSet::new() }
    }

    pub fn one(algebra: &MultiMatrixAlgebra) -> Self {
        Self { algebra: algebra.clone(), support: (0..algebra.num_blocks()).collect() }
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.support.len() == self.algebra.num_blocks()
    }

    pub fn complement(&self) -> Self {
        Self {
            algebra: self.algebra.clone(),
            support: (0..self.algebra.num_blocks()).filter(|b| !self.support.contains(b)).collect(),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        Self { algebra: self.algebra.clone(), support: self.support.union(&other.support).copied().collect() }
    }

    pub fn dominates(&self, other: &Self) -> bool {
        self.support.is_superset(&other.support)
    }

    pub fn to_coords<F: Field>(&self) -> Coords<F> {
        let mut out = Coords::zero();
        for &b in &self.support {
            out = out.add(&self.algebra.block_identity(b));
        }
        out
    }

    pub fn to_element<F: Field>(&self) -> Element<F> {
        Element::from_coords(&self.algebra, &self.to_coords())
    }

    /// The corner `z·M` as an algebra of its own (supported blocks in order).
    pub fn corner_algebra(&self) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(self.support.iter().map(|&b| self.algebra.block_dim(b)).collect())
            .expect("positive blocks")
    }

    /// Whether `z · p = p`.
    pub fn dominates_element<F: Field>(&self, p: &Element<F>) -> bool {
        p.blocks().iter().enumerate().all(|(b, m)| self.support.contains(&b) || m.is_zero())
    }
}

fn check_projections<F: Field>(ps: &[Element<F>]) -> Result<MultiMatrixAlgebra> {
    let first = ps.first().ok_or_else(|| Error::InvalidArgument("empty projection list".into()))?;
    let algebra = first.algebra();
    for (index, p) in ps.iter().enumerate() {
        if p.algebra() != algebra {
            return Err(Error::AlgebraMismatch);
        }
        if !p.is_projection() {
            return Err(Error::NotProjection { index });
        }
    }
    Ok(algebra)
}

/// Smallest projection dominating every input, block by block.
pub fn sup_projections<F: Field>(ps: &[Element<F>]) -> Result<Element<F>> {
    let algebra = check_projections(ps)?;
    let blocks = (0..algebra.num_blocks())
        .map(|b| range_projection(&ps.iter().map(|p| p.block(b).clone()).collect::<Vec<_>>()))
        .collect();
    Element::new(&algebra, blocks)
}

/// Smallest central projection dominating `p`: the blocks where `p` is
/// nonzero.
pub fn central_carrier<F: Field>(p: &Element<F>) -> Result<CentralProjection> {
    let algebra = check_projections(std::slice::from_ref(p))?;
    let support = p.blocks().iter().enumerate().filter(|(_, m)| !m.is_zero()).map(|(b, _)| b).collect();
    CentralProjection::new(algebra, support)
}

/// Central projection `r` with `ker h = r · source` for a surjective
/// *-homomorphism `h`.
///
/// Also verifies that `h` restricted to the complementary corner is an
/// isomorphism onto the target.
pub fn kernel_central_projection<F: Field>(h: &StarHom<F>) -> Result<CentralProjection> {
    let sigma = h.block_map().ok_or(Error::NotSurjective {
        rank: h.map().rank(),
        target: h.target().dim(),
    })?;
    let hit: BTreeSet<usize> = sigma.iter().copied().collect();
    let source = h.source().clone();
    let kernel: BTreeSet<usize> = (0..source.num_blocks()).filter(|b| !hit.contains(b)).collect();
    let r = CentralProjection::new(source, kernel)?;

    let complement: Vec<usize> = r.complement().support().iter().copied().collect();
    let restricted = h.map().restrict_to_blocks(&complement);
    let n = restricted.source().dim();
    if n != h.target().dim() || restricted.rank() != n {
        return Err(Error::Inconsistent("restriction to the kernel complement is not bijective".into()));
    }
    for b in r.support() {
        if !h.map().apply(&h.source().block_identity(*b)).is_zero() {
            return Err(Error::Inconsistent(format!("kernel block {b} is not annihilated")));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{verify_star_hom, LinearMap};
    use crate::linalg::{Exact, Mat};

    type M = Mat<Exact>;

    fn alg(dims: &[usize]) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn sup_examples() {
        let a = alg(&[2]);
        let p = Element::new(&a, vec![M::unit(2, 0, 0)]).unwrap();
        assert_eq!(sup_projections(std::slice::from_ref(&p)).unwrap(), p);
        let q = Element::new(&a, vec![M::unit(2, 1, 1)]).unwrap();
        assert_eq!(sup_projections(&[p, q]).unwrap(), Element::identity(&a));

        let b = alg(&[2, 3]);
        let x = Element::new(&b, vec![M::unit(2, 0, 0), M::zeros(3, 3)]).unwrap();
        let y = Element::new(&b, vec![M::zeros(2, 2), M::identity(3)]).unwrap();
        let s = sup_projections(&[x, y]).unwrap();
        assert_eq!(s, Element::new(&b, vec![M::unit(2, 0, 0), M::identity(3)]).unwrap());
    }

    #[test]
    fn sup_rejects_non_projection() {
        let a = alg(&[2]);
        let p = Element::new(&a, vec![M::unit(2, 0, 0)]).unwrap();
        let bad = Element::new(&a, vec![M::unit(2, 0, 1)]).unwrap();
        assert_eq!(sup_projections(&[p, bad]), Err(Error::NotProjection { index: 1 }));
    }

    #[test]
    fn carrier_examples() {
        let b = alg(&[2, 3]);
        let zero = Element::<Exact>::zero(&b);
        assert!(central_carrier(&zero).unwrap().is_zero());
        let p = Element::new(&b, vec![M::unit(2, 0, 0), M::zeros(3, 3)]).unwrap();
        assert_eq!(central_carrier(&p).unwrap().support(), &BTreeSet::from([0]));
        let q = Element::new(&b, vec![M::unit(2, 0, 0), M::unit(3, 0, 0)]).unwrap();
        assert_eq!(central_carrier(&q).unwrap().support(), &BTreeSet::from([0, 1]));
    }

    #[test]
    fn kernel_of_block_projection() {
        let src = alg(&[2, 3]);
        let id = verify_star_hom(LinearMap::<Exact>::identity(&src)).unwrap();
        assert!(kernel_central_projection(&id).unwrap().is_zero());
        let h = verify_star_hom(LinearMap::<Exact>::from_block_map(src, alg(&[2]), &[0], None).unwrap())
            .unwrap();
        let r = kernel_central_projection(&h).unwrap();
        assert_eq!(r.support(), &BTreeSet::from([1]));
    }
}
