use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::coords::Coords;
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

/// A finite direct sum `M_{k_1} ⊕ … ⊕ M_{k_m}` of full matrix algebras.
///
/// Coordinates enumerate matrix units block by block, row-major inside each
/// block. The empty block list is the zero algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiMatrixAlgebra {
    block_dims: Vec<usize>,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.contains(&0) {
            return Err(Error::InvalidBlocks(block_dims));
        }
        let mut offsets = Vec::with_capacity(block_dims.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for k in &block_dims {
            acc += k * k;
            offsets.push(acc);
        }
        Ok(Self { block_dims, offsets })
    }

    /// `ℂ`.
    pub fn scalars() -> Self {
        Self::commutative(1)
    }

    /// `ℂⁿ`, the algebra of functions on `n` points.
    pub fn commutative(n: usize) -> Self {
        Self::new(vec![1; n]).expect("positive blocks")
    }

    pub fn full(k: usize) -> Result<Self> {
        Self::new(vec![k])
    }

    pub fn zero_algebra() -> Self {
        Self::new(Vec::new()).expect("empty block list")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dim(&self, block: usize) -> usize {
        self.block_dims[block]
    }

    /// `Σ k_i²`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn center_dim(&self) -> usize {
        self.block_dims.len()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&k| k == 1)
    }

    /// Size of the block-diagonal concrete representation.
    pub fn concrete_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn block_range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    pub fn coord(&self, block: usize, row: usize, col: usize) -> usize {
        let k = self.block_dims[block];
        debug_assert!(row < k && col < k);
        self.offsets[block] + row * k + col
    }

    /// Inverse of [`coord`](Self::coord).
    pub fn locate(&self, coord: usize) -> (usize, usize, usize) {
        assert!(coord < self.dim(), "coordinate {coord} out of range");
        let block = self.offsets.partition_point(|&o| o <= coord) - 1;
        let k = self.block_dims[block];
        let local = coord - self.offsets[block];
        (block, local / k, local % k)
    }

    /// Coordinate of the transposed matrix unit `e_cr` for `coord = e_rc`.
    pub fn transpose_coord(&self, coord: usize) -> usize {
        let (b, r, c) = self.locate(coord);
        self.coord(b, c, r)
    }

    /// `A ⊗ B = ⊕_{i,j} M_{k_i l_j}`, blocks ordered with `i` major.
    pub fn tensor(&self, other: &Self) -> Self {
        let dims = self
            .block_dims
            .iter()
            .flat_map(|&k| other.block_dims.iter().map(move |&l| k * l))
            .collect();
        Self::new(dims).expect("positive blocks")
    }

    /// Coordinate in `self ⊗ other` of `e_a ⊗ e_b`; rows and columns follow
    /// the Kronecker convention.
    pub fn tensor_coord(&self, other: &Self, a: usize, b: usize, product: &Self) -> usize {
        let (i, ra, ca) = self.locate(a);
        let (j, rb, cb) = other.locate(b);
        let l = other.block_dims[j];
        product.coord(i * other.num_blocks() + j, ra * l + rb, ca * l + cb)
    }

    /// Inverse of [`tensor_coord`](Self::tensor_coord).
    pub fn split_tensor_coord(&self, other: &Self, coord: usize, product: &Self) -> (usize, usize) {
        let (blk, r, c) = product.locate(coord);
        let (i, j) = (blk / other.num_blocks(), blk % other.num_blocks());
        let l = other.block_dims[j];
        (self.coord(i, r / l, c / l), other.coord(j, r % l, c % l))
    }

    /// Concatenation of block lists (the product algebra).
    pub fn direct_sum(parts: &[Self]) -> Self {
        Self::new(parts.iter().flat_map(|p| p.block_dims.iter().copied()).collect())
            .expect("positive blocks")
    }

    pub fn identity<F: Field>(&self) -> Coords<F> {
        (0..self.num_blocks())
            .flat_map(|b| (0..self.block_dims[b]).map(move |r| (b, r)))
            .map(|(b, r)| (self.coord(b, r, r), F::one()))
            .collect()
    }

    /// Identity of a single block.
    pub fn block_identity<F: Field>(&self, block: usize) -> Coords<F> {
        (0..self.block_dims[block]).map(|r| (self.coord(block, r, r), F::one())).collect()
    }

    /// Product of two sparse elements.
    pub fn multiply<F: Field>(&self, a: &Coords<F>, b: &Coords<F>) -> Coords<F> {
        if a.nnz() == 0 || b.nnz() == 0 {
            return Coords::zero();
        }
        // index b by (block, row)
        let mut by_row: HashMap<(usize, usize), Vec<(usize, &F)>> = HashMap::new();
        for (coord, v) in b.iter() {
            let (blk, r, c) = self.locate(coord);
            by_row.entry((blk, r)).or_default().push((c, v));
        }
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (coord, va) in a.iter() {
            let (blk, r, c) = self.locate(coord);
            let Some(row) = by_row.get(&(blk, c)) else { continue };
            for &(c2, vb) in row {
                let target = self.coord(blk, r, c2);
                let e = acc.entry(target).or_insert_with(F::zero);
                *e = e.add(&va.mul(vb));
            }
        }
        acc.into_iter().collect()
    }

    pub fn adjoint<F: Field>(&self, a: &Coords<F>) -> Coords<F> {
        a.iter().map(|(coord, v)| (self.transpose_coord(coord), v.conj())).collect()
    }

    pub fn is_projection<F: Field>(&self, a: &Coords<F>) -> bool {
        self.adjoint(a).approx_eq(a) && self.multiply(a, a).approx_eq(a)
    }

    /// Blocks on which `a` has a nonzero entry.
    pub fn block_support<F: Field>(&self, a: &Coords<F>) -> Vec<usize> {
        let mut blocks: Vec<usize> = a.iter().map(|(c, _)| self.locate(c).0).collect();
        blocks.dedup();
        blocks
    }
}

/// An element of a multi-matrix algebra, stored block by block.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F: Field> {
    blocks: Vec<Mat<F>>,
}

impl<F: Field> Element<F> {
    pub fn new(algebra: &MultiMatrixAlgebra, blocks: Vec<Mat<F>>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch {
                what: "number of blocks".into(),
                expected: algebra.num_blocks(),
                found: blocks.len(),
            });
        }
        for (b, m) in blocks.iter().enumerate() {
            let k = algebra.block_dim(b);
            if m.rows() != k || m.cols() != k {
                return Err(Error::DimensionMismatch {
                    what: format!("size of block {b}"),
                    expected: k,
                    found: m.rows().max(m.cols()),
                });
            }
        }
        Ok(Self { blocks })
    }

    pub fn zero(algebra: &MultiMatrixAlgebra) -> Self {
        Self { blocks: algebra.block_dims().iter().map(|&k| Mat::zeros(k, k)).collect() }
    }

    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        Self { blocks: algebra.block_dims().iter().map(|&k| Mat::identity(k)).collect() }
    }

    pub fn from_coords(algebra: &MultiMatrixAlgebra, coords: &Coords<F>) -> Self {
        let mut el = Self::zero(algebra);
        for (c, v) in coords.iter() {
            let (b, r, col) = algebra.locate(c);
            el.blocks[b].set(r, col, v.clone());
        }
        el
    }

    pub fn algebra(&self) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(self.blocks.iter().map(Mat::rows).collect())
            .expect("elements have positive blocks")
    }

    pub fn blocks(&self) -> &[Mat<F>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Mat<F> {
        &self.blocks[i]
    }

    pub fn to_coords(&self) -> Coords<F> {
        let mut out = Coords::zero();
        let mut off = 0;
        for m in &self.blocks {
            for (i, v) in m.entries().iter().enumerate() {
                out.add_at(off + i, v);
            }
            off += m.rows() * m.cols();
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Mat<F>, &Mat<F>) -> Mat<F>) -> Result<Self> {
        if self.blocks.len() != other.blocks.len()
            || self.blocks.iter().zip(&other.blocks).any(|(a, b)| a.rows() != b.rows())
        {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Mat::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Mat::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, Mat::mul)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self { blocks: self.blocks.iter().map(Mat::adjoint).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_projection(&self) -> bool {
        self.blocks.iter().all(Mat::is_projection)
    }

    /// Block-diagonal matrix realising the element on `ℂ^{Σ k_i}`.
    pub fn to_concrete(&self) -> Mat<F> {
        Mat::dsum(&self.blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    #[test]
    fn dimensions() {
        let a = MultiMatrixAlgebra::new(vec![2, 3]).unwrap();
        assert_eq!(a.dim(), 13);
        assert_eq!(a.center_dim(), 2);
        assert_eq!(a.locate(4), (1, 0, 0));
        assert_eq!(a.locate(12), (1, 2, 2));
        assert_eq!(a.coord(0, 1, 0), 2);
        assert!(MultiMatrixAlgebra::new(vec![1, 0]).is_err());
        assert_eq!(MultiMatrixAlgebra::zero_algebra().dim(), 0);
    }

    #[test]
    fn tensor_coordinates_roundtrip() {
        let a = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let b = MultiMatrixAlgebra::new(vec![1, 2]).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.block_dims(), &[2, 4, 1, 2]);
        assert_eq!(ab.dim(), a.dim() * b.dim());
        let mut seen = std::collections::BTreeSet::new();
        for x in 0..a.dim() {
            for y in 0..b.dim() {
                let t = a.tensor_coord(&b, x, y, &ab);
                assert_eq!(a.split_tensor_coord(&b, t, &ab), (x, y));
                seen.insert(t);
            }
        }
        assert_eq!(seen.len(), ab.dim());
    }

    #[test]
    fn sparse_product_matches_blockwise() {
        let alg = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let x = Element::<Exact>::new(
            &alg,
            vec![Mat::from_ints(&[&[1, 2], &[0, 3]]), Mat::from_ints(&[&[5]])],
        )
        .unwrap();
        let y = Element::<Exact>::new(
            &alg,
            vec![Mat::from_ints(&[&[0, 1], &[1, 1]]), Mat::from_ints(&[&[-1]])],
        )
        .unwrap();
        let dense = x.mul(&y).unwrap();
        let sparse = alg.multiply(&x.to_coords(), &y.to_coords());
        assert_eq!(Element::from_coords(&alg, &sparse), dense);
        assert_eq!(alg.adjoint(&x.to_coords()), x.adjoint().to_coords());
    }
}
