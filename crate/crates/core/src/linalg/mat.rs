use std::fmt;

use super::scalar::Field;

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    /// Matrix unit `e_ij` of size `n×n` (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, F::one());
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Shorthand for small integer matrices.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| F::from_ratio(x, 1)).collect())
                .collect(),
        )
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<F>) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row_vec(&self, r: usize) -> Vec<F> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Self {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(F::neg).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Entrywise equality under the field's notion of equality.
    pub fn approx_eq(&self, rhs: &Self) -> bool {
        self.rows == rhs.rows
            && self.cols == rhs.cols
            && self.data.iter().zip(&rhs.data).all(|(a, b)| a.approx_eq(b))
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint())
    }

    /// `P = P* = P²`.
    pub fn is_projection(&self) -> bool {
        self.is_self_adjoint() && self.mul(self).approx_eq(self)
    }

    pub fn commutes_with(&self, rhs: &Self) -> bool {
        self.mul(rhs).approx_eq(&rhs.mul(self))
    }

    /// `I - P` for a square matrix.
    pub fn complement(&self) -> Self {
        Self::identity(self.rows).sub(self)
    }

    /// Kronecker product: block `(i, j)` of the result is `a_ij · b`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (rr, rc) = (rhs.rows, rhs.cols);
        let mut out = Self::zeros(self.rows * rr, self.cols * rc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rr {
                    for l in 0..rc {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rr + k, j * rc + l, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal direct sum. Blocks must be square.
    pub fn dsum(blocks: &[Self]) -> Self {
        assert!(blocks.iter().all(Self::is_square), "dsum needs square blocks");
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(off + r, off + c, b.get(r, c).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Square sub-block starting at `(off, off)`.
    pub fn sub_block(&self, off: usize, size: usize) -> Self {
        Self::from_fn(size, size, |r, c| self.get(off + r, off + c).clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(mats: &[Self]) -> Self {
        let rows = mats.first().map_or(0, |m| m.rows);
        assert!(mats.iter().all(|m| m.rows == rows), "hcat row mismatch");
        let cols = mats.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for m in mats {
            for r in 0..rows {
                for c in 0..m.cols {
                    out.set(r, off + c, m.get(r, c).clone());
                }
            }
            off += m.cols;
        }
        out
    }

    /// Row-major flattening, used as coordinates in linear solves.
    pub fn vectorize(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_vector(rows: usize, cols: usize, v: Vec<F>) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self { rows, cols, data: v }
    }
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    type M = Mat<Exact>;

    #[test]
    fn kron_identity_and_units() {
        assert_eq!(M::identity(2).kron(&M::identity(3)), M::identity(6));
        assert_eq!(M::unit(2, 0, 0).kron(&M::unit(2, 0, 0)), M::unit(4, 0, 0));
    }

    #[test]
    fn kron_matches_entrywise_expansion() {
        let a = M::from_rows(vec![
            vec![Exact::from_ratio(1, 2), Exact::from_ratio(-3, 1)],
            vec![Exact::from_ratio(0, 1), Exact::from_ratio(5, 7)],
        ]);
        let b = M::from_rows(vec![
            vec![Exact::from_ratio(2, 1), Exact::from_ratio(1, 3)],
            vec![Exact::from_ratio(-1, 4), Exact::from_ratio(1, 1)],
        ]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k.get(2 * i + p, 2 * j + q), &a.get(i, j).mul(b.get(p, q)));
                    }
                }
            }
        }
    }

    #[test]
    fn dsum_examples() {
        assert_eq!(M::dsum(&[M::identity(1), M::identity(2)]), M::identity(3));
        let a = M::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(M::dsum(&[a.clone()]), a);
        let d = M::dsum(&[M::unit(2, 0, 0), M::zeros(1, 1)]);
        assert_eq!(d, M::from_ints(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]));
        assert_eq!(d.trace(), Exact::one());
    }

    #[test]
    fn adjoint_conjugates() {
        let a = M::from_rows(vec![vec![Exact::i(), Exact::from_ratio(2, 1)]]);
        let adj = a.adjoint();
        assert_eq!((adj.rows(), adj.cols()), (2, 1));
        assert_eq!(adj.get(0, 0), &Exact::i().neg());
        assert_eq!(adj.adjoint(), a);
    }

    #[test]
    fn projection_predicates() {
        assert!(M::unit(3, 1, 1).is_projection());
        assert!(!M::unit(3, 0, 1).is_projection());
        let half = Exact::from_ratio(1, 2);
        let p = M::from_rows(vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]);
        assert!(p.is_projection());
        assert!(p.complement().is_projection());
    }
}
