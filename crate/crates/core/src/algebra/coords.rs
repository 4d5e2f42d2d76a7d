use std::collections::btree_map;
use std::collections::BTreeMap;

use crate::linalg::Field;

/// Sparse coordinate vector in the matrix-unit basis of an algebra.
///
/// Zero entries are never stored, so two vectors are equal exactly when
/// their entry lists agree.
#[derive(Clone, Debug, PartialEq)]
pub struct Coords<F> {
    entries: BTreeMap<usize, F>,
}

impl<F: Field> Default for Coords<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Coords<F> {
    pub fn zero() -> Self {
        Self { entries: BTreeMap::new() }
    }

    pub fn unit(index: usize) -> Self {
        Self::single(index, F::one())
    }

    pub fn single(index: usize, value: F) -> Self {
        let mut c = Self::zero();
        c.add_at(index, &value);
        c
    }

    pub fn from_dense(values: &[F]) -> Self {
        let mut c = Self::zero();
        for (i, v) in values.iter().enumerate() {
            c.add_at(i, v);
        }
        c
    }

    pub fn to_dense(&self, dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(); dim];
        for (&i, v) in &self.entries {
            out[i] = v.clone();
        }
        out
    }

    pub fn get(&self, index: usize) -> F {
        self.entries.get(&index).cloned().unwrap_or_else(F::zero)
    }

    /// `self[index] += value`.
    pub fn add_at(&mut self, index: usize, value: &F) {
        if value.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            btree_map::Entry::Vacant(e) => {
                e.insert(value.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(value);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &F) {
        for (&i, v) in &other.entries {
            self.add_at(i, &v.mul(scale));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, v) in &other.entries {
            out.add_at(i, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, v) in &other.entries {
            out.add_at(i, &v.neg());
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero();
        for (&i, v) in &self.entries {
            out.add_at(i, &v.mul(s));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(F::is_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub(crate) fn into_row(self) -> BTreeMap<usize, F> {
        self.entries
    }
}

impl<F: Field> FromIterator<(usize, F)> for Coords<F> {
    fn from_iter<I: IntoIterator<Item = (usize, F)>>(iter: I) -> Self {
        let mut c = Self::zero();
        for (i, v) in iter {
            c.add_at(i, &v);
        }
        c
    }
}
