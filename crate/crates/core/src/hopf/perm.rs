use std::collections::HashMap;

use itertools::Itertools;

/// `S_n` with its elements listed in lexicographic order of their one-line
/// notation, so the identity has index 0.
///
/// A permutation `σ` is stored as the vector `[σ(0), …, σ(n-1)]`, and the
/// product is composition: `(στ)(x) = σ(τ(x))`.
#[derive(Clone, Debug)]
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        let elements: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Self { n, elements, index }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `σ ∘ τ`.
    pub fn compose(&self, sigma: usize, tau: usize) -> usize {
        let (s, t) = (&self.elements[sigma], &self.elements[tau]);
        self.index[&t.iter().map(|&x| s[x]).collect::<Vec<_>>()]
    }

    pub fn inverse(&self, sigma: usize) -> usize {
        let s = &self.elements[sigma];
        let mut inv = vec![0; self.n];
        for (x, &y) in s.iter().enumerate() {
            inv[y] = x;
        }
        self.index[&inv]
    }

    /// Index in `S_{n+1}` of `σ` extended by fixing the new last point.
    pub fn embed(&self, sigma: usize, larger: &SymmetricGroup) -> usize {
        let mut p = self.elements[sigma].clone();
        p.push(self.n);
        larger.index[&p]
    }

    /// For `σ ∈ S_n` fixing its last point, the restricted permutation in
    /// `S_{n-1}`.
    pub fn restrict(&self, sigma: usize, smaller: &SymmetricGroup) -> Option<usize> {
        let p = &self.elements[sigma];
        match p.split_last() {
            Some((&last, rest)) if last == self.n - 1 => smaller.index_of(rest),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_identity() {
        for (n, order) in [(1, 1), (2, 2), (3, 6), (4, 24)] {
            let g = SymmetricGroup::new(n);
            assert_eq!(g.order(), order);
            assert_eq!(g.element(0), (0..n).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let g = SymmetricGroup::new(3);
        let swap01 = g.index_of(&[1, 0, 2]).unwrap();
        let cycle = g.index_of(&[1, 2, 0]).unwrap();
        // cycle then swap: 0 → 1 → 0, 1 → 2 → 2, 2 → 0 → 1
        assert_eq!(g.element(g.compose(swap01, cycle)), &[0, 2, 1]);
        assert_eq!(g.compose(cycle, g.inverse(cycle)), 0);
    }

    #[test]
    fn embed_then_restrict() {
        let (small, big) = (SymmetricGroup::new(3), SymmetricGroup::new(4));
        for s in 0..small.order() {
            assert_eq!(big.restrict(small.embed(s, &big), &small), Some(s));
        }
        let moving = (0..big.order()).filter(|&s| big.restrict(s, &small).is_none()).count();
        assert_eq!(moving, 18);
    }
}
