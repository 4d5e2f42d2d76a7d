use serde::Serialize;

use super::coords::Coords;
use super::multi::{Element, MultiMatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Eliminator, Field, Mat};

/// A linear map between multi-matrix algebras, stored as the images of the
/// source matrix units.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<F> {
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    columns: Vec<Coords<F>>,
}

impl<F: Field> LinearMap<F> {
    pub fn new(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        columns: Vec<Coords<F>>,
    ) -> Result<Self> {
        if columns.len() != source.dim() {
            return Err(Error::DimensionMismatch {
                what: "number of basis images".into(),
                expected: source.dim(),
                found: columns.len(),
            });
        }
        if let Some(bad) = columns.iter().filter_map(Coords::max_index).find(|&i| i >= target.dim()) {
            return Err(Error::DimensionMismatch {
                what: "image coordinate".into(),
                expected: target.dim(),
                found: bad + 1,
            });
        }
        Ok(Self { source, target, columns })
    }

    pub fn from_fn(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        f: impl FnMut(usize) -> Coords<F>,
    ) -> Result<Self> {
        let columns = (0..source.dim()).map(f).collect();
        Self::new(source, target, columns)
    }

    /// From a dense `target_dim × source_dim` coordinate matrix.
    pub fn from_matrix(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        m: &Mat<F>,
    ) -> Result<Self> {
        if m.rows() != target.dim() || m.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                what: "coordinate matrix shape".into(),
                expected: target.dim() * source.dim(),
                found: m.rows() * m.cols(),
            });
        }
        let columns = (0..m.cols()).map(|c| Coords::from_dense(&m.col_vec(c))).collect();
        Self::new(source, target, columns)
    }

    /// The map `x ↦ (U_j x_{σ(j)} U_j*)_j`: target block `j` copies source
    /// block `σ(j)`, conjugated by `U_j` when given.
    pub fn from_block_map(
        source: MultiMatrixAlgebra,
        target: MultiMatrixAlgebra,
        sigma: &[usize],
        unitaries: Option<&[Mat<F>]>,
    ) -> Result<Self> {
        if sigma.len() != target.num_blocks() {
            return Err(Error::DimensionMismatch {
                what: "block map length".into(),
                expected: target.num_blocks(),
                found: sigma.len(),
            });
        }
        for (j, &i) in sigma.iter().enumerate() {
            if i >= source.num_blocks() || source.block_dim(i) != target.block_dim(j) {
                return Err(Error::InvalidArgument(format!(
                    "target block {j} cannot copy source block {i}"
                )));
            }
        }
        let mut columns = vec![Coords::zero(); source.dim()];
        for (j, &i) in sigma.iter().enumerate() {
            let k = source.block_dim(i);
            for r in 0..k {
                for c in 0..k {
                    let image = match unitaries {
                        None => Mat::unit(k, r, c),
                        Some(us) => {
                            let u = &us[j];
                            u.mul(&Mat::unit(k, r, c)).mul(&u.adjoint())
                        }
                    };
                    for (idx, v) in image.entries().iter().enumerate() {
                        columns[source.coord(i, r, c)].add_at(target.coord(j, idx / k, idx % k), v);
                    }
                }
            }
        }
        Self::new(source, target, columns)
    }

    pub fn identity(algebra: &MultiMatrixAlgebra) -> Self {
        Self {
            source: algebra.clone(),
            target: algebra.clone(),
            columns: (0..algebra.dim()).map(Coords::unit).collect(),
        }
    }

    pub fn source(&self) -> &MultiMatrixAlgebra {
        &self.source
    }

    pub fn target(&self) -> &MultiMatrixAlgebra {
        &self.target
    }

    /// Image of the `i`-th source matrix unit.
    pub fn column(&self, i: usize) -> &Coords<F> {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Coords<F>] {
        &self.columns
    }

    pub fn apply(&self, x: &Coords<F>) -> Coords<F> {
        let mut out = Coords::zero();
        for (i, v) in x.iter() {
            out.add_scaled(&self.columns[i], v);
        }
        out
    }

    pub fn apply_element(&self, x: &Element<F>) -> Element<F> {
        Element::from_coords(&self.target, &self.apply(&x.to_coords()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target != self.source {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self {
            source: inner.source.clone(),
            target: self.target.clone(),
            columns: inner.columns.iter().map(|c| self.apply(c)).collect(),
        })
    }

    /// `f ⊗ g : A ⊗ B → C ⊗ D`.
    pub fn tensor(&self, other: &Self) -> Self {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let columns = (0..source.dim())
            .map(|coord| {
                let (a, b) = self.source.split_tensor_coord(&other.source, coord, &source);
                let mut out = Coords::zero();
                for (x, vx) in self.columns[a].iter() {
                    for (y, vy) in other.columns[b].iter() {
                        out.add_at(self.target.tensor_coord(&other.target, x, y, &target), &vx.mul(vy));
                    }
                }
                out
            })
            .collect();
        Self { source, target, columns }
    }

    /// Multiply every image by a fixed element of the target on the left.
    pub fn cut(&self, projection: &Coords<F>) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            columns: self.columns.iter().map(|c| self.target.multiply(projection, c)).collect(),
        }
    }

    /// Same coordinates, reinterpreted on other algebras of the same shape.
    pub fn reinterpret(&self, source: MultiMatrixAlgebra, target: MultiMatrixAlgebra) -> Result<Self> {
        Self::new(source, target, self.columns.clone())
    }

    pub fn to_matrix(&self) -> Mat<F> {
        let mut m = Mat::zeros(self.target.dim(), self.source.dim());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.target.dim());
        for col in &self.columns {
            elim.insert(col.clone().into_row());
        }
        elim.rank()
    }

    /// First source basis element on which the two maps differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        if self.source != other.source || self.target != other.target {
            return Some(0);
        }
        (0..self.columns.len()).find(|&i| !self.columns[i].approx_eq(&other.columns[i]))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// The same map viewed as landing in an algebra whose leading blocks are
    /// those of the current target.
    pub fn widen_target(&self, target: MultiMatrixAlgebra) -> Result<Self> {
        if target.block_dims().get(..self.target.num_blocks()) != Some(self.target.block_dims()) {
            return Err(Error::AlgebraMismatch);
        }
        Self::new(self.source.clone(), target, self.columns.clone())
    }

    /// Inverse of [`widen_target`](Self::widen_target): keeps the leading
    /// coordinates, failing if any image has mass outside them.
    pub fn narrow_target(&self, target: MultiMatrixAlgebra) -> Result<Self> {
        if self.target.block_dims().get(..target.num_blocks()) != Some(target.block_dims()) {
            return Err(Error::AlgebraMismatch);
        }
        if let Some(basis) = self.columns.iter().position(|c| c.max_index().is_some_and(|i| i >= target.dim())) {
            return Err(Error::Inconsistent(format!("image of basis {basis} leaves the leading blocks")));
        }
        Self::new(self.source.clone(), target, self.columns.clone())
    }

    /// Restriction to the given source blocks, as a map from their direct sum.
    pub fn restrict_to_blocks(&self, blocks: &[usize]) -> Self {
        let source =
            MultiMatrixAlgebra::new(blocks.iter().map(|&b| self.source.block_dim(b)).collect())
                .expect("positive blocks");
        let columns = blocks
            .iter()
            .flat_map(|&b| self.source.block_range(b))
            .map(|c| self.columns[c].clone())
            .collect();
        Self { source, target: self.target.clone(), columns }
    }
}

/// `(f ⊗ g)(x)` computed term by term, without materializing `f ⊗ g`.
pub fn apply_tensor<F: Field>(f: &LinearMap<F>, g: &LinearMap<F>, x: &Coords<F>) -> Coords<F> {
    let source = f.source().tensor(g.source());
    let target = f.target().tensor(g.target());
    let mut out = Coords::zero();
    for (coord, v) in x.iter() {
        let (a, b) = f.source().split_tensor_coord(g.source(), coord, &source);
        for (y1, v1) in f.column(a).iter() {
            let s = v.mul(v1);
            for (y2, v2) in g.column(b).iter() {
                out.add_at(f.target().tensor_coord(g.target(), y1, y2, &target), &s.mul(v2));
            }
        }
    }
    out
}

/// Whether a map respects products in order or in reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicativity {
    Homomorphism,
    AntiHomomorphism,
}

/// Properties established by [`inspect_map`]. A flag is only `true` after
/// the corresponding check passed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomFlags {
    pub linear: bool,
    pub star: bool,
    pub multiplicative: bool,
    pub anti_multiplicative: bool,
    pub unital: bool,
    pub surjective: bool,
    pub injective: bool,
}

/// Flags plus the first witness for each failed law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapInspection {
    pub flags: HomFlags,
    pub rank: usize,
    pub star_violation: Option<usize>,
    pub mult_violation: Option<(usize, usize)>,
    pub anti_violation: Option<(usize, usize)>,
}

fn star_violation<F: Field>(map: &LinearMap<F>) -> Option<usize> {
    let (s, t) = (map.source(), map.target());
    (0..s.dim()).find(|&c| {
        let image_of_adjoint = map.column(s.transpose_coord(c));
        !t.adjoint(map.column(c)).approx_eq(image_of_adjoint)
    })
}

/// Checks `h(x)h(y) = h(xy)` (or `h(y)h(x)` when `anti`).
///
/// Inside each block the matrix-unit relations are checked on all pairs; the
/// images of different blocks are orthogonal iff the images of the block
/// identities sum to a projection, which takes a single product.
fn product_violation<F: Field>(map: &LinearMap<F>, anti: bool) -> Option<(usize, usize)> {
    let (s, t) = (map.source(), map.target());
    let prod = |x: &Coords<F>, y: &Coords<F>| if anti { t.multiply(y, x) } else { t.multiply(x, y) };
    for b in 0..s.num_blocks() {
        let k = s.block_dim(b);
        for r in 0..k {
            for c in 0..k {
                let left = s.coord(b, r, c);
                for r2 in 0..k {
                    for c2 in 0..k {
                        let right = s.coord(b, r2, c2);
                        let expected =
                            if c == r2 { map.column(s.coord(b, r, c2)).clone() } else { Coords::zero() };
                        if !prod(map.column(left), map.column(right)).approx_eq(&expected) {
                            return Some((left, right));
                        }
                    }
                }
            }
        }
    }
    let units: Vec<Coords<F>> =
        (0..s.num_blocks()).map(|b| map.apply(&s.block_identity(b))).collect();
    let total = units.iter().fold(Coords::zero(), |acc, u| acc.add(u));
    if t.multiply(&total, &total).approx_eq(&total) {
        return None;
    }
    // locate a pair of diagonal units from different blocks with nonzero product
    for b1 in 0..s.num_blocks() {
        for b2 in 0..s.num_blocks() {
            if b1 == b2 || t.multiply(&units[b1], &units[b2]).is_zero() {
                continue;
            }
            for r1 in 0..s.block_dim(b1) {
                for r2 in 0..s.block_dim(b2) {
                    let (x, y) = (s.coord(b1, r1, r1), s.coord(b2, r2, r2));
                    if !prod(map.column(x), map.column(y)).is_zero() {
                        return Some((x, y));
                    }
                }
            }
        }
    }
    // a block unit that is not itself a projection was already caught above;
    // reaching here means the diagonal units are not orthogonal as a family
    Some((0, 0))
}

/// Evaluate every structural property of a linear map.
pub fn inspect_map<F: Field>(map: &LinearMap<F>) -> MapInspection {
    let star = star_violation(map);
    let mult = product_violation(map, false);
    let anti = product_violation(map, true);
    let unital = map.apply(&map.source().identity()).approx_eq(&map.target().identity());
    let rank = map.rank();
    MapInspection {
        flags: HomFlags {
            linear: true,
            star: star.is_none(),
            multiplicative: mult.is_none(),
            anti_multiplicative: anti.is_none(),
            unital,
            surjective: rank == map.target().dim(),
            injective: rank == map.source().dim(),
        },
        rank,
        star_violation: star,
        mult_violation: mult,
        anti_violation: anti,
    }
}

/// A linear map verified to be a *-homomorphism or *-antihomomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct StarHom<F> {
    map: LinearMap<F>,
    kind: Multiplicativity,
    flags: HomFlags,
    block_map: Option<Vec<usize>>,
}

impl<F: Field> StarHom<F> {
    pub fn map(&self) -> &LinearMap<F> {
        &self.map
    }

    pub fn into_map(self) -> LinearMap<F> {
        self.map
    }

    pub fn kind(&self) -> Multiplicativity {
        self.kind
    }

    pub fn flags(&self) -> HomFlags {
        self.flags
    }

    pub fn source(&self) -> &MultiMatrixAlgebra {
        self.map.source()
    }

    pub fn target(&self) -> &MultiMatrixAlgebra {
        self.map.target()
    }

    pub fn is_surjective(&self) -> bool {
        self.flags.surjective
    }

    pub fn is_injective(&self) -> bool {
        self.flags.injective
    }

    pub fn is_unital(&self) -> bool {
        self.flags.unital
    }

    /// For surjections: target block `j` is the isomorphic image of source
    /// block `block_map[j]`.
    pub fn block_map(&self) -> Option<&[usize]> {
        self.block_map.as_deref()
    }

    /// Inverse of a bijective *-(anti)homomorphism, computed block by block.
    pub fn inverse(&self) -> Result<Self> {
        let sigma = match (&self.block_map, self.flags.injective) {
            (Some(s), true) => s,
            _ => return Err(Error::Inconsistent("only bijections can be inverted".into())),
        };
        let (src, tgt) = (self.source(), self.target());
        let mut columns = vec![Coords::zero(); tgt.dim()];
        for (j, &i) in sigma.iter().enumerate() {
            // the restriction source block i → target block j is a linear bijection
            let block_src: Vec<usize> = src.block_range(i).collect();
            let block_tgt: Vec<usize> = tgt.block_range(j).collect();
            let n = block_src.len();
            let m = Mat::from_fn(n, n, |r, c| self.map.column(block_src[c]).get(block_tgt[r]));
            let inv = crate::linalg::inverse(&m)
                .ok_or_else(|| Error::Inconsistent(format!("block {i} restriction is singular")))?;
            for (c, &tc) in block_tgt.iter().enumerate() {
                columns[tc] = (0..n).map(|r| (block_src[r], inv.get(r, c).clone())).collect();
            }
        }
        let map = LinearMap::new(tgt.clone(), src.clone(), columns)?;
        classify(map, self.kind)
    }
}

fn classify<F: Field>(map: LinearMap<F>, kind: Multiplicativity) -> Result<StarHom<F>> {
    let inspection = inspect_map(&map);
    if let Some(basis) = inspection.star_violation {
        return Err(Error::NotStar { basis });
    }
    match kind {
        Multiplicativity::Homomorphism => {
            if let Some((left, right)) = inspection.mult_violation {
                return Err(Error::NotMultiplicative { left, right });
            }
        }
        Multiplicativity::AntiHomomorphism => {
            if let Some((left, right)) = inspection.anti_violation {
                return Err(Error::NotAntiMultiplicative { left, right });
            }
        }
    }
    let block_map = if inspection.flags.surjective { Some(surjection_block_map(&map)?) } else { None };
    Ok(StarHom { map, kind, flags: inspection.flags, block_map })
}

/// For a surjective *-(anti)homomorphism every source block is either killed
/// or mapped onto exactly one target block of the same size.
fn surjection_block_map<F: Field>(map: &LinearMap<F>) -> Result<Vec<usize>> {
    let (s, t) = (map.source(), map.target());
    let mut sigma: Vec<Option<usize>> = vec![None; t.num_blocks()];
    for i in 0..s.num_blocks() {
        let unit = map.apply(&s.block_identity(i));
        if unit.is_zero() {
            continue;
        }
        let support = t.block_support(&unit);
        let [j] = support[..] else {
            return Err(Error::Inconsistent(format!("source block {i} spreads over {support:?}")));
        };
        if t.block_dim(j) != s.block_dim(i) || !unit.approx_eq(&t.block_identity(j)) {
            return Err(Error::Inconsistent(format!("source block {i} does not fill target block {j}")));
        }
        if sigma[j].replace(i).is_some() {
            return Err(Error::Inconsistent(format!("target block {j} hit twice")));
        }
    }
    sigma
        .into_iter()
        .enumerate()
        .map(|(j, s)| s.ok_or_else(|| Error::Inconsistent(format!("target block {j} not hit"))))
        .collect()
}

/// Verify that `map` is a *-homomorphism; rejects with the first violated
/// basis element or pair.
pub fn verify_star_hom<F: Field>(map: LinearMap<F>) -> Result<StarHom<F>> {
    classify(map, Multiplicativity::Homomorphism)
}

/// Verify that `map` is a *-antihomomorphism.
pub fn verify_star_antihom<F: Field>(map: LinearMap<F>) -> Result<StarHom<F>> {
    classify(map, Multiplicativity::AntiHomomorphism)
}
