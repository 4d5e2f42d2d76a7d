use std::collections::BTreeSet;

use crate::algebra::{
    kernel_central_projection, verify_star_hom, CentralProjection, Coords, LinearMap,
    MultiMatrixAlgebra, StarHom,
};
use crate::error::{Error, Result};
use crate::linalg::{Eliminator, Field};

/// A finite tower `M_1 ← M_2 ← … ← M_N` of multi-matrix algebras joined by
/// surjective *-homomorphisms `φ_n: M_{n+1} → M_n`.
///
/// Stages are numbered from 1 in every accessor taking a stage.
#[derive(Clone, Debug)]
pub struct ProjectiveSystem<F> {
    algebras: Vec<MultiMatrixAlgebra>,
    connecting: Vec<StarHom<F>>,
}

impl<F: Field> ProjectiveSystem<F> {
    /// `maps[i]` is `φ_{i+1}: M_{i+2} → M_{i+1}`.
    pub fn new(algebras: Vec<MultiMatrixAlgebra>, maps: Vec<LinearMap<F>>) -> Result<Self> {
        if algebras.is_empty() {
            return Err(Error::InvalidArgument("a system needs at least one algebra".into()));
        }
        if maps.len() + 1 != algebras.len() {
            return Err(Error::DimensionMismatch {
                what: "number of connecting maps".into(),
                expected: algebras.len() - 1,
                found: maps.len(),
            });
        }
        let mut connecting = Vec::with_capacity(maps.len());
        for (i, map) in maps.into_iter().enumerate() {
            if map.source() != &algebras[i + 1] || map.target() != &algebras[i] {
                return Err(Error::AlgebraMismatch);
            }
            let h = verify_star_hom(map)?;
            if !h.is_surjective() {
                return Err(Error::NotSurjective { rank: h.map().rank(), target: h.target().dim() });
            }
            connecting.push(h);
        }
        Ok(Self { algebras, connecting })
    }

    /// `W ← W ← … ← W` with identity connecting maps.
    pub fn constant(algebra: &MultiMatrixAlgebra, depth: usize) -> Result<Self> {
        let depth = depth.max(1);
        Self::new(vec![algebra.clone(); depth], vec![LinearMap::identity(algebra); depth - 1])
    }

    pub fn depth(&self) -> usize {
        self.algebras.len()
    }

    pub fn algebras(&self) -> &[MultiMatrixAlgebra] {
        &self.algebras
    }

    /// `M_n`.
    pub fn algebra(&self, n: usize) -> &MultiMatrixAlgebra {
        &self.algebras[n - 1]
    }

    /// `φ_n: M_{n+1} → M_n`.
    pub fn phi(&self, n: usize) -> &StarHom<F> {
        &self.connecting[n - 1]
    }

    /// Images of `x ∈ M_n` under `φ_{k→n} = φ_k ∘ … ∘ φ_{n-1}` for `k = 1..=n`.
    pub fn push_down(&self, n: usize, x: &Coords<F>) -> Vec<Coords<F>> {
        let mut out = vec![Coords::zero(); n];
        out[n - 1] = x.clone();
        for k in (1..n).rev() {
            out[k - 1] = self.phi(k).map().apply(&out[k]);
        }
        out
    }

    /// `(M_n ⊗ M_n, φ_n ⊗ φ_n)`.
    pub fn tensor_square(&self) -> Result<Self> {
        let algebras = self.algebras.iter().map(|a| a.tensor(a)).collect();
        let maps = self.connecting.iter().map(|h| h.map().tensor(h.map())).collect();
        Self::new(algebras, maps)
    }

    /// `(W ⊗ M_n, id_W ⊗ φ_n)`.
    pub fn left_tensor(&self, w: &MultiMatrixAlgebra) -> Result<Self> {
        let id = LinearMap::identity(w);
        let algebras = self.algebras.iter().map(|a| w.tensor(a)).collect();
        let maps = self.connecting.iter().map(|h| id.tensor(h.map())).collect();
        Self::new(algebras, maps)
    }
}

/// The splitting `M_n ≅ B_1 ⊕ … ⊕ B_n` with `B_n = r_n M_n`.
#[derive(Clone, Debug)]
pub struct Decomposition<F> {
    r: Vec<CentralProjection>,
    blocks: Vec<MultiMatrixAlgebra>,
    gamma: Vec<StarHom<F>>,
}

impl<F: Field> Decomposition<F> {
    /// `r_n` for `n ≥ 2`: the central projection with `ker φ_{n-1} = r_n M_n`.
    /// For `n = 1` this is the identity of `M_1`.
    pub fn r(&self, n: usize) -> &CentralProjection {
        &self.r[n - 1]
    }

    /// `B_1, …, B_N`.
    pub fn blocks(&self) -> &[MultiMatrixAlgebra] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(MultiMatrixAlgebra::dim).collect()
    }

    /// The recorded isomorphism `γ_n: M_n → B_1 ⊕ … ⊕ B_n`.
    pub fn gamma(&self, n: usize) -> &StarHom<F> {
        &self.gamma[n - 1]
    }

    /// `B_1 ⊕ … ⊕ B_n`.
    pub fn partial_sum(&self, n: usize) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::direct_sum(&self.blocks[..n])
    }
}

/// Kernel projections, kernel blocks and the isomorphisms
/// `x ↦ (r_k φ_{k→n}(x))_{k ≤ n}`.
pub fn decompose_system<F: Field>(s: &ProjectiveSystem<F>) -> Result<Decomposition<F>> {
    let n_max = s.depth();
    let mut r = Vec::with_capacity(n_max);
    r.push(CentralProjection::one(s.algebra(1)));
    for n in 2..=n_max {
        r.push(kernel_central_projection(s.phi(n - 1))?);
    }
    let blocks: Vec<MultiMatrixAlgebra> = r.iter().map(CentralProjection::corner_algebra).collect();

    let mut gamma = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let target = MultiMatrixAlgebra::direct_sum(&blocks[..n]);
        let source = s.algebra(n);
        let map = LinearMap::from_fn(source.clone(), target, |c| {
            let mut out = Coords::zero();
            let mut offset = 0;
            for (k, x) in s.push_down(n, &Coords::unit(c)).iter().enumerate() {
                for (coord, v) in corner_coords(s.algebra(k + 1), &r[k], x).iter() {
                    out.add_at(offset + coord, v);
                }
                offset += blocks[k].dim();
            }
            out
        })?;
        let g = verify_star_hom(map)?;
        if !(g.is_injective() && g.is_surjective()) {
            return Err(Error::Inconsistent(format!("decomposition of stage {n} is not an isomorphism")));
        }
        gamma.push(g);
    }
    Ok(Decomposition { r, blocks, gamma })
}

/// Coordinates of `r·x` in the corner algebra of `r`.
fn corner_coords<F: Field>(algebra: &MultiMatrixAlgebra, r: &CentralProjection, x: &Coords<F>) -> Coords<F> {
    let corner = r.corner_algebra();
    let position: Vec<Option<usize>> = (0..algebra.num_blocks())
        .map(|b| r.support().iter().position(|&s| s == b))
        .collect();
    x.iter()
        .filter_map(|(c, v)| {
            let (b, row, col) = algebra.locate(c);
            position[b].map(|p| (corner.coord(p, row, col), v.clone()))
        })
        .collect()
}

/// The limit of a finite tower, materialized as `B_1 ⊕ … ⊕ B_N`.
#[derive(Clone, Debug)]
pub struct TruncatedLimit<F> {
    system: ProjectiveSystem<F>,
    decomposition: Decomposition<F>,
    limit: MultiMatrixAlgebra,
    z: Vec<CentralProjection>,
    psi: Vec<StarHom<F>>,
    iota: Vec<StarHom<F>>,
}

/// Build the limit and run every structural check on it.
pub fn build_truncated_limit<F: Field>(system: &ProjectiveSystem<F>) -> Result<TruncatedLimit<F>> {
    let decomposition = decompose_system(system)?;
    let n_max = system.depth();
    let limit = decomposition.partial_sum(n_max);

    let mut psi = vec![decomposition.gamma(n_max).inverse()?];
    for n in (1..n_max).rev() {
        let next = psi.last().expect("nonempty");
        let h = verify_star_hom(system.phi(n).map().compose(next.map())?)?;
        if !h.is_surjective() {
            return Err(Error::Inconsistent(format!("ψ_{n} is not surjective")));
        }
        psi.push(h);
    }
    psi.reverse();

    let mut z = Vec::with_capacity(n_max);
    let mut count = 0;
    for n in 1..=n_max {
        count += decomposition.blocks[n - 1].num_blocks();
        z.push(CentralProjection::new(limit.clone(), (0..count).collect::<BTreeSet<_>>())?);
    }

    let mut iota = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let support: Vec<usize> = z[n - 1].support().iter().copied().collect();
        let restricted = verify_star_hom(psi[n - 1].map().restrict_to_blocks(&support))?;
        let inverse = restricted.inverse()?;
        iota.push(verify_star_hom(inverse.map().widen_target(limit.clone())?)?);
    }

    let t = TruncatedLimit { system: system.clone(), decomposition, limit, z, psi, iota };
    t.verify_sections()?;
    t.verify_iota_lemma()?;
    t.verify_compatible_sequences()?;
    Ok(t)
}

impl<F: Field> TruncatedLimit<F> {
    pub fn system(&self) -> &ProjectiveSystem<F> {
        &self.system
    }

    pub fn decomposition(&self) -> &Decomposition<F> {
        &self.decomposition
    }

    pub fn depth(&self) -> usize {
        self.system.depth()
    }

    pub fn limit_algebra(&self) -> &MultiMatrixAlgebra {
        &self.limit
    }

    /// `z_n`, the support of `B_1 ⊕ … ⊕ B_n` in the limit.
    pub fn z(&self, n: usize) -> &CentralProjection {
        &self.z[n - 1]
    }

    /// `ψ_n`: limit → `M_n`.
    pub fn psi(&self, n: usize) -> &StarHom<F> {
        &self.psi[n - 1]
    }

    /// `ι_n`: `M_n` → limit.
    pub fn iota(&self, n: usize) -> &StarHom<F> {
        &self.iota[n - 1]
    }

    /// `ψ_n ∘ ι_n = id`, `ι_n ∘ ψ_n = z_n ·` and `ker ψ_n = (1 − z_n)·limit`.
    pub fn verify_sections(&self) -> Result<()> {
        for n in 1..=self.depth() {
            let (psi, iota) = (self.psi(n).map(), self.iota(n).map());
            if let Some(basis) = psi.compose(iota)?.first_difference(&LinearMap::identity(self.system.algebra(n))) {
                return Err(Error::LawViolated { law: format!("ψ_{n} ∘ ι_{n} = id"), basis });
            }
            let z = self.z(n).to_coords();
            let cut = LinearMap::identity(&self.limit).cut(&z);
            if let Some(basis) = iota.compose(psi)?.first_difference(&cut) {
                return Err(Error::LawViolated { law: format!("ι_{n} ∘ ψ_{n} = z_{n} ·"), basis });
            }
            for b in self.z(n).complement().support() {
                if !psi.apply(&self.limit.block_identity(*b)).is_zero() {
                    return Err(Error::LawViolated {
                        law: format!("ker ψ_{n} = (1 − z_{n}) limit"),
                        basis: self.limit.block_range(*b).start,
                    });
                }
            }
        }
        Ok(())
    }

    /// `ι_n(φ_n(x)) = z_n ι_{n+1}(x)` on a basis of every `M_{n+1}`.
    pub fn verify_iota_lemma(&self) -> Result<()> {
        for n in 1..self.depth() {
            let z = self.z(n).to_coords::<F>();
            let phi = self.system.phi(n).map();
            for x in 0..self.system.algebra(n + 1).dim() {
                let left = self.iota(n).map().apply(phi.column(x));
                let right = self.limit.multiply(&z, self.iota(n + 1).map().column(x));
                if !left.approx_eq(&right) {
                    return Err(Error::LawViolated { law: format!("ι_{n} ∘ φ_{n} = z_{n} ι_{}", n + 1), basis: x });
                }
            }
        }
        Ok(())
    }

    /// `m ↦ (ψ_1(m), …, ψ_N(m))` is a bijection onto the compatible
    /// sequences `{(m_n) : φ_n(m_{n+1}) = m_n}`.
    pub fn verify_compatible_sequences(&self) -> Result<()> {
        let n_max = self.depth();
        for n in 1..n_max {
            let expected = self.system.phi(n).map().compose(self.psi(n + 1).map())?;
            if let Some(basis) = expected.first_difference(self.psi(n).map()) {
                return Err(Error::LawViolated { law: format!("φ_{n} ∘ ψ_{} = ψ_{n}", n + 1), basis });
            }
        }
        let offsets: Vec<usize> = self
            .system
            .algebras()
            .iter()
            .scan(0, |acc, a| {
                let o = *acc;
                *acc += a.dim();
                Some(o)
            })
            .collect();
        let offsets = &offsets;
        let total: usize = self.system.algebras().iter().map(MultiMatrixAlgebra::dim).sum();
        let mut elim = Eliminator::new(total);
        for m in 0..self.limit.dim() {
            let row = (1..=n_max)
                .flat_map(|n| {
                    self.psi(n).map().column(m).iter().map(move |(c, v)| (offsets[n - 1] + c, v.clone()))
                })
                .collect();
            elim.insert(row);
        }
        // a compatible sequence is determined by its top entry
        let compatible_dim = self.system.algebra(n_max).dim();
        if elim.rank() != self.limit.dim() || self.limit.dim() != compatible_dim {
            return Err(Error::Inconsistent(format!(
                "sequence map has rank {} on a limit of dimension {} against {} compatible dimensions",
                elim.rank(),
                self.limit.dim(),
                compatible_dim
            )));
        }
        Ok(())
    }
}
