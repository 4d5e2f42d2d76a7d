use crate::algebra::{apply_tensor, verify_star_antihom, verify_star_hom, Coords, LinearMap, MultiMatrixAlgebra, StarHom};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::projective::ProjectiveSystem;

/// One named law and whether it held.
#[derive(Clone, Debug, PartialEq)]
pub struct LawCheck {
    /// Stable short name, unique within one list of checks.
    pub id: String,
    pub law: String,
    pub outcome: Result<()>,
}

impl LawCheck {
    pub fn new(id: impl Into<String>, law: impl Into<String>, outcome: Result<()>) -> Self {
        Self { id: id.into(), law: law.into(), outcome }
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// First failure in a list of checks.
pub fn first_failure(checks: &[LawCheck]) -> Result<()> {
    checks.iter().find_map(|c| c.outcome.clone().err()).map_or(Ok(()), Err)
}

/// Unverified structure maps on an algebra `M`.
#[derive(Clone, Debug)]
pub struct HopfMaps<F> {
    pub algebra: MultiMatrixAlgebra,
    /// `Δ: M → M ⊗ M`.
    pub coproduct: LinearMap<F>,
    /// `ε: M → ℂ`.
    pub counit: Option<LinearMap<F>>,
    /// `κ: M → M`.
    pub antipode: Option<LinearMap<F>>,
}

/// Structure maps that passed [`verify_hopf`].
#[derive(Clone, Debug)]
pub struct HopfData<F> {
    algebra: MultiMatrixAlgebra,
    coproduct: StarHom<F>,
    counit: Option<StarHom<F>>,
    antipode: Option<StarHom<F>>,
}

impl<F: Field> HopfData<F> {
    /// Assemble without checking the Hopf laws, for stages whose maps are
    /// only known to be homomorphisms.
    pub fn from_parts(
        algebra: MultiMatrixAlgebra,
        coproduct: StarHom<F>,
        counit: Option<StarHom<F>>,
        antipode: Option<StarHom<F>>,
    ) -> Self {
        Self { algebra, coproduct, counit, antipode }
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn coproduct(&self) -> &StarHom<F> {
        &self.coproduct
    }

    pub fn counit(&self) -> Option<&StarHom<F>> {
        self.counit.as_ref()
    }

    pub fn antipode(&self) -> Option<&StarHom<F>> {
        self.antipode.as_ref()
    }

    pub fn to_maps(&self) -> HopfMaps<F> {
        HopfMaps {
            algebra: self.algebra.clone(),
            coproduct: self.coproduct.map().clone(),
            counit: self.counit.as_ref().map(|h| h.map().clone()),
            antipode: self.antipode.as_ref().map(|h| h.map().clone()),
        }
    }
}

fn first_mismatch<F: Field>(
    dim: usize,
    law: &str,
    mut lhs: impl FnMut(usize) -> Coords<F>,
    mut rhs: impl FnMut(usize) -> Coords<F>,
) -> Result<()> {
    match (0..dim).find(|&b| !lhs(b).approx_eq(&rhs(b))) {
        Some(basis) => Err(Error::LawViolated { law: law.into(), basis }),
        None => Ok(()),
    }
}

fn unital_hom<F: Field>(map: &LinearMap<F>) -> Result<StarHom<F>> {
    let h = verify_star_hom(map.clone())?;
    if !h.is_unital() {
        return Err(Error::NotUnital);
    }
    Ok(h)
}

fn shape(map: &LinearMap<impl Field>, source: &MultiMatrixAlgebra, target: &MultiMatrixAlgebra) -> Result<()> {
    if map.source() != source || map.target() != target {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// Every law of a Hopf–von Neumann algebra with optional counit and
/// antipode, each checked on the whole matrix-unit basis.
pub fn check_hopf<F: Field>(h: &HopfMaps<F>) -> Vec<LawCheck> {
    let m = &h.algebra;
    let delta = &h.coproduct;
    let id = LinearMap::identity(m);
    let mut checks = Vec::new();

    let hom = shape(delta, m, &m.tensor(m)).and_then(|_| unital_hom(delta));
    let hom_ok = hom.is_ok();
    checks.push(LawCheck::new("coproduct_hom", "Δ is a unital *-homomorphism", hom.map(|_| ())));
    if !hom_ok {
        return checks;
    }
    checks.push(LawCheck::new(
        "coassociativity",
        "(id ⊗ Δ)Δ = (Δ ⊗ id)Δ",
        first_mismatch(
            m.dim(),
            "(id ⊗ Δ)Δ = (Δ ⊗ id)Δ",
            |b| apply_tensor(&id, delta, delta.column(b)),
            |b| apply_tensor(delta, &id, delta.column(b)),
        ),
    ));
    let rank = delta.rank();
    checks.push(LawCheck::new(
        "coproduct_injective",
        "Δ is injective",
        if rank == m.dim() { Ok(()) } else { Err(Error::Inconsistent(format!("Δ has rank {rank} < {}", m.dim()))) },
    ));

    if let Some(eps) = &h.counit {
        let scalars = MultiMatrixAlgebra::scalars();
        let hom = shape(eps, m, &scalars).and_then(|_| unital_hom(eps));
        let hom_ok = hom.is_ok();
        checks.push(LawCheck::new("counit_hom", "ε is a unital *-homomorphism", hom.map(|_| ())));
        if hom_ok {
            for (slug, law, left) in [("counit_left", "(ε ⊗ id)Δ = id", true), ("counit_right", "(id ⊗ ε)Δ = id", false)] {
                let outcome = first_mismatch(
                    m.dim(),
                    law,
                    |b| {
                        if left {
                            apply_tensor(eps, &id, delta.column(b))
                        } else {
                            apply_tensor(&id, eps, delta.column(b))
                        }
                    },
                    Coords::unit,
                );
                checks.push(LawCheck::new(slug, law, outcome));
            }
        }
    }

    if let Some(kappa) = &h.antipode {
        let anti = shape(kappa, m, m).and_then(|_| verify_star_antihom(kappa.clone()));
        let anti_ok = anti.is_ok();
        checks.push(LawCheck::new("antipode_antihom", "κ is a *-antihomomorphism", anti.map(|_| ())));
        if anti_ok {
            checks.push(LawCheck::new(
                "antipode_involutive",
                "κ ∘ κ = id",
                first_mismatch(m.dim(), "κ ∘ κ = id", |b| kappa.apply(kappa.column(b)), Coords::unit),
            ));
        }
    }
    checks
}

/// Verify the structure maps, rejecting with the first violated law.
pub fn verify_hopf<F: Field>(h: HopfMaps<F>) -> Result<HopfData<F>> {
    first_failure(&check_hopf(&h))?;
    let coproduct = verify_star_hom(h.coproduct)?;
    let counit = h.counit.map(verify_star_hom).transpose()?;
    let antipode = h.antipode.map(verify_star_antihom).transpose()?;
    Ok(HopfData { algebra: h.algebra, coproduct, counit, antipode })
}

/// Compatibility of Hopf structures along a projective system:
/// `(φ_n ⊗ φ_n)Δ_{n+1} = Δ_n φ_n`, `ε_n ∘ φ_n = ε_{n+1}` and
/// `κ_n ∘ φ_n = φ_n ∘ κ_{n+1}`, the last two where present.
pub fn check_hopf_system<F: Field>(s: &ProjectiveSystem<F>, hopfs: &[HopfData<F>]) -> Vec<LawCheck> {
    if hopfs.len() != s.depth() {
        return vec![LawCheck::new(
            "stage_count",
            "one Hopf structure per stage",
            Err(Error::DimensionMismatch { what: "Hopf structures".into(), expected: s.depth(), found: hopfs.len() }),
        )];
    }
    if let Some(i) = (0..s.depth()).find(|&i| hopfs[i].algebra() != s.algebra(i + 1)) {
        return vec![LawCheck::new("stage_algebras", format!("Hopf structure {} lives on M_{}", i + 1, i + 1), Err(Error::AlgebraMismatch))];
    }
    let mut checks = Vec::new();
    for n in 1..s.depth() {
        let phi = s.phi(n).map();
        let (small, big) = (&hopfs[n - 1], &hopfs[n]);
        let law = format!("(φ_{n} ⊗ φ_{n})Δ_{} = Δ_{n} φ_{n}", n + 1);
        let outcome = first_mismatch(
            phi.source().dim(),
            &law,
            |b| apply_tensor(phi, phi, big.coproduct().map().column(b)),
            |b| small.coproduct().map().apply(phi.column(b)),
        );
        checks.push(LawCheck::new(format!("coproduct_{n}"), law, outcome));

        if let (Some(e_small), Some(e_big)) = (small.counit(), big.counit()) {
            let law = format!("ε_{n} ∘ φ_{n} = ε_{}", n + 1);
            let outcome = first_mismatch(
                phi.source().dim(),
                &law,
                |b| e_small.map().apply(phi.column(b)),
                |b| e_big.map().column(b).clone(),
            );
            checks.push(LawCheck::new(format!("counit_{n}"), law, outcome));
        }
        if let (Some(k_small), Some(k_big)) = (small.antipode(), big.antipode()) {
            let law = format!("κ_{n} ∘ φ_{n} = φ_{n} ∘ κ_{}", n + 1);
            let outcome = first_mismatch(
                phi.source().dim(),
                &law,
                |b| k_small.map().apply(phi.column(b)),
                |b| phi.apply(k_big.map().column(b)),
            );
            checks.push(LawCheck::new(format!("antipode_{n}"), law, outcome));
        }
    }
    checks
}

pub fn verify_hopf_system<F: Field>(s: &ProjectiveSystem<F>, hopfs: &[HopfData<F>]) -> Result<()> {
    first_failure(&check_hopf_system(s, hopfs))
}

/// The trivial Hopf algebra `ℂ` with `Δ(1) = 1 ⊗ 1`.
pub fn trivial_hopf<F: Field>() -> HopfData<F> {
    let c = MultiMatrixAlgebra::scalars();
    let id = LinearMap::identity(&c);
    let maps = HopfMaps {
        algebra: c.clone(),
        coproduct: id.reinterpret(c.clone(), c.tensor(&c)).expect("ℂ ⊗ ℂ = ℂ"),
        counit: Some(id.clone()),
        antipode: Some(id),
    };
    verify_hopf(maps).expect("ℂ is a Hopf algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;

    #[test]
    fn trivial_hopf_passes() {
        let h = trivial_hopf::<Exact>();
        assert!(check_hopf(&h.to_maps()).iter().all(LawCheck::passed));
    }

    #[test]
    fn non_unital_coproduct_is_rejected() {
        let c2 = MultiMatrixAlgebra::commutative(2);
        // e_0 ↦ e_0 ⊗ e_0, e_1 ↦ e_1 ⊗ e_1 misses the cross terms of 1 ⊗ 1
        let delta = LinearMap::<Exact>::from_fn(c2.clone(), c2.tensor(&c2), |b| Coords::unit(3 * b)).unwrap();
        let maps = HopfMaps { algebra: c2, coproduct: delta, counit: None, antipode: None };
        assert_eq!(verify_hopf(maps).unwrap_err(), Error::NotUnital);
    }

    #[test]
    fn trivial_constant_system_passes() {
        let c = MultiMatrixAlgebra::scalars();
        let s = ProjectiveSystem::<Exact>::constant(&c, 3).unwrap();
        let hopfs = vec![trivial_hopf(); 3];
        let checks = check_hopf_system(&s, &hopfs);
        assert_eq!(checks.len(), 6);
        assert!(verify_hopf_system(&s, &hopfs).is_ok());
    }
}
