use super::laws::{check_hopf, check_hopf_system, first_failure, verify_hopf, HopfData, HopfMaps, LawCheck};
use crate::algebra::{apply_tensor, verify_star_hom, Coords, LinearMap, MultiMatrixAlgebra, StarHom};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::projective::{build_truncated_limit, lift_family_antip, ProjectiveSystem, TruncatedLimit};

/// Hopf structure induced on a truncated limit, with every check run while
/// building it.
#[derive(Clone, Debug)]
pub struct LimitHopf<F> {
    pub hopf: HopfData<F>,
    pub checks: Vec<LawCheck>,
}

fn agree<F: Field>(id: String, law: String, left: &LinearMap<F>, right: &LinearMap<F>) -> LawCheck {
    let outcome = match left.first_difference(right) {
        Some(basis) => Err(Error::LawViolated { law: law.clone(), basis }),
        None => Ok(()),
    };
    LawCheck::new(id, law, outcome)
}

/// `Δ`, `ε` and `κ` on the limit from compatible structures on the stages.
///
/// The coproduct is the lift of `(Δ_n)` into the limit of the tensor-square
/// system `(M_n ⊗ M_n, φ_n ⊗ φ_n)`, transported to `limit ⊗ limit`; the counit
/// is the lift into the constant system `ℂ`; the antipode is the lift of
/// `(κ_n)` from the system to itself.
pub fn limit_hopf<F: Field>(t: &TruncatedLimit<F>, hopfs: &[HopfData<F>]) -> Result<LimitHopf<F>> {
    let s = t.system();
    let mut checks = check_hopf_system(s, hopfs);
    first_failure(&checks)?;
    let depth = t.depth();
    let l = t.limit_algebra();
    let ll = l.tensor(l);

    let squares = build_truncated_limit(&s.tensor_square()?)?;
    let deltas: Vec<LinearMap<F>> = hopfs.iter().map(|h| h.coproduct().map().clone()).collect();
    let lifted = lift_family_antip(t, &squares, &deltas)?;
    let iota_n = t.iota(depth).map();
    let transport = iota_n.tensor(iota_n).compose(squares.psi(depth).map())?;
    let delta = transport.compose(lifted.map())?.reinterpret(l.clone(), ll.clone())?;

    for n in 1..=depth {
        let psi = t.psi(n).map();
        let lhs = hopfs[n - 1].coproduct().map().compose(psi)?;
        let rhs = LinearMap::new(
            l.clone(),
            lhs.target().clone(),
            (0..l.dim()).map(|b| apply_tensor(psi, psi, delta.column(b))).collect(),
        )?;
        checks.push(agree(format!("cop_{n}"), format!("Δ_{n} ψ_{n} = (ψ_{n} ⊗ ψ_{n})Δ"), &lhs, &rhs));
    }
    let psi_n = t.psi(depth).map();
    let alternative = iota_n.tensor(iota_n).compose(&hopfs[depth - 1].coproduct().map().compose(psi_n)?)?;
    checks.push(agree("coproduct_unique".into(), "Δ = (ι_N ⊗ ι_N) Δ_N ψ_N".into(), &delta, &alternative.reinterpret(l.clone(), ll)?));
    if hopfs.iter().all(|h| h.coproduct().is_injective()) {
        let rank = delta.rank();
        checks.push(LawCheck::new(
            "coproduct_injective_limit",
            "Δ is injective when every Δ_n is",
            if rank == l.dim() { Ok(()) } else { Err(Error::Inconsistent(format!("Δ has rank {rank}"))) },
        ));
    }

    let counit = if hopfs.iter().all(|h| h.counit().is_some()) {
        let scalars = MultiMatrixAlgebra::scalars();
        let constant = build_truncated_limit(&ProjectiveSystem::constant(&scalars, depth)?)?;
        let epsilons: Vec<LinearMap<F>> = hopfs.iter().map(|h| h.counit().expect("checked").map().clone()).collect();
        let lifted = lift_family_antip(t, &constant, &epsilons)?;
        let eps = lifted.map().reinterpret(l.clone(), scalars.clone())?;
        for n in 1..=depth {
            let lhs = hopfs[n - 1].counit().expect("checked").map().compose(t.psi(n).map())?;
            checks.push(agree(format!("counit_{n}"), format!("ε_{n} ψ_{n} = ε"), &lhs, &eps));
        }
        checks.push(agree("counit_section".into(), "ε ι_N = ε_N".into(), &eps.compose(iota_n)?, hopfs[depth - 1].counit().expect("checked").map()));
        Some(eps)
    } else {
        None
    };

    let antipode = if hopfs.iter().all(|h| h.antipode().is_some()) {
        let kappas: Vec<LinearMap<F>> = hopfs.iter().map(|h| h.antipode().expect("checked").map().clone()).collect();
        let kappa = lift_family_antip(t, t, &kappas)?.into_map();
        for n in 1..=depth {
            let psi = t.psi(n).map();
            checks.push(agree(format!("antipode_{n}"), format!("κ_{n} ψ_{n} = ψ_{n} κ"), &kappas[n - 1].compose(psi)?, &psi.compose(&kappa)?));
        }
        Some(kappa)
    } else {
        None
    };

    let maps = HopfMaps { algebra: l.clone(), coproduct: delta, counit, antipode };
    checks.extend(check_hopf(&maps));
    first_failure(&checks)?;
    Ok(LimitHopf { hopf: verify_hopf(maps)?, checks })
}

/// A coaction `α: W → W ⊗ M` of a Hopf structure on `M`.
#[derive(Clone, Debug)]
pub struct ActionSpec<F> {
    pub carrier: MultiMatrixAlgebra,
    pub hopf: HopfData<F>,
    pub map: StarHom<F>,
}

/// `α` is an injective unital *-homomorphism with
/// `(id_W ⊗ Δ)α = (α ⊗ id_M)α`.
pub fn check_action<F: Field>(hopf: &HopfData<F>, alpha: &LinearMap<F>) -> Vec<LawCheck> {
    let w = alpha.source();
    let m = hopf.algebra();
    if alpha.target() != &w.tensor(m) {
        return vec![LawCheck::new("action_shape", "α: W → W ⊗ M", Err(Error::AlgebraMismatch))];
    }
    let hom = verify_star_hom(alpha.clone());
    let mut checks = vec![LawCheck::new(
        "action_hom",
        "α is a unital injective *-homomorphism",
        hom.and_then(|h| match (h.is_unital(), h.is_injective()) {
            (false, _) => Err(Error::NotUnital),
            (true, false) => Err(Error::Inconsistent(format!("α has rank {}", h.map().rank()))),
            (true, true) => Ok(()),
        }),
    )];
    let (id_w, id_m) = (LinearMap::identity(w), LinearMap::identity(m));
    let delta = hopf.coproduct().map();
    let law = "(id ⊗ Δ)α = (α ⊗ id)α";
    let outcome = match (0..w.dim()).find(|&b| {
        !apply_tensor(&id_w, delta, alpha.column(b)).approx_eq(&apply_tensor(alpha, &id_m, alpha.column(b)))
    }) {
        Some(basis) => Err(Error::LawViolated { law: law.into(), basis }),
        None => Ok(()),
    };
    checks.push(LawCheck::new("coaction", law, outcome));
    checks
}

pub fn verify_action<F: Field>(hopf: &HopfData<F>, alpha: LinearMap<F>) -> Result<ActionSpec<F>> {
    first_failure(&check_action(hopf, &alpha))?;
    Ok(ActionSpec { carrier: alpha.source().clone(), hopf: hopf.clone(), map: verify_star_hom(alpha)? })
}

/// Action induced on the limit, with its checks.
#[derive(Clone, Debug)]
pub struct LimitAction<F> {
    pub action: ActionSpec<F>,
    pub checks: Vec<LawCheck>,
}

/// Lift compatible actions `α_n: W → W ⊗ M_n` to `α: W → W ⊗ limit`, through
/// the system `(W ⊗ M_n, id_W ⊗ φ_n)`.
pub fn limit_action<F: Field>(t: &TruncatedLimit<F>, limit: &HopfData<F>, alphas: &[LinearMap<F>]) -> Result<LimitAction<F>> {
    let depth = t.depth();
    let Some(first) = alphas.first() else {
        return Err(Error::InvalidArgument("no actions given".into()));
    };
    if limit.algebra() != t.limit_algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let w = first.source().clone();
    let constant = build_truncated_limit(&ProjectiveSystem::constant(&w, depth)?)?;
    let tensored = build_truncated_limit(&t.system().left_tensor(&w)?)?;
    let lifted = lift_family_antip(&constant, &tensored, alphas)?;
    let transport = LinearMap::identity(&w).tensor(t.iota(depth).map()).compose(tensored.psi(depth).map())?;
    let alpha = transport.compose(lifted.map())?.compose(constant.iota(depth).map())?;

    let mut checks = Vec::new();
    let id_w = LinearMap::identity(&w);
    for n in 1..=depth {
        let psi = t.psi(n).map();
        let pushed = LinearMap::new(
            w.clone(),
            alphas[n - 1].target().clone(),
            (0..w.dim()).map(|b| apply_tensor(&id_w, psi, alpha.column(b))).collect::<Vec<Coords<F>>>(),
        )?;
        checks.push(agree(format!("action_{n}"), format!("(id ⊗ ψ_{n})α = α_{n}"), &pushed, &alphas[n - 1]));
    }
    checks.extend(check_action(limit, &alpha));
    first_failure(&checks)?;
    Ok(LimitAction { action: verify_action(limit, alpha)?, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{classical_hopf_maps, classical_tower, padded_permutation_action, perturbed_classical_coproduct};
    use crate::linalg::Exact;

    #[test]
    fn single_stage_limit_reproduces_coproduct() {
        let (s, hopfs) = classical_tower::<Exact>(1).unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let lh = limit_hopf(&t, &hopfs).unwrap();
        assert!(lh.hopf.coproduct().map().approx_eq(hopfs[0].coproduct().map()));
    }

    #[test]
    fn classical_tower_limit_matches_top_coproduct() {
        let (s, hopfs) = classical_tower::<Exact>(3).unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let lh = limit_hopf(&t, &hopfs).unwrap();
        assert!(lh.checks.iter().all(LawCheck::passed));
        let psi = t.psi(3).map();
        let via_limit = psi.tensor(psi).compose(lh.hopf.coproduct().map()).unwrap();
        assert!(via_limit.approx_eq(&hopfs[2].coproduct().map().compose(psi).unwrap()));
        let eps = lh.hopf.counit().unwrap().map();
        assert!(eps.compose(t.iota(3).map()).unwrap().approx_eq(hopfs[2].counit().unwrap().map()));
        let kappa = lh.hopf.antipode().unwrap().map();
        assert!(kappa.compose(kappa).unwrap().approx_eq(&LinearMap::identity(t.limit_algebra())));
    }

    #[test]
    fn perturbed_stage_is_rejected() {
        let (s, mut hopfs) = classical_tower::<Exact>(4).unwrap();
        let mut maps = classical_hopf_maps::<Exact>(3);
        maps.coproduct = perturbed_classical_coproduct(3);
        maps.counit = None;
        maps.antipode = None;
        // the perturbed map is a *-homomorphism, so it can sit in a system check
        let delta = verify_star_hom(maps.coproduct.clone()).unwrap();
        hopfs[2] = HopfData::from_parts(maps.algebra, delta, None, None);
        let failed: Vec<_> = check_hopf_system(&s, &hopfs).into_iter().filter(|c| !c.passed()).collect();
        assert_eq!(failed[0].law, "(φ_3 ⊗ φ_3)Δ_4 = Δ_3 φ_3");
        let t = build_truncated_limit(&s).unwrap();
        assert!(matches!(limit_hopf(&t, &hopfs), Err(Error::LawViolated { .. })));
    }

    #[test]
    fn trivial_action_lifts() {
        let (s, hopfs) = classical_tower::<Exact>(2).unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let lh = limit_hopf(&t, &hopfs).unwrap();
        let w = MultiMatrixAlgebra::full(2).unwrap();
        let alphas: Vec<_> = (1..=2)
            .map(|n| {
                let m = s.algebra(n);
                LinearMap::from_fn(w.clone(), w.tensor(m), |b| {
                    m.identity::<Exact>().iter().map(|(x, v)| (w.tensor_coord(m, b, x, &w.tensor(m)), v.clone())).collect()
                })
                .unwrap()
            })
            .collect();
        for (n, a) in alphas.iter().enumerate() {
            assert!(check_action(&hopfs[n], a).iter().all(LawCheck::passed));
        }
        let la = limit_action(&t, &lh.hopf, &alphas).unwrap();
        assert!(la.action.map.is_unital());
    }

    #[test]
    fn permutation_action_lifts() {
        let (s, hopfs) = classical_tower::<Exact>(3).unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let lh = limit_hopf(&t, &hopfs).unwrap();
        let alphas: Vec<_> = (1..=3).map(|n| padded_permutation_action::<Exact>(n, 3).unwrap()).collect();
        for (n, a) in alphas.iter().enumerate() {
            assert!(check_action(&hopfs[n], a).iter().all(LawCheck::passed));
        }
        let la = limit_action(&t, &lh.hopf, &alphas).unwrap();
        assert!(la.checks.iter().all(LawCheck::passed));
    }

    #[test]
    fn incompatible_actions_are_rejected() {
        let (s, hopfs) = classical_tower::<Exact>(2).unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let lh = limit_hopf(&t, &hopfs).unwrap();
        let a = padded_permutation_action::<Exact>(2, 2).unwrap();
        let w = a.source().clone();
        let swap = LinearMap::from_fn(w.clone(), w, |b| Coords::unit(1 - b)).unwrap();
        let alphas = vec![padded_permutation_action::<Exact>(1, 2).unwrap(), a.compose(&swap).unwrap()];
        assert_eq!(limit_action(&t, &lh.hopf, &alphas).unwrap_err(), Error::Incompatible { stage: 1, basis: 0 });
    }
}
