use crate::algebra::{
    inspect_map, verify_star_antihom, verify_star_hom, Coords, LinearMap, MultiMatrixAlgebra,
    Multiplicativity, StarHom,
};
use crate::error::{Error, Result};
use crate::linalg::{is_positive_semidefinite, Field, Mat};

use super::system::TruncatedLimit;

/// A map produced by one of the extension results, with the algebraic
/// character it inherited from its family.
#[derive(Clone, Debug)]
pub struct Extension<F> {
    map: LinearMap<F>,
    hom: Option<StarHom<F>>,
}

impl<F: Field> Extension<F> {
    pub fn map(&self) -> &LinearMap<F> {
        &self.map
    }

    /// The verified *-(anti)homomorphism, when every member of the family
    /// was one.
    pub fn hom(&self) -> Option<&StarHom<F>> {
        self.hom.as_ref()
    }

    pub fn kind(&self) -> Option<Multiplicativity> {
        self.hom.as_ref().map(StarHom::kind)
    }

    pub fn is_unital(&self) -> bool {
        self.map.apply(&self.map.source().identity()).approx_eq(&self.map.target().identity())
    }

    pub fn into_map(self) -> LinearMap<F> {
        self.map
    }
}

/// Common character of a family: homomorphic if all members are, otherwise
/// antihomomorphic if all members are.
fn family_kind<F: Field>(maps: &[LinearMap<F>]) -> Option<Multiplicativity> {
    let flags: Vec<_> = maps.iter().map(|m| inspect_map(m).flags).collect();
    if flags.iter().all(|f| f.star && f.multiplicative) {
        Some(Multiplicativity::Homomorphism)
    } else if flags.iter().all(|f| f.star && f.anti_multiplicative) {
        Some(Multiplicativity::AntiHomomorphism)
    } else {
        None
    }
}

fn with_kind<F: Field>(map: LinearMap<F>, kind: Option<Multiplicativity>) -> Result<Extension<F>> {
    let hom = match kind {
        Some(Multiplicativity::Homomorphism) => Some(verify_star_hom(map.clone())?),
        Some(Multiplicativity::AntiHomomorphism) => Some(verify_star_antihom(map.clone())?),
        None => None,
    };
    Ok(Extension { map, hom })
}

/// Whether `‖κ‖ ≤ 1`.
///
/// *-homomorphisms and *-antihomomorphisms are contractive; any other map is
/// tested by `I − K*K ⪰ 0` on its coordinate matrix `K`.
pub fn is_contractive<F: Field>(map: &LinearMap<F>) -> bool {
    let flags = inspect_map(map).flags;
    if flags.star && (flags.multiplicative || flags.anti_multiplicative) {
        return true;
    }
    let k = map.to_matrix();
    is_positive_semidefinite(&Mat::identity(k.cols()).sub(&k.adjoint().mul(&k)))
}

/// Extend compatible maps `κ_n: W → N_1 ⊕ … ⊕ N_n` to `κ: W → ∏ N_k`.
///
/// `factors` lists `N_1, …, N_N` and `kappas[n-1]` is `κ_n`.
pub fn extend_family_homext<F: Field>(
    source: &MultiMatrixAlgebra,
    factors: &[MultiMatrixAlgebra],
    kappas: &[LinearMap<F>],
) -> Result<Extension<F>> {
    check_family_shape(source, factors, kappas)?;
    for (i, kappa) in kappas.iter().enumerate() {
        if !is_contractive(kappa) {
            return Err(Error::NotContractive { stage: i + 1 });
        }
    }
    extend_checked(factors, kappas)
}

fn check_family_shape<F: Field>(
    source: &MultiMatrixAlgebra,
    factors: &[MultiMatrixAlgebra],
    kappas: &[LinearMap<F>],
) -> Result<()> {
    if kappas.is_empty() || kappas.len() != factors.len() {
        return Err(Error::DimensionMismatch {
            what: "family length".into(),
            expected: factors.len(),
            found: kappas.len(),
        });
    }
    for (i, kappa) in kappas.iter().enumerate() {
        if kappa.source() != source || kappa.target() != &MultiMatrixAlgebra::direct_sum(&factors[..=i]) {
            return Err(Error::AlgebraMismatch);
        }
    }
    Ok(())
}

fn extend_checked<F: Field>(factors: &[MultiMatrixAlgebra], kappas: &[LinearMap<F>]) -> Result<Extension<F>> {
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, f| {
            *acc += f.dim();
            Some(*acc)
        })
        .collect();
    let n_max = kappas.len();
    // κ_n(w) = Σ_{k ≤ n} p_k κ_{n+1}(w)
    for n in 1..n_max {
        let (small, big) = (&kappas[n - 1], &kappas[n]);
        for w in 0..small.source().dim() {
            let truncated: Coords<F> =
                big.column(w).iter().filter(|&(c, _)| c < offsets[n - 1]).map(|(c, v)| (c, v.clone())).collect();
            if !truncated.approx_eq(small.column(w)) {
                return Err(Error::Incompatible { stage: n, basis: w });
            }
        }
    }
    let kappa = kappas[n_max - 1].clone();

    // κ = Σ_n p_n κ_n, assembled summand by summand
    let assembled = LinearMap::from_fn(kappa.source().clone(), kappa.target().clone(), |w| {
        (0..n_max)
            .flat_map(|n| {
                let lo = if n == 0 { 0 } else { offsets[n - 1] };
                let hi = offsets[n];
                kappas[n].column(w).iter().filter(move |&(c, _)| lo <= c && c < hi).map(|(c, v)| (c, v.clone()))
            })
            .collect()
    })?;
    if let Some(basis) = assembled.first_difference(&kappa) {
        return Err(Error::LawViolated { law: "κ = Σ p_n κ_n".into(), basis });
    }
    with_kind(kappa, family_kind(kappas))
}

/// Lift intertwining maps `λ_n: M_n → N_n` to `λ_∞` between the limits.
pub fn lift_family_antip<F: Field>(
    m: &TruncatedLimit<F>,
    n: &TruncatedLimit<F>,
    lambdas: &[LinearMap<F>],
) -> Result<Extension<F>> {
    let depth = m.depth();
    if n.depth() != depth || lambdas.len() != depth {
        return Err(Error::DimensionMismatch {
            what: "family length".into(),
            expected: depth,
            found: if n.depth() != depth { n.depth() } else { lambdas.len() },
        });
    }
    let (ms, ns) = (m.system(), n.system());
    for (i, lambda) in lambdas.iter().enumerate() {
        if lambda.source() != ms.algebra(i + 1) || lambda.target() != ns.algebra(i + 1) {
            return Err(Error::AlgebraMismatch);
        }
        if !is_contractive(lambda) {
            return Err(Error::NotContractive { stage: i + 1 });
        }
    }
    // λ_n ∘ φ_n^M = φ_n^N ∘ λ_{n+1}
    for k in 1..depth {
        let left = lambdas[k - 1].compose(ms.phi(k).map())?;
        let right = ns.phi(k).map().compose(&lambdas[k])?;
        if let Some(basis) = left.first_difference(&right) {
            return Err(Error::Incompatible { stage: k, basis });
        }
    }

    let factors = n.decomposition().blocks().to_vec();
    let kappas = (1..=depth)
        .map(|k| {
            let lifted = n.iota(k).map().compose(&lambdas[k - 1].compose(m.psi(k).map())?)?;
            lifted.narrow_target(n.decomposition().partial_sum(k))
        })
        .collect::<Result<Vec<_>>>()?;
    let extension = extend_checked(&factors, &kappas)?;
    let lambda_inf = extension.map();

    for k in 1..=depth {
        let left = lambdas[k - 1].compose(m.psi(k).map())?;
        let right = n.psi(k).map().compose(lambda_inf)?;
        if let Some(basis) = left.first_difference(&right) {
            return Err(Error::LawViolated { law: format!("λ_{k} ∘ ψ_{k} = ψ_{k} ∘ λ_∞"), basis });
        }
    }
    let alternative = n.iota(depth).map().compose(&lambdas[depth - 1].compose(m.psi(depth).map())?)?;
    if let Some(basis) = alternative.first_difference(lambda_inf) {
        return Err(Error::LawViolated { law: "λ_∞ = ι_N ∘ λ_N ∘ ψ_N".into(), basis });
    }

    let kind = family_kind(lambdas);
    let map = extension.into_map();
    let result = with_kind(map, kind)?;
    if lambdas.iter().all(|l| l.apply(&l.source().identity()).approx_eq(&l.target().identity()))
        && !result.is_unital()
    {
        return Err(Error::NotUnital);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Exact;
    use crate::projective::{build_truncated_limit, ProjectiveSystem};

    fn alg(dims: &[usize]) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::new(dims.to_vec()).unwrap()
    }

    fn two_step() -> TruncatedLimit<Exact> {
        let phi = LinearMap::from_block_map(alg(&[2, 3]), alg(&[2]), &[0], None).unwrap();
        build_truncated_limit(&ProjectiveSystem::new(vec![alg(&[2]), alg(&[2, 3])], vec![phi]).unwrap())
            .unwrap()
    }

    #[test]
    fn restrictions_of_a_hom_extend_to_it() {
        let w = alg(&[2]);
        let factors = [alg(&[2]), alg(&[2])];
        let kappa = LinearMap::<Exact>::from_fn(w.clone(), alg(&[2, 2]), |c| {
            Coords::from_iter([(c, Exact::one()), (4 + c, Exact::one())])
        })
        .unwrap();
        let k1 = LinearMap::from_fn(w.clone(), alg(&[2]), Coords::unit).unwrap();
        let ext = extend_family_homext(&w, &factors, &[k1, kappa.clone()]).unwrap();
        assert_eq!(ext.map(), &kappa);
        assert_eq!(ext.kind(), Some(Multiplicativity::Homomorphism));
        assert!(ext.is_unital());
    }

    #[test]
    fn psi_family_extends_to_identity() {
        let t = two_step();
        let factors = t.decomposition().blocks().to_vec();
        let kappas: Vec<_> = (1..=2)
            .map(|n| t.decomposition().gamma(n).map().compose(t.psi(n).map()).unwrap())
            .collect();
        let ext = extend_family_homext(t.limit_algebra(), &factors, &kappas).unwrap();
        assert!(ext.map().approx_eq(&LinearMap::identity(t.limit_algebra())));
    }

    #[test]
    fn perturbed_family_is_rejected_with_witness() {
        let phi1 = LinearMap::from_block_map(alg(&[2, 3]), alg(&[2]), &[0], None).unwrap();
        let phi2 = LinearMap::from_block_map(alg(&[2, 3, 1]), alg(&[2, 3]), &[0, 1], None).unwrap();
        let s = ProjectiveSystem::<Exact>::new(vec![alg(&[2]), alg(&[2, 3]), alg(&[2, 3, 1])], vec![phi1, phi2])
            .unwrap();
        let t = build_truncated_limit(&s).unwrap();
        let factors = t.decomposition().blocks().to_vec();
        let mut kappas: Vec<_> = (1..=3)
            .map(|n| t.decomposition().gamma(n).map().compose(t.psi(n).map()).unwrap())
            .collect();
        extend_family_homext(t.limit_algebra(), &factors, &kappas).unwrap();
        // swap the images of two M_3 units inside the second summand of κ_2
        let mut columns = kappas[1].columns().to_vec();
        columns.swap(4, 5);
        kappas[1] = LinearMap::new(kappas[1].source().clone(), kappas[1].target().clone(), columns).unwrap();
        assert_eq!(
            extend_family_homext(t.limit_algebra(), &factors, &kappas).unwrap_err(),
            Error::Incompatible { stage: 2, basis: 4 }
        );
    }

    #[test]
    fn non_contractive_family_is_rejected() {
        let w = MultiMatrixAlgebra::scalars();
        let double = LinearMap::<Exact>::from_fn(w.clone(), w.clone(), |_| {
            Coords::single(0, Exact::from_ratio(2, 1))
        })
        .unwrap();
        assert_eq!(
            extend_family_homext(&w, &[w.clone()], &[double]).unwrap_err(),
            Error::NotContractive { stage: 1 }
        );
    }

    #[test]
    fn identity_family_lifts_to_identity() {
        let t = two_step();
        let lambdas: Vec<_> =
            (1..=2).map(|n| LinearMap::identity(t.system().algebra(n))).collect();
        let lift = lift_family_antip(&t, &t, &lambdas).unwrap();
        assert!(lift.map().approx_eq(&LinearMap::identity(t.limit_algebra())));
    }

    #[test]
    fn constant_target_reproduces_composition_with_psi() {
        let t = two_step();
        let w = alg(&[2]);
        let constant = build_truncated_limit(&ProjectiveSystem::constant(&w, 2).unwrap()).unwrap();
        // μ_n = projection onto the M_2 summand, compatible with φ
        let mu1 = LinearMap::identity(&w);
        let mu2 = t.system().phi(1).map().clone();
        let lift = lift_family_antip(&t, &constant, &[mu1, mu2.clone()]).unwrap();
        let expected = mu2.compose(t.psi(2).map()).unwrap();
        let via_psi = constant.psi(2).map().compose(lift.map()).unwrap();
        assert_eq!(via_psi, expected);
    }

    #[test]
    fn non_intertwining_family_is_rejected() {
        let t = two_step();
        let transpose = |a: &MultiMatrixAlgebra| {
            LinearMap::<Exact>::from_fn(a.clone(), a.clone(), |c| Coords::unit(a.transpose_coord(c))).unwrap()
        };
        // transposing only the bottom stage breaks λ_1 ∘ φ = φ ∘ λ_2
        let lambdas = [transpose(t.system().algebra(1)), LinearMap::identity(t.system().algebra(2))];
        assert_eq!(
            lift_family_antip(&t, &t, &lambdas).unwrap_err(),
            Error::Incompatible { stage: 1, basis: 1 }
        );
    }
}
