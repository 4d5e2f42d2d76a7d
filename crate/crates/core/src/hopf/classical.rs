use super::laws::{first_failure, verify_hopf, HopfData, HopfMaps, LawCheck};
use super::perm::SymmetricGroup;
use crate::algebra::{apply_tensor, verify_star_hom, Coords, Element, LinearMap, MultiMatrixAlgebra, StarHom};
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};
use crate::magic::{verify_magic, GridKind, MagicUnitary};
use crate::projective::ProjectiveSystem;

/// `C(S_n)` as the commutative algebra `ℂ^{n!}`, coordinates indexed by the
/// elements of [`SymmetricGroup`].
pub fn classical_algebra(n: usize) -> MultiMatrixAlgebra {
    MultiMatrixAlgebra::commutative(SymmetricGroup::new(n).order())
}

/// `p_ij = 1{σ : σ(j) = i}` (0-based `i`, `j`).
pub fn classical_generator<F: Field>(g: &SymmetricGroup, i: usize, j: usize) -> Coords<F> {
    (0..g.order()).filter(|&s| g.element(s)[j] == i).map(|s| (s, F::one())).collect()
}

fn pullback_of_binary<F: Field>(
    g: &SymmetricGroup,
    a: &MultiMatrixAlgebra,
    op: impl Fn(usize, usize) -> usize,
) -> LinearMap<F> {
    let aa = a.tensor(a);
    let mut columns = vec![Coords::zero(); a.dim()];
    for s in 0..g.order() {
        for t in 0..g.order() {
            columns[op(s, t)].add_at(a.tensor_coord(a, s, t, &aa), &F::one());
        }
    }
    LinearMap::new(a.clone(), aa, columns).expect("coordinates in range")
}

/// `Δ f(σ, τ) = f(στ)`, `ε f = f(id)`, `κ f(σ) = f(σ⁻¹)`.
pub fn classical_hopf_maps<F: Field>(n: usize) -> HopfMaps<F> {
    let g = SymmetricGroup::new(n);
    let a = classical_algebra(n);
    let coproduct = pullback_of_binary(&g, &a, |s, t| g.compose(s, t));
    let counit = LinearMap::from_fn(a.clone(), MultiMatrixAlgebra::scalars(), |s| {
        if s == 0 {
            Coords::unit(0)
        } else {
            Coords::zero()
        }
    })
    .expect("scalar target");
    let antipode = LinearMap::from_fn(a.clone(), a.clone(), |s| Coords::unit(g.inverse(s))).expect("same algebra");
    HopfMaps { algebra: a, coproduct, counit: Some(counit), antipode: Some(antipode) }
}

/// `Δ' f(σ, τ) = f(στ⁻¹)`: a unital *-homomorphism that is not
/// coassociative once `S_n` is non-abelian.
pub fn perturbed_classical_coproduct<F: Field>(n: usize) -> LinearMap<F> {
    let g = SymmetricGroup::new(n);
    pullback_of_binary(&g, &classical_algebra(n), |s, t| g.compose(s, g.inverse(t)))
}

/// `x ⊗ y ↦ y ⊗ x` on `M ⊗ M`.
pub fn flip<F: Field>(m: &MultiMatrixAlgebra) -> LinearMap<F> {
    let mm = m.tensor(m);
    LinearMap::from_fn(mm.clone(), mm.clone(), |c| {
        let (a, b) = m.split_tensor_coord(m, c, &mm);
        Coords::unit(m.tensor_coord(m, b, a, &mm))
    })
    .expect("same algebra")
}

/// `flip ∘ Δ`.
pub fn flipped_coproduct<F: Field>(h: &HopfData<F>) -> LinearMap<F> {
    flip(h.algebra()).compose(h.coproduct().map()).expect("Δ lands in M ⊗ M")
}

/// The generator identities of `C(S_n)`: the grid `(p_ij)` is a commuting
/// magic unitary with `Δ(p_ij) = Σ_k p_ik ⊗ p_kj`, `ε(p_ij) = δ_ij` and
/// `κ(p_ij) = p_ji`. Witnesses are grid positions `i·n + j`.
pub fn check_classical_formulas<F: Field>(n: usize, h: &HopfData<F>, grid: &MagicUnitary<F>) -> Vec<LawCheck> {
    let g = SymmetricGroup::new(n);
    let a = h.algebra();
    let aa = a.tensor(a);
    let p = |i, j| classical_generator::<F>(&g, i, j);
    let positions = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let find = |law: &str, bad: Option<(usize, usize)>| match bad {
        Some((i, j)) => Err(Error::LawViolated { law: law.into(), basis: i * n + j }),
        None => Ok(()),
    };
    let mut checks = Vec::new();

    let report = verify_magic(grid);
    checks.push(LawCheck::new(
        "magic",
        "(p_ij) is a magic unitary",
        if report.passes() && report.sums_exact() {
            Ok(())
        } else {
            Err(Error::NotMagic("classical grid".into()))
        },
    ));
    let law = "p_ij p_kl = p_kl p_ij";
    let bad = positions().find(|&(i, j)| {
        positions().any(|(k, l)| !grid.entry(i, j).commutes_with(grid.entry(k, l)))
    });
    checks.push(LawCheck::new("commuting", law, find(law, bad)));

    let law = "Δ(p_ij) = Σ_k p_ik ⊗ p_kj";
    let bad = positions().find(|&(i, j)| {
        let expected = (0..n).fold(Coords::zero(), |acc: Coords<F>, k| {
            let mut acc = acc;
            for (x, vx) in p(i, k).iter() {
                for (y, vy) in p(k, j).iter() {
                    acc.add_at(a.tensor_coord(a, x, y, &aa), &vx.mul(vy));
                }
            }
            acc
        });
        !h.coproduct().map().apply(&p(i, j)).approx_eq(&expected)
    });
    checks.push(LawCheck::new("coproduct_generators", law, find(law, bad)));

    if let Some(eps) = h.counit() {
        let law = "ε(p_ij) = δ_ij";
        let bad = positions().find(|&(i, j)| {
            let expected = if i == j { Coords::unit(0) } else { Coords::zero() };
            !eps.map().apply(&p(i, j)).approx_eq(&expected)
        });
        checks.push(LawCheck::new("counit_generators", law, find(law, bad)));
    }
    if let Some(kappa) = h.antipode() {
        let law = "κ(p_ij) = p_ji";
        let bad = positions().find(|&(i, j)| !kappa.map().apply(&p(i, j)).approx_eq(&p(j, i)));
        checks.push(LawCheck::new("antipode_generators", law, find(law, bad)));
    }
    checks
}

/// The grid of the `p_ij` as diagonal `n! × n!` matrices.
pub fn classical_grid<F: Field>(n: usize) -> MagicUnitary<F> {
    let g = SymmetricGroup::new(n);
    let a = classical_algebra(n);
    MagicUnitary::from_fn(GridKind::Finite, n, g.order(), |i, j| {
        Element::from_coords(&a, &classical_generator(&g, i, j)).to_concrete()
    })
}

/// `C(S_n)` with its verified Hopf structure and the magic unitary of its
/// generators.
pub fn classical_quantum_permutation_algebra<F: Field>(n: usize) -> Result<(HopfData<F>, MagicUnitary<F>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let h = verify_hopf(classical_hopf_maps(n))?;
    let grid = classical_grid(n);
    first_failure(&check_classical_formulas(n, &h, &grid))?;
    Ok((h, grid))
}

/// `Δ(x)` of an element of `C(S_n)` as a diagonal matrix on `ℂ^{n!} ⊗ ℂ^{n!}`.
pub fn coproduct_concrete<F: Field>(h: &HopfData<F>, x: &Coords<F>) -> Mat<F> {
    let a = h.algebra();
    Element::from_coords(&a.tensor(a), &h.coproduct().map().apply(x)).to_concrete()
}

/// Restriction `C(S_{n+1}) → C(S_n)` to the permutations fixing `n+1`.
pub fn corner_surjection<F: Field>(n: usize) -> Result<StarHom<F>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (small, big) = (SymmetricGroup::new(n), SymmetricGroup::new(n + 1));
    let map = LinearMap::from_fn(classical_algebra(n + 1), classical_algebra(n), |s| {
        big.restrict(s, &small).map_or_else(Coords::zero, Coords::unit)
    })?;
    verify_star_hom(map)
}

/// `p_ij ↦ p_ij` for `i, j ≤ n`, `p_{n+1,n+1} ↦ 1` and the remaining
/// entries of the last row and column `↦ 0`.
pub fn check_corner_surjection<F: Field>(n: usize, phi: &StarHom<F>) -> Vec<LawCheck> {
    let (small, big) = (SymmetricGroup::new(n), SymmetricGroup::new(n + 1));
    let one = phi.target().identity();
    let expected = |i: usize, j: usize| -> Coords<F> {
        match (i < n, j < n) {
            (true, true) => classical_generator(&small, i, j),
            (false, false) => one.clone(),
            _ => Coords::zero(),
        }
    };
    let law = "[P 0; 0 1] ↦ P";
    let bad = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .find(|&(i, j)| !phi.map().apply(&classical_generator(&big, i, j)).approx_eq(&expected(i, j)));
    let outcome = match bad {
        Some((i, j)) => Err(Error::LawViolated { law: law.into(), basis: i * (n + 1) + j }),
        None if phi.is_surjective() => Ok(()),
        None => Err(Error::NotSurjective { rank: phi.map().rank(), target: phi.target().dim() }),
    };
    vec![LawCheck::new("corner_generators", law, outcome)]
}

/// `C(S_1) ← C(S_2) ← … ← C(S_depth)` with corner surjections and the
/// classical Hopf structures.
pub fn classical_tower<F: Field>(depth: usize) -> Result<(ProjectiveSystem<F>, Vec<HopfData<F>>)> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let algebras = (1..=depth).map(classical_algebra).collect();
    let maps = (1..depth).map(|n| corner_surjection(n).map(StarHom::into_map)).collect::<Result<Vec<_>>>()?;
    let system = ProjectiveSystem::new(algebras, maps)?;
    let hopfs = (1..=depth).map(|n| verify_hopf(classical_hopf_maps(n))).collect::<Result<Vec<_>>>()?;
    Ok((system, hopfs))
}

/// The permutation action of `C(S_n)` on `ℂ^width` (`width ≥ n`):
/// `e_j ↦ Σ_{i ≤ n} e_i ⊗ p_ij` for `j ≤ n` and `e_j ↦ e_j ⊗ 1` beyond.
pub fn padded_permutation_action<F: Field>(n: usize, width: usize) -> Result<LinearMap<F>> {
    if width < n {
        return Err(Error::InvalidArgument(format!("width {width} is smaller than n = {n}")));
    }
    let g = SymmetricGroup::new(n);
    let (w, a) = (MultiMatrixAlgebra::commutative(width), classical_algebra(n));
    let wa = w.tensor(&a);
    let one = a.identity::<F>();
    LinearMap::from_fn(w.clone(), wa.clone(), |j| {
        let mut out = Coords::zero();
        if j < n {
            for i in 0..n {
                for (x, v) in classical_generator::<F>(&g, i, j).iter() {
                    out.add_at(w.tensor_coord(&a, i, x, &wa), v);
                }
            }
        } else {
            for (x, v) in one.iter() {
                out.add_at(w.tensor_coord(&a, j, x, &wa), v);
            }
        }
        out
    })
}

/// `(id ⊗ Δ)Δ` and `(Δ ⊗ id)Δ` agree on `x`.
pub fn coassociative_on<F: Field>(delta: &LinearMap<F>, x: usize) -> bool {
    let id = LinearMap::identity(delta.source());
    apply_tensor(&id, delta, delta.column(x)).approx_eq(&apply_tensor(delta, &id, delta.column(x)))
}
