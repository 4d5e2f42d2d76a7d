use std::collections::BTreeSet;

use magiclim::algebra::{
    central_carrier, generated_algebra, kernel_central_projection, verify_star_hom, CentralProjection, Element,
    LinearMap, MultiMatrixAlgebra,
};
use magiclim::linalg::{range_projection, Exact, Field, Mat};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Exact> {
    (-3i64..=3, 1i64..=2).prop_map(|(p, q)| Exact::from_ratio(p, q))
}

fn projection(k: usize) -> impl Strategy<Value = Mat<Exact>> {
    prop::collection::vec(prop::collection::vec(rational(), k), 0..=k).prop_map(move |vs| {
        let cols: Vec<Mat<Exact>> = vs.into_iter().map(Mat::column).collect();
        if cols.is_empty() {
            Mat::zeros(k, k)
        } else {
            range_projection(&cols)
        }
    })
}

fn algebra_and_projection() -> impl Strategy<Value = (MultiMatrixAlgebra, Vec<Mat<Exact>>)> {
    prop::collection::vec(1usize..=2, 1..=3).prop_flat_map(|dims| {
        let blocks: Vec<_> = dims.iter().map(|&k| projection(k)).collect();
        (Just(MultiMatrixAlgebra::new(dims).unwrap()), blocks)
    })
}

fn block_diagonal_units(a: &MultiMatrixAlgebra) -> Vec<Mat<Exact>> {
    let d = a.concrete_dim();
    let mut off = 0;
    let mut out = Vec::new();
    for &k in a.block_dims() {
        for r in 0..k {
            for c in 0..k {
                out.push(Mat::unit(d, off + r, off + c));
            }
        }
        off += k;
    }
    out
}

fn concrete(blocks: &[Mat<Exact>]) -> Mat<Exact> {
    Mat::dsum(blocks)
}

fn central_projections(a: &MultiMatrixAlgebra) -> Vec<CentralProjection> {
    let m = a.num_blocks();
    (0..1usize << m)
        .map(|mask| CentralProjection::new(a.clone(), (0..m).filter(|b| mask >> b & 1 == 1).collect()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn carrier_is_the_least_dominating_central_projection((a, blocks) in algebra_and_projection()) {
        let p = Element::new(&a, blocks.clone()).unwrap();
        let z = central_carrier(&p).unwrap();
        let dominating: Vec<_> = central_projections(&a).into_iter().filter(|c| c.dominates_element(&p)).collect();
        prop_assert!(dominating.contains(&z));
        for c in &dominating {
            prop_assert!(c.dominates(&z));
        }
        for c in central_projections(&a) {
            prop_assert_eq!(c.dominates_element(&p), c.dominates(&z));
        }

        // the concrete carrier inside the generated algebra agrees
        let g = generated_algebra(&block_diagonal_units(&a), a.concrete_dim()).unwrap();
        let concrete_z = g.central_carrier(&concrete(&blocks)).unwrap();
        prop_assert_eq!(concrete_z, concrete(&z.to_element::<Exact>().blocks().to_vec()));
    }

    #[test]
    fn generated_algebra_is_idempotent((a, blocks) in algebra_and_projection()) {
        let d = a.concrete_dim();
        let mut gens = vec![concrete(&blocks)];
        gens.push(Mat::from_fn(d, d, |r, c| if r + 1 == c { Exact::one() } else { Exact::zero() }));
        let g = generated_algebra(&gens, d).unwrap();
        let again = generated_algebra(g.algebra_basis(), d).unwrap();
        prop_assert_eq!(again.dim(), g.dim());
        for x in again.algebra_basis() {
            prop_assert!(g.contains(x));
        }
    }

    #[test]
    fn surjection_splits_as_kernel_block_plus_complement(
        (dims, keep) in prop::collection::vec(1usize..=3, 1..=4)
            .prop_flat_map(|dims| { let m = dims.len(); (Just(dims), prop::collection::vec(any::<bool>(), m)) })
    ) {
        let source = MultiMatrixAlgebra::new(dims.clone()).unwrap();
        let mut sigma: Vec<usize> = (0..dims.len()).filter(|&i| keep[i]).collect();
        if sigma.is_empty() {
            sigma.push(0);
        }
        let target = MultiMatrixAlgebra::new(sigma.iter().map(|&i| dims[i]).collect()).unwrap();
        let h = verify_star_hom(LinearMap::<Exact>::from_block_map(source.clone(), target.clone(), &sigma, None).unwrap()).unwrap();
        let r = kernel_central_projection(&h).unwrap();
        let kept: BTreeSet<usize> = sigma.iter().copied().collect();
        prop_assert_eq!(r.support(), &(0..dims.len()).filter(|i| !kept.contains(i)).collect::<BTreeSet<_>>());
        prop_assert_eq!(r.corner_algebra().dim() + r.complement().corner_algebra().dim(), source.dim());

        // the section on the complement is inverted by h
        let section = LinearMap::<Exact>::from_fn(target.clone(), source.clone(), |x| {
            let (b, i, j) = target.locate(x);
            magiclim::algebra::Coords::unit(source.coord(sigma[b], i, j))
        }).unwrap();
        prop_assert_eq!(h.map().compose(&section).unwrap(), LinearMap::identity(&target));
    }
}
