use magiclim::algebra::generated_algebra;
use magiclim::linalg::{commutant_basis, range_projection, Exact, Field, Mat};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Exact> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Exact::from_ratio(p, q))
}

fn complex() -> impl Strategy<Value = Exact> {
    (rational(), prop::bool::weighted(0.3), rational())
        .prop_map(|(re, imag, im)| if imag { re.add(&im.mul(&Exact::i())) } else { re })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat<Exact>> {
    prop::collection::vec(complex(), rows * cols).prop_map(move |v| Mat::from_vector(rows, cols, v))
}

fn square(max: usize) -> impl Strategy<Value = Mat<Exact>> {
    (1..=max).prop_flat_map(|d| matrix(d, d))
}

fn vectors(d: usize, max: usize) -> impl Strategy<Value = Vec<Mat<Exact>>> {
    prop::collection::vec(matrix(d, 1), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_bilinear(a in matrix(2, 3), b in matrix(2, 3), c in matrix(3, 2), s in complex()) {
        prop_assert_eq!(a.add(&b).kron(&c), a.kron(&c).add(&b.kron(&c)));
        prop_assert_eq!(c.kron(&a.add(&b)), c.kron(&a).add(&c.kron(&b)));
        prop_assert_eq!(a.scale(&s).kron(&c), a.kron(&c.scale(&s)));
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 3), b in matrix(3, 2), c in matrix(2, 2), d in matrix(2, 1)) {
        prop_assert_eq!(a.kron(&c).mul(&b.kron(&d)), a.mul(&b).kron(&c.mul(&d)));
    }

    #[test]
    fn range_projection_fixes_projections((d, vs) in (1usize..=4).prop_flat_map(|d| (Just(d), vectors(d, 3)))) {
        let p = range_projection(&vs);
        prop_assert!(p.is_projection());
        prop_assert_eq!(p.rows(), d);
        prop_assert_eq!(range_projection(&[p.clone()]), p);
    }

    #[test]
    fn range_projection_is_monotone(
        (vs, extra) in (1usize..=4).prop_flat_map(|d| (vectors(d, 3), matrix(d, 1)))
    ) {
        let small = range_projection(&vs);
        let mut more = vs.clone();
        more.push(extra.clone());
        let big = range_projection(&more);
        prop_assert_eq!(big.mul(&small), small.clone());
        prop_assert_eq!(big.mul(&extra), extra);
    }

    #[test]
    fn commutant_of_commutant_contains_generators(
        (d, gens) in (1usize..=6).prop_flat_map(|d| (Just(d), prop::collection::vec(sparse(d), 1..=2)))
    ) {
        let bicommutant = commutant_basis(&commutant_basis(&gens, d), d);
        let a = generated_algebra(&bicommutant, d).unwrap();
        for g in &gens {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn adjoint_reverses_products(a in square(3).prop_flat_map(|a| { let d = a.rows(); (Just(a), matrix(d, d)) })) {
        let (a, b) = a;
        prop_assert_eq!(a.mul(&b).adjoint(), b.adjoint().mul(&a.adjoint()));
    }
}

/// Mostly-zero matrices keep the `d = 6` commutant systems small.
fn sparse(d: usize) -> impl Strategy<Value = Mat<Exact>> {
    prop::collection::vec((prop::bool::weighted(0.2), rational()), d * d).prop_map(move |v| {
        Mat::from_vector(d, d, v.into_iter().map(|(keep, x)| if keep { x } else { Exact::zero() }).collect())
    })
}
