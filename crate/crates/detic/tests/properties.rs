//! Randomized invariants of the exact linear algebra and the region
//! geometry, driven by proptest.

use num::{BigInt, BigRational};
use proptest::prelude::*;

use detic::linalg::{
    self, extend_to_basis, interference_decomposition, left_inverse, null_space_basis,
    subspace_intersection_dim,
};
use detic::ratesplit::{self, channel_split_bounds, find_split};
use detic::region::{capacity_region, capacity_region_form, Inequality, RatePair, RateRegion, RegionForm};
use detic::{ChannelQuadruple, FieldSpec, Matrix};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rational),
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(7).unwrap()),
        Just(FieldSpec::prime(257).unwrap()),
    ]
}

prop_compose! {
    fn matrix_strategy(max_dim: usize)
        (field in field_strategy(),
         rows in 0..=max_dim,
         cols in 0..=max_dim)
        (entries in proptest::collection::vec((-8i64..=8, 1i64..=4), rows * cols),
         field in Just(field),
         rows in Just(rows),
         cols in Just(cols))
        -> Matrix
    {
        let data = entries
            .iter()
            .map(|&(n, d)| match field {
                // Small denominators can vanish modulo small primes, so
                // fractions only make sense over the rationals.
                FieldSpec::Rational => field.from_fraction(n, d).expect("nonzero denominator"),
                FieldSpec::Prime(_) => field.from_i64(n),
            })
            .collect();
        Matrix::new(field, rows, cols, data).expect("consistent shape")
    }
}

prop_compose! {
    fn conformable_pair(max_dim: usize)
        (field in field_strategy(),
         p in 0..=max_dim, l in 0..=max_dim, k in 0..=max_dim)
        (ea in proptest::collection::vec(-8i64..=8, p * l),
         eb in proptest::collection::vec(-8i64..=8, l * k),
         field in Just(field), p in Just(p), l in Just(l), k in Just(k))
        -> (Matrix, Matrix)
    {
        let mk = |rows: usize, cols: usize, e: &[i64]| {
            Matrix::new(field, rows, cols, e.iter().map(|&v| field.from_i64(v)).collect())
                .expect("consistent shape")
        };
        (mk(p, l, &ea), mk(l, k, &eb))
    }
}

prop_compose! {
    fn channel_strategy(max_dim: usize)
        (field in field_strategy(),
         m1 in 1..=max_dim, m2 in 1..=max_dim,
         n1 in 1..=max_dim, n2 in 1..=max_dim)
        (e11 in proptest::collection::vec(-8i64..=8, n1 * m1),
         e12 in proptest::collection::vec(-8i64..=8, n1 * m2),
         e21 in proptest::collection::vec(-8i64..=8, n2 * m1),
         e22 in proptest::collection::vec(-8i64..=8, n2 * m2),
         field in Just(field),
         m1 in Just(m1), m2 in Just(m2), n1 in Just(n1), n2 in Just(n2))
        -> ChannelQuadruple
    {
        let mk = |rows: usize, cols: usize, e: &[i64]| {
            Matrix::new(field, rows, cols, e.iter().map(|&v| field.from_i64(v)).collect())
                .expect("consistent shape")
        };
        ChannelQuadruple::new(
            mk(n1, m1, &e11),
            mk(n1, m2, &e12),
            mk(n2, m1, &e21),
            mk(n2, m2, &e22),
        )
        .expect("consistent dimensions")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_transpose_invariant(m in matrix_strategy(4)) {
        prop_assert_eq!(linalg::rank(&m), linalg::rank(&m.transpose()));
        prop_assert!(linalg::rank(&m) <= m.rows().min(m.cols()));
    }

    #[test]
    fn kernel_is_annihilated(m in matrix_strategy(4)) {
        let ker = null_space_basis(&m);
        prop_assert!(m.mul(&ker).unwrap().is_zero());
        prop_assert_eq!(ker.cols(), m.cols() - linalg::rank(&m));
        prop_assert_eq!(linalg::rank(&ker), ker.cols());
    }

    #[test]
    fn decomposition_invariants(m in matrix_strategy(4)) {
        let dec = interference_decomposition(&m);
        prop_assert!(dec.verify_against(&m).is_ok());
    }

    #[test]
    fn basis_extension_completes(m in matrix_strategy(4)) {
        let basis = linalg::column_space_basis(&m);
        let ext = extend_to_basis(&basis).unwrap();
        let full = basis.hstack(&ext).unwrap();
        prop_assert_eq!(full.cols(), m.rows());
        prop_assert_eq!(linalg::rank(&full), m.rows());
    }

    #[test]
    fn left_inverse_of_pivot_columns(m in matrix_strategy(4)) {
        let cols = linalg::column_space_basis(&m);
        let li = left_inverse(&cols).unwrap();
        prop_assert_eq!(
            li.mul(&cols).unwrap(),
            Matrix::identity(m.field(), cols.cols())
        );
    }

    #[test]
    fn product_rank_formula((a, b) in conformable_pair(4)) {
        let rank_ab = linalg::rank(&a.mul(&b).unwrap());
        let via_kernel = linalg::rank(&b)
            - subspace_intersection_dim(
                &null_space_basis(&a),
                &linalg::column_space_basis(&b),
            )
            .unwrap();
        prop_assert_eq!(rank_ab, via_kernel);
    }

    #[test]
    fn region_forms_agree(ch in channel_strategy(4)) {
        let (red, _) = ch.reduce();
        let theorem = capacity_region_form(&red, RegionForm::Theorem);
        let reduced = capacity_region_form(&red, RegionForm::Reduced);
        prop_assert!(theorem.set_eq(&reduced));
    }

    #[test]
    fn region_transform_invariant(ch in channel_strategy(3), seed in 0u64..1 << 32) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (red, _) = ch.reduce();
        let field = red.field();
        let a1 = linalg::random_invertible(field, red.n1(), &mut rng);
        let a2 = linalg::random_invertible(field, red.n2(), &mut rng);
        let b1 = linalg::random_invertible(field, red.m1(), &mut rng);
        let b2 = linalg::random_invertible(field, red.m2(), &mut rng);
        let transformed = ChannelQuadruple::new(
            a1.mul(red.h11()).unwrap().mul(&b1).unwrap(),
            a1.mul(red.h12()).unwrap().mul(&b2).unwrap(),
            a2.mul(red.h21()).unwrap().mul(&b1).unwrap(),
            a2.mul(red.h22()).unwrap().mul(&b2).unwrap(),
        )
        .unwrap();
        let (tred, _) = transformed.reduce();
        prop_assert!(capacity_region(&red).set_eq(&capacity_region(&tred)));
    }

    #[test]
    fn region_downward_closed(ch in channel_strategy(3), num1 in 0i64..=8, num2 in 0i64..=8) {
        let (red, _) = ch.reduce();
        let region = capacity_region(&red);
        for v in region.vertices() {
            let shrink = |r: &BigRational, num: i64| {
                r * BigRational::new(BigInt::from(num), BigInt::from(8))
            };
            let p = RatePair { r1: shrink(&v.r1, num1), r2: shrink(&v.r2, num2) };
            prop_assert!(region.contains(&p));
        }
    }

    #[test]
    fn vertices_halfplanes_idempotent(
        b1 in 0i64..=4, b2 in 0i64..=4,
        extra in proptest::collection::vec((0i64..=2, 0i64..=2, 0i64..=8), 0..4)
    ) {
        let mut ineqs = vec![Inequality::new(1, 0, b1), Inequality::new(0, 1, b2)];
        for (a1, a2, b) in extra {
            if a1 > 0 || a2 > 0 {
                ineqs.push(Inequality::new(a1, a2, b));
            }
        }
        let region = RateRegion::new(ineqs).reduce_redundant();
        let verts = region.vertices();
        let rebuilt = RateRegion::from_polygon(&verts);
        prop_assert_eq!(rebuilt.vertices(), verts);
        prop_assert!(rebuilt.set_eq(&region));
    }

    #[test]
    fn private_symbols_are_invisible_to_the_other_receiver(
        ch in channel_strategy(3),
        seed in 0u64..1 << 32,
    ) {
        let (red, _) = ch.reduce();
        prop_assume!(red.field().modulus().is_some());
        let bounds = channel_split_bounds(&red).unwrap();
        // Steer towards splits with actual private traffic.
        let r1 = bounds.rx1.own_total.min(bounds.rx1.all);
        let r2 = bounds.rx2.own_total.min(bounds.rx2.all);
        let Some(split) = find_split(&bounds, r1, r2) else {
            // Corner rates can be infeasible; that case is covered by the
            // achievability sweeps.
            return Ok(());
        };
        let Ok(codec) = ratesplit::build_codec(&red, split, seed, 32) else {
            return Ok(());
        };
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 1);
        let base = ratesplit::MessageVectors::random(red.field(), &split, &mut rng);
        let mut varied = base.clone();
        // Re-randomize both private blocks, keep the common blocks.
        for i in split.r1c..split.r1() {
            varied.d1.set(i, 0, red.field().random_scalar(&mut rng));
        }
        for i in split.r2c..split.r2() {
            varied.d2.set(i, 0, red.field().random_scalar(&mut rng));
        }
        let (x1a, x2a) = codec.encode(&base).unwrap();
        let (x1b, x2b) = codec.encode(&varied).unwrap();
        // y2 must ignore d1p, y1 must ignore d2p.
        let y2a = red.h21().mul(&x1a).unwrap();
        let y2b = red.h21().mul(&x1b).unwrap();
        prop_assert_eq!(y2a, y2b);
        let y1a = red.h12().mul(&x2a).unwrap();
        let y1b = red.h12().mul(&x2b).unwrap();
        prop_assert_eq!(y1a, y1b);
    }
}
