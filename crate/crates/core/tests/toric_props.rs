use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use cyclemotive::ffcount::toric_count;
use cyclemotive::motive::{eval_count_poly, MotiveExpr};
use cyclemotive::toric::{fixtures, integer_rank, Fan, FanError, FanSpec, Grading};

fn base_fan() -> impl Strategy<Value = Fan> {
    prop_oneof![
        (1usize..4).prop_map(fixtures::projective_space),
        (1usize..3).prop_map(fixtures::affine_space),
        (0i64..4).prop_map(fixtures::hirzebruch),
    ]
}

fn fan() -> impl Strategy<Value = Fan> {
    prop_oneof![
        3 => base_fan(),
        1 => (base_fan(), base_fan()).prop_map(|(a, b)| a.product(&b)),
    ]
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn e_poly_at_one_is_lambda(f in fan()) {
        prop_assert_eq!(f.e_poly().specialize(1, 1), BigInt::from(f.lambda()));
        prop_assert_eq!(f.lambda(), f.census()[f.dim()]);
    }

    #[test]
    fn product_fans_multiply(a in base_fan(), b in base_fan()) {
        let ab = a.product(&b);
        prop_assert_eq!(ab.e_poly(), &a.e_poly() * &b.e_poly());
        prop_assert_eq!(ab.dim(), a.dim() + b.dim());
        prop_assert_eq!(ab.lambda(), a.lambda() * b.lambda());
    }

    #[test]
    fn descriptors_match_census(f in fan()) {
        let n = f.dim();
        for p in 0..=n {
            let orbits = f.invariant_subvarieties(p).unwrap();
            prop_assert_eq!(orbits.len(), f.census()[n - p]);
            prop_assert!(orbits.iter().all(|o| o.dim == p));
        }
    }

    #[test]
    fn counts_agree_with_class(f in fan(), q in 2u32..10, m in 1u32..3) {
        let q = BigInt::from(q);
        let class = eval_count_poly(&MotiveExpr::toric(f.clone())).unwrap();
        prop_assert_eq!(toric_count(&f, &q, m).unwrap(), class.eval(&q.pow(m)));
    }

    #[test]
    fn free_and_uniform_series(f in base_fan(), p_frac in 0usize..10, order in 0u32..5) {
        let p = p_frac % (f.dim() + 1);
        let orbits = f.census()[f.dim() - p] as u64;
        let free = f.euler_series(p, &Grading::Free, order).unwrap();
        prop_assert_eq!(free.arity(), orbits as usize);
        prop_assert!(free.terms().all(|(_, c)| c.is_one()));
        let uniform = f.euler_series(p, &Grading::Uniform, order).unwrap();
        for d in 0..=order {
            let want = if d == 0 { BigInt::one() } else { binom(orbits + u64::from(d) - 1, d.into()) };
            prop_assert_eq!(uniform.coeff(&[d]), want);
        }
    }

    #[test]
    fn fan_description_round_trip(f in fan()) {
        prop_assert_eq!(f.to_spec().validate().unwrap(), f);
    }
}

#[test]
fn p1_times_p1_lines_by_bidegree() {
    let p1 = fixtures::projective_space(1);
    let f = p1.product(&p1);
    let mut classes = BTreeMap::new();
    for o in f.invariant_subvarieties(1).unwrap() {
        // a torus-invariant line is the closure of the orbit of a ray; horizontal rays give vertical lines
        let ray = &f.rays()[o.rays[0]];
        let exp = if ray[0] != 0 { vec![0, 1] } else { vec![1, 0] };
        classes.insert(o.rays.clone(), exp);
    }
    let s = f.euler_series(1, &Grading::ByCone { arity: 2, classes }, 2).unwrap();
    for a in 0..=2u32 {
        for b in 0..=2 - a {
            assert_eq!(s.coeff(&[a, b]), BigInt::from((a + 1) * (b + 1)), "x^{a} y^{b}");
        }
    }
}

#[test]
fn invalid_fans() {
    let spec = |rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>| FanSpec { dim: 2, rays, cones }.validate();
    assert!(matches!(spec(vec![vec![2, 0]], vec![vec![0]]), Err(FanError::NonPrimitiveRay { .. })));
    assert!(matches!(spec(vec![vec![0, 0]], vec![vec![0]]), Err(FanError::ZeroRay { .. })));
    assert!(matches!(spec(vec![vec![1]], vec![vec![0]]), Err(FanError::RayLength { .. })));
    assert!(matches!(spec(vec![vec![1, 0]], vec![vec![1]]), Err(FanError::IndexOutOfRange { .. })));
    assert!(matches!(spec(vec![vec![1, 0]], vec![vec![0], vec![0]]), Err(FanError::DuplicateCone { .. })));
    assert!(matches!(spec(vec![vec![1, 0]], vec![vec![]]), Err(FanError::EmptyCone { .. })));
    assert!(matches!(
        FanSpec { dim: 0, rays: vec![], cones: vec![] }.validate(),
        Err(FanError::ZeroDimension)
    ));
}

#[test]
fn rank_of_integer_rows() {
    assert_eq!(integer_rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]), 2);
    assert_eq!(integer_rank(&[vec![2, 4], vec![1, 2]]), 1);
    assert_eq!(integer_rank(&[vec![3, 5], vec![7, 11]]), 2);
    assert_eq!(integer_rank(&[]), 0);
}
