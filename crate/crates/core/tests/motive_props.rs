use num_bigint::BigInt;
use proptest::prelude::*;

use cyclemotive::motive::{
    euler_characteristic, eval_count_poly, eval_e, eval_measure, Measure, MeasureValue, MotiveError, MotiveExpr,
    SmoothProjectiveLeaf,
};
use cyclemotive::ring::{Laurent1, Poly2};
use cyclemotive::toric::fixtures;

fn countable_leaf() -> impl Strategy<Value = MotiveExpr> {
    prop_oneof![
        Just(MotiveExpr::Point),
        (0u32..4).prop_map(MotiveExpr::affine_space),
        (1u32..4).prop_map(|n| MotiveExpr::torus(n).unwrap()),
        (0u32..4).prop_map(MotiveExpr::proj_space),
        (1u32..5).prop_flat_map(|n| (1..=n).prop_map(move |k| MotiveExpr::grassmannian(k, n).unwrap())),
        prop::collection::vec(0u32..4, 1..5).prop_map(|mut c| {
            c.sort_unstable();
            MotiveExpr::cellular(c).unwrap()
        }),
        (1usize..3).prop_map(|n| MotiveExpr::toric(fixtures::projective_space(n))),
    ]
}

fn grow(leaf: BoxedStrategy<MotiveExpr>) -> impl Strategy<Value = MotiveExpr> {
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.minus(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.times(b)),
            inner.prop_map(MotiveExpr::cone),
        ]
    })
}

fn countable_expr() -> impl Strategy<Value = MotiveExpr> {
    grow(countable_leaf().boxed())
}

fn any_expr() -> impl Strategy<Value = MotiveExpr> {
    grow(prop_oneof![4 => countable_leaf(), 1 => Just(MotiveExpr::elliptic())].boxed())
}

fn euler(e: &MotiveExpr) -> BigInt {
    match eval_measure(e, &Measure::Euler).unwrap() {
        MeasureValue::Integer(x) => x,
        other => panic!("Euler measure gave {other:?}"),
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn euler_is_additive_and_multiplicative(a in any_expr(), b in any_expr()) {
        prop_assert_eq!(euler(&a.clone().union(b.clone())), euler(&a) + euler(&b));
        prop_assert_eq!(euler(&a.clone().minus(b.clone())), euler(&a) - euler(&b));
        prop_assert_eq!(euler(&a.clone().times(b.clone())), euler(&a) * euler(&b));
        prop_assert_eq!(euler(&a), euler_characteristic(&a));
    }

    #[test]
    fn count_polynomial_at_one_is_euler(e in countable_expr()) {
        let c = eval_count_poly(&e).unwrap();
        prop_assert_eq!(c.eval(&BigInt::from(1)), euler(&e));
    }

    #[test]
    fn count_polynomial_matches_e_polynomial_on_diagonal(e in countable_expr()) {
        let c = eval_count_poly(&e).unwrap();
        prop_assert_eq!(Some(c), eval_e(&e).to_lpoly());
    }

    #[test]
    fn quotient_measures_factor_through_e(e in any_expr()) {
        let h = eval_e(&e);
        prop_assert_eq!(eval_measure(&e, &Measure::HTildeQuotient).unwrap(), MeasureValue::Laurent(h.quotient_uv_minus1()));
        prop_assert_eq!(eval_measure(&e, &Measure::HBarQuotient).unwrap(), MeasureValue::Poly(h.quotient_uv()));
    }

    #[test]
    fn cellular_h_tilde_counts_cells(mut cells in prop::collection::vec(0u32..6, 1..8)) {
        cells.sort_unstable();
        let n = cells.len();
        let e = MotiveExpr::cellular(cells).unwrap();
        let h = eval_measure(&e, &Measure::HTildeQuotient).unwrap();
        prop_assert_eq!(h, MeasureValue::Laurent(Laurent1::constant(n as u64)));
    }

    #[test]
    fn elliptic_anywhere_blocks_counting(e in countable_expr()) {
        let with_curve = e.times(MotiveExpr::elliptic());
        let err = eval_measure(&with_curve, &Measure::CountPoly).unwrap_err();
        let is_not_countable = matches!(err, MotiveError::NotCountable { .. });
        prop_assert!(is_not_countable);
    }
}

#[test]
fn cone_over_linear_space_is_linear_space() {
    assert_eq!(eval_e(&MotiveExpr::Point.cone()), eval_e(&MotiveExpr::proj_space(1)));
    for k in 0..=8 {
        assert_eq!(eval_e(&MotiveExpr::proj_space(k).cone()), eval_e(&MotiveExpr::proj_space(k + 1)), "k={k}");
    }
}

#[test]
fn grassmannian_euler_is_binomial() {
    for n in 1..=8u32 {
        for k in 1..=n {
            let e = MotiveExpr::grassmannian(k, n).unwrap();
            assert_eq!(eval_e(&e).specialize(1, 1), binom(n.into(), k.into()), "G({k},{n})");
        }
    }
}

#[test]
fn torus_and_affine_line_are_killed() {
    let gm = eval_measure(&MotiveExpr::torus(1).unwrap(), &Measure::HTildeQuotient).unwrap();
    assert!(gm.is_zero());
    let ga = eval_measure(&MotiveExpr::affine_space(1), &Measure::HBarQuotient).unwrap();
    assert!(ga.is_zero());
    assert_eq!(euler(&MotiveExpr::torus(3).unwrap()), BigInt::from(0));
}

#[test]
fn point_counts() {
    let p2 = MotiveExpr::proj_space(2);
    let at = |q: u32, m: u32| eval_measure(&p2, &Measure::count_at(q, m).unwrap()).unwrap();
    assert_eq!(at(2, 1), MeasureValue::Integer(7.into()));
    assert_eq!(at(2, 2), MeasureValue::Integer(21.into()));
    assert_eq!(at(4, 1), at(2, 2));
    assert!(Measure::count_at(1, 1).is_err());
    assert!(Measure::count_at(2, 0).is_err());
}

#[test]
fn custom_leaves() {
    let diag: Poly2 = "1+uv+u^2*v^2".parse().unwrap();
    let leaf = SmoothProjectiveLeaf::new("plane", diag.clone(), true).unwrap();
    let e = MotiveExpr::leaf(leaf);
    assert_eq!(eval_e(&e), diag);
    assert_eq!(eval_count_poly(&e).unwrap().to_string(), "1+L+L^2");
    assert!(SmoothProjectiveLeaf::new("curve", "1-u-v+uv".parse().unwrap(), true).is_err());
}
