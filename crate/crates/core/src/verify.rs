//! Built-in verification suites, each comparing two independent routes to the
//! same numbers. Used by `cyclemotive verify`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chow::{
    chow_htilde, chow_invariant_closed, chow_invariant_recursive, chow_series, euler_chow_product_formula,
    euler_chow_product_recursive, irreducible_invariant, irreducible_invariant_product, product_slots, ChowIndex,
};
use crate::ffcount::{congruent, gaussian_binomial, grassmannian_count_brute};
use crate::io::{bigint_to_json, hodge_report_to_json};
use crate::motive::{
    eval_count_poly, eval_e, eval_measure, hodge_constraints_check, Measure, MeasureValue, MotiveExpr,
};
use crate::ring::{binomial, Laurent1, Poly2};
use crate::toric::{fixtures, Fan, Grading};

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub details: Value,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "failures": self.failures,
            "details": self.details,
        })
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, name: &'static str, details: Value) -> SuiteReport {
        SuiteReport {
            name,
            checks: self.checks,
            failures: self.failures,
            details,
        }
    }
}

pub const SUITES: &[&str] = &[
    "congruences",
    "euler-series",
    "generating-series",
    "hodge-constraints",
    "hodge-remark",
    "irreducible",
    "lawson-yau",
    "quotients",
    "toric",
];

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    Some(match name {
        "lawson-yau" => chow_grid(),
        "generating-series" => generating_series(),
        "hodge-remark" => cone_example(),
        "quotients" => quotients(),
        "hodge-constraints" => hodge_constraints(),
        "toric" => toric(),
        "euler-series" => euler_series(),
        "congruences" => congruences(),
        "irreducible" => irreducible(),
        _ => return None,
    })
}

/// Runs the named suites concurrently; reports come back sorted by name.
pub fn run_suites(names: &[&str]) -> Vec<SuiteReport> {
    let mut reports: Vec<SuiteReport> = names.par_iter().filter_map(|n| run_suite(n)).collect();
    reports.sort_by_key(|r| r.name);
    reports
}

fn idx(p: u32, d: u32, n: u32) -> ChowIndex {
    ChowIndex::new(p, d, n).expect("p <= n in grid")
}

fn chow_grid() -> SuiteReport {
    let mut t = Tally::new();
    let mut grid = 0;
    for n in 0..=6 {
        for p in 0..=n {
            for d in 0..=10 {
                let i = idx(p, d, n);
                let rec = chow_invariant_recursive(i);
                let closed = chow_invariant_closed(i);
                let v = binomial(u64::from(n) + 1, u64::from(p) + 1);
                let v = u64::try_from(v).unwrap();
                let direct = if d == 0 { BigInt::one() } else { binomial(v + u64::from(d) - 1, u64::from(d)) };
                t.check(rec == closed && closed == direct, || {
                    format!("(p={p},d={d},n={n}): recursive {rec}, closed {closed}, binomial {direct}")
                });
                grid += 1;
            }
        }
    }
    t.finish("lawson-yau", json!({ "grid_points": grid, "p_max": 6, "n_max": 6, "d_max": 10 }))
}

fn generating_series() -> SuiteReport {
    let mut t = Tally::new();
    for n in 0..=5 {
        for p in 0..=n {
            let s = chow_series(p, n, 8).expect("p <= n");
            for d in 0..=8 {
                let c = s.coeff(&[d]);
                let want = chow_invariant_closed(idx(p, d, n));
                t.check(c == want, || format!("Q_{{{p},{n}}} coefficient t^{d}: {c} != {want}"));
            }
        }
    }
    t.finish("generating-series", json!({ "order": 8, "n_max": 5 }))
}

fn cone_example_expr() -> MotiveExpr {
    MotiveExpr::elliptic()
        .cone()
        .union(MotiveExpr::proj_space(2))
        .minus(MotiveExpr::elliptic())
}

fn cone_example() -> SuiteReport {
    let mut t = Tally::new();
    let h = eval_e(&cone_example_expr());
    let want: Poly2 = "1+u+v+uv-u^2v-uv^2+2u^2v^2".parse().expect("literal");
    t.check(h == want, || format!("E-polynomial {h} != {want}"));
    let chi = h.specialize(1, 1);
    t.check(chi == BigInt::from(4), || format!("Euler characteristic {chi} != 4"));
    let beta1 = h.coeff(1, 0) + h.coeff(0, 1);
    t.check(beta1 == BigInt::from(2), || format!("beta~1 {beta1} != 2"));
    let report = hodge_constraints_check(&h, &chi, 0);
    t.check(!report.axis_ok, || "axis constraint unexpectedly holds".into());
    t.finish(
        "hodge-remark",
        json!({
            "e_poly": h.to_string(),
            "euler": bigint_to_json(&chi),
            "beta1": bigint_to_json(&beta1),
            "constraints": hodge_report_to_json(&report),
        }),
    )
}

fn quotients() -> SuiteReport {
    let mut t = Tally::new();
    let gm = eval_measure(&MotiveExpr::Torus(1), &Measure::HTildeQuotient).expect("no count");
    t.check(gm.is_zero(), || format!("H~(G_m) = {gm}"));
    let ga = eval_measure(&MotiveExpr::AffineSpace(1), &Measure::HBarQuotient).expect("no count");
    t.check(ga.is_zero(), || format!("H-(G_a) = {ga}"));
    for n in 0..=6 {
        for p in 0..=n {
            for d in 0..=10 {
                let i = idx(p, d, n);
                let h = chow_htilde(i);
                let want = Laurent1::constant(chow_invariant_closed(i));
                t.check(h == want, || format!("H~(C_{{{p},{d}}}(P^{n})) = {h}, expected {want}"));
            }
        }
    }
    t.finish("quotients", json!({}))
}

fn hodge_constraints() -> SuiteReport {
    let mut t = Tally::new();
    let mut exprs: Vec<(String, MotiveExpr)> = (0..=5).map(|n| (format!("P^{n}"), MotiveExpr::ProjSpace(n))).collect();
    for n in 1..=6 {
        for k in 1..=n {
            exprs.push((format!("G({k},{n})"), MotiveExpr::Grassmannian { k, n }));
        }
    }
    for (name, e) in &exprs {
        let h = eval_e(e);
        let chi = h.specialize(1, 1);
        let r = hodge_constraints_check(&h, &chi, 0);
        t.check(r.all_pass(), || format!("{name}: {r:?}"));
    }
    t.finish("hodge-constraints", json!({ "varieties": exprs.len() }))
}

pub fn toric_fixtures() -> Vec<(&'static str, Fan, usize)> {
    let p1 = fixtures::projective_space(1);
    vec![
        ("P1", p1.clone(), 2),
        ("P2", fixtures::projective_space(2), 3),
        ("P3", fixtures::projective_space(3), 4),
        ("P1xP1", p1.product(&p1), 4),
        ("F2", fixtures::hirzebruch(2), 4),
        ("A2", fixtures::affine_space(2), 1),
    ]
}

fn toric() -> SuiteReport {
    let mut t = Tally::new();
    let mut rows = Vec::new();
    for (name, fan, fixed_points) in toric_fixtures() {
        let n = fan.dim();
        let dn = fan.census()[n];
        t.check(fan.lambda() == dn && dn == fixed_points, || {
            format!("{name}: lambda {} d_n {dn} expected {fixed_points}", fan.lambda())
        });
        let e1 = fan.e_poly().specialize(1, 1);
        t.check(e1 == BigInt::from(dn), || format!("{name}: E(1,1) = {e1} != {dn}"));
        let counts = eval_count_poly(&MotiveExpr::toric(fan.clone())).expect("toric classes are countable");
        for q in [2u32, 3] {
            let qb = BigInt::from(q);
            let direct = crate::ffcount::toric_count(&fan, &qb, 1).expect("q >= 2");
            let via_class = counts.eval(&qb);
            t.check(direct == via_class, || format!("{name}: count at q={q}: {direct} vs {via_class}"));
        }
        rows.push(json!({ "fan": name, "census": fan.census(), "lambda": fan.lambda() }));
    }
    t.finish("toric", json!({ "fans": rows }))
}

fn euler_series() -> SuiteReport {
    let mut t = Tally::new();
    for n in 1..=3usize {
        let fan = fixtures::projective_space(n);
        for p in 0..=n {
            let s = fan.euler_series(p, &Grading::Uniform, 6).expect("uniform grading");
            let want = chow_series(p as u32, n as u32, 6).expect("p <= n");
            t.check(s == want, || format!("P^{n}, p={p}: {s} != {want}"));
        }
    }
    for n in 0..=2 {
        for m in 0..=2 {
            for p in 0..=n + m {
                let a = euler_chow_product_recursive(p, n, m, 5).expect("domain");
                let b = euler_chow_product_formula(p, n, m, 5).expect("domain");
                t.check(a == b, || format!("P^{n} x P^{m}, p={p}: recursive {a} != product {b}"));
            }
        }
    }
    t.finish("euler-series", json!({ "order_fan": 6, "order_product": 5 }))
}

fn congruences() -> SuiteReport {
    let mut t = Tally::new();
    for q in [2u64, 3, 5] {
        for n in 0..=5 {
            for k in 0..=n {
                let closed = gaussian_binomial(n, k, &BigInt::from(q)).expect("k <= n");
                match grassmannian_count_brute(k, n, q) {
                    Ok(brute) => t.check(closed == BigInt::from(brute), || {
                        format!("G({k},{n})(F_{q}): brute {brute} != closed {closed}")
                    }),
                    Err(e) => t.check(false, || format!("G({k},{n})(F_{q}): {e}")),
                }
            }
        }
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let qb = BigInt::from(q);
        let qm1 = BigInt::from(q - 1);
        for n in 0..=6u32 {
            for p in 0..=n {
                let count = gaussian_binomial(n + 1, p + 1, &qb).expect("p <= n");
                let v = binomial(u64::from(n) + 1, u64::from(p) + 1);
                t.check(congruent(&count, &v, &qm1), || {
                    format!("[{},{}]_{q} = {count} not = {v} mod {}", n + 1, p + 1, q - 1)
                });
                t.check(congruent(&count, &BigInt::one(), &qb), || {
                    format!("[{},{}]_{q} = {count} not = 1 mod {q}", n + 1, p + 1)
                });
            }
        }
    }
    t.finish("congruences", json!({}))
}

fn irreducible() -> SuiteReport {
    let mut t = Tally::new();
    for n in 0..=5 {
        for p in 0..=n {
            for d in 1..=4 {
                let got = irreducible_invariant(p, d, n).expect("domain");
                let want = if d == 1 {
                    match eval_measure(&MotiveExpr::Grassmannian { k: p + 1, n: n + 1 }, &Measure::Euler) {
                        Ok(MeasureValue::Integer(x)) => x,
                        other => panic!("Euler measure returned {other:?}"),
                    }
                } else {
                    BigInt::zero()
                };
                t.check(got == want, || format!("I_{{{p},{d}}}(P^{n}): {got} != {want}"));
            }
        }
    }
    for n in 0..=2 {
        for m in 0..=2 {
            for p in 0..=n + m {
                let slots = product_slots(p, n, m);
                // every multidegree with entries in 0..=2
                let total = 3usize.pow(slots.len() as u32);
                for code in 0..total {
                    let alpha: Vec<u32> = (0..slots.len()).map(|i| (code / 3usize.pow(i as u32) % 3) as u32).collect();
                    let got = irreducible_invariant_product(&alpha, p, n, m).expect("well formed");
                    let units: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] != 0).collect();
                    let want = if units.len() == 1 && alpha[units[0]] == 1 {
                        let (k, l) = slots[units[0]];
                        let e = MotiveExpr::Grassmannian { k: k + 1, n: n + 1 }
                            .times(MotiveExpr::Grassmannian { k: l + 1, n: m + 1 });
                        eval_e(&e).specialize(1, 1)
                    } else {
                        BigInt::zero()
                    };
                    t.check(got == want, || format!("alpha {alpha:?} in P^{n} x P^{m}, p={p}: {got} != {want}"));
                }
            }
        }
    }
    t.finish("irreducible", json!({}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        let reports = run_suites(SUITES);
        assert_eq!(reports.len(), SUITES.len());
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checks > 0);
        }
        let names: Vec<_> = reports.iter().map(|r| r.name).collect();
        assert_eq!(names, SUITES);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_none());
    }
}
