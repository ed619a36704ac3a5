use num_bigint::BigInt;
use num_traits::Zero;

use crate::ring::Poly2;

/// Outcome of the three fixed-point constraints on virtual Hodge numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeReport {
    /// (a) antidiagonal sums vanish beyond the fixed-point dimension.
    pub antidiagonal_ok: bool,
    pub offending_antidiagonals: Vec<(i64, BigInt)>,
    /// (b) the diagonal Hodge numbers sum to the Euler characteristic.
    pub diagonal_ok: bool,
    pub diagonal_sum: BigInt,
    /// (c) no `u^p` or `v^q` terms with `p, q > 0`.
    pub axis_ok: bool,
    pub offending_axis: Vec<((u32, u32), BigInt)>,
}

impl HodgeReport {
    pub fn all_pass(&self) -> bool {
        self.antidiagonal_ok && self.diagonal_ok && self.axis_ok
    }
}

/// Checks `h` against the constraints implied by a `G_m`-action whose fixed
/// locus has dimension at most `fixed_dim_bound` and Euler characteristic `chi`.
pub fn hodge_constraints_check(h: &Poly2, chi: &BigInt, fixed_dim_bound: u32) -> HodgeReport {
    let bound = i64::from(fixed_dim_bound);
    let offending_antidiagonals: Vec<(i64, BigInt)> = h
        .antidiagonal_sums()
        .into_iter()
        .filter(|(i, _)| i.abs() > bound)
        .collect();

    let diagonal_sum: BigInt = h
        .terms()
        .filter(|((p, q), _)| p == q)
        .map(|(_, c)| c.clone())
        .sum();

    let offending_axis: Vec<((u32, u32), BigInt)> = h
        .sorted_terms()
        .into_iter()
        .filter(|&((p, q), c)| (p == 0) != (q == 0) && !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect();

    HodgeReport {
        antidiagonal_ok: offending_antidiagonals.is_empty(),
        offending_antidiagonals,
        diagonal_ok: &diagonal_sum == chi,
        diagonal_sum,
        axis_ok: offending_axis.is_empty(),
        offending_axis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn projective_plane_passes() {
        let r = hodge_constraints_check(&p("1+uv+u^2v^2"), &BigInt::from(3), 0);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn cone_example_fails_axis_check_only() {
        let r = hodge_constraints_check(&p("1+u+v+uv-u^2v-uv^2+2u^2v^2"), &BigInt::from(4), 0);
        assert!(r.antidiagonal_ok);
        assert!(r.diagonal_ok);
        assert!(!r.axis_ok);
        let monos: Vec<_> = r.offending_axis.iter().map(|(k, _)| *k).collect();
        assert_eq!(monos, vec![(1, 0), (0, 1)]);
    }

    #[test]
    fn torus_passes() {
        assert!(hodge_constraints_check(&p("uv-1"), &BigInt::zero(), 0).all_pass());
    }

    #[test]
    fn antidiagonal_bound_is_respected() {
        // elliptic curve: sums at i = +-1 are -1, allowed once the bound is 1
        let e = p("1-u-v+uv");
        let strict = hodge_constraints_check(&e, &BigInt::zero(), 0);
        assert!(!strict.antidiagonal_ok);
        assert_eq!(strict.offending_antidiagonals.len(), 2);
        let loose = hodge_constraints_check(&e, &BigInt::from(2), 1);
        assert!(loose.antidiagonal_ok);
        assert!(loose.diagonal_ok);
    }
}
