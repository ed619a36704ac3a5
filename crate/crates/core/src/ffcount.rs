//! Point counts over finite fields and the congruence checks built on them.
//!
//! The closed-form Gaussian binomial is checked against a brute-force
//! enumeration of reduced row echelon forms over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::toric::Fan;

/// Default cap on the number of subspaces the brute-force oracle will enumerate.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "CYCLEMOTIVE_BUDGET";

/// Largest prime accepted by the brute-force enumeration.
pub const BRUTE_FORCE_MAX_PRIME: u64 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },
    #[error("field size must be at least 2, got {q}")]
    FieldTooSmall { q: String },
    #[error("brute force needs a prime q <= {BRUTE_FORCE_MAX_PRIME}, got {q}")]
    UnsupportedField { q: u64 },
    #[error("subspace dimension {k} exceeds ambient dimension {n}")]
    Domain { k: u32, n: u32 },
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("extension degree must be positive")]
    ZeroExtension,
}

/// A prime power `q = prime^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    q: u64,
    prime: u64,
    exponent: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self, FfError> {
        if q < 2 {
            return Err(FfError::FieldTooSmall { q: q.to_string() });
        }
        let prime = (2..=q)
            .take_while(|d| d * d <= q)
            .find(|d| q.is_multiple_of(*d))
            .unwrap_or(q);
        let mut rest = q;
        let mut exponent = 0;
        while rest.is_multiple_of(prime) {
            rest /= prime;
            exponent += 1;
        }
        if rest != 1 {
            return Err(FfError::NotPrimePower { q });
        }
        Ok(Self { q, prime, exponent })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_prime(&self) -> bool {
        self.exponent == 1
    }
}

/// Reads the enumeration budget from the environment, falling back to the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// `[n choose k]_q` by the product formula `prod (q^{n-i} - 1) / (q^{k-i} - 1)`.
pub fn gaussian_binomial(n: u32, k: u32, q: &BigInt) -> Result<BigInt, FfError> {
    if k > n {
        return Err(FfError::Domain { k, n });
    }
    if *q < BigInt::from(2) {
        return Err(FfError::FieldTooSmall { q: q.to_string() });
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= Pow::pow(q, n - i) - 1u32;
        den *= Pow::pow(q, k - i) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// Row reduction over `F_p` in place; returns the rank.
pub fn rref_mod_p(m: &mut [Vec<u64>], p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u64| -> u64 {
        // p is prime, so a^(p-2) is the inverse
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_multiple_of(p)) else {
            continue;
        };
        m.swap(rank, pivot);
        let s = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn pivot_patterns(k: u32, n: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, left: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - left {
            cur.push(c);
            go(c + 1, left - 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, n, &mut Vec::new(), &mut out);
    out
}

/// Free (non-pivot) positions of the RREF with the given pivot columns.
fn free_positions(pivots: &[u32], n: u32) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (row, &pc) in pivots.iter().enumerate() {
        for col in pc + 1..n {
            if !pivots.contains(&col) {
                out.push((row, col as usize));
            }
        }
    }
    out
}

/// Counts the RREF matrices with a fixed pivot pattern, re-reducing each one
/// to confirm it is the canonical representative of a distinct subspace.
fn count_pattern(pivots: &[u32], n: u32, q: u64) -> u64 {
    let k = pivots.len();
    let free = free_positions(pivots, n);
    let mut digits = vec![0u64; free.len()];
    let mut count = 0u64;
    loop {
        let mut m = vec![vec![0u64; n as usize]; k];
        for (row, &pc) in pivots.iter().enumerate() {
            m[row][pc as usize] = 1;
        }
        for (&(r, c), &d) in free.iter().zip(&digits) {
            m[r][c] = d;
        }
        let mut reduced = m.clone();
        let rank = rref_mod_p(&mut reduced, q);
        assert!(rank == k && reduced == m, "enumerated matrix is not a canonical RREF");
        count += 1;

        let mut i = 0;
        loop {
            if i == digits.len() {
                return count;
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`, by enumerating RREF matrices.
pub fn grassmannian_count_brute(k: u32, n: u32, q: u64) -> Result<u64, FfError> {
    grassmannian_count_brute_with_budget(k, n, q, budget_from_env())
}

pub fn grassmannian_count_brute_with_budget(k: u32, n: u32, q: u64, budget: u64) -> Result<u64, FfError> {
    if k > n {
        return Err(FfError::Domain { k, n });
    }
    let pp = PrimePower::new(q)?;
    if !pp.is_prime() || q > BRUTE_FORCE_MAX_PRIME {
        return Err(FfError::UnsupportedField { q });
    }
    let patterns = pivot_patterns(k, n);
    let needed = patterns.iter().try_fold(0u64, |acc, pat| {
        let cell = q.checked_pow(free_positions(pat, n).len() as u32)?;
        acc.checked_add(cell)
    });
    match needed {
        Some(needed) if needed <= budget => {}
        other => {
            return Err(FfError::BudgetExceeded {
                needed: other.unwrap_or(u64::MAX),
                budget,
            })
        }
    }
    Ok(patterns.par_iter().map(|pat| count_pattern(pat, n, q)).sum())
}

/// `|X(F_{q^m})|` for a toric variety: `sum_k d_k (q^m - 1)^{n-k}`.
pub fn toric_count(f: &Fan, q: &BigInt, m: u32) -> Result<BigInt, FfError> {
    if *q < BigInt::from(2) {
        return Err(FfError::FieldTooSmall { q: q.to_string() });
    }
    if m == 0 {
        return Err(FfError::ZeroExtension);
    }
    let torus_points: BigInt = Pow::pow(q, m) - 1u32;
    let n = f.dim();
    Ok(f
        .census()
        .iter()
        .enumerate()
        .map(|(k, &d)| BigInt::from(d) * Pow::pow(&torus_points, (n - k) as u32))
        .sum())
}

/// Residues of a point count against the two targets `mod q` and `mod q-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub q: BigInt,
    pub m: u32,
    /// Point count, when one could be computed.
    pub actual: Option<BigInt>,
    pub expected_mod_q: BigInt,
    pub expected_mod_q_minus_1: BigInt,
    pub holds_mod_q: Option<bool>,
    pub holds_mod_q_minus_1: Option<bool>,
    pub note: Option<String>,
}

impl CongruenceReport {
    /// True when every congruence that could be tested holds.
    pub fn passed(&self) -> bool {
        self.holds_mod_q.unwrap_or(true) && self.holds_mod_q_minus_1.unwrap_or(true)
    }

    pub fn is_tested(&self) -> bool {
        self.actual.is_some()
    }
}

/// `a == b (mod modulus)`; everything is congruent modulo 1.
pub fn congruent(a: &BigInt, b: &BigInt, modulus: &BigInt) -> bool {
    if modulus.is_one() {
        return true;
    }
    (a - b).mod_floor(modulus).is_zero()
}

pub fn congruence_check(
    actual: &BigInt,
    expected_mod_q: &BigInt,
    expected_mod_q_minus_1: &BigInt,
    q: &BigInt,
) -> CongruenceReport {
    let qm1 = q - 1u32;
    CongruenceReport {
        q: q.clone(),
        m: 1,
        actual: Some(actual.clone()),
        expected_mod_q: expected_mod_q.mod_floor(q),
        expected_mod_q_minus_1: expected_mod_q_minus_1.mod_floor(&qm1),
        holds_mod_q: Some(congruent(actual, expected_mod_q, q)),
        holds_mod_q_minus_1: Some(congruent(actual, expected_mod_q_minus_1, &qm1)),
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::fixtures;

    fn n(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn prime_powers() {
        assert_eq!(PrimePower::new(9).unwrap().prime(), 3);
        assert_eq!(PrimePower::new(8).unwrap().exponent(), 3);
        assert!(PrimePower::new(7).unwrap().is_prime());
        assert_eq!(PrimePower::new(12), Err(FfError::NotPrimePower { q: 12 }));
        assert!(PrimePower::new(1).is_err());
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(3, 1, &n(2)).unwrap(), n(7));
        assert_eq!(gaussian_binomial(4, 2, &n(3)).unwrap(), n(130));
        assert_eq!(gaussian_binomial(6, 0, &n(5)).unwrap(), n(1));
        assert_eq!(gaussian_binomial(2, 3, &n(2)), Err(FfError::Domain { k: 3, n: 2 }));
        assert!(gaussian_binomial(2, 1, &n(1)).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(grassmannian_count_brute(1, 3, 2).unwrap(), 7);
        assert_eq!(grassmannian_count_brute(2, 4, 2).unwrap(), 35);
        assert_eq!(grassmannian_count_brute(4, 4, 5).unwrap(), 1);
        assert_eq!(grassmannian_count_brute(0, 3, 3).unwrap(), 1);
    }

    #[test]
    fn brute_force_rejections() {
        assert_eq!(grassmannian_count_brute(1, 3, 4), Err(FfError::UnsupportedField { q: 4 }));
        assert_eq!(grassmannian_count_brute(1, 3, 11), Err(FfError::UnsupportedField { q: 11 }));
        assert_eq!(grassmannian_count_brute(1, 3, 6), Err(FfError::NotPrimePower { q: 6 }));
        assert_eq!(
            grassmannian_count_brute_with_budget(2, 4, 2, 34),
            Err(FfError::BudgetExceeded { needed: 35, budget: 34 })
        );
        assert_eq!(grassmannian_count_brute_with_budget(2, 4, 2, 35), Ok(35));
    }

    #[test]
    fn rref_reduces() {
        let mut m = vec![vec![2, 4, 1], vec![1, 2, 0]];
        assert_eq!(rref_mod_p(&mut m, 5), 2);
        assert_eq!(m, vec![vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn toric_counts() {
        assert_eq!(toric_count(&fixtures::projective_space(2), &n(2), 1).unwrap(), n(7));
        assert_eq!(toric_count(&fixtures::affine_space(2), &n(3), 1).unwrap(), n(9));
        let p1 = fixtures::projective_space(1);
        assert_eq!(toric_count(&p1.product(&p1), &n(2), 1).unwrap(), n(9));
        // P^1 over F_{2^3}
        assert_eq!(toric_count(&p1, &n(2), 3).unwrap(), n(9));
        assert_eq!(toric_count(&p1, &n(2), 0), Err(FfError::ZeroExtension));
    }

    #[test]
    fn congruences() {
        let r = congruence_check(&n(130), &n(1), &n(6), &n(3));
        assert_eq!((r.holds_mod_q, r.holds_mod_q_minus_1), (Some(true), Some(true)));
        let r = congruence_check(&n(7), &n(1), &n(3), &n(2));
        assert!(r.passed());
        assert_eq!(r.expected_mod_q_minus_1, n(0));
        let r = congruence_check(&n(4), &n(1), &n(2), &n(3));
        assert!(r.passed());
        let r = congruence_check(&n(5), &n(1), &n(2), &n(3));
        assert_eq!((r.holds_mod_q, r.holds_mod_q_minus_1), (Some(false), Some(false)));
        assert!(!r.passed());
    }
}
