//! Exact coefficient rings: `Z[u,v]`, `Z[u,u^-1]`, `Z[L]` and truncated
//! multivariate power series, plus the two quotient maps used by the Hodge
//! calculus.

mod laurent;
mod lpoly;
mod poly2;
pub mod render;
mod series;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use laurent::Laurent1;
pub use lpoly::LPoly;
pub use poly2::{poly_add, poly_mul, Poly2};
pub use render::ParseError;
pub use series::{expand_inverse_product, MultiSeries, SeriesError};

/// `binom(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Coefficients (low degree first) of the Gaussian binomial `[n choose k]_x`.
///
/// Built from the q-Pascal rule `[n,k] = [n-1,k-1] + x^k [n-1,k]`.
pub fn gaussian_binomial_coeffs(n: u32, k: u32) -> Vec<BigInt> {
    if k > n {
        return Vec::new();
    }
    // row[j] holds [m choose j] for the current m
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let mut next = Vec::with_capacity(row.len() + 1);
        for j in 0..=m.min(k) {
            let mut c = if j >= 1 { row[(j - 1) as usize].clone() } else { Vec::new() };
            if j < m {
                let shifted = &row[j as usize];
                let len = c.len().max(shifted.len() + j as usize);
                c.resize(len, BigInt::zero());
                for (i, x) in shifted.iter().enumerate() {
                    c[i + j as usize] += x;
                }
            }
            next.push(c);
        }
        row = next;
    }
    let mut out = row.swap_remove(k as usize);
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 2), BigInt::from(21));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        // binom(v+d-1, d) with v = binom(6,3) = 20, d = 20 does not fit in 32 bits
        assert_eq!(binomial(39, 20).to_string(), "68923264410");
    }

    #[test]
    fn gaussian_coefficients() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(gaussian_binomial_coeffs(4, 2), ints(&[1, 1, 2, 1, 1]));
        assert_eq!(gaussian_binomial_coeffs(3, 1), ints(&[1, 1, 1]));
        assert_eq!(gaussian_binomial_coeffs(5, 0), ints(&[1]));
        assert_eq!(gaussian_binomial_coeffs(5, 5), ints(&[1]));
        assert!(gaussian_binomial_coeffs(2, 3).is_empty());
    }
}
