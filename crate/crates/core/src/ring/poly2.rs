use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::render::{parse_terms, render_terms, ParseError};
use super::{Laurent1, LPoly};

/// Sparse polynomial in `u, v` with big-integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(p: u32, q: u32, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c.into());
        out
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn v() -> Self {
        Self::monomial(0, 1, 1)
    }

    /// The class of the affine line, `uv`.
    pub fn uv() -> Self {
        Self::monomial(1, 1, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (p, q, c) in terms {
            out.add_term(p, q, c.into());
        }
        out
    }

    /// Polynomial `sum_i coeffs[i] * (uv)^i`.
    pub fn from_uv_coeffs(coeffs: &[BigInt]) -> Self {
        let mut out = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_term(i as u32, i as u32, c.clone());
        }
        out
    }

    fn add_term(&mut self, p: u32, q: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Virtual Hodge number: coefficient of `u^p v^q`.
    pub fn coeff(&self, p: u32, q: u32) -> BigInt {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Image in `Z[u, u^-1]` under `v -> u^-1`.
    pub fn quotient_uv_minus1(&self) -> Laurent1 {
        Laurent1::from_terms(
            self.terms
                .iter()
                .map(|(&(p, q), c)| (i64::from(p) - i64::from(q), c.clone())),
        )
    }

    /// Canonical representative modulo `<uv>`: every mixed monomial is dropped.
    pub fn quotient_uv(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(p, q), _)| p == 0 || q == 0)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn specialize(&self, u0: impl Into<BigInt>, v0: impl Into<BigInt>) -> BigInt {
        let (u0, v0) = (u0.into(), v0.into());
        self.terms
            .iter()
            .map(|(&(p, q), c)| c * num_traits::pow(u0.clone(), p as usize) * num_traits::pow(v0.clone(), q as usize))
            .sum()
    }

    /// Sums of coefficients along each antidiagonal `p - q = i`; zero sums are omitted.
    pub fn antidiagonal_sums(&self) -> BTreeMap<i64, BigInt> {
        let mut sums: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&(p, q), c) in &self.terms {
            *sums.entry(i64::from(p) - i64::from(q)).or_default() += c;
        }
        sums.retain(|_, c| !c.is_zero());
        sums
    }

    /// Rewrites the polynomial in `L = uv` when only diagonal monomials occur.
    pub fn to_lpoly(&self) -> Option<LPoly> {
        if self.terms.keys().any(|&(p, q)| p != q) {
            return None;
        }
        let deg = self.terms.keys().map(|&(p, _)| p as usize).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (&(p, _), c) in &self.terms {
            coeffs[p as usize] = c.clone();
        }
        Some(LPoly::new(coeffs))
    }

    /// Terms in degree-lex order, `u` before `v` within a degree.
    pub fn sorted_terms(&self) -> Vec<((u32, u32), &BigInt)> {
        let mut out: Vec<_> = self.terms().collect();
        out.sort_by_key(|&((p, q), _)| (p + q, std::cmp::Reverse(p)));
        out
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .sorted_terms()
            .into_iter()
            .map(|((p, q), c)| (vec![i64::from(p), i64::from(q)], c.clone()));
        f.write_str(&render_terms(terms, &["u", "v"]))
    }
}

impl FromStr for Poly2 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Self::zero();
        for (exps, c) in parse_terms(s, &["u", "v"], false)? {
            out.add_term(exps[0] as u32, exps[1] as u32, c);
        }
        Ok(out)
    }
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &'a Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &rhs.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly2> for Poly2 {
            type Output = Poly2;
            fn $m(self, rhs: Poly2) -> Poly2 {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

/// `a + b` in `Z[u, v]`.
pub fn poly_add(a: &Poly2, b: &Poly2) -> Poly2 {
    a + b
}

/// `a * b` in `Z[u, v]`.
pub fn poly_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    a * b
}
