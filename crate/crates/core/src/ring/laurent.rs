use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::render::{parse_terms, render_terms, ParseError};

/// Laurent polynomial in `u` over the integers; the target of `Z[u,v]/<uv-1>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent1 {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        Self::from_terms([(e, c.into())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for Laurent1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(&e, c)| (vec![e], c.clone()));
        f.write_str(&render_terms(terms, &["u"]))
    }
}

impl FromStr for Laurent1 {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = parse_terms(s, &["u"], true)?;
        Ok(Self::from_terms(terms.into_iter().map(|(e, c)| (e[0], c))))
    }
}

impl Add for &Laurent1 {
    type Output = Laurent1;

    fn add(self, rhs: &Laurent1) -> Laurent1 {
        Laurent1::from_terms(self.terms.iter().chain(&rhs.terms).map(|(&e, c)| (e, c.clone())))
    }
}

impl<'a> Add<&'a Laurent1> for Laurent1 {
    type Output = Laurent1;

    fn add(self, rhs: &'a Laurent1) -> Laurent1 {
        &self + rhs
    }
}

impl Mul for &Laurent1 {
    type Output = Laurent1;

    fn mul(self, rhs: &Laurent1) -> Laurent1 {
        Laurent1::from_terms(
            self.terms
                .iter()
                .flat_map(|(&e1, c1)| rhs.terms.iter().map(move |(&e2, c2)| (e1 + e2, c1 * c2))),
        )
    }
}
