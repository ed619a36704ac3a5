//! Variety classes as expression trees, evaluated under additive invariants.
//!
//! Every evaluation is a ring homomorphism out of the Grothendieck ring:
//! disjoint unions add, products multiply, and [`MotiveExpr::Difference`] is
//! formal class subtraction (no closed embedding is checked).

mod constraints;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::ring::{gaussian_binomial_coeffs, LPoly, Laurent1, Poly2};
use crate::toric::Fan;

pub use constraints::{hodge_constraints_check, HodgeReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotiveError {
    #[error("invalid leaf: {0}")]
    InvalidLeaf(String),
    #[error("leaf `{leaf}` has Hodge data that is not a polynomial in L")]
    NotCountable { leaf: String },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

/// A smooth projective variety known only through its E-polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothProjectiveLeaf {
    name: String,
    e_poly: Poly2,
    countable: bool,
}

impl SmoothProjectiveLeaf {
    /// A countable leaf must have an E-polynomial in `uv` alone.
    pub fn new(name: impl Into<String>, e_poly: Poly2, countable: bool) -> Result<Self, MotiveError> {
        let name = name.into();
        if countable && e_poly.to_lpoly().is_none() {
            return Err(MotiveError::InvalidLeaf(format!(
                "`{name}` is marked countable but its E-polynomial {e_poly} has off-diagonal terms"
            )));
        }
        Ok(Self {
            name,
            e_poly,
            countable,
        })
    }

    /// Smooth plane cubic: `1 - u - v + uv`.
    pub fn elliptic() -> Self {
        Self {
            name: "elliptic".into(),
            e_poly: Poly2::from_terms([(0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 1)]),
            countable: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn e_poly(&self) -> &Poly2 {
        &self.e_poly
    }

    pub fn countable(&self) -> bool {
        self.countable
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MotiveExpr {
    Point,
    AffineSpace(u32),
    /// `G_m^n`, `n >= 1`.
    Torus(u32),
    ProjSpace(u32),
    /// `G(k, n)`: k-planes in an n-dimensional space, `1 <= k <= n`.
    Grassmannian { k: u32, n: u32 },
    /// Cell dimensions, non-decreasing.
    Cellular(Vec<u32>),
    ToricFan(Arc<Fan>),
    Leaf(Arc<SmoothProjectiveLeaf>),
    DisjointUnion(Box<MotiveExpr>, Box<MotiveExpr>),
    Difference(Box<MotiveExpr>, Box<MotiveExpr>),
    Product(Box<MotiveExpr>, Box<MotiveExpr>),
    /// Projective cone: the vertex plus a line bundle over the base.
    Cone(Box<MotiveExpr>),
}

impl MotiveExpr {
    pub fn affine_space(n: u32) -> Self {
        Self::AffineSpace(n)
    }

    pub fn proj_space(n: u32) -> Self {
        Self::ProjSpace(n)
    }

    pub fn torus(n: u32) -> Result<Self, MotiveError> {
        if n == 0 {
            return Err(MotiveError::InvalidLeaf("torus dimension must be at least 1".into()));
        }
        Ok(Self::Torus(n))
    }

    pub fn grassmannian(k: u32, n: u32) -> Result<Self, MotiveError> {
        if k == 0 || k > n {
            return Err(MotiveError::InvalidLeaf(format!(
                "grassmannian needs 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        Ok(Self::Grassmannian { k, n })
    }

    pub fn cellular(cells: Vec<u32>) -> Result<Self, MotiveError> {
        if cells.is_empty() {
            return Err(MotiveError::InvalidLeaf("cellular variety needs at least one cell".into()));
        }
        if cells.windows(2).any(|w| w[0] > w[1]) {
            return Err(MotiveError::InvalidLeaf(
                "cell dimensions must be non-decreasing".into(),
            ));
        }
        Ok(Self::Cellular(cells))
    }

    pub fn toric(fan: Fan) -> Self {
        Self::ToricFan(Arc::new(fan))
    }

    pub fn leaf(leaf: SmoothProjectiveLeaf) -> Self {
        Self::Leaf(Arc::new(leaf))
    }

    pub fn elliptic() -> Self {
        Self::leaf(SmoothProjectiveLeaf::elliptic())
    }

    pub fn union(self, other: Self) -> Self {
        Self::DisjointUnion(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: Self) -> Self {
        Self::Difference(Box::new(self), Box::new(other))
    }

    pub fn times(self, other: Self) -> Self {
        Self::Product(Box::new(self), Box::new(other))
    }

    pub fn cone(self) -> Self {
        Self::Cone(Box::new(self))
    }
}

/// E-polynomial (Hodge-Deligne polynomial) of the class.
pub fn eval_e(e: &MotiveExpr) -> Poly2 {
    use MotiveExpr::*;
    let l = Poly2::uv();
    match e {
        Point => Poly2::one(),
        AffineSpace(n) => l.pow(*n),
        Torus(n) => (&l - &Poly2::one()).pow(*n),
        ProjSpace(n) => (0..=*n).fold(Poly2::zero(), |acc, i| acc + l.pow(i)),
        Grassmannian { k, n } => Poly2::from_uv_coeffs(&gaussian_binomial_coeffs(*n, *k)),
        Cellular(cells) => cells.iter().fold(Poly2::zero(), |acc, &m| acc + l.pow(m)),
        ToricFan(fan) => fan.e_poly(),
        Leaf(leaf) => leaf.e_poly.clone(),
        DisjointUnion(a, b) => eval_e(a) + eval_e(b),
        Difference(a, b) => eval_e(a) - eval_e(b),
        Product(a, b) => eval_e(a) * eval_e(b),
        Cone(a) => Poly2::one() + l * eval_e(a),
    }
}

/// The class as a polynomial in `L`; fails on leaves with non-Tate Hodge data.
pub fn eval_count_poly(e: &MotiveExpr) -> Result<LPoly, MotiveError> {
    use MotiveExpr::*;
    let l = LPoly::line();
    let torus = &l - &LPoly::one();
    Ok(match e {
        Point => LPoly::one(),
        AffineSpace(n) => l.pow(*n),
        Torus(n) => torus.pow(*n),
        ProjSpace(n) => LPoly::new(vec![BigInt::from(1); *n as usize + 1]),
        Grassmannian { k, n } => LPoly::new(gaussian_binomial_coeffs(*n, *k)),
        Cellular(cells) => cells.iter().fold(LPoly::zero(), |acc, &m| &acc + &l.pow(m)),
        ToricFan(fan) => {
            let n = fan.dim();
            fan.census().iter().enumerate().fold(LPoly::zero(), |acc, (k, &d)| {
                &acc + &(&LPoly::constant(d) * &torus.pow((n - k) as u32))
            })
        }
        Leaf(leaf) => match (leaf.countable, leaf.e_poly.to_lpoly()) {
            (true, Some(p)) => p,
            _ => {
                return Err(MotiveError::NotCountable {
                    leaf: leaf.name.clone(),
                })
            }
        },
        DisjointUnion(a, b) => &eval_count_poly(a)? + &eval_count_poly(b)?,
        Difference(a, b) => &eval_count_poly(a)? - &eval_count_poly(b)?,
        Product(a, b) => &eval_count_poly(a)? * &eval_count_poly(b)?,
        Cone(a) => &LPoly::one() + &(&l * &eval_count_poly(a)?),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    EPoly,
    Euler,
    /// Hodge polynomial modulo `uv - 1`, valued in `Z[u, u^-1]`.
    HTildeQuotient,
    /// Hodge polynomial modulo `uv`.
    HBarQuotient,
    CountPoly,
    /// Number of points over `F_{q^m}`.
    CountAt { q: BigInt, m: u32 },
}

impl Measure {
    pub fn count_at(q: impl Into<BigInt>, m: u32) -> Result<Self, MotiveError> {
        let q = q.into();
        if q < BigInt::from(2) {
            return Err(MotiveError::InvalidMeasure(format!("field size must be >= 2, got {q}")));
        }
        if m == 0 {
            return Err(MotiveError::InvalidMeasure("extension degree must be >= 1".into()));
        }
        Ok(Self::CountAt { q, m })
    }
}

/// Value of a measure; which variant appears depends on the measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureValue {
    Integer(BigInt),
    Poly(Poly2),
    Laurent(Laurent1),
    LPoly(LPoly),
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integer(x) => write!(f, "{x}"),
            Self::Poly(p) => write!(f, "{p}"),
            Self::Laurent(p) => write!(f, "{p}"),
            Self::LPoly(p) => write!(f, "{p}"),
        }
    }
}

pub fn eval_measure(e: &MotiveExpr, m: &Measure) -> Result<MeasureValue, MotiveError> {
    Ok(match m {
        Measure::EPoly => MeasureValue::Poly(eval_e(e)),
        Measure::Euler => MeasureValue::Integer(eval_e(e).specialize(1, 1)),
        Measure::HTildeQuotient => MeasureValue::Laurent(eval_e(e).quotient_uv_minus1()),
        Measure::HBarQuotient => MeasureValue::Poly(eval_e(e).quotient_uv()),
        Measure::CountPoly => MeasureValue::LPoly(eval_count_poly(e)?),
        Measure::CountAt { q, m } => {
            let at = Pow::pow(q, *m);
            MeasureValue::Integer(eval_count_poly(e)?.eval(&at))
        }
    })
}

/// Euler characteristic as an integer.
pub fn euler_characteristic(e: &MotiveExpr) -> BigInt {
    eval_e(e).specialize(1, 1)
}

impl MeasureValue {
    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Self::Integer(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Integer(x) => x.is_zero(),
            Self::Poly(p) => p.is_zero(),
            Self::Laurent(p) => p.is_zero(),
            Self::LPoly(p) => p.is_zero(),
        }
    }
}
