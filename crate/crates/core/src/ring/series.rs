use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::render::render_terms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("factor {index} has a zero exponent vector; its inverse does not converge")]
    ZeroExponent { index: usize },
    #[error("factor {index} has multiplicity 0")]
    ZeroMultiplicity { index: usize },
    #[error("exponent vector of length {got} where arity {expected} was expected")]
    ArityMismatch { expected: usize, got: usize },
}

/// Truncated power series in `arity` variables, keeping terms of total degree `<= order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    arity: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn total(exp: &[u32]) -> u32 {
    exp.iter().sum()
}

impl MultiSeries {
    pub fn zero(arity: usize, order: u32) -> Self {
        Self {
            arity,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize, order: u32) -> Self {
        let mut s = Self::zero(arity, order);
        s.terms.insert(vec![0; arity], BigInt::one());
        s
    }

    /// Builds a series from terms; terms above the order are dropped.
    pub fn from_terms(
        arity: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(arity, order);
        for (exp, c) in terms {
            if exp.len() != arity {
                return Err(SeriesError::ArityMismatch {
                    expected: arity,
                    got: exp.len(),
                });
            }
            s.add_term(exp, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: BigInt) {
        if c.is_zero() || total(&exp) > self.order {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, exp: &[u32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by total degree, then reverse-lexicographically so `x1` precedes `x2`.
    pub fn sorted_terms(&self) -> Vec<(&[u32], &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| total(a.0).cmp(&total(b.0)).then_with(|| b.0.cmp(a.0)));
        v
    }

    /// Truncated product; both operands must share arity. The result keeps the smaller order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        if self.arity != rhs.arity {
            return Err(SeriesError::ArityMismatch {
                expected: self.arity,
                got: rhs.arity,
            });
        }
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(self.arity, order);
        for (a, ca) in &self.terms {
            let da = total(a);
            if da > order {
                continue;
            }
            for (b, cb) in &rhs.terms {
                if da + total(b) > order {
                    continue;
                }
                let exp: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb);
            }
        }
        Ok(out)
    }

    /// Substitutes `x_i -> y^{images[i]}`, producing a series in `new_arity` variables.
    ///
    /// Each image must have length `new_arity`; the order is kept.
    pub fn substitute(&self, images: &[Vec<u32>], new_arity: usize) -> Result<Self, SeriesError> {
        if images.len() != self.arity {
            return Err(SeriesError::ArityMismatch {
                expected: self.arity,
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|m| m.len() != new_arity) {
            return Err(SeriesError::ArityMismatch {
                expected: new_arity,
                got: bad.len(),
            });
        }
        let mut out = Self::zero(new_arity, self.order);
        for (exp, c) in &self.terms {
            let mut img = vec![0u32; new_arity];
            for (e, m) in exp.iter().zip(images) {
                for (slot, k) in img.iter_mut().zip(m) {
                    *slot += e * k;
                }
            }
            out.add_term(img, c.clone());
        }
        Ok(out)
    }

    /// Coefficients `c_0..=c_order` of a univariate series.
    pub fn univariate_coeffs(&self) -> Option<Vec<BigInt>> {
        (self.arity == 1).then(|| (0..=self.order).map(|d| self.coeff(&[d])).collect())
    }

    pub fn variable_names(&self) -> Vec<String> {
        if self.arity == 1 {
            vec!["t".to_string()]
        } else {
            (1..=self.arity).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.variable_names();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let terms = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| (e.iter().map(|&x| i64::from(x)).collect(), c.clone()));
        f.write_str(&render_terms(terms, &names))
    }
}

/// Expands `prod_i (1 - x^{m_i})^{-c_i}` up to total degree `order`.
///
/// The coefficient of `x^a` counts the multisets of factors (with each factor
/// available in `c_i` colours) whose exponents sum to `a`.
pub fn expand_inverse_product(
    factors: &[(Vec<u32>, u32)],
    arity: usize,
    order: u32,
) -> Result<MultiSeries, SeriesError> {
    for (index, (m, c)) in factors.iter().enumerate() {
        if m.len() != arity {
            return Err(SeriesError::ArityMismatch {
                expected: arity,
                got: m.len(),
            });
        }
        if total(m) == 0 {
            return Err(SeriesError::ZeroExponent { index });
        }
        if *c == 0 {
            return Err(SeriesError::ZeroMultiplicity { index });
        }
    }
    let mut acc = MultiSeries::one(arity, order);
    for (m, c) in factors {
        let step = total(m);
        let geometric_terms = (0..=order / step).map(|k| (m.iter().map(|x| x * k).collect(), BigInt::one()));
        let geometric = MultiSeries::from_terms(arity, order, geometric_terms)?;
        for _ in 0..*c {
            acc = acc.mul(&geometric)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn square_of_geometric() {
        let s = expand_inverse_product(&[(vec![1], 2)], 1, 3).unwrap();
        assert_eq!(s.univariate_coeffs().unwrap(), vec![n(1), n(2), n(3), n(4)]);
        assert_eq!(s.to_string(), "1+2t+3t^2+4t^3");
    }

    #[test]
    fn bivariate_convolution() {
        let s = expand_inverse_product(&[(vec![1, 0], 2), (vec![0, 1], 2)], 2, 2).unwrap();
        assert_eq!(s.coeff(&[1, 1]), n(4));
        assert_eq!(s.coeff(&[2, 0]), n(3));
        assert_eq!(s.to_string(), "1+2x1+2x2+3x1^2+4x1*x2+3x2^2");
    }

    #[test]
    fn sixth_power() {
        let s = expand_inverse_product(&[(vec![1], 6)], 1, 2).unwrap();
        assert_eq!(s.coeff(&[2]), n(21));
    }

    #[test]
    fn rejects_divergent_and_malformed() {
        assert_eq!(
            expand_inverse_product(&[(vec![0, 0], 1)], 2, 3),
            Err(SeriesError::ZeroExponent { index: 0 })
        );
        assert_eq!(
            expand_inverse_product(&[(vec![1], 0)], 1, 3),
            Err(SeriesError::ZeroMultiplicity { index: 0 })
        );
        assert!(matches!(
            expand_inverse_product(&[(vec![1], 1)], 2, 3),
            Err(SeriesError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn empty_product_is_one() {
        let s = expand_inverse_product(&[], 0, 4).unwrap();
        assert_eq!(s.coeff(&[]), n(1));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn non_unit_step() {
        // 1/(1 - x^2 y) up to degree 6
        let s = expand_inverse_product(&[(vec![2, 1], 1)], 2, 6).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.coeff(&[4, 2]), n(1));
        assert_eq!(s.coeff(&[1, 0]), n(0));
    }
}
