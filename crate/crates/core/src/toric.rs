//! Fans, orbit census and the toric Euler-series product.
//!
//! A fan is given by its primitive rays and an explicit list of cones (as ray
//! index sets). The zero cone is implicit; faces are never inferred, so every
//! cone that should be counted must be listed.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::ring::{expand_inverse_product, MultiSeries, Poly2, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("ray {ray} has length {got}, expected {expected}")]
    RayLength { ray: usize, expected: usize, got: usize },
    #[error("ray {ray} is the zero vector")]
    ZeroRay { ray: usize },
    #[error("ray {ray} is not primitive")]
    NonPrimitiveRay { ray: usize },
    #[error("cone {cone} is empty (the zero cone is implicit)")]
    EmptyCone { cone: usize },
    #[error("cone {cone} must list ray indices in strictly increasing order")]
    UnsortedCone { cone: usize },
    #[error("cone {cone} refers to ray {index}, but there are only {rays} rays")]
    IndexOutOfRange { cone: usize, index: usize, rays: usize },
    #[error("cones {first} and {second} are identical")]
    DuplicateCone { first: usize, second: usize },
    #[error("orbit-closure dimension {p} exceeds ambient dimension {dim}")]
    DimensionOutOfRange { p: usize, dim: usize },
    #[error("no grading given for the orbit closure of cone {rays:?}")]
    MissingGrading { rays: Vec<usize> },
    #[error("grading vector for cone {rays:?} has length {got}, expected {expected}")]
    GradingArity { rays: Vec<usize>, expected: usize, got: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Unvalidated fan data as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanSpec {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

/// A validated fan together with its cone dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    cone_dims: Vec<usize>,
    census: Vec<usize>,
}

/// Orbit closure `V(sigma)` of dimension `dim`; `rays` is empty for the zero cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitClosure {
    pub dim: usize,
    pub rays: Vec<usize>,
}

/// How orbit closures are mapped to monomials of the Euler series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grading {
    /// One variable per orbit closure, in descriptor order.
    Free,
    /// Every orbit closure goes to the single variable `t`.
    Uniform,
    /// Explicit exponent vectors keyed by the cone's ray-index list.
    ByCone {
        arity: usize,
        classes: BTreeMap<Vec<usize>, Vec<u32>>,
    },
}

/// Rank over Q of an integer matrix, by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let (a, b) = (m[rank][col].clone(), m[r][col].clone());
            let pivot_row = m[rank].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *x = &*x * &a - y * &b;
            }
            let g = m[r].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() {
                for x in m[r].iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl FanSpec {
    pub fn validate(&self) -> Result<Fan, FanError> {
        if self.dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.len() != self.dim {
                return Err(FanError::RayLength {
                    ray: i,
                    expected: self.dim,
                    got: ray.len(),
                });
            }
            let g = ray.iter().fold(0i64, |g, x| g.gcd(x));
            if g == 0 {
                return Err(FanError::ZeroRay { ray: i });
            }
            if g.abs() != 1 {
                return Err(FanError::NonPrimitiveRay { ray: i });
            }
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (c, cone) in self.cones.iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::EmptyCone { cone: c });
            }
            if cone.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FanError::UnsortedCone { cone: c });
            }
            if let Some(&index) = cone.iter().find(|&&i| i >= self.rays.len()) {
                return Err(FanError::IndexOutOfRange {
                    cone: c,
                    index,
                    rays: self.rays.len(),
                });
            }
            if let Some(&first) = seen.get(cone.as_slice()) {
                return Err(FanError::DuplicateCone { first, second: c });
            }
            seen.insert(cone, c);
        }

        let cone_dims: Vec<usize> = self
            .cones
            .iter()
            .map(|cone| {
                let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
                integer_rank(&rows)
            })
            .collect();
        let mut census = vec![0usize; self.dim + 1];
        census[0] = 1;
        for &d in &cone_dims {
            census[d] += 1;
        }
        Ok(Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            cones: self.cones.clone(),
            cone_dims,
            census,
        })
    }
}

/// Validates the fan and returns `d_0..=d_n`, the number of cones of each dimension.
pub fn fan_validate(spec: &FanSpec) -> Result<Vec<usize>, FanError> {
    spec.validate().map(|f| f.census)
}

impl Fan {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_dims(&self) -> &[usize] {
        &self.cone_dims
    }

    pub fn census(&self) -> &[usize] {
        &self.census
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            dim: self.dim,
            rays: self.rays.clone(),
            cones: self.cones.clone(),
        }
    }

    /// `d_n`: the number of torus-fixed points, which is the value of any
    /// additive invariant killing the torus.
    pub fn lambda(&self) -> usize {
        self.census[self.dim]
    }

    /// E-polynomial from the orbit decomposition: `sum_k d_k (uv-1)^{n-k}`.
    pub fn e_poly(&self) -> Poly2 {
        let torus = Poly2::uv() - Poly2::one();
        self.census
            .iter()
            .enumerate()
            .fold(Poly2::zero(), |acc, (k, &d)| {
                acc + Poly2::constant(d) * torus.pow((self.dim - k) as u32)
            })
    }

    /// Orbit closures of dimension `p`, one per cone of dimension `n - p`, in cone order.
    pub fn invariant_subvarieties(&self, p: usize) -> Result<Vec<OrbitClosure>, FanError> {
        if p > self.dim {
            return Err(FanError::DimensionOutOfRange { p, dim: self.dim });
        }
        let want = self.dim - p;
        if want == 0 {
            return Ok(vec![OrbitClosure { dim: p, rays: Vec::new() }]);
        }
        Ok(self
            .cones
            .iter()
            .zip(&self.cone_dims)
            .filter(|(_, &d)| d == want)
            .map(|(c, _)| OrbitClosure {
                dim: p,
                rays: c.clone(),
            })
            .collect())
    }

    /// Euler series `prod_i 1/(1 - e_{[V_i]})` over the `p`-dimensional orbit closures.
    pub fn euler_series(&self, p: usize, grading: &Grading, order: u32) -> Result<MultiSeries, FanError> {
        let closures = self.invariant_subvarieties(p)?;
        let (arity, exps): (usize, Vec<Vec<u32>>) = match grading {
            Grading::Free => {
                let r = closures.len();
                let exps = (0..r)
                    .map(|i| {
                        let mut e = vec![0; r];
                        e[i] = 1;
                        e
                    })
                    .collect();
                (r, exps)
            }
            Grading::Uniform => (1, vec![vec![1]; closures.len()]),
            Grading::ByCone { arity, classes } => {
                let exps = closures
                    .iter()
                    .map(|v| {
                        let e = classes
                            .get(&v.rays)
                            .ok_or_else(|| FanError::MissingGrading { rays: v.rays.clone() })?;
                        if e.len() != *arity {
                            return Err(FanError::GradingArity {
                                rays: v.rays.clone(),
                                expected: *arity,
                                got: e.len(),
                            });
                        }
                        Ok(e.clone())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (*arity, exps)
            }
        };
        let mut grouped: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for e in exps {
            *grouped.entry(e).or_default() += 1;
        }
        let factors: Vec<(Vec<u32>, u32)> = grouped.into_iter().collect();
        Ok(expand_inverse_product(&factors, arity, order)?)
    }

    /// Product fan in `Z^{n+m}`: rays are embedded factorwise, cones are
    /// `sigma x tau` for all listed or zero cones except the pair of zero cones.
    pub fn product(&self, other: &Fan) -> Fan {
        let dim = self.dim + other.dim;
        let mut rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, other.dim)).collect())
            .collect();
        rays.extend(
            other
                .rays
                .iter()
                .map(|r| std::iter::repeat_n(0, self.dim).chain(r.iter().copied()).collect()),
        );
        let off = self.rays.len();
        let left: Vec<Vec<usize>> = std::iter::once(Vec::new()).chain(self.cones.iter().cloned()).collect();
        let right: Vec<Vec<usize>> = std::iter::once(Vec::new()).chain(other.cones.iter().cloned()).collect();
        let mut cones = Vec::new();
        for a in &left {
            for b in &right {
                if a.is_empty() && b.is_empty() {
                    continue;
                }
                cones.push(a.iter().copied().chain(b.iter().map(|i| i + off)).collect());
            }
        }
        FanSpec { dim, rays, cones }
            .validate()
            .expect("product of valid fans is valid")
    }
}

/// `d_n` of a validated fan.
pub fn toric_lambda(f: &Fan) -> usize {
    f.lambda()
}

pub fn toric_e_poly(f: &Fan) -> Poly2 {
    f.e_poly()
}

/// Standard fans used as fixtures and by the verification suites.
pub mod fixtures {
    use super::{Fan, FanSpec};

    fn subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) <= max_size {
                out.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn unit(n: usize, i: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    /// `P^n`: rays `e_1..e_n, -(e_1+...+e_n)`, every proper subset of rays spans a cone.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        rays.push(vec![-1; n]);
        FanSpec {
            dim: n,
            rays,
            cones: subsets(n + 1, n),
        }
        .validate()
        .expect("projective space fan")
    }

    /// `A^n`: the positive orthant and all its faces.
    pub fn affine_space(n: usize) -> Fan {
        FanSpec {
            dim: n,
            rays: (0..n).map(|i| unit(n, i)).collect(),
            cones: subsets(n, n),
        }
        .validate()
        .expect("affine space fan")
    }

    /// Hirzebruch surface `F_a`.
    pub fn hirzebruch(a: i64) -> Fan {
        FanSpec {
            dim: 2,
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            cones: vec![
                vec![0],
                vec![1],
                vec![2],
                vec![3],
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
            ],
        }
        .validate()
        .expect("Hirzebruch fan")
    }
}
