use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A family of `p` ±1-step paths of length `m`, branch `i` (0-based) starting
/// at height `2i`, required to end at `endpoints`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StarQuery {
    p: usize,
    m: u64,
    endpoints: Vec<i64>,
    wall: bool,
}

impl StarQuery {
    pub fn new(p: usize, m: u64, endpoints: Vec<i64>, wall: bool) -> Result<Self> {
        if p == 0 {
            return invalid("branch count p must be positive");
        }
        if endpoints.len() != p {
            return invalid(format!(
                "expected {p} endpoints, got {}",
                endpoints.len()
            ));
        }
        if let Some(w) = endpoints.windows(2).find(|w| w[0] >= w[1]) {
            return invalid(format!(
                "endpoints must be strictly increasing, found {} >= {}",
                w[0], w[1]
            ));
        }
        if let Some(&e) = endpoints.iter().find(|&&e| (e - m as i64).rem_euclid(2) != 0) {
            return invalid(format!(
                "endpoint {e} has the wrong parity for path length {m}"
            ));
        }
        if wall {
            if let Some(&e) = endpoints.iter().find(|&&e| e < 0) {
                return invalid(format!("endpoint {e} is negative under the wall condition"));
            }
        }
        Ok(Self {
            p,
            m,
            endpoints,
            wall,
        })
    }

    /// The query whose count is the number of `(p, 2n)`-watermelons.
    pub fn watermelon(p: usize, n: u64, wall: bool) -> Result<Self> {
        Self::new(p, 2 * n, start_heights(p), wall)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn endpoints(&self) -> &[i64] {
        &self.endpoints
    }

    pub fn wall(&self) -> bool {
        self.wall
    }
}

/// Starting (and, for watermelons, ending) heights `0, 2, ..., 2p-2`.
pub fn start_heights(p: usize) -> Vec<i64> {
    (0..p as i64).map(|i| 2 * i).collect()
}

/// Exact nonnegative path count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Exact probability `numerator / denominator`, not necessarily reduced.
#[derive(Clone, Debug)]
pub struct ExactProbability {
    numerator: BigUint,
    denominator: BigUint,
}

impl ExactProbability {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() {
            return invalid("probability denominator must be positive");
        }
        if numerator > denominator {
            return invalid("probability numerator exceeds denominator");
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn from_u64(numerator: u64, denominator: u64) -> Result<Self> {
        Self::new(numerator.into(), denominator.into())
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator.clone().into())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for ExactProbability {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl Eq for ExactProbability {}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}
