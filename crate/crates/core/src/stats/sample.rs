use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ks::ks_statistic;
use super::moment::empirical_moment;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    DiscreteWalk,
    SdeSim,
    SpectralLaws,
}

/// Equally weighted real sample with its origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    provenance: Provenance,
}

impl EmpiricalSample {
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return invalid("empirical sample must be non-empty");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("empirical sample has non-finite values");
        }
        Ok(Self { values, provenance })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn moment(&self, order: u32) -> Result<(f64, f64)> {
        empirical_moment(&self.values, order)
    }

    pub fn ks(&self, cdf: impl Fn(f64) -> f64) -> Result<f64> {
        ks_statistic(&self.values, cdf)
    }
}

/// Adds an independent uniform offset in `[-width/2, width/2)` to each value,
/// spreading lattice-valued data over its cells.
pub fn dequantize<R: Rng + ?Sized>(values: &mut [f64], width: f64, rng: &mut R) {
    for v in values {
        *v += width * (rng.random::<f64>() - 0.5);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn validation() {
        assert!(EmpiricalSample::new(vec![], Provenance::SdeSim).is_err());
        assert!(EmpiricalSample::new(vec![f64::NAN], Provenance::SdeSim).is_err());
        let s = EmpiricalSample::new(vec![2.0, 2.0], Provenance::DiscreteWalk).unwrap();
        assert_eq!(s.moment(1).unwrap(), (2.0, 0.0));
        assert_eq!(serde_json::to_string(&s.provenance()).unwrap(), "\"discrete_walk\"");
    }

    #[test]
    fn dequantize_stays_in_cell() {
        let mut v = vec![1.0; 1000];
        dequantize(&mut v, 0.2, &mut rng_from_seed(1));
        assert!(v.iter().all(|&x| (0.9..1.1).contains(&x)));
    }
}
