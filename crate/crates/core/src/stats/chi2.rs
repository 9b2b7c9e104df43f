use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};

pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.is_empty() {
        return invalid("observed and expected counts must be non-empty and of equal length");
    }
    if expected.iter().any(|&e| !(e > 0.0)) {
        return invalid("expected counts must be positive");
    }
    Ok(observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum())
}

/// Upper `alpha` quantile of the chi-square law with `df` degrees of freedom.
pub fn chi_square_critical(df: usize, alpha: f64) -> Result<f64> {
    if df == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return invalid("chi-square critical value needs df >= 1 and alpha in (0, 1)");
    }
    let law = ChiSquared::new(df as f64).map_err(|e| crate::Error::Domain(e.to_string()))?;
    Ok(law.inverse_cdf(1.0 - alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Goodness of fit of `observed` to the uniform law over its cells.
pub fn chi_square_uniform(observed: &[u64], alpha: f64) -> Result<ChiSquareOutcome> {
    if observed.len() < 2 {
        return invalid("uniformity test needs at least two cells");
    }
    let total: u64 = observed.iter().sum();
    let expected = vec![total as f64 / observed.len() as f64; observed.len()];
    let statistic = chi_square_statistic(observed, &expected)?;
    let df = observed.len() - 1;
    let critical = chi_square_critical(df, alpha)?;
    Ok(ChiSquareOutcome { statistic, df, critical, pass: statistic <= critical })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_critical_values() {
        assert!((chi_square_critical(1, 0.01).unwrap() - 6.634897).abs() < 1e-5);
        assert!((chi_square_critical(4, 0.01).unwrap() - 13.276704).abs() < 1e-5);
    }

    #[test]
    fn statistic() {
        assert_eq!(chi_square_statistic(&[10, 10], &[10.0, 10.0]).unwrap(), 0.0);
        assert!((chi_square_statistic(&[12, 8], &[10.0, 10.0]).unwrap() - 0.8).abs() < 1e-15);
        assert!(chi_square_statistic(&[1], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn uniform_outcome() {
        let out = chi_square_uniform(&[100, 0], 0.01).unwrap();
        assert!(!out.pass);
        assert!(chi_square_uniform(&[50, 51, 49], 0.01).unwrap().pass);
    }
}
