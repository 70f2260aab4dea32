//! Monte Carlo summaries and θ-grids.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, JordanAlgebra};
use crate::{Error, Result};

/// Sample mean with its jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub n: usize,
}

impl MeanEstimate {
    /// `(mean − target)/SE`.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.standard_error
    }
}

/// Mean and leave-one-out jackknife standard error,
/// `SE² = (N−1)/N Σ (θ₍ᵢ₎ − θ̄₍.₎)²` with `θ₍ᵢ₎` the mean without sample `i`.
pub fn jackknife_mean(values: &[f64]) -> MeanEstimate {
    let n = values.len();
    if n == 0 {
        return MeanEstimate {
            mean: f64::NAN,
            standard_error: f64::NAN,
            n,
        };
    }
    let total: f64 = values.iter().sum();
    let mean = total / n as f64;
    if n == 1 {
        return MeanEstimate {
            mean,
            standard_error: f64::INFINITY,
            n,
        };
    }
    let m = (n - 1) as f64;
    let loo: Vec<f64> = values.iter().map(|v| (total - v) / m).collect();
    let loo_mean = loo.iter().sum::<f64>() / n as f64;
    let ss: f64 = loo.iter().map(|t| (t - loo_mean).powi(2)).sum();
    MeanEstimate {
        mean,
        standard_error: (m / n as f64 * ss).sqrt(),
        n,
    }
}

pub const DEFAULT_THETA_SCALES: [f64; 5] = [0.05, 0.10, 0.15, 0.20, 0.25];
pub const DEFAULT_RANDOM_DIRECTIONS: usize = 3;
/// Norm of the random positive definite grid directions.
pub const RANDOM_DIRECTION_NORM: f64 = 0.1;
const THETA_STREAM: u64 = 1 << 40;

/// `default`, or a comma-separated list of scales `t` giving `θ = t·e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ThetaGridSpec {
    /// `{0.05, …, 0.25}·e` plus three random positive definite directions
    /// of norm 0.1.
    Default,
    Scales(Vec<f64>),
}

impl FromStr for ThetaGridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("default") {
            return Ok(ThetaGridSpec::Default);
        }
        let scales = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("invalid theta scale '{t}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if scales.is_empty() || scales.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidParameter(
                "theta scales must be nonnegative numbers".into(),
            ));
        }
        Ok(ThetaGridSpec::Scales(scales))
    }
}

impl TryFrom<String> for ThetaGridSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ThetaGridSpec> for String {
    fn from(spec: ThetaGridSpec) -> String {
        spec.to_string()
    }
}

impl fmt::Display for ThetaGridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaGridSpec::Default => f.write_str("default"),
            ThetaGridSpec::Scales(v) => {
                let parts: Vec<String> = v.iter().map(|t| t.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPoint {
    /// `t` when `θ = t·e`; `None` for a random direction.
    pub scale: Option<f64>,
    pub theta: Element,
}

/// Materializes a grid; random directions are `g²/‖g²‖ · 0.1` with `g`
/// drawn from a stream reserved for the grid.
pub fn theta_grid(algebra: &JordanAlgebra, spec: &ThetaGridSpec, seed: u64) -> Vec<ThetaPoint> {
    let e = algebra.identity();
    let (scales, random): (Vec<f64>, usize) = match spec {
        ThetaGridSpec::Default => (DEFAULT_THETA_SCALES.to_vec(), DEFAULT_RANDOM_DIRECTIONS),
        ThetaGridSpec::Scales(v) => (v.clone(), 0),
    };
    let mut out: Vec<ThetaPoint> = scales
        .iter()
        .map(|&t| ThetaPoint {
            scale: Some(t),
            theta: e.scale(t),
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(THETA_STREAM);
    for _ in 0..random {
        let g = algebra.random_element(&mut rng);
        let g2 = algebra.square(&g).expect("same algebra");
        let theta = g2.scale(RANDOM_DIRECTION_NORM / g2.norm());
        out.push(ThetaPoint { scale: None, theta });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraKind;

    #[test]
    fn jackknife_of_mean_is_classical_standard_error() {
        let values = [1.0, 2.0, 4.0, 7.0, 11.0];
        let est = jackknife_mean(&values);
        let mean = 5.0;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
        assert!((est.mean - mean).abs() < 1e-14);
        assert!((est.standard_error - (var / 5.0).sqrt()).abs() < 1e-12);
        assert!((est.z_score(mean)).abs() < 1e-12);
    }

    #[test]
    fn grid_spec_parsing() {
        assert_eq!(
            "default".parse::<ThetaGridSpec>().unwrap(),
            ThetaGridSpec::Default
        );
        assert_eq!(
            "0.1, 0.2".parse::<ThetaGridSpec>().unwrap(),
            ThetaGridSpec::Scales(vec![0.1, 0.2])
        );
        assert!("0.1,x".parse::<ThetaGridSpec>().is_err());
        assert!("-1".parse::<ThetaGridSpec>().is_err());
        let json = serde_json::to_string(&ThetaGridSpec::Scales(vec![0.5])).unwrap();
        assert_eq!(json, "\"0.5\"");
    }

    #[test]
    fn default_grid_shape() {
        let alg = JordanAlgebra::matrix(AlgebraKind::SymReal, 2).unwrap();
        let grid = theta_grid(&alg, &ThetaGridSpec::Default, 9);
        assert_eq!(grid.len(), 8);
        for point in &grid[5..] {
            assert!(point.scale.is_none());
            assert!((point.theta.norm() - 0.1).abs() < 1e-12);
            assert!(alg.is_in_cone(&point.theta).unwrap());
        }
        assert_eq!(grid, theta_grid(&alg, &ThetaGridSpec::Default, 9));
    }
}
