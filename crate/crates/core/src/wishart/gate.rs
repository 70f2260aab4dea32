//! Empirical Laplace transform against the closed form.

use serde::{Deserialize, Serialize};

use super::WishartParams;
use crate::algebra::Element;
use crate::stats::{jackknife_mean, ThetaPoint};
use crate::{Error, Result};

/// Allowed distance between empirical and exact transform, in standard errors.
pub const LAPLACE_GATE_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplacePoint {
    pub theta_scale: Option<f64>,
    pub theta: Vec<f64>,
    pub empirical: f64,
    pub exact: f64,
    pub standard_error: f64,
    pub z_score: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceGateReport {
    pub algebra: String,
    pub p: f64,
    pub sigma: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub threshold: f64,
    pub laplace_grid: Vec<LaplacePoint>,
    pub pass: bool,
}

/// Compares `mean(e^{−⟨θ, X_k⟩})` with `det(e + P(σ^½)θ)^{−p}` on a grid.
pub fn laplace_gate(
    params: &WishartParams<'_>,
    samples: &[Element],
    grid: &[ThetaPoint],
    seed: u64,
    threshold: f64,
) -> Result<LaplaceGateReport> {
    let tag = params.algebra().tag();
    if samples.iter().any(|x| x.tag() != tag) {
        return Err(Error::AlgebraMismatch);
    }
    let mut points = Vec::with_capacity(grid.len());
    for point in grid {
        let theta = &point.theta;
        let values: Vec<f64> = samples
            .iter()
            .map(|x| (-x.coords().dot(theta.coords())).exp())
            .collect();
        let est = jackknife_mean(&values);
        let exact = params.laplace(theta)?;
        let z = est.z_score(exact);
        points.push(LaplacePoint {
            theta_scale: point.scale,
            theta: theta.as_slice().to_vec(),
            empirical: est.mean,
            exact,
            standard_error: est.standard_error,
            z_score: z,
            pass: z.abs() <= threshold,
        });
    }
    let pass = points.iter().all(|p| p.pass);
    Ok(LaplaceGateReport {
        algebra: params.algebra().name(),
        p: params.p(),
        sigma: params.sigma().as_slice().to_vec(),
        n_samples: samples.len(),
        seed,
        threshold,
        laplace_grid: points,
        pass,
    })
}

/// Additivity: `X + Y` for independent `X ~ γ_{p,σ}`, `Y ~ γ_{p',σ}`
/// against `γ_{p+p',σ}`; `sum_params` carries the shape `p + p'`.
pub fn laplace_gate_sum(
    sum_params: &WishartParams<'_>,
    xs: &[Element],
    ys: &[Element],
    grid: &[ThetaPoint],
    seed: u64,
    threshold: f64,
) -> Result<LaplaceGateReport> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    let sums: Vec<Element> = xs.iter().zip(ys).map(|(x, y)| x + y).collect();
    laplace_gate(sum_params, &sums, grid, seed, threshold)
}
