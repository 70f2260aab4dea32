//! Wishart distributions `γ_{p,σ}` on the symmetric cone of an algebra.
//!
//! The Laplace transform is
//! `∫ e^{−⟨θ, x⟩} γ_{p,σ}(dx) = det(e + P(σ^½)θ)^{−p}`.

mod cumulant;
mod gate;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, JordanAlgebra};
use crate::endo::SymEndo;
use crate::{Error, Result};

pub use cumulant::{CumulantEvaluator, FdHessian, FD_REL_STEP, RICHARDSON_TRIGGER};
pub use gate::{
    laplace_gate, laplace_gate_sum, LaplaceGateReport, LaplacePoint, LAPLACE_GATE_THRESHOLD,
};
pub use sampler::{sample, sample_with, SamplerPath, CHUNK_SIZE, Y_STREAM_BASE};

/// Absolute tolerance for matching the discrete Gyndikin points.
pub const GYNDIKIN_TOL: f64 = 1e-12;

/// `Λ = {d/2, d, …, (d/2)(r−1)} ∪ ((d/2)(r−1), ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GyndikinSet {
    pub r: usize,
    pub d: usize,
}

impl GyndikinSet {
    pub fn new(r: usize, d: usize) -> Self {
        GyndikinSet { r, d }
    }

    pub fn of(algebra: &JordanAlgebra) -> Self {
        GyndikinSet::new(algebra.rank(), algebra.peirce_d())
    }

    /// `(d/2)(r−1)`, the left end of the continuous part.
    pub fn threshold(&self) -> f64 {
        self.d as f64 / 2.0 * (self.r as f64 - 1.0)
    }

    pub fn discrete_points(&self) -> Vec<f64> {
        (1..self.r)
            .map(|k| k as f64 * self.d as f64 / 2.0)
            .collect()
    }

    pub fn contains(&self, p: f64) -> bool {
        if !p.is_finite() {
            return false;
        }
        p > self.threshold() && p > 0.0
            || self
                .discrete_points()
                .iter()
                .any(|x| (p - x).abs() <= GYNDIKIN_TOL)
    }
}

pub fn gyndikin_contains(g: &GyndikinSet, p: f64) -> bool {
    g.contains(p)
}

/// Shape `p ∈ Λ` and scale `σ ∈ Ω`, bound to an algebra.
#[derive(Debug, Clone)]
pub struct WishartParams<'a> {
    algebra: &'a JordanAlgebra,
    p: f64,
    sigma: Element,
    sigma_sqrt: Element,
    p_half: SymEndo,
}

impl<'a> WishartParams<'a> {
    pub fn new(algebra: &'a JordanAlgebra, p: f64, sigma: Element) -> Result<Self> {
        if sigma.tag() != algebra.tag() {
            return Err(Error::AlgebraMismatch);
        }
        let g = GyndikinSet::of(algebra);
        if !g.contains(p) {
            return Err(Error::InvalidParameter(format!(
                "shape p = {p} is not in the Gyndikin set of {} (discrete points {:?}, continuous part p > {})",
                algebra.name(),
                g.discrete_points(),
                g.threshold()
            )));
        }
        if !algebra.is_in_cone(&sigma)? {
            return Err(Error::Domain(
                "scale sigma must lie in the open cone".into(),
            ));
        }
        let sigma_sqrt = algebra.sqrt(&sigma)?;
        let p_half = algebra.pmap(&sigma_sqrt)?;
        Ok(WishartParams {
            algebra,
            p,
            sigma,
            sigma_sqrt,
            p_half,
        })
    }

    /// `γ_{p,e}`.
    pub fn standard(algebra: &'a JordanAlgebra, p: f64) -> Result<Self> {
        Self::new(algebra, p, algebra.identity())
    }

    pub fn algebra(&self) -> &'a JordanAlgebra {
        self.algebra
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> &Element {
        &self.sigma
    }

    pub fn sigma_sqrt(&self) -> &Element {
        &self.sigma_sqrt
    }

    /// `P(σ^½)`.
    pub fn p_sigma_half(&self) -> &SymEndo {
        &self.p_half
    }

    /// Same scale, different shape.
    pub fn with_shape(&self, p: f64) -> Result<WishartParams<'a>> {
        WishartParams::new(self.algebra, p, self.sigma.clone())
    }

    /// `E X = pσ`.
    pub fn mean(&self) -> Element {
        self.sigma.scale(self.p)
    }

    /// `det(e + P(σ^½)θ)^{−p}`.
    pub fn laplace(&self, theta: &Element) -> Result<f64> {
        let z = &self.algebra.identity() + &self.p_half.apply(theta)?;
        if !self.algebra.is_in_cone(&z)? {
            return Err(Error::Domain(
                "e + P(sigma^1/2) theta is not in the cone; the Laplace transform diverges".into(),
            ));
        }
        Ok(self.algebra.determinant(&z)?.powf(-self.p))
    }
}

/// Free-function form of [`WishartParams::laplace`].
pub fn laplace(params: &WishartParams<'_>, theta: &Element) -> Result<f64> {
    params.laplace(theta)
}
