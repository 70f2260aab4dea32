//! `κ(θ) = log E e^{⟨θ, X⟩} = −p log det(e − P(σ^½)θ)` and its derivatives.

use nalgebra::{DMatrix, DVector};

use super::WishartParams;
use crate::algebra::Element;
use crate::endo::SymEndo;
use crate::{Error, Result};

/// Finite-difference step relative to the domain radius.
pub const FD_REL_STEP: f64 = 1e-5;
/// Relative asymmetry of the Hessian above which Richardson refinement runs.
pub const RICHARDSON_TRIGGER: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct CumulantEvaluator<'a> {
    params: &'a WishartParams<'a>,
    radius: f64,
}

/// Finite-difference Hessian with its diagnostics.
#[derive(Debug, Clone)]
pub struct FdHessian {
    pub hessian: SymEndo,
    pub step: f64,
    /// `max |H − Hᵀ| / max |H|` before symmetrization.
    pub asymmetry: f64,
    pub richardson: bool,
}

impl<'a> CumulantEvaluator<'a> {
    /// The domain is `{θ : e − P(σ^½)θ ∈ Ω}`; it contains the ball of radius
    /// `1/λ_max(σ)`.
    pub fn new(params: &'a WishartParams<'a>) -> Result<Self> {
        let (_, hi) = params.algebra().eigenvalue_bounds(params.sigma())?;
        Ok(CumulantEvaluator {
            params,
            radius: 1.0 / hi,
        })
    }

    pub fn params(&self) -> &WishartParams<'a> {
        self.params
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn shifted(&self, theta: &Element) -> Result<Element> {
        let alg = self.params.algebra();
        let z = &alg.identity() - &self.params.p_sigma_half().apply(theta)?;
        if !alg.is_in_cone(&z)? {
            return Err(Error::Domain(
                "theta is outside the domain of the cumulant function".into(),
            ));
        }
        Ok(z)
    }

    pub fn in_domain(&self, theta: &Element) -> Result<bool> {
        match self.shifted(theta) {
            Ok(_) => Ok(true),
            Err(Error::Domain(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn value(&self, theta: &Element) -> Result<f64> {
        let z = self.shifted(theta)?;
        let det = self.params.algebra().determinant(&z)?;
        Ok(-self.params.p() * det.ln())
    }

    /// `κ'(θ) = p P(σ^½)(e − P(σ^½)θ)⁻¹`.
    pub fn gradient(&self, theta: &Element) -> Result<Element> {
        let z = self.shifted(theta)?;
        let zinv = self.params.algebra().inverse(&z)?;
        Ok(self
            .params
            .p_sigma_half()
            .apply(&zinv)?
            .scale(self.params.p()))
    }

    /// `κ''(θ) = p P(σ^½) P((e − P(σ^½)θ)⁻¹) P(σ^½)`.
    pub fn hessian(&self, theta: &Element) -> Result<SymEndo> {
        let alg = self.params.algebra();
        let z = self.shifted(theta)?;
        let pz = alg.pmap(&alg.inverse(&z)?)?;
        let a = self.params.p_sigma_half().matrix();
        let m = a * pz.matrix() * a * self.params.p();
        Ok(SymEndo::from_matrix_symmetrized(alg.tag(), m))
    }

    fn step(&self) -> f64 {
        FD_REL_STEP * self.radius
    }

    fn shift(&self, theta: &Element, moves: &[(usize, f64)]) -> Result<f64> {
        let mut v = theta.coords().clone();
        for &(i, h) in moves {
            v[i] += h;
        }
        let alg = self.params.algebra();
        self.value(&alg.element_from_slice(v.as_slice())?)
    }

    /// Central differences `[κ(θ + h eᵢ) − κ(θ − h eᵢ)]/(2h)`.
    pub fn gradient_fd(&self, theta: &Element) -> Result<Element> {
        let h = self.step();
        let n = self.params.algebra().dim();
        let mut g = DVector::zeros(n);
        for i in 0..n {
            g[i] = (self.shift(theta, &[(i, h)])? - self.shift(theta, &[(i, -h)])?) / (2.0 * h);
        }
        self.params.algebra().element_from_slice(g.as_slice())
    }

    fn hessian_fd_raw(&self, theta: &Element, h: f64) -> Result<DMatrix<f64>> {
        let n = self.params.algebra().dim();
        let k0 = self.value(theta)?;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let plus = self.shift(theta, &[(i, h)])?;
            let minus = self.shift(theta, &[(i, -h)])?;
            m[(i, i)] = (plus - 2.0 * k0 + minus) / (h * h);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let pp = self.shift(theta, &[(i, h), (j, h)])?;
                let pm = self.shift(theta, &[(i, h), (j, -h)])?;
                let mp = self.shift(theta, &[(i, -h), (j, h)])?;
                let mm = self.shift(theta, &[(i, -h), (j, -h)])?;
                m[(i, j)] = (pp - pm - mp + mm) / (4.0 * h * h);
            }
        }
        Ok(m)
    }

    /// Four-point central-difference Hessian; if its asymmetry exceeds
    /// [`RICHARDSON_TRIGGER`] the estimate is refined as
    /// `(4 H(h/2) − H(h))/3`.
    pub fn hessian_fd(&self, theta: &Element) -> Result<FdHessian> {
        let h = self.step();
        let mut m = self.hessian_fd_raw(theta, h)?;
        let asymmetry = (&m - m.transpose()).amax() / m.amax().max(f64::MIN_POSITIVE);
        let richardson = asymmetry > RICHARDSON_TRIGGER;
        if richardson {
            let half = self.hessian_fd_raw(theta, h / 2.0)?;
            m = (half * 4.0 - m) / 3.0;
        }
        Ok(FdHessian {
            hessian: SymEndo::from_matrix_symmetrized(self.params.algebra().tag(), m),
            step: h,
            asymmetry,
            richardson,
        })
    }
}
