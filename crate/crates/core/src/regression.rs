//! Regression constants of Wishart pairs, their Monte Carlo and
//! differential verification, and recovery of `(d, r)` from the constants.
//!
//! For independent `X ~ γ_{p,σ}`, `Y ~ γ_{p',σ}` and `T = X + Y`:
//!
//! ```text
//! E(X | T)        = a T,          a  = p/(p+p')
//! E(q₁ˢ(X) | T)   = b₁ q₁ˢ(T),    b₁ = a (p+1)/(p+p'+1)
//! E(q₂ˢ(X) | T)   = b₂ q₂ˢ(T),    b₂ = a (p−d/2)/(p+p'−d/2)
//! ```
//!
//! Conditional expectations are checked in integrated form: both sides are
//! multiplied by `e^{−⟨θ, T⟩}` and averaged over samples.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, Element, JordanAlgebra};
use crate::endo::QuadraticForm;
use crate::psi::{build_psi, q1s, q2s};
use crate::stats::{jackknife_mean, ThetaPoint};
use crate::wishart::{sample_with, CumulantEvaluator, SamplerPath, WishartParams, Y_STREAM_BASE};
use crate::{Error, Result};

/// Default `|z|` threshold for Monte Carlo identities.
pub const Z_THRESHOLD: f64 = 4.0;
/// Means of integrated differences below this multiple of the mean summand
/// size are treated as exact zeros.
const ROUNDOFF: f64 = 1e-10;
/// Relative tolerance of the differential identity under finite differences.
pub const DIFF_TOLERANCE: f64 = 1e-3;
/// Distance from an integer accepted by structure recovery.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionConstants {
    pub p: f64,
    pub p_prime: f64,
    pub d: usize,
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
}

impl RegressionConstants {
    /// `b₂ < a² < b₁ < a`.
    pub fn ordering_holds(&self) -> bool {
        self.b2 < self.a * self.a && self.a * self.a < self.b1 && self.b1 < self.a
    }

    /// `b₁` for `i = 1`, `b₂` for `i = 2`.
    pub fn b(&self, i: u8) -> Result<f64> {
        match i {
            1 => Ok(self.b1),
            2 => Ok(self.b2),
            _ => Err(Error::InvalidParameter(format!(
                "eigenspace index must be 1 or 2, got {i}"
            ))),
        }
    }
}

pub fn constants_from_shapes(p: f64, p_prime: f64, d: usize) -> Result<RegressionConstants> {
    if !(p > 0.0 && p_prime > 0.0 && p.is_finite() && p_prime.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "shapes must be positive, got p = {p}, p' = {p_prime}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter(
            "Peirce constant d must be positive".into(),
        ));
    }
    let dh = d as f64 / 2.0;
    let s = p + p_prime;
    if (s - dh).abs() < 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "p + p' - d/2 vanishes for p = {p}, p' = {p_prime}, d = {d}"
        )));
    }
    let a = p / s;
    Ok(RegressionConstants {
        p,
        p_prime,
        d,
        a,
        b1: a * (p + 1.0) / (s + 1.0),
        b2: a * (p - dh) / (s - dh),
    })
}

/// An algebra consistent with recovered `(d, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub kind: AlgebraKind,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_ambient_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredStructure {
    /// `d` before rounding.
    pub d: f64,
    /// `r` before rounding.
    pub r: f64,
    pub d_int: usize,
    pub r_int: usize,
    pub n: usize,
    pub kind_candidates: Vec<Candidate>,
}

/// `d = 2 (a − b₁)/(b₁ − a²) · (a² − b₂)/(a − b₂)`, then `r` from
/// `n = r + (d/2) r (r − 1)`.
pub fn recover_structure(a: f64, b1: f64, b2: f64, n: usize) -> Result<RecoveredStructure> {
    if ![a, b1, b2].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter("constants must be finite".into()));
    }
    if !(b2 < a * a && a * a < b1 && b1 < a) {
        return Err(Error::InconsistentConstants(format!(
            "expected b2 < a^2 < b1 < a, got a = {a}, b1 = {b1}, b2 = {b2}"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "dimension n must be at least 3, got {n}"
        )));
    }
    let a2 = a * a;
    let d = 2.0 * (a - b1) / (b1 - a2) * (a2 - b2) / (a - b2);
    let d_int = nearest_positive_integer(d, "d")?;
    let dh = d / 2.0;
    let nf = n as f64;
    let r = ((dh - 1.0) + ((1.0 - dh).powi(2) + 4.0 * dh * nf).sqrt()) / (2.0 * dh);
    let r_int = nearest_positive_integer(r, "r")?;
    if r_int < 2 {
        return Err(Error::InconsistentConstants(format!(
            "recovered rank {r} is below 2"
        )));
    }
    let mut kind_candidates = Vec::new();
    let matrix = match d_int {
        1 => Some(AlgebraKind::SymReal),
        2 => Some(AlgebraKind::HermComplex),
        4 => Some(AlgebraKind::HermQuaternion),
        8 if r_int == 3 => Some(AlgebraKind::Albert),
        _ => None,
    };
    if let Some(kind) = matrix {
        kind_candidates.push(Candidate {
            kind,
            rank: r_int,
            spin_ambient_dim: None,
        });
    }
    if r_int == 2 {
        kind_candidates.push(Candidate {
            kind: AlgebraKind::SpinFactor,
            rank: 2,
            spin_ambient_dim: Some(d_int + 1),
        });
    }
    if kind_candidates.is_empty() {
        return Err(Error::InconsistentConstants(format!(
            "no simple Euclidean Jordan algebra has d = {d_int} and r = {r_int}"
        )));
    }
    Ok(RecoveredStructure {
        d,
        r,
        d_int,
        r_int,
        n,
        kind_candidates,
    })
}

fn nearest_positive_integer(x: f64, what: &str) -> Result<usize> {
    let k = x.round();
    if !x.is_finite() || (x - k).abs() > INTEGRALITY_TOL || k < 1.0 {
        return Err(Error::InconsistentConstants(format!(
            "recovered {what} = {x} is not a positive integer"
        )));
    }
    Ok(k as usize)
}

/// Constants `p_i` of the differential identities
/// `q(∂/∂θ)κ = p_i q(κ')` for `q ∈ Q_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialCheck {
    pub p1: f64,
    pub p2: f64,
}

impl DifferentialCheck {
    pub fn p(&self, i: u8) -> Result<f64> {
        match i {
            1 => Ok(self.p1),
            2 => Ok(self.p2),
            _ => Err(Error::InvalidParameter(format!(
                "eigenspace index must be 1 or 2, got {i}"
            ))),
        }
    }
}

/// `p_i = (b_i − a²)/(a² − a b_i)`.
pub fn diff_constants(c: &RegressionConstants) -> Result<DifferentialCheck> {
    let a2 = c.a * c.a;
    let quotient = |b: f64| -> Result<f64> {
        if (c.a - b).abs() <= 1e-15 * c.a.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "a = b_i = {b} is impossible"
            )));
        }
        Ok((b - a2) / (a2 - c.a * b))
    };
    Ok(DifferentialCheck {
        p1: quotient(c.b1)?,
        p2: quotient(c.b2)?,
    })
}

/// Simplified values of the quotient for Wishart constants:
/// `p₁ = 1/p`, `p₂ = −d/(2p)`.
pub fn diff_constants_closed_form(p: f64, d: usize) -> DifferentialCheck {
    DifferentialCheck {
        p1: 1.0 / p,
        p2: -(d as f64) / (2.0 * p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Criterion {
    ZScore { threshold: f64 },
    RelativeError { tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_scale: Option<f64>,
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_error: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    /// The constant on the right-hand side (`a`, `b_i` or `p_i`).
    pub constant: f64,
    pub criterion: Criterion,
    pub records: Vec<Record>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
}

impl VerificationReport {
    pub fn max_abs_z(&self) -> f64 {
        self.records
            .iter()
            .filter_map(|r| r.z_score)
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// Compares `Tr(f_q κ''(θ))` with `p_i q(κ'(θ))` for `q = q_iˢ`, with `κ` the
/// cumulant function of `X` and both derivatives by finite differences.
pub fn verify_diff_identity(
    x: &WishartParams<'_>,
    p_prime: f64,
    i: u8,
    s: &Element,
    theta: &Element,
) -> Result<VerificationReport> {
    let alg = x.algebra();
    let constants = constants_from_shapes(x.p(), p_prime, alg.peirce_d())?;
    let pi = diff_constants(&constants)?.p(i)?;
    let q = quadratic_i(alg, i, s)?;
    let kappa = CumulantEvaluator::new(x)?;
    let hess = kappa.hessian_fd(theta)?;
    let grad = kappa.gradient_fd(theta)?;
    let lhs = q.endo.trace_product(&hess.hessian)?;
    let rhs = pi * q.eval(&grad)?;
    let rel_error = (lhs / rhs - 1.0).abs();
    let pass = rel_error <= DIFF_TOLERANCE;
    Ok(VerificationReport {
        identity: format!("differential_q{i}"),
        constant: pi,
        criterion: Criterion::RelativeError {
            tolerance: DIFF_TOLERANCE,
        },
        records: vec![Record {
            theta_scale: None,
            theta: theta.as_slice().to_vec(),
            s: Some(s.as_slice().to_vec()),
            lhs,
            rhs,
            standard_error: None,
            z_score: None,
            rel_error: Some(rel_error),
            pass,
        }],
        pass,
        seed: None,
        n_samples: None,
    })
}

fn quadratic_i(alg: &JordanAlgebra, i: u8, s: &Element) -> Result<QuadraticForm> {
    match i {
        1 => q1s(alg, s),
        2 => q2s(alg, s),
        _ => Err(Error::InvalidParameter(format!(
            "eigenspace index must be 1 or 2, got {i}"
        ))),
    }
}

/// Paired samples `(X_k, Y_k)` with `X` on streams from 0 and `Y` on streams
/// from [`Y_STREAM_BASE`] of the same seed.
#[derive(Debug, Clone)]
pub struct PairedSamples {
    pub xs: Vec<Element>,
    pub ys: Vec<Element>,
    pub seed: u64,
}

impl PairedSamples {
    pub fn draw(
        x: &WishartParams<'_>,
        y: &WishartParams<'_>,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if x.algebra().tag() != y.algebra().tag() {
            return Err(Error::AlgebraMismatch);
        }
        if x.sigma().max_abs_diff(y.sigma()) > 1e-12 {
            return Err(Error::InvalidParameter(
                "X and Y must share the scale sigma".into(),
            ));
        }
        Ok(PairedSamples {
            xs: sample_with(x, n_samples, seed, 0, SamplerPath::Auto)?,
            ys: sample_with(y, n_samples, seed, Y_STREAM_BASE, SamplerPath::Auto)?,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn sums(&self) -> Vec<Element> {
        self.xs.iter().zip(&self.ys).map(|(x, y)| x + y).collect()
    }
}

/// Integrated test of `E[g(X) w] = c E[h(T) w]`, `w = e^{−⟨θ,T⟩}`, at
/// each grid point: the per-sample differences `g(X)w − c h(T)w` must have
/// mean zero within `threshold` jackknife standard errors. Means below
/// roundoff of the summand sizes pass outright (e.g. `q₂(X) ≡ 0` at `p = d/2`).
#[allow(clippy::too_many_arguments)]
fn integrated_check<G, H>(
    identity: String,
    constant: f64,
    samples: &PairedSamples,
    grid: &[ThetaPoint],
    s: Option<&Element>,
    threshold: f64,
    g: G,
    h: H,
) -> Result<VerificationReport>
where
    G: Fn(&Element, &Element) -> Result<f64>,
    H: Fn(&Element, &Element) -> Result<f64>,
{
    let sums = samples.sums();
    let mut records = Vec::with_capacity(grid.len());
    for point in grid {
        let theta = &point.theta;
        let mut left = Vec::with_capacity(sums.len());
        let mut right = Vec::with_capacity(sums.len());
        for (x, t) in samples.xs.iter().zip(&sums) {
            let w = (-t.coords().dot(theta.coords())).exp();
            left.push(g(x, theta)? * w);
            right.push(constant * h(t, theta)? * w);
        }
        let diffs: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l - r).collect();
        let est = jackknife_mean(&diffs);
        let z = est.z_score(0.0);
        // bound on the size of terms at most quadratic in x
        let s_norm = s.map_or(1.0, |v| 1.0 + v.coords().norm());
        let scale = samples
            .xs
            .iter()
            .zip(&sums)
            .map(|(x, t)| {
                let w = (-t.coords().dot(theta.coords())).exp();
                w * (1.0 + x.coords().norm() + t.coords().norm()).powi(2)
            })
            .sum::<f64>()
            * s_norm
            * (1.0 + theta.coords().norm())
            / diffs.len().max(1) as f64;
        let roundoff = est.mean.abs() <= ROUNDOFF * scale;
        records.push(Record {
            theta_scale: point.scale,
            theta: theta.as_slice().to_vec(),
            s: s.map(|v| v.as_slice().to_vec()),
            lhs: jackknife_mean(&left).mean,
            rhs: jackknife_mean(&right).mean,
            standard_error: Some(est.standard_error),
            z_score: Some(z),
            rel_error: None,
            pass: z.abs() <= threshold || roundoff,
        });
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(VerificationReport {
        identity,
        constant,
        criterion: Criterion::ZScore { threshold },
        records,
        pass,
        seed: Some(samples.seed),
        n_samples: Some(samples.len()),
    })
}

/// `E[⟨θ,X⟩ e^{−⟨θ,T⟩}] = a E[⟨θ,T⟩ e^{−⟨θ,T⟩}]` on the grid.
///
/// `a_override` replaces `a` (used for power checks).
pub fn mc_verify_linear_with(
    constants: &RegressionConstants,
    samples: &PairedSamples,
    grid: &[ThetaPoint],
    a_override: Option<f64>,
) -> Result<VerificationReport> {
    let a = a_override.unwrap_or(constants.a);
    let inner = |v: &Element, theta: &Element| Ok(v.coords().dot(theta.coords()));
    integrated_check(
        "linear".into(),
        a,
        samples,
        grid,
        None,
        Z_THRESHOLD,
        inner,
        inner,
    )
}

pub fn mc_verify_linear(
    x: &WishartParams<'_>,
    y: &WishartParams<'_>,
    n_samples: usize,
    seed: u64,
    grid: &[ThetaPoint],
) -> Result<VerificationReport> {
    let constants = constants_from_shapes(x.p(), y.p(), x.algebra().peirce_d())?;
    let samples = PairedSamples::draw(x, y, n_samples, seed)?;
    mc_verify_linear_with(&constants, &samples, grid, None)
}

/// `E[q_iˢ(X) e^{−⟨θ,T⟩}] = b_i E[q_iˢ(T) e^{−⟨θ,T⟩}]` for every `s` and `θ`;
/// `b_override` replaces `b_i`.
pub fn mc_verify_quadratic_with(
    algebra: &JordanAlgebra,
    constants: &RegressionConstants,
    samples: &PairedSamples,
    i: u8,
    s_list: &[Element],
    grid: &[ThetaPoint],
    b_override: Option<f64>,
) -> Result<VerificationReport> {
    let b = b_override.unwrap_or(constants.b(i)?);
    let mut records = Vec::new();
    let mut pass = true;
    for s in s_list {
        let q = quadratic_i(algebra, i, s)?;
        let eval = |v: &Element, _: &Element| q.eval(v);
        let report = integrated_check(
            String::new(),
            b,
            samples,
            grid,
            Some(s),
            Z_THRESHOLD,
            eval,
            eval,
        )?;
        pass &= report.pass;
        records.extend(report.records);
    }
    Ok(VerificationReport {
        identity: format!("quadratic_q{i}"),
        constant: b,
        criterion: Criterion::ZScore {
            threshold: Z_THRESHOLD,
        },
        records,
        pass,
        seed: Some(samples.seed),
        n_samples: Some(samples.len()),
    })
}

pub fn mc_verify_quadratic(
    x: &WishartParams<'_>,
    y: &WishartParams<'_>,
    i: u8,
    s_list: &[Element],
    n_samples: usize,
    seed: u64,
    grid: &[ThetaPoint],
) -> Result<VerificationReport> {
    let alg = x.algebra();
    let constants = constants_from_shapes(x.p(), y.p(), alg.peirce_d())?;
    let samples = PairedSamples::draw(x, y, n_samples, seed)?;
    mc_verify_quadratic_with(alg, &constants, &samples, i, s_list, grid, None)
}

/// For `q = q₁ + q₂` split by `Ψ`:
/// `E[q(X) e^{−⟨θ,T⟩}] = E[(b₁q₁ + b₂q₂)(T) e^{−⟨θ,T⟩}]`.
pub fn mc_verify_mixed(
    algebra: &JordanAlgebra,
    constants: &RegressionConstants,
    samples: &PairedSamples,
    q: &QuadraticForm,
    grid: &[ThetaPoint],
) -> Result<VerificationReport> {
    let split = build_psi(algebra)?.spectral_split()?;
    let (q1, q2) = split.decompose_quadratic(q)?;
    let combined = QuadraticForm::new(&q1.endo.scale(constants.b1) + &q2.endo.scale(constants.b2));
    integrated_check(
        "mixed".into(),
        1.0,
        samples,
        grid,
        None,
        Z_THRESHOLD,
        |x, _| q.eval(x),
        |t, _| combined.eval(t),
    )
}

#[cfg(test)]
mod tests;
