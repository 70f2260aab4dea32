//! Samplers for `γ_{p,σ}` on real symmetric and complex Hermitian matrices.
//!
//! Two constructions of `γ_{p,e}`, then transported by `P(σ^½)`:
//!
//! * rank-one sums, for `p = k·d/2`: `Σ_{m=1}^{k} w_m w_m*` with independent
//!   Gaussian columns whose real components have variance ½;
//! * Bartlett: `U U*` with `U` lower triangular, `U_ii² ~ Gamma(p − (i−1)d/2)`
//!   and below-diagonal real components of variance ½; needs `p > (r−1)d/2`.
//!
//! Samples are drawn in chunks of [`CHUNK_SIZE`]; chunk `c` uses the ChaCha8
//! stream `stream_base + c` of the given seed, so the output does not depend
//! on the number of worker threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{WishartParams, GYNDIKIN_TOL};
use crate::algebra::{AlgebraKind, Element};
use crate::{Error, Result};

pub const CHUNK_SIZE: usize = 4096;
/// Stream offset used for the second of two independent sample sets.
pub const Y_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerPath {
    /// Rank-one sums when `p ≤ (r−1)d/2` (the discrete Gyndikin points),
    /// Bartlett otherwise.
    Auto,
    RankOne,
    Bartlett,
}

/// Draws `count` samples on streams starting at 0 with the automatic path.
pub fn sample(params: &WishartParams<'_>, count: usize, seed: u64) -> Result<Vec<Element>> {
    sample_with(params, count, seed, 0, SamplerPath::Auto)
}

pub fn sample_with(
    params: &WishartParams<'_>,
    count: usize,
    seed: u64,
    stream_base: u64,
    path: SamplerPath,
) -> Result<Vec<Element>> {
    let alg = params.algebra();
    if !matches!(alg.kind(), AlgebraKind::SymReal | AlgebraKind::HermComplex) {
        return Err(Error::Unsupported(format!(
            "no Wishart sampler for {}; supported kinds: sym, herm",
            alg.name()
        )));
    }
    let model = alg.matrix_model()?;
    let (r, d) = (model.r, model.d);
    let dh = d as f64 / 2.0;
    let p = params.p();
    let path = resolve(path, p, r, dh)?;

    let chunks = count.div_ceil(CHUNK_SIZE);
    let transport = params.p_sigma_half().matrix();
    let tag = alg.tag();
    let variance_half = 0.5f64.sqrt();

    let gammas: Vec<Gamma<f64>> = match path {
        Resolved::Bartlett => (0..r)
            .map(|i| {
                Gamma::new(p - i as f64 * dh, 1.0)
                    .map_err(|e| Error::InvalidParameter(format!("Bartlett shape: {e}")))
            })
            .collect::<Result<_>>()?,
        Resolved::RankOne(_) => Vec::new(),
    };

    let out: Vec<Vec<Element>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base + c as u64);
            let len = CHUNK_SIZE.min(count - c * CHUNK_SIZE);
            let normal = |rng: &mut ChaCha8Rng| -> f64 {
                variance_half * rng.sample::<f64, _>(StandardNormal)
            };
            (0..len)
                .map(|_| {
                    let entries = match path {
                        Resolved::RankOne(k) => {
                            let mut acc = vec![0.0; r * r * d];
                            for _ in 0..k {
                                let w: Vec<f64> = (0..r * d).map(|_| normal(&mut rng)).collect();
                                for (a, b) in acc.iter_mut().zip(model.outer_self(&w)) {
                                    *a += b;
                                }
                            }
                            acc
                        }
                        Resolved::Bartlett => {
                            let mut u = vec![0.0; r * r * d];
                            for i in 0..r {
                                u[(i * r + i) * d] = gammas[i].sample(&mut rng).sqrt();
                                for j in 0..i {
                                    for k in 0..d {
                                        u[(i * r + j) * d + k] = normal(&mut rng);
                                    }
                                }
                            }
                            model.gram(&u)
                        }
                    };
                    let coords = nalgebra::DVector::from_vec(model.entries_to_coords(&entries));
                    Element::new(tag, transport * coords)
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy)]
enum Resolved {
    RankOne(usize),
    Bartlett,
}

fn resolve(path: SamplerPath, p: f64, r: usize, dh: f64) -> Result<Resolved> {
    let k = (p / dh).round();
    let discrete = k >= 1.0 && (p - k * dh).abs() <= GYNDIKIN_TOL;
    let continuous = p > (r as f64 - 1.0) * dh;
    match path {
        SamplerPath::RankOne if discrete => Ok(Resolved::RankOne(k as usize)),
        SamplerPath::RankOne => Err(Error::InvalidParameter(format!(
            "the rank-one sampler needs p to be a multiple of d/2 = {dh}, got {p}"
        ))),
        SamplerPath::Bartlett if continuous => Ok(Resolved::Bartlett),
        SamplerPath::Bartlett => Err(Error::InvalidParameter(format!(
            "the Bartlett sampler needs p > (r-1)d/2 = {}, got {p}",
            (r as f64 - 1.0) * dh
        ))),
        SamplerPath::Auto if continuous => Ok(Resolved::Bartlett),
        SamplerPath::Auto if discrete => Ok(Resolved::RankOne(k as usize)),
        SamplerPath::Auto => Err(Error::InvalidParameter(format!(
            "p = {p} is outside the supported sampling regime"
        ))),
    }
}
