//! Report builders behind the subcommands.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::algebra::{AlgebraKind, JordanAlgebra};
use crate::identities::{run_identity_suite, IdentityReport, SuiteOptions};
use crate::psi::{build_psi, dims_closed_form, trace_psi_closed};
use crate::regression::{
    constants_from_shapes, diff_constants, mc_verify_linear_with, mc_verify_quadratic_with,
    recover_structure, verify_diff_identity, DifferentialCheck, PairedSamples, RecoveredStructure,
    RegressionConstants, VerificationReport,
};
use crate::stats::theta_grid;
use crate::wishart::{GyndikinSet, WishartParams};
use crate::{Error, Result};

/// Stream of the seed reserved for the random `s` in `verify`.
const S_STREAM: u64 = 1 << 41;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gyndikin {
    pub threshold: f64,
    pub discrete_points: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub algebra: String,
    pub kind: String,
    pub r: usize,
    pub d: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_ambient_dim: Option<usize>,
    #[serde(rename = "dim_F")]
    pub dim_f: usize,
    #[serde(rename = "dim_F1")]
    pub dim_f1: usize,
    #[serde(rename = "dim_F2")]
    pub dim_f2: usize,
    #[serde(rename = "dim_F1_closed")]
    pub dim_f1_closed: usize,
    #[serde(rename = "dim_F2_closed")]
    pub dim_f2_closed: usize,
    pub trace_psi: f64,
    pub trace_psi_closed: f64,
    pub psi_eigenvalues: Vec<EigenCluster>,
    pub gyndikin: Gyndikin,
    pub pass: bool,
}

pub fn info(algebra: &JordanAlgebra) -> Result<InfoReport> {
    let (r, d) = (algebra.rank(), algebra.peirce_d());
    let psi = build_psi(algebra)?;
    let split = psi.spectral_split()?;
    let (c1, c2) = dims_closed_form(r, d)?;
    let trace = psi.trace_numeric();
    let closed = trace_psi_closed(r, d);
    let mut psi_eigenvalues = vec![EigenCluster {
        value: 1.0,
        multiplicity: split.dim1,
    }];
    if split.dim2 > 0 {
        psi_eigenvalues.push(EigenCluster {
            value: -psi.d_half(),
            multiplicity: split.dim2,
        });
    }
    let g = GyndikinSet::of(algebra);
    Ok(InfoReport {
        algebra: algebra.name(),
        kind: algebra.kind().short_name().to_string(),
        r,
        d,
        n: algebra.dim(),
        spin_ambient_dim: algebra.spin_ambient_dim(),
        dim_f: psi.dim_f(),
        dim_f1: split.dim1,
        dim_f2: split.dim2,
        dim_f1_closed: c1,
        dim_f2_closed: c2,
        trace_psi: trace,
        trace_psi_closed: closed,
        psi_eigenvalues,
        gyndikin: Gyndikin {
            threshold: g.threshold(),
            discrete_points: g.discrete_points(),
        },
        pass: split.dim1 == c1 && split.dim2 == c2 && (trace - closed).abs() <= 1e-8,
    })
}

pub fn check_identities(algebra: &JordanAlgebra, seed: u64) -> Result<IdentityReport> {
    run_identity_suite(
        algebra,
        SuiteOptions {
            seed,
            ..SuiteOptions::default()
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub algebra: String,
    pub sigma: Vec<f64>,
    pub constants: RegressionConstants,
    pub differential_constants: DifferentialCheck,
    pub reports: Vec<VerificationReport>,
    pub pass: bool,
}

/// Linear and quadratic identities by Monte Carlo, then the differential
/// identities at `−θ` for every grid point (always inside the cumulant domain).
pub fn verify(config: &RunConfig) -> Result<VerifyReport> {
    let algebra = config.build_algebra()?;
    if !matches!(
        algebra.kind(),
        AlgebraKind::SymReal | AlgebraKind::HermComplex
    ) {
        return Err(Error::Unsupported(format!(
            "no Wishart sampler for {}; supported kinds: sym, herm",
            algebra.name()
        )));
    }
    let p = RunConfig::required(config.p, "p")?;
    let pp = RunConfig::required(config.pp, "pp")?;
    let sigma = config.sigma.build(&algebra)?;
    let x = WishartParams::new(&algebra, p, sigma.clone())?;
    let y = WishartParams::new(&algebra, pp, sigma.clone())?;
    let constants = constants_from_shapes(p, pp, algebra.peirce_d())?;
    let differential_constants = diff_constants(&constants)?;
    let grid = theta_grid(&algebra, &config.theta_grid, config.seed);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(S_STREAM);
    let s_list = vec![algebra.identity(), algebra.random_element(&mut rng)];

    let samples = PairedSamples::draw(&x, &y, config.samples, config.seed)?;
    let mut reports = vec![mc_verify_linear_with(&constants, &samples, &grid, None)?];
    for i in [1, 2] {
        reports.push(mc_verify_quadratic_with(
            &algebra, &constants, &samples, i, &s_list, &grid, None,
        )?);
    }
    for i in [1, 2] {
        let mut merged: Option<VerificationReport> = None;
        for s in &s_list {
            for point in &grid {
                let mut rep = verify_diff_identity(&x, pp, i, s, &point.theta.scale(-1.0))?;
                for rec in &mut rep.records {
                    rec.theta_scale = point.scale.map(|t| -t);
                }
                match &mut merged {
                    None => merged = Some(rep),
                    Some(m) => {
                        m.pass &= rep.pass;
                        m.records.extend(rep.records);
                    }
                }
            }
        }
        reports.extend(merged);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(VerifyReport {
        config: config.clone(),
        algebra: algebra.name(),
        sigma: sigma.as_slice().to_vec(),
        constants,
        differential_constants,
        reports,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverReport {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub n: usize,
    pub ordering_holds: bool,
    pub recovered: RecoveredStructure,
    pub pass: bool,
}

pub fn recover(config: &RunConfig) -> Result<RecoverReport> {
    let a = RunConfig::required(config.a, "a")?;
    let b1 = RunConfig::required(config.b1, "b1")?;
    let b2 = RunConfig::required(config.b2, "b2")?;
    let n = RunConfig::required(config.n, "n")?;
    let recovered = recover_structure(a, b1, b2, n)?;
    Ok(RecoverReport {
        a,
        b1,
        b2,
        n,
        ordering_holds: true,
        recovered,
        pass: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimsRow {
    pub algebra: String,
    pub r: usize,
    pub d: usize,
    pub n: usize,
    #[serde(rename = "dim_F")]
    pub dim_f: usize,
    #[serde(rename = "dim_F1")]
    pub dim_f1: usize,
    #[serde(rename = "dim_F2")]
    pub dim_f2: usize,
    #[serde(rename = "dim_F1_closed")]
    pub dim_f1_closed: usize,
    #[serde(rename = "dim_F2_closed")]
    pub dim_f2_closed: usize,
    pub trace_psi: f64,
    pub trace_psi_closed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimsTable {
    pub rows: Vec<DimsRow>,
    pub pass: bool,
}

/// Algebras listed by `dims-table`.
pub fn dims_table_algebras() -> Vec<JordanAlgebra> {
    let mut out = Vec::new();
    for r in 2..=4 {
        out.push(JordanAlgebra::matrix(AlgebraKind::SymReal, r).expect("valid"));
    }
    for kind in [AlgebraKind::HermComplex, AlgebraKind::HermQuaternion] {
        for r in 2..=3 {
            out.push(JordanAlgebra::matrix(kind, r).expect("valid"));
        }
    }
    for ambient in 2..=6 {
        out.push(JordanAlgebra::spin(ambient).expect("valid"));
    }
    out.push(JordanAlgebra::albert());
    out
}

pub fn dims_table() -> Result<DimsTable> {
    let rows = dims_table_algebras()
        .iter()
        .map(|alg| {
            info(alg).map(|i| DimsRow {
                algebra: i.algebra,
                r: i.r,
                d: i.d,
                n: i.n,
                dim_f: i.dim_f,
                dim_f1: i.dim_f1,
                dim_f2: i.dim_f2,
                dim_f1_closed: i.dim_f1_closed,
                dim_f2_closed: i.dim_f2_closed,
                trace_psi: i.trace_psi,
                trace_psi_closed: i.trace_psi_closed,
                pass: i.pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(DimsTable { rows, pass })
}
