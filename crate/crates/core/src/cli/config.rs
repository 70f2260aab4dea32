//! Run configuration: command-line flags merged over an optional JSON file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, Element, JordanAlgebra};
use crate::stats::ThetaGridSpec;
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 42;

/// `identity`, `diag:λ1,…,λr` on the standard Jordan frame, or `random:SEED`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SigmaSpec {
    Identity,
    Diag(Vec<f64>),
    Random(u64),
}

impl FromStr for SigmaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("identity") || s == "e" {
            return Ok(SigmaSpec::Identity);
        }
        if let Some(rest) = s.strip_prefix("diag:") {
            let values = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("invalid sigma entry '{t}'")))
                })
                .collect::<Result<Vec<f64>>>()?;
            return Ok(SigmaSpec::Diag(values));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let seed = rest
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("invalid sigma seed '{rest}'")))?;
            return Ok(SigmaSpec::Random(seed));
        }
        Err(Error::InvalidParameter(format!(
            "invalid sigma '{s}' (expected identity, diag:L1,...,Lr or random:SEED)"
        )))
    }
}

impl TryFrom<String> for SigmaSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SigmaSpec> for String {
    fn from(spec: SigmaSpec) -> String {
        spec.to_string()
    }
}

impl fmt::Display for SigmaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaSpec::Identity => f.write_str("identity"),
            SigmaSpec::Diag(v) => {
                let parts: Vec<String> = v.iter().map(|t| t.to_string()).collect();
                write!(f, "diag:{}", parts.join(","))
            }
            SigmaSpec::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl SigmaSpec {
    /// A random σ is `g² · r/tr(g²) + ½e` for a Gaussian `g`.
    pub fn build(&self, algebra: &JordanAlgebra) -> Result<Element> {
        match self {
            SigmaSpec::Identity => Ok(algebra.identity()),
            SigmaSpec::Diag(values) => {
                let frame = algebra.standard_frame();
                if values.len() != frame.idempotents.len() {
                    return Err(Error::InvalidParameter(format!(
                        "diag sigma needs {} entries, got {}",
                        frame.idempotents.len(),
                        values.len()
                    )));
                }
                Ok(frame
                    .idempotents
                    .iter()
                    .zip(values)
                    .fold(algebra.zero(), |acc, (c, &l)| &acc + &c.scale(l)))
            }
            SigmaSpec::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let g = algebra.random_element(&mut rng);
                let g2 = algebra.square(&g)?;
                let scale = algebra.rank() as f64 / algebra.trace(&g2)?;
                Ok(&g2.scale(scale) + &algebra.identity().scale(0.5))
            }
        }
    }
}

/// Flags shared by `info`, `check-identities` and `verify`.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Algebra kind: sym, herm, quat, spin or albert.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Rank r (implied for spin and albert).
    #[arg(long)]
    pub rank: Option<usize>,
    /// dim E of the spin factor.
    #[arg(long)]
    pub ambient: Option<usize>,
    /// Shape p of X.
    #[arg(long)]
    pub p: Option<f64>,
    /// Shape p' of Y.
    #[arg(long)]
    pub pp: Option<f64>,
    /// Scale parameter: identity, diag:L1,...,Lr or random:SEED.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// RNG seed (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// `default` or a comma-separated list of scales t for theta = t e.
    #[arg(long = "theta-grid")]
    pub theta_grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RecoverArgs {
    /// Linear regression constant a.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Quadratic constant b1 on Q1.
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    /// Quadratic constant b2 on Q2.
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
    /// Dimension n of the algebra.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of tables.
    #[arg(long)]
    pub json: bool,
    /// JSON file with default values for the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. Keys mirror the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub algebra: Option<String>,
    pub rank: Option<usize>,
    pub ambient: Option<usize>,
    pub p: Option<f64>,
    pub pp: Option<f64>,
    pub sigma: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub theta_grid: Option<String>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub a: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub n: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved run; a report can be reproduced from it alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", with = "short_kind", default)]
    pub algebra: Option<AlgebraKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pp: Option<f64>,
    pub sigma: SigmaSpec,
    pub samples: usize,
    pub seed: u64,
    pub theta_grid: ThetaGridSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub json: bool,
}

impl RunConfig {
    fn base(command: &str, file: &ConfigFile, output: &OutputArgs) -> Result<Self> {
        if let Some(c) = &file.command {
            if c != command {
                return Err(Error::InvalidParameter(format!(
                    "config file is for command '{c}', not '{command}'"
                )));
            }
        }
        Ok(RunConfig {
            command: command.to_string(),
            algebra: None,
            rank: None,
            ambient: None,
            p: None,
            pp: None,
            sigma: SigmaSpec::Identity,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            theta_grid: ThetaGridSpec::Default,
            a: None,
            b1: None,
            b2: None,
            n: None,
            out: output.out.clone().or_else(|| file.out.clone()),
            json: output.json || file.json.unwrap_or(false),
        })
    }

    pub fn from_model_args(command: &str, args: &ModelArgs) -> Result<Self> {
        let file = load_file(&args.output)?;
        let mut cfg = RunConfig::base(command, &file, &args.output)?;
        cfg.algebra = args
            .algebra
            .clone()
            .or(file.algebra)
            .map(|s| s.parse())
            .transpose()?;
        cfg.rank = args.rank.or(file.rank);
        cfg.ambient = args.ambient.or(file.ambient);
        cfg.p = args.p.or(file.p);
        cfg.pp = args.pp.or(file.pp);
        if let Some(s) = args.sigma.clone().or(file.sigma) {
            cfg.sigma = s.parse()?;
        }
        cfg.samples = args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        cfg.seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        if let Some(g) = args.theta_grid.clone().or(file.theta_grid) {
            cfg.theta_grid = g.parse()?;
        }
        Ok(cfg)
    }

    pub fn from_recover_args(args: &RecoverArgs) -> Result<Self> {
        let file = load_file(&args.output)?;
        let mut cfg = RunConfig::base("recover", &file, &args.output)?;
        cfg.a = args.a.or(file.a);
        cfg.b1 = args.b1.or(file.b1);
        cfg.b2 = args.b2.or(file.b2);
        cfg.n = args.n.or(file.n);
        Ok(cfg)
    }

    pub fn from_output_args(command: &str, output: &OutputArgs) -> Result<Self> {
        let file = load_file(output)?;
        RunConfig::base(command, &file, output)
    }

    /// The algebra named by `algebra`, `rank` and `ambient`.
    pub fn build_algebra(&self) -> Result<JordanAlgebra> {
        let kind = self
            .algebra
            .ok_or_else(|| Error::InvalidAlgebra("--algebra is required".into()))?;
        match kind {
            AlgebraKind::SpinFactor => {
                let ambient = self.ambient.ok_or_else(|| {
                    Error::InvalidAlgebra("--ambient is required for spin".into())
                })?;
                if let Some(r) = self.rank {
                    if r != 2 {
                        return Err(Error::InvalidAlgebra(format!(
                            "the spin factor has rank 2, got {r}"
                        )));
                    }
                }
                JordanAlgebra::spin(ambient)
            }
            AlgebraKind::Albert => JordanAlgebra::new(kind, self.rank.unwrap_or(3), self.ambient),
            _ => {
                let r = self.rank.ok_or_else(|| {
                    Error::InvalidAlgebra(format!("--rank is required for {kind}"))
                })?;
                JordanAlgebra::new(kind, r, self.ambient)
            }
        }
    }

    pub fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
        value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
    }
}

fn load_file(output: &OutputArgs) -> Result<ConfigFile> {
    match &output.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

mod short_kind {
    use super::AlgebraKind;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(kind: &Option<AlgebraKind>, s: S) -> Result<S::Ok, S::Error> {
        match kind {
            Some(k) => s.serialize_str(k.short_name()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<AlgebraKind>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}
