//! Strip packing algorithms selectable by name.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use strippack::binpack::{BinAlgorithm, SuperHarmonicParams};
use strippack::strip_offline::{bp_pack, ffdh, nfdh};
use strippack::strip_online::{gp_run, shelf_pack, GpConfig};
use strippack::{Instance, Packed};

/// Shared numeric options for the named algorithms.
#[derive(Debug, Clone)]
pub struct AlgOptions {
    pub c: f64,
    pub r: f64,
    /// Wide/narrow threshold; defaults to the parameter set's `t_(k+1)`.
    pub eps: Option<f64>,
    /// Super Harmonic parameters for `gp`; defaults to Harmonic with `k = 1/eps - 1`.
    pub params: Option<SuperHarmonicParams>,
}

impl Default for AlgOptions {
    fn default() -> Self {
        AlgOptions {
            c: 2.0,
            r: 0.5,
            eps: None,
            params: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum StripAlgorithm {
    BatchPack { bin: BinAlgorithm, c: f64 },
    Nfdh,
    Ffdh,
    GroupPack(GpConfig),
    Shelf { inner: BinAlgorithm, r: f64 },
}

/// A builtin (`harmonic:<k>`, `toy3`) or a JSON parameter file.
pub fn resolve_params(source: &str) -> anyhow::Result<SuperHarmonicParams> {
    if let Some(p) = SuperHarmonicParams::builtin(source) {
        return Ok(p);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).with_context(|| {
        format!("'{source}' is neither a builtin parameter set nor a readable file")
    })?;
    SuperHarmonicParams::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn gp_config(opts: &AlgOptions) -> anyhow::Result<GpConfig> {
    let params = match (&opts.params, opts.eps) {
        (Some(p), _) => p.clone(),
        (None, Some(eps)) => {
            let k = (1.0 / eps).round() as i64 - 1;
            if k < 1 {
                bail!("no Harmonic parameter set has epsilon {eps}; pass --params");
            }
            SuperHarmonicParams::harmonic(k as usize)?
        }
        (None, None) => bail!("gp needs --eps or --params"),
    };
    let eps = opts.eps.unwrap_or(params.epsilon());
    Ok(GpConfig::new(eps, opts.r, opts.c, params)?)
}

impl StripAlgorithm {
    /// Parses `bp-nf|bp-ff|bp-ffd|bp-harmonic:<k>|bp-sh:<params>|nfdh|ffdh|gp|shelf-nf|
    /// shelf-ff|shelf-harmonic:<k>`.
    pub fn parse(name: &str, opts: &AlgOptions) -> anyhow::Result<Self> {
        let bin = |s: &str| -> anyhow::Result<BinAlgorithm> {
            Ok(match s.split_once(':') {
                Some(("sh", source)) => {
                    BinAlgorithm::SuperHarmonic(Box::new(resolve_params(source)?))
                }
                _ => s.parse()?,
            })
        };
        Ok(match name {
            "nfdh" => StripAlgorithm::Nfdh,
            "ffdh" => StripAlgorithm::Ffdh,
            "gp" => StripAlgorithm::GroupPack(gp_config(opts)?),
            _ => {
                if let Some(rest) = name.strip_prefix("bp-") {
                    if !(opts.c.is_finite() && opts.c > 1.0) {
                        bail!("slip height c must exceed 1, got {}", opts.c);
                    }
                    StripAlgorithm::BatchPack {
                        bin: bin(rest)?,
                        c: opts.c,
                    }
                } else if let Some(rest) = name.strip_prefix("shelf-") {
                    let inner = bin(rest)?;
                    if matches!(inner, BinAlgorithm::FirstFitDecreasing) {
                        bail!("shelf packing is online; '{rest}' is not");
                    }
                    if !(opts.r > 0.0 && opts.r < 1.0) {
                        bail!("shelf base r must lie in (0, 1), got {}", opts.r);
                    }
                    StripAlgorithm::Shelf { inner, r: opts.r }
                } else {
                    return Err(anyhow!("unknown strip packing algorithm '{name}'"));
                }
            }
        })
    }

    pub fn run(&self, instance: &Instance) -> strippack::Result<Packed> {
        match self {
            StripAlgorithm::BatchPack { bin, c } => Ok(bp_pack(instance, *c, bin)?.packed),
            StripAlgorithm::Nfdh => Ok(nfdh(instance)),
            StripAlgorithm::Ffdh => Ok(ffdh(instance)),
            StripAlgorithm::GroupPack(cfg) => Ok(gp_run(instance, cfg)?.packed()),
            StripAlgorithm::Shelf { inner, r } => shelf_pack(instance, inner, *r),
        }
    }

    pub fn c(&self) -> Option<f64> {
        match self {
            StripAlgorithm::BatchPack { c, .. } => Some(*c),
            StripAlgorithm::GroupPack(cfg) => Some(cfg.c),
            _ => None,
        }
    }

    pub fn r(&self) -> Option<f64> {
        match self {
            StripAlgorithm::GroupPack(cfg) => Some(cfg.r),
            StripAlgorithm::Shelf { r, .. } => Some(*r),
            _ => None,
        }
    }

    pub fn eps(&self) -> Option<f64> {
        match self {
            StripAlgorithm::GroupPack(cfg) => Some(cfg.epsilon),
            _ => None,
        }
    }

    pub fn k(&self) -> Option<usize> {
        let of_bin = |b: &BinAlgorithm| match b {
            BinAlgorithm::Harmonic(k) => Some(*k),
            BinAlgorithm::SuperHarmonic(p) => Some(p.k()),
            _ => None,
        };
        match self {
            StripAlgorithm::BatchPack { bin, .. } => of_bin(bin),
            StripAlgorithm::Shelf { inner, .. } => of_bin(inner),
            StripAlgorithm::GroupPack(cfg) => Some(cfg.params.k()),
            _ => None,
        }
    }
}

impl fmt::Display for StripAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = |b: &BinAlgorithm| match b {
            BinAlgorithm::SuperHarmonic(p) => format!("sh:k={}", p.k()),
            other => other.to_string(),
        };
        match self {
            StripAlgorithm::BatchPack { bin, .. } => write!(f, "bp-{}", short(bin)),
            StripAlgorithm::Nfdh => write!(f, "nfdh"),
            StripAlgorithm::Ffdh => write!(f, "ffdh"),
            StripAlgorithm::GroupPack(_) => write!(f, "gp"),
            StripAlgorithm::Shelf { inner, .. } => write!(f, "shelf-{}", short(inner)),
        }
    }
}
