//! Benchmark runner: every (instance, algorithm) pair, validated, one CSV row each.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use strippack::geometry::{InstanceLoadError, StructuralError, ValidationReport};
use strippack::{lower_bound, validate_packing, Instance, TAU};
use thiserror::Error;

use crate::algorithms::StripAlgorithm;

/// One benchmark row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub algorithm: String,
    pub n: usize,
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub k: Option<usize>,
    pub height: f64,
    pub lower_bound: f64,
    pub known_opt: Option<f64>,
    pub ratio: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot load {path}: {source}")]
    Load {
        path: PathBuf,
        source: InstanceLoadError,
    },
    #[error("{algorithm} on {instance}: {source}")]
    Algorithm {
        instance: String,
        algorithm: String,
        source: strippack::Error,
    },
    #[error("{algorithm} on {instance} produced an invalid packing:\n{report}")]
    Validation {
        instance: String,
        algorithm: String,
        report: String,
    },
}

pub fn load_instance(path: &Path) -> Result<Instance, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_owned(),
        source,
    })?;
    Instance::from_json(&text).map_err(|source| BenchError::Load {
        path: path.to_owned(),
        source,
    })
}

fn invalid(instance: &Instance, alg: &StripAlgorithm, report: String) -> BenchError {
    BenchError::Validation {
        instance: instance.name.clone(),
        algorithm: alg.to_string(),
        report,
    }
}

/// Runs and validates one pair.
pub fn bench_one(instance: &Instance, alg: &StripAlgorithm) -> Result<BenchRecord, BenchError> {
    let start = Instant::now();
    let packed = alg.run(instance).map_err(|source| BenchError::Algorithm {
        instance: instance.name.clone(),
        algorithm: alg.to_string(),
        source,
    })?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report: ValidationReport = validate_packing(instance, &packed.packing)
        .map_err(|e: StructuralError| invalid(instance, alg, e.to_string()))?;
    if !report.is_ok() {
        return Err(invalid(instance, alg, report.to_string()));
    }
    let lb = lower_bound(instance);
    let best = instance.known_opt.map_or(lb, |o| o.max(lb));
    let height = packed.packing.height;
    let ratio = if best > 0.0 { height / best } else { 1.0 };
    if ratio < 1.0 - TAU {
        return Err(invalid(
            instance,
            alg,
            format!("height {height} is below the lower bound {best}"),
        ));
    }
    Ok(BenchRecord {
        instance: instance.name.clone(),
        algorithm: alg.to_string(),
        n: instance.len(),
        c: alg.c(),
        r: alg.r(),
        eps: alg.eps(),
        k: alg.k(),
        height,
        lower_bound: lb,
        known_opt: instance.known_opt,
        ratio,
        wall_ms,
    })
}

/// Runs every algorithm on every instance file, in order.
pub fn bench(
    paths: &[PathBuf],
    algorithms: &[StripAlgorithm],
) -> Result<Vec<BenchRecord>, BenchError> {
    let mut out = Vec::with_capacity(paths.len() * algorithms.len());
    for path in paths {
        let inst = load_instance(path)?;
        for alg in algorithms {
            out.push(bench_one(&inst, alg)?);
        }
    }
    Ok(out)
}

pub fn write_records<W: Write>(records: &[BenchRecord], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record([
            "instance",
            "algorithm",
            "n",
            "c",
            "r",
            "eps",
            "k",
            "height",
            "lower_bound",
            "known_opt",
            "ratio",
            "wall_ms",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
