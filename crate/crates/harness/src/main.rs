use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use strippack::analysis::{
    consolidate, ratio_upper_bound, total_weight, PatternOptions, DEFAULT_PATTERN_CAP,
};
use strippack::binpack::{bin_opt_bruteforce, BinAlgorithm, EXACT_MAX_ITEMS};
use strippack::{validate_packing, Instance, Packed, StripPacking};
use strippack_harness::bench::load_instance;
use strippack_harness::{
    bench, gen_equal_height, gen_tiling, gen_uniform, resolve_params, write_records, write_svg,
    AlgOptions, StripAlgorithm,
};

#[derive(Parser)]
#[command(
    name = "strippack",
    version,
    about = "Strip and bin packing experiments"
)]
struct Cli {
    /// Seed for generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    /// Report format; JSON by default, CSV for `bench`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Pack an instance into the strip.
    #[command(subcommand)]
    Pack(PackCommand),
    /// Run a 1-D bin packing algorithm.
    Binpack(BinpackArgs),
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Run algorithms over instance files and emit one row per pair.
    Bench(BenchArgs),
    /// Render a stored packing as SVG.
    Render {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        packing: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    Uniform {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        w_min: f64,
        #[arg(long, default_value_t = 1.0)]
        w_max: f64,
        #[arg(long, default_value_t = 0.0)]
        h_min: f64,
        #[arg(long, default_value_t = 1.0)]
        h_max: f64,
    },
    Tiling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        height: f64,
    },
    EqualHeight {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
}

#[derive(Args)]
struct PackIo {
    #[arg(short, long)]
    input: PathBuf,
    /// Also write an SVG drawing.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PackCommand {
    Offline {
        /// bp-ffd | bp-ff | bp-nf | bp-harmonic:<k> | bp-sh:<params> | nfdh | ffdh
        #[arg(long)]
        alg: String,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[command(flatten)]
        io: PackIo,
    },
    Online {
        /// gp | shelf-nf | shelf-ff | shelf-harmonic:<k> | shelf-sh:<params>
        #[arg(long)]
        alg: String,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        /// Builtin name or JSON file.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        io: PackIo,
    },
}

#[derive(Args)]
struct BinpackArgs {
    /// nf | ff | ffd | harmonic:<k> | sh:<params>
    #[arg(long)]
    alg: String,
    #[arg(long, value_delimiter = ',', conflicts_with = "input")]
    sizes: Option<Vec<f64>>,
    /// Instance whose rect widths are the item sizes.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Also compute the optimum exactly (small inputs only).
    #[arg(long)]
    opt: bool,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Upper bound on the asymptotic ratio of a parameter set.
    Bound {
        #[arg(long)]
        params: String,
        #[arg(long)]
        maximal_only: bool,
        #[arg(long, default_value_t = DEFAULT_PATTERN_CAP)]
        cap: usize,
    },
    /// Total weight of an instance.
    Weight {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        params: String,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files or glob patterns.
    #[arg(long, num_args = 1.., required = true)]
    instances: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    algs: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    params: Option<String>,
}

/// Exit code 1: a packing failed validation. Exit code 2: anything else.
enum Failure {
    Invalid(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid packing: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn to_csv<T: Serialize>(rows: &[T]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(
        w.into_inner().map_err(|e| anyhow!("{e}"))?,
    )?)
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    Ok(load_instance(path)?)
}

fn check_packing(instance: &Instance, packing: &StripPacking) -> Result<(), Failure> {
    let report =
        validate_packing(instance, packing).map_err(|e| Failure::Invalid(e.to_string()))?;
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure::Invalid(report.to_string()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen(g) => {
            let inst = match g {
                GenCommand::Uniform {
                    n,
                    w_min,
                    w_max,
                    h_min,
                    h_max,
                } => gen_uniform(*n, cli.seed, (*w_min, *w_max), (*h_min, *h_max)),
                GenCommand::Tiling { n, height } => gen_tiling(*n, *height, cli.seed),
                GenCommand::EqualHeight { sizes, h } => gen_equal_height(sizes, *h),
            }
            .map_err(anyhow::Error::from)?;
            emit(&cli.out, &(inst.to_json() + "\n"))?;
        }
        Command::Pack(p) => {
            let (alg, io) = match p {
                PackCommand::Offline { alg, c, io } => {
                    if alg == "gp" || alg.starts_with("shelf-") {
                        return Err(
                            anyhow!("'{alg}' is an online algorithm; use `pack online`").into()
                        );
                    }
                    (
                        StripAlgorithm::parse(
                            alg,
                            &AlgOptions {
                                c: *c,
                                ..Default::default()
                            },
                        )?,
                        io,
                    )
                }
                PackCommand::Online {
                    alg,
                    eps,
                    r,
                    c,
                    params,
                    io,
                } => {
                    if alg != "gp" && !alg.starts_with("shelf-") {
                        return Err(anyhow!(
                            "'{alg}' is not an online algorithm; use `pack offline`"
                        )
                        .into());
                    }
                    let params = params.as_deref().map(resolve_params).transpose()?;
                    (
                        StripAlgorithm::parse(
                            alg,
                            &AlgOptions {
                                c: *c,
                                r: *r,
                                eps: *eps,
                                params,
                            },
                        )?,
                        io,
                    )
                }
            };
            let inst = read_instance(&io.input)?;
            let packed: Packed = alg.run(&inst).map_err(anyhow::Error::from)?;
            check_packing(&inst, &packed.packing)?;
            if let Some(svg) = &io.svg {
                write_svg(&inst, &packed, svg)?;
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => packed.packing.to_json() + "\n",
                Format::Csv => to_csv(&packed.packing.placements)?,
            };
            emit(&cli.out, &text)?;
        }
        Command::Binpack(b) => {
            let alg = match b.alg.split_once(':') {
                Some(("sh", source)) => {
                    BinAlgorithm::SuperHarmonic(Box::new(resolve_params(source)?))
                }
                _ => b.alg.parse().map_err(anyhow::Error::from)?,
            };
            let sizes: Vec<f64> = match (&b.sizes, &b.input) {
                (Some(s), None) => s.clone(),
                (None, Some(p)) => read_instance(p)?.rects.iter().map(|r| r.w).collect(),
                _ => return Err(anyhow!("pass exactly one of --sizes or --input").into()),
            };
            let assignment = alg.run(&sizes).map_err(anyhow::Error::from)?;
            assignment.check(&sizes).map_err(Failure::Invalid)?;
            let opt = if b.opt {
                if sizes.len() > EXACT_MAX_ITEMS {
                    return Err(anyhow!("--opt supports at most {EXACT_MAX_ITEMS} items").into());
                }
                Some(bin_opt_bruteforce(&sizes).map_err(anyhow::Error::from)?)
            } else {
                None
            };
            #[derive(Serialize)]
            struct Row {
                bin: usize,
                item: usize,
                size: f64,
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&serde_json::json!({
                    "algorithm": assignment.algorithm,
                    "bin_count": assignment.bin_count(),
                    "opt": opt,
                    "bins": assignment.bins,
                }))?,
                Format::Csv => {
                    let rows: Vec<Row> = assignment
                        .bins
                        .iter()
                        .enumerate()
                        .flat_map(|(bin, items)| {
                            items
                                .iter()
                                .map(move |&(item, size)| Row { bin, item, size })
                        })
                        .collect();
                    to_csv(&rows)?
                }
            };
            emit(&cli.out, &text)?;
        }
        Command::Analyze(AnalyzeCommand::Bound {
            params,
            maximal_only,
            cap,
        }) => {
            let params = resolve_params(params)?;
            let report = ratio_upper_bound(
                &params,
                PatternOptions {
                    maximal_only: *maximal_only,
                    cap: *cap,
                },
            )
            .map_err(anyhow::Error::from)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        value: f64,
                        branch: usize,
                        pattern_count: usize,
                        support: String,
                    }
                    let support = report
                        .support
                        .iter()
                        .map(|(p, w)| format!("{:?}@{w}", p.q))
                        .collect::<Vec<_>>()
                        .join(" ");
                    to_csv(&[Row {
                        value: report.value,
                        branch: report.branch,
                        pattern_count: report.pattern_count,
                        support,
                    }])?
                }
            };
            emit(&cli.out, &text)?;
        }
        Command::Analyze(AnalyzeCommand::Weight { input, params }) => {
            let params = resolve_params(params)?;
            let inst = read_instance(input)?;
            let w = total_weight(&inst.rects, &params).map_err(anyhow::Error::from)?;
            let xi = consolidate(&w);
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&serde_json::json!({
                    "instance": inst.name,
                    "consolidated": xi,
                    "weight": w,
                }))?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        instance: &'a str,
                        consolidated: f64,
                    }
                    to_csv(&[Row {
                        instance: &inst.name,
                        consolidated: xi,
                    }])?
                }
            };
            emit(&cli.out, &text)?;
        }
        Command::Bench(b) => {
            let mut paths = Vec::new();
            for pattern in &b.instances {
                let before = paths.len();
                for entry in
                    glob::glob(pattern).with_context(|| format!("bad pattern '{pattern}'"))?
                {
                    paths.push(entry.map_err(anyhow::Error::from)?);
                }
                if paths.len() == before {
                    return Err(anyhow!("'{pattern}' matched no files").into());
                }
            }
            let params = b.params.as_deref().map(resolve_params).transpose()?;
            let opts = AlgOptions {
                c: b.c,
                r: b.r,
                eps: b.eps,
                params,
            };
            let algs = b
                .algs
                .iter()
                .map(|a| StripAlgorithm::parse(a, &opts))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let records = match bench(&paths, &algs) {
                Ok(r) => r,
                Err(e @ strippack_harness::BenchError::Validation { .. }) => {
                    return Err(Failure::Invalid(e.to_string()))
                }
                Err(e) => return Err(anyhow::Error::from(e).into()),
            };
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_records(&records, &mut buf).map_err(anyhow::Error::from)?;
                    String::from_utf8(buf).map_err(anyhow::Error::from)?
                }
                Format::Json => to_json(&records)?,
            };
            emit(&cli.out, &text)?;
        }
        Command::Render { input, packing } => {
            let inst = read_instance(input)?;
            let text = std::fs::read_to_string(packing)
                .with_context(|| format!("reading {}", packing.display()))?;
            let packing = StripPacking::from_json(&text)
                .with_context(|| format!("parsing {}", packing.display()))?;
            check_packing(&inst, &packing)?;
            let out = cli
                .out
                .as_ref()
                .ok_or_else(|| anyhow!("render needs --out"))?;
            write_svg(
                &inst,
                &Packed {
                    packing,
                    regions: vec![],
                },
                out,
            )?;
        }
    }
    Ok(())
}
