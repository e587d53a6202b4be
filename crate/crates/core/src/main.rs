//! Command-line interface: sample paths, benchmark the samplers, and run the
//! verification suites.

use std::io::Write;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;

use lattice_sampler::florentine::BaselineModel;
use lattice_sampler::metrics::{self, FactorReport};
use lattice_sampler::verify::{self, Check};
use lattice_sampler::{BitSource, SamplerSpec};

#[derive(Parser)]
#[command(
    name = "lattice-sampler",
    about = "Uniform random Motzkin and Schröder lattice paths with recovery sampling, plus verification and benchmarking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random paths and print them
    Sample(SampleArgs),
    /// Measure time factor, entropy factor and restart statistics
    Bench(BenchArgs),
    /// Run a verification suite; exits nonzero if any assertion fails
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Motzkin,
    MotzkinColored,
    Schroeder,
    SchroederLittle,
    /// Fair up/down paths; florentine baseline only
    Dyck,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Positive,
    Excursion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleFormat {
    Steps,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineArg {
    Recovery,
    Florentine,
}

#[derive(Args)]
struct SampleArgs {
    /// Path model
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Path class
    #[arg(long, value_enum, default_value = "positive")]
    kind: KindArg,
    /// Target length: steps for the Motzkin models, geometric length for the
    /// Schröder models (flat steps count 2)
    #[arg(long)]
    length: usize,
    /// Number of paths to sample
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Flat-step weight p/q (motzkin-colored only)
    #[arg(long)]
    weight: Option<String>,
    /// RNG seed, decimal or 0x-hex
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value = "steps")]
    format: SampleFormat,
}

#[derive(Args)]
struct BenchArgs {
    /// Path model
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Path class
    #[arg(long, value_enum, default_value = "positive")]
    kind: KindArg,
    /// Target length (geometric for Schröder models)
    #[arg(long)]
    length: usize,
    /// Independent trials
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Sampler family to measure
    #[arg(long, value_enum, default_value = "recovery")]
    baseline: BaselineArg,
    /// Flat-step weight p/q (motzkin-colored only)
    #[arg(long)]
    weight: Option<String>,
    /// RNG seed, decimal or 0x-hex
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    seed: u64,
    /// csv: per-trial rows to stdout, JSON summary to stderr; json: one
    /// document with summary and rows
    #[arg(long, value_enum, default_value = "csv")]
    format: BenchFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run
    #[arg(long)]
    suite: String,
    /// Depth bound where applicable (path length)
    #[arg(long)]
    max_length: Option<usize>,
    /// RNG seed for the empirical suites
    #[arg(long, value_parser = parse_seed, default_value = "2024")]
    seed: u64,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("bad seed {s:?}: {e}"))
}

fn parse_weight(s: &str) -> Result<BigRational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().with_context(|| format!("bad weight numerator {p:?}"))?;
    let q: i64 = q.parse().with_context(|| format!("bad weight denominator {q:?}"))?;
    if q == 0 {
        bail!("weight denominator must be nonzero");
    }
    let c = BigRational::new(p.into(), q.into());
    if !c.is_positive() {
        bail!("weight must be positive, got {s}");
    }
    Ok(c)
}

fn build_spec(
    model: ModelArg,
    kind: KindArg,
    length: usize,
    weight: &Option<String>,
    baseline: BaselineArg,
) -> Result<SamplerSpec> {
    if weight.is_some() && model != ModelArg::MotzkinColored {
        bail!("--weight applies only to --model motzkin-colored");
    }
    if baseline == BaselineArg::Florentine {
        if kind != KindArg::Positive {
            bail!("the florentine baseline samples positive paths only");
        }
        let m = match model {
            ModelArg::Motzkin => BaselineModel::Motzkin,
            ModelArg::Schroeder => BaselineModel::Schroeder,
            ModelArg::Dyck => BaselineModel::Dyck,
            _ => bail!("florentine baseline supports motzkin, schroeder or dyck"),
        };
        return Ok(SamplerSpec::Baseline { model: m, n: length });
    }
    let spec = match (model, kind) {
        (ModelArg::Motzkin, KindArg::Positive) => {
            SamplerSpec::MotzkinPositive { n: length, weight: None }
        }
        (ModelArg::Motzkin, KindArg::Excursion) => {
            SamplerSpec::MotzkinExcursion { n: length, weight: None }
        }
        (ModelArg::MotzkinColored, k) => {
            let c = parse_weight(
                weight.as_deref().context("--model motzkin-colored requires --weight p/q")?,
            )?;
            match k {
                KindArg::Positive => SamplerSpec::MotzkinPositive { n: length, weight: Some(c) },
                KindArg::Excursion => SamplerSpec::MotzkinExcursion { n: length, weight: Some(c) },
            }
        }
        (ModelArg::Schroeder, KindArg::Positive) => SamplerSpec::SchroederPositive { n: length },
        (ModelArg::Schroeder, KindArg::Excursion) => SamplerSpec::SchroederExcursion { n: length },
        (ModelArg::SchroederLittle, KindArg::Positive) => {
            SamplerSpec::SchroederLittlePositive { n: length }
        }
        (ModelArg::SchroederLittle, KindArg::Excursion) => {
            SamplerSpec::SchroederLittleExcursion { n: length }
        }
        (ModelArg::Dyck, _) => bail!("--model dyck is available only with --baseline florentine"),
    };
    Ok(spec)
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let spec = build_spec(args.model, args.kind, args.length, &args.weight, BaselineArg::Recovery)?;
    spec.check().map_err(|e| anyhow::anyhow!(e))?;
    let mut src = BitSource::new(args.seed);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match args.format {
        SampleFormat::Steps => {
            for _ in 0..args.count {
                let s = spec.run(&mut src);
                writeln!(out, "{}", s.path.text())?;
            }
        }
        SampleFormat::Json => {
            let paths: Vec<serde_json::Value> =
                (0..args.count).map(|_| spec.run(&mut src).path.to_json()).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&paths)?)?;
        }
        SampleFormat::Csv => {
            writeln!(out, "index,path,height,geo_len,steps")?;
            for i in 0..args.count {
                let s = spec.run(&mut src);
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    i,
                    s.path.text(),
                    s.path.height(),
                    s.path.geo_len(),
                    s.path.len()
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let spec = build_spec(args.model, args.kind, args.length, &args.weight, args.baseline)?;
    spec.check().map_err(|e| anyhow::anyhow!(e))?;
    if args.length == 0 {
        bail!("bench needs --length >= 1");
    }
    let report = metrics::run_metered(&spec, args.trials, args.seed);
    match args.format {
        BenchFormat::Csv => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "trial,n,time_factor,entropy_bits,physical_bits,restarts")?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.trial, r.n, r.time_factor, r.entropy_bits, r.physical_bits, r.restarts
                )?;
            }
            eprintln!("{}", serde_json::to_string(&summary_json(&report))?);
        }
        BenchFormat::Json => {
            let mut doc = summary_json(&report);
            doc["rows"] = serde_json::to_value(&report.rows)?;
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(())
}

fn summary_json(report: &FactorReport) -> serde_json::Value {
    serde_json::json!({
        "sampler": report.sampler,
        "n": report.n,
        "trials": report.trials,
        "seed": report.seed,
        "mean_time_factor": report.mean_time_factor,
        "sd_time_factor": report.sd_time_factor,
        "time_factor_p50_p90_p99": report.time_factor_quantiles,
        "mean_entropy_bits": report.mean_entropy_bits,
        "mean_physical_bits": report.mean_physical_bits,
        "output_entropy_bits": report.output_entropy_bits,
        "entropy_factor": report.entropy_factor,
        "mean_restarts": report.mean_restarts,
        "first_try_success_rate": report.first_try_success_rate,
        "mean_discarded_steps": report.mean_discarded_steps,
        "wall_seconds": report.wall_seconds,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let max = args.max_length;
    let checks: Vec<Check> = match args.suite.as_str() {
        "lemmas" => verify::suite_lemmas(max.unwrap_or(8)),
        "uniformity-exact" => verify::suite_uniformity_exact(max.unwrap_or(5), max.unwrap_or(5).min(4)),
        "uniformity-empirical" => verify::suite_uniformity_empirical(100_000, args.seed),
        "counts" => verify::suite_counts(max.unwrap_or(12)),
        "limits" => verify::suite_limits(args.seed),
        other => bail!(
            "unknown suite {other:?}; expected lemmas, uniformity-exact, uniformity-empirical, counts or limits"
        ),
    };
    let mut all_pass = true;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", c.name, c.detail);
        all_pass &= c.pass;
    }
    let mut doc = serde_json::json!({
        "suite": args.suite,
        "pass": all_pass,
        "checks": checks,
    });
    if args.suite == "counts" {
        use lattice_sampler::oracles::{ClassKind, CountTable};
        use lattice_sampler::Model;
        let max = max.unwrap_or(12);
        let tables: Vec<serde_json::Value> = [
            (Model::Motzkin, ClassKind::Positive),
            (Model::Motzkin, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::Positive),
            (Model::Schroeder, ClassKind::Excursion),
            (Model::Schroeder, ClassKind::LittlePositive),
            (Model::Schroeder, ClassKind::LittleExcursion),
        ]
        .iter()
        .map(|&(m, k)| CountTable::compute(m, k, max).to_json())
        .collect();
        doc["count_tables"] = serde_json::Value::Array(tables);
    }
    println!("{}", serde_json::to_string(&doc)?);
    if !all_pass {
        std::process::exit(1);
    }
    Ok(())
}

fn main() {
    let result = match Cli::parse().command {
        Command::Sample(args) => cmd_sample(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
