// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use doob_mckean::kernels::{
    bessel3_density, cauchy_density, cauchy_radial3_density, dyson_stable_kernel, elliot_feller_kernel, ChamberPoint,
    DoobMcKeanKernel, IntervalSpec, KernelQuery, StabilityIndex,
};
use doob_mckean::samplers::{
    sample_lamperti_y, sample_pathwise_doob, sample_radial3_doob, sample_stable_marginal, sample_subordinator, sharded,
    simulate_eta, LampertiSimConfig, RngSeed,
};
use doob_mckean::stable_numerics::isotropic_stable_radial_density;
use doob_mckean::Error;
use doob_mckean_harness::{run_and_record, ExperimentConfig, HarnessError, RunReport, DEFAULT_SEED, SEED_ENV};

#[derive(Parser)]
#[command(
    name = "doob-mckean",
    version,
    about = "Kernels, samplers and acceptance checks for the stable Doob-McKean identity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a transition density on a grid of y values.
    Density(DensityArgs),
    /// Draw samples or paths and write them as CSV.
    Simulate(SimulateArgs),
    /// Run acceptance checks; exits non-zero if any fails.
    Verify(VerifyArgs),
    /// Render a saved JSON run report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Cauchy,
    Bessel3,
    DoobMckean,
    Radial3,
    ElliotFeller,
    Dyson,
}

/// `y0:y1:n`, `n ≥ 2` evenly spaced points.
#[derive(Clone, Debug)]
struct Grid {
    y0: f64,
    y1: f64,
    n: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected y0:y1:n, got {s:?}"));
        };
        let y0: f64 = a.parse().map_err(|e| format!("y0: {e}"))?;
        let y1: f64 = b.parse().map_err(|e| format!("y1: {e}"))?;
        let n: usize = n.parse().map_err(|e| format!("n: {e}"))?;
        if n < 2 || !(y1 > y0) {
            return Err("grid needs y0 < y1 and n >= 2".into());
        }
        Ok(Grid { y0, y1, n })
    }
}

impl Grid {
    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.y1 - self.y0) / (self.n - 1) as f64;
        (0..self.n).map(move |i| {
            if i + 1 == self.n {
                self.y1
            } else {
                self.y0 + h * i as f64
            }
        })
    }
}

#[derive(clap::Args)]
struct DensityArgs {
    #[arg(long, value_enum)]
    kernel: KernelKind,
    /// Stability index; the Cauchy-only kernels reject values other than 1.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Starting point; for `dyson` the chamber point (x, -x).
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    /// Evaluation points y0:y1:n; for `dyson` the chamber points (y, -y).
    #[arg(long, allow_hyphen_values = true)]
    grid: Grid,
    /// Interval length for `elliot-feller`.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Image pairs for `elliot-feller`.
    #[arg(long, default_value_t = 50)]
    images: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Subordinator,
    Stable,
    Radial3,
    Pathwise,
    Eta,
    LampertiY,
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Starting point (first coordinate for `stable`, Y₀ for `lamperti-y`).
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    /// Samples, or paths for `eta`.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Dimension for `stable`.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Path horizon for `eta` and `lamperti-y`.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 1e-3)]
    jump_cutoff: f64,
    #[arg(long, default_value_t = 8)]
    shards: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite (pv-benchmarks, generators, levy, theorem1-mc, kernels, all) or a single check name.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo sample size.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lamperti_paths: Option<usize>,
    #[arg(long)]
    eta_paths: Option<usize>,
    #[arg(long, default_value_t = 8)]
    shards: usize,
    /// Reference override `check=value`, repeatable.
    #[arg(long = "tolerance", value_name = "CHECK=VALUE")]
    tolerances: Vec<String>,
    /// Directory for CSV dumps of Monte Carlo samples.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Density(a) => density(a).map(|_| ExitCode::SUCCESS),
        Command::Simulate(a) => simulate(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cauchy_only(alpha: Option<f64>, kernel: &str) -> Result<(), HarnessError> {
    match alpha {
        Some(a) if a != 1.0 => {
            Err(Error::Config(format!("{kernel} kernel is defined for alpha = 1 only, got {a}")).into())
        }
        _ => Ok(()),
    }
}

fn density(args: DensityArgs) -> Result<(), HarnessError> {
    let alpha = StabilityIndex::new(args.alpha.unwrap_or(1.0))?;
    let t = args.t;
    let eval: Box<dyn Fn(f64) -> doob_mckean::Result<f64>> = match args.kernel {
        KernelKind::Cauchy => {
            cauchy_only(args.alpha, "cauchy")?;
            Box::new(move |y| cauchy_density(KernelQuery::new(t, args.x, y)?))
        }
        KernelKind::Bessel3 => {
            if args.alpha.is_some() {
                return Err(Error::Config("bessel3 kernel takes no alpha".into()).into());
            }
            Box::new(move |y| bessel3_density(KernelQuery::new(t, args.x, y)?))
        }
        KernelKind::DoobMckean => {
            let k = DoobMcKeanKernel::new(alpha)?;
            Box::new(move |y| k.eval(KernelQuery::new(t, args.x, y)?))
        }
        KernelKind::Radial3 => {
            if alpha.value() == 1.0 {
                Box::new(move |y| cauchy_radial3_density(KernelQuery::new(t, args.x, y)?))
            } else {
                Box::new(move |y| isotropic_stable_radial_density(3, alpha, t, args.x, y))
            }
        }
        KernelKind::ElliotFeller => {
            cauchy_only(args.alpha, "elliot-feller")?;
            let spec = IntervalSpec::new(args.a, args.images)?;
            Box::new(move |y| elliot_feller_kernel(KernelQuery::new(t, args.x, y)?, spec))
        }
        KernelKind::Dyson => {
            let x = ChamberPoint::new(vec![args.x, -args.x])?;
            Box::new(move |y| dyson_stable_kernel(alpha, t, &x, &ChamberPoint::new(vec![y, -y])?))
        }
    };
    let mut w = csv::Writer::from_writer(output(&args.out)?);
    w.write_record(["x", "y", "t", "value"])?;
    for y in args.grid.points() {
        let v = eval(y)?;
        w.write_record([args.x.to_string(), y.to_string(), t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn write_rows<W: Write>(w: W, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), HarnessError> {
    let alpha = StabilityIndex::new(args.alpha)?;
    let rng = RngSeed::new(args.seed, 0);
    let (t, x, n, shards) = (args.t, args.x, args.n, args.shards);
    let sim = |default_horizon: f64| LampertiSimConfig {
        jump_cutoff: args.jump_cutoff,
        horizon: args.horizon.unwrap_or(default_horizon),
        step: args.step,
    };
    let column = |name: &str, v: Vec<f64>| (vec![name.to_string()], v.into_iter().map(|s| vec![s]).collect());
    let (header, rows): (Vec<String>, Vec<Vec<f64>>) = match args.target {
        Target::Subordinator => column(
            "s",
            sharded(rng, n, shards, |r, m| sample_subordinator(alpha, t, r, m))?,
        ),
        Target::Stable => {
            if args.dim == 0 {
                return Err(Error::Config("dimension must be positive".into()).into());
            }
            let mut x0 = vec![0.0; args.dim];
            x0[0] = x;
            let rows = sharded(rng, n, shards, |r, m| {
                sample_stable_marginal(args.dim, alpha, t, &x0, r, m)
            })?;
            ((0..args.dim).map(|i| format!("x{i}")).collect(), rows)
        }
        Target::Radial3 => column(
            "r",
            sharded(rng, n, shards, |r, m| sample_radial3_doob(alpha, t, x, r, m))?,
        ),
        Target::Pathwise => {
            if alpha.value() != 1.0 {
                return Err(Error::Config("the pathwise construction is the Cauchy case; use --alpha 1".into()).into());
            }
            column("r", sharded(rng, n, shards, |r, m| sample_pathwise_doob(t, x, r, m))?)
        }
        Target::Eta => {
            // One column per path on the shared time grid.
            let cfg = sim(10.0);
            let paths = sharded(rng, n, shards, |r, m| {
                (0..m as u64).map(|i| simulate_eta(cfg, r.block(i))).collect()
            })?;
            let times = paths.first().map(|p| p.times().to_vec()).unwrap_or_default();
            let mut header = vec!["time".to_string()];
            header.extend((0..paths.len()).map(|i| format!("eta{i}")));
            let rows = times
                .iter()
                .enumerate()
                .map(|(k, &s)| std::iter::once(s).chain(paths.iter().map(|p| p.values()[k])).collect())
                .collect();
            (header, rows)
        }
        Target::LampertiY => {
            let cfg = sim(50.0);
            column("y", sharded(rng, n, shards, |r, m| sample_lamperti_y(t, x, cfg, r, m))?)
        }
    };
    write_rows(output(&args.out)?, &header, rows.into_iter())
}

fn parse_override(s: &str) -> Result<(String, f64), HarnessError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("tolerance override {s:?} is not CHECK=VALUE")))?;
    let v: f64 = v
        .parse()
        .map_err(|e| Error::Config(format!("tolerance override {s:?}: {e}")))?;
    Ok((k.to_string(), v))
}

fn verify(args: VerifyArgs) -> Result<ExitCode, HarnessError> {
    let mut cfg = ExperimentConfig::new(&args.suite, args.seed)?;
    if let Some(n) = args.n {
        cfg.samples.monte_carlo = n;
    }
    if let Some(n) = args.lamperti_paths {
        cfg.samples.lamperti_paths = n;
    }
    if let Some(n) = args.eta_paths {
        cfg.samples.eta_paths = n;
    }
    cfg.shards = args.shards;
    for s in &args.tolerances {
        let (k, v) = parse_override(s)?;
        cfg = cfg.with_tolerance(&k, v)?;
    }
    cfg.report_path = args.out;
    cfg.dump_dir = args.dump_dir;
    let run = run_and_record(&cfg)?;
    run.write_table(io::stdout().lock())?;
    Ok(if run.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn report(args: ReportArgs) -> Result<(), HarnessError> {
    let run = read_report(&args.input)?;
    let out = io::stdout().lock();
    match args.format {
        Format::Table => run.write_table(out),
        Format::Csv => run.write_csv(out),
    }
}

fn read_report(path: &Path) -> Result<RunReport, HarnessError> {
    Ok(serde_json::from_reader(io::BufReader::new(File::open(path)?))?)
}
