use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use genhankel::harness::report::write_json17;
use genhankel::harness::{run_suite, Grid, HarnessConfig, Suite, VerificationReport};
use genhankel::kernels::kernel_k;
use genhankel::specfun::bessel_j_norm;
use genhankel::transform::{b_kernel, fmt17, transform_f, SampledFunction};
use genhankel::{Error, Params};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "genhankel", version)]
#[command(about = "Generalized Hankel kernels, product formulas and their verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function at one point
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Tabulate a kernel on a grid
    #[command(subcommand)]
    Table(TableCommand),
    /// Transform a sampled function read from CSV
    Transform(TransformArgs),
    /// Run verification suites and write their reports
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum EvalCommand {
    /// Normalized Bessel function j_alpha(x)
    Bessel {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Kernel B_lambda(x); prints the real and imaginary parts
    Bkernel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
}

#[derive(Subcommand, Debug)]
enum TableCommand {
    /// Product-formula kernel K(x, y, z) for z on a uniform grid
    Kernel {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file. Writes to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    kappa: f64,
}

impl ParamArgs {
    fn params(self) -> genhankel::Result<Params> {
        Params::new(self.n, self.kappa)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// CSV with header and columns x, re[, im]
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true)]
    lambda_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Output CSV (lambda, re, im). Writes to stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["suite", "all"])))]
struct VerifyArgs {
    /// Suite to run; repeat to run several
    #[arg(long)]
    suite: Vec<String>,
    /// Run every suite
    #[arg(long)]
    all: bool,
    /// Tolerance of each suite's main check
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to one per core)
    #[arg(long)]
    jobs: Option<usize>,
    /// Report file: one report object, or an array with several suites
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with tolerances, quadrature order cap and oracle settings
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Distinct exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    NonConvergence = 3,
}

fn status_of(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence { .. } | Error::Accuracy(_)) => Status::NonConvergence,
        _ => Status::Usage,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(cmd) => eval(cmd).map(|_| Status::Pass),
        Command::Table(cmd) => table(cmd).map(|_| Status::Pass),
        Command::Transform(args) => transform(args).map(|_| Status::Pass),
        Command::Verify(args) => verify(args),
    };
    let status = result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        status_of(&e)
    });
    ExitCode::from(status as u8)
}

fn eval(cmd: EvalCommand) -> anyhow::Result<()> {
    match cmd {
        EvalCommand::Bessel { alpha, x } => {
            println!("{}", fmt17(bessel_j_norm(alpha, x)?));
        }
        EvalCommand::Bkernel { params, lambda, x } => {
            let b = b_kernel(&params.params()?, lambda, x)?;
            println!("{} {}", fmt17(b.re), fmt17(b.im));
        }
    }
    Ok(())
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn grid(lo: f64, hi: f64, steps: usize) -> anyhow::Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        bail!(Error::Invalid(format!("bad range [{lo}, {hi}]")));
    }
    Ok(match steps {
        0 => bail!(Error::Invalid("steps must be positive".into())),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    })
}

#[derive(Serialize)]
struct KernelRow {
    z: f64,
    k: f64,
}

#[derive(Serialize)]
struct KernelTable {
    n: u32,
    kappa: f64,
    x: f64,
    y: f64,
    rows: Vec<KernelRow>,
}

fn table(cmd: TableCommand) -> anyhow::Result<()> {
    let TableCommand::Kernel { params, x, y, z_min, z_max, steps, format, out } = cmd;
    let p = params.params()?;
    let rows = grid(z_min, z_max, steps)?
        .into_iter()
        .map(|z| Ok(KernelRow { z, k: kernel_k(&p, x, y, z)? }))
        .collect::<genhankel::Result<Vec<_>>>()?;
    let mut w = output(out.as_ref())?;
    match format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["z", "k"])?;
            for r in &rows {
                c.write_record([fmt17(r.z), fmt17(r.k)])?;
            }
            c.flush()?;
        }
        Format::Json => {
            let t = KernelTable { n: p.n(), kappa: p.kappa(), x, y, rows };
            write_json17(&mut w, &t)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn transform(args: TransformArgs) -> anyhow::Result<()> {
    let p = args.params.params()?;
    let f = SampledFunction::read_csv_path(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let lambdas = grid(args.lambda_min, args.lambda_max, args.steps)?;
    let samples = transform_f(&p, &f, &lambdas)?;
    samples.write_csv(output(args.out.as_ref())?)?;
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<Status> {
    let mut cfg = match &args.config {
        Some(path) => {
            HarnessConfig::load(path).with_context(|| format!("loading {}", path.display()))?
        }
        None => HarnessConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let suites: Vec<Suite> = if args.all {
        Suite::ALL.to_vec()
    } else {
        args.suite.iter().map(|s| s.parse()).collect::<genhankel::Result<_>>()?
    };
    if let Some(tol) = args.tol {
        for s in &suites {
            cfg.tolerances.insert(s.name().to_string(), tol);
        }
    }
    cfg.validate()?;
    if args.jobs == Some(0) {
        bail!(Error::Invalid("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .context("starting worker threads")?;

    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut status = Status::Pass;
    for suite in suites {
        let grid = Grid {
            max_order: cfg.max_order,
            oracle: cfg.oracle,
            ..Grid::default_for(suite)
        };
        match pool.install(|| run_suite(suite, &grid, cfg.tolerance(suite), cfg.seed)) {
            Ok(r) => {
                println!("{}", r.summary());
                if !r.pass && status == Status::Pass {
                    status = Status::Fail;
                }
                reports.push(r);
            }
            Err(e) => {
                eprintln!("{suite}: {e}");
                status = match e {
                    Error::NonConvergence { .. } | Error::Accuracy(_) => Status::NonConvergence,
                    _ => return Err(e.into()),
                };
            }
        }
    }
    if let Some(path) = &args.out {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        match reports.as_slice() {
            [one] => write_json17(file, one)?,
            many => write_json17(file, many)?,
        }
    }
    Ok(status)
}
