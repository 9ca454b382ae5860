//! `fraclim` command-line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 verification
//! failure. `FRACLIM_MAX_THREADS` caps the worker pool.

mod commands;
mod corpus;
mod failure;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraclim::lfd::DEFAULT_EXPONENT_TOL;
use fraclim::{DerivKind, QuadratureConfig, ScanConfig};

use commands::{Format, Rule};
use failure::Failure;

#[derive(Parser)]
#[command(
    name = "fraclim",
    version,
    about = "Fractional derivatives, local fractional derivative limits and Leibniz defects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Caputo or Riemann-Liouville derivative at one or more points.
    Eval(EvalArgs),
    /// Caputo derivative along x -> a with a log-log fit.
    LfdScan(ScanArgs),
    /// Leibniz defect, integer-order sum or symmetrized series for f*g.
    Leibniz(LeibnizArgs),
    /// Zero-or-integer-derivative check over a corpus file.
    VerifyTheorem(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Caputo,
    Rl,
}

impl From<Kind> for DerivKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Caputo => DerivKind::Caputo,
            Kind::Rl => DerivKind::RiemannLiouville,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
}

impl From<Output> for Format {
    fn from(o: Output) -> Self {
        match o {
            Output::Json => Format::Json,
            Output::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremOutput {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Unviolated,
    Integer,
    Series,
}

#[derive(Args)]
struct EvalArgs {
    /// Function in the term grammar, e.g. "pow(c=1,x0=0,beta=2)".
    #[arg(long = "f")]
    function: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Lower terminal.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    a: f64,
    /// Evaluation points, repeated or comma separated.
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Kind::Caputo)]
    kind: Kind,
    #[arg(long, default_value_t = QuadratureConfig::DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Args)]
struct ScanShape {
    #[arg(long, default_value_t = 0.5)]
    h0: f64,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = QuadratureConfig::DEFAULT_NODES)]
    nodes: usize,
    /// Exponent tolerance separating Zero, Finite and Divergent.
    #[arg(long, default_value_t = DEFAULT_EXPONENT_TOL)]
    tol: f64,
}

impl ScanShape {
    fn config(&self, default_count: usize) -> Result<ScanConfig, Failure> {
        let quad = commands::quadrature(self.nodes)?;
        ScanConfig::new(
            self.h0,
            self.ratio,
            self.count.unwrap_or(default_count),
            quad,
        )
        .map_err(|e| Failure::engine("--h0/--ratio/--count", e))
    }

    fn tol(&self) -> Result<f64, Failure> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(self.tol)
        } else {
            Err(Failure::domain(
                "--tol",
                format!("{} must be positive", self.tol),
            ))
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long = "f")]
    function: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    a: f64,
    #[command(flatten)]
    shape: ScanShape,
    /// Add ln(x - a) and ln|value| columns to CSV output.
    #[arg(long)]
    loglog: bool,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Args)]
struct LeibnizArgs {
    #[arg(long = "f")]
    f: String,
    #[arg(long = "g")]
    g: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    a: f64,
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = RuleArg::Unviolated)]
    rule: RuleArg,
    /// Truncation index for the symmetrized series; implies `--rule series`.
    #[arg(long)]
    series: Option<u32>,
    /// Operator for the unviolated-rule defect.
    #[arg(long, value_enum, default_value_t = Kind::Caputo)]
    operator: Kind,
    #[arg(long, default_value_t = QuadratureConfig::DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

/// Scan length for theorem checks. The tail mean needs offsets near 1e-9 to
/// meet the 1e-6 integer-limit tolerance.
const VERIFY_COUNT: usize = 30;

#[derive(Args)]
struct VerifyArgs {
    /// File with one `<expr> @ <a>` per line.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, required = true, value_delimiter = ',')]
    alphas: Vec<f64>,
    #[command(flatten)]
    shape: ScanShape,
    #[arg(long, value_enum, default_value_t = TheoremOutput::Table)]
    output: TheoremOutput,
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FRACLIM_MAX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::parse(
            "FRACLIM_MAX_THREADS",
            format!("{raw:?} is not a positive integer"),
        )
    })?;
    // A second initialization can only happen in-process; ignore it.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn finite(field: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::domain(field, format!("{v} is not finite")))
    }
}

fn run(cli: Cli) -> Result<(String, Option<Failure>), Failure> {
    init_threads()?;
    let text = match cli.command {
        Command::Eval(args) => {
            let function = commands::parse_function("--f", &args.function)?;
            let spec = commands::EvalSpec {
                function: &function,
                alpha: commands::parse_order("--alpha", args.alpha)?,
                a: finite("--a", args.a)?,
                points: &args.x,
                kind: args.kind.into(),
                quad: commands::quadrature(args.nodes)?,
            };
            commands::cmd_eval(&spec, args.output.into())?
        }
        Command::LfdScan(args) => {
            let f = commands::parse_function("--f", &args.function)?;
            let alpha = commands::parse_order("--alpha", args.alpha)?;
            let cfg = args.shape.config(ScanConfig::default().count)?;
            let a = finite("--a", args.a)?;
            commands::cmd_lfd_scan(
                &f,
                alpha,
                a,
                &cfg,
                args.shape.tol()?,
                args.loglog,
                args.output.into(),
            )?
        }
        Command::Leibniz(args) => {
            let f = commands::parse_function("--f", &args.f)?;
            let g = commands::parse_function("--g", &args.g)?;
            let rule = match (args.rule, args.series) {
                (_, Some(k)) => Rule::Series(Some(k)),
                (RuleArg::Series, None) => Rule::Series(None),
                (RuleArg::Integer, None) => Rule::Integer,
                (RuleArg::Unviolated, None) => Rule::Unviolated,
            };
            let spec = commands::LeibnizSpec {
                f: &f,
                g: &g,
                alpha: commands::parse_order("--alpha", args.alpha)?,
                a: finite("--a", args.a)?,
                points: &args.x,
                rule,
                operator: args.operator.into(),
                quad: commands::quadrature(args.nodes)?,
            };
            commands::cmd_leibniz(&spec, args.output.into())?
        }
        Command::VerifyTheorem(args) => {
            let corpus = corpus::load(&args.corpus)?;
            let alphas = args
                .alphas
                .iter()
                .map(|&al| commands::parse_order("--alphas", al))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = args.shape.config(VERIFY_COUNT)?;
            let format = match args.output {
                TheoremOutput::Table => Format::Table,
                TheoremOutput::Json => Format::Json,
                TheoremOutput::Csv => Format::Csv,
            };
            return commands::cmd_verify_theorem(&corpus, &alphas, &cfg, args.shape.tol()?, format);
        }
    };
    Ok((text, None))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, verdict)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            match verdict {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("{f}");
                    ExitCode::from(f.code)
                }
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
