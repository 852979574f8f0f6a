#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

mod args;
mod commands;
mod output;

/// Orthonormal systems with tridiagonal skew-Hermitian differentiation
/// matrices. Numeric output is CSV with `%.17g` values or versioned JSON.
#[derive(Parser)]
#[command(name = "favard", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Transformed basis functions φ_n(x)
    #[command(subcommand)]
    Basis(BasisOp),
    /// Gauss quadrature rule of the measure
    Quad(QuadArgs),
    /// Differentiation matrix of the first N functions
    Diffmat(DiffmatArgs),
    /// Expansion coefficients of f(x)
    Coeffs(CoeffsArgs),
    /// Fit a decay model to expansion coefficients
    Decay(DecayArgs),
    /// Periodic systems from discrete measures on ℤ
    #[command(subcommand)]
    Periodic(PeriodicOp),
    /// Spectral propagation of i u_t = −u_xx + V(x) u
    Schrodinger(SchrodingerArgs),
    /// Numerical checks of the basis identities
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum BasisOp {
    /// Evaluate φ_n on a grid; columns x, re_phi_n, im_phi_n per n
    Eval(BasisEvalArgs),
}

#[derive(Subcommand)]
enum PeriodicOp {
    /// Evaluate the periodic Charlier functions on a grid
    Eval(PeriodicEvalArgs),
}

#[derive(Args)]
struct BasisEvalArgs {
    /// Family, e.g. hermite, legendre, mt, jacobi:0.5,0.5, custom-weight:exp(-x^4)
    #[arg(long)]
    family: String,
    /// Index or inclusive range, e.g. 0:3 (MT accepts negative indices)
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    /// lo:hi:step
    #[arg(long, allow_hyphen_values = true, default_value = "-10:10:0.1")]
    grid: String,
    /// Output file; stdout when omitted or `-`
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long)]
    family: String,
    /// Number of nodes
    #[arg(long = "N")]
    n: usize,
    /// Columns to write, from `nodes` and `weights`
    #[arg(long, value_delimiter = ',', default_value = "nodes,weights")]
    emit: Vec<QuadColumn>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadColumn {
    Nodes,
    Weights,
}

#[derive(Args)]
struct DiffmatArgs {
    #[arg(long)]
    family: String,
    #[arg(long = "N")]
    n: usize,
    /// `entries` (CSV: row, col, re, im) or `radius` (JSON)
    #[arg(long, default_value = "entries")]
    emit: DiffmatEmit,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiffmatEmit {
    Entries,
    Radius,
}

#[derive(Args, Clone)]
struct CoeffSource {
    #[arg(long)]
    family: Option<String>,
    /// f(x) as an expression in x
    #[arg(long = "f")]
    f: Option<String>,
    /// Number of coefficients
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, default_value = "auto")]
    method: Method,
    /// Half-width of the x-space window for `quad`
    #[arg(long, default_value_t = 40.0)]
    xmax: f64,
    /// Trapezoid points for `quad`
    #[arg(long, default_value_t = 8001)]
    points: usize,
    /// Dilation L of the MT basis (2L)^{-1/2}φ_n(x/(2L)) for `fft`; ½ is canonical
    #[arg(long, default_value_t = 0.5)]
    scale: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    /// fft for mt, dct for the four tanh–Chebyshev families, quad otherwise
    Auto,
    Fft,
    Dct,
    Quad,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    src: CoeffSource,
    /// Output file; `-` or `csv` for stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DecayArgs {
    /// `exp`, `alg` or `stretched:<p>`
    #[arg(long)]
    model: String,
    /// Coefficient CSV from `coeffs`; `-` reads stdin. Without it the
    /// coefficients are computed from the remaining options.
    #[arg(long)]
    input: Option<String>,
    #[command(flatten)]
    src: CoeffSource,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PeriodicEvalArgs {
    /// Charlier parameter
    #[arg(long)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-pi:pi:pi/64")]
    grid: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SchrodingerArgs {
    /// hermite or mt with a potential; any family without one
    #[arg(long)]
    basis: String,
    #[arg(long = "N")]
    n: usize,
    /// Initial condition u(x, 0)
    #[arg(long)]
    f0: String,
    /// Final time
    #[arg(long = "T")]
    t_end: f64,
    /// Time step; T/τ must be an integer
    #[arg(long)]
    tau: f64,
    /// V(x), or `none` for exact free propagation
    #[arg(long, default_value = "none")]
    potential: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-10:10:0.1")]
    grid: String,
    /// Write every k-th step
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[arg(long, default_value_t = 40.0)]
    xmax: f64,
    #[arg(long, default_value_t = 8001)]
    points: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` or one of: gram, recurrence, cramer, pw-support, ramanujan,
    /// tanh-jacobi, periodic-gram, periodic-recurrence
    check: String,
    #[arg(long)]
    family: String,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, found before any computation.
    Usage(String),
    /// Checks that ran and failed.
    Checks(usize),
    Compute(favard::Error),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<favard::Error> for Failure {
    fn from(e: favard::Error) -> Self {
        use favard::Error as E;
        match e {
            E::InvalidArgument(_) | E::Syntax { .. } | E::Index { .. } | E::Contract(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

fn subcommand_path(cmd: &Cmd) -> &'static [&'static str] {
    match cmd {
        Cmd::Basis(_) => &["basis", "eval"],
        Cmd::Quad(_) => &["quad"],
        Cmd::Diffmat(_) => &["diffmat"],
        Cmd::Coeffs(_) => &["coeffs"],
        Cmd::Decay(_) => &["decay"],
        Cmd::Periodic(_) => &["periodic", "eval"],
        Cmd::Schrodinger(_) => &["schrodinger"],
        Cmd::Verify(_) => &["verify"],
    }
}

fn help_for(path: &[&str]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    for name in path {
        let Some(sub) = cmd.find_subcommand(name).cloned() else { break };
        cmd = sub;
    }
    cmd.render_help().to_string()
}

fn threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("FAVARD_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("FAVARD_THREADS={v}: expected a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("FAVARD_THREADS: {e}")))
}

fn dispatch(cmd: &Cmd) -> Result<(), Failure> {
    threads()?;
    match cmd {
        Cmd::Basis(BasisOp::Eval(a)) => commands::basis_eval(a),
        Cmd::Quad(a) => commands::quad(a),
        Cmd::Diffmat(a) => commands::diffmat(a),
        Cmd::Coeffs(a) => commands::coeffs(a),
        Cmd::Decay(a) => commands::decay(a),
        Cmd::Periodic(PeriodicOp::Eval(a)) => commands::periodic_eval(a),
        Cmd::Schrodinger(a) => commands::schrodinger(a),
        Cmd::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", help_for(subcommand_path(&cli.cmd)));
            ExitCode::from(2)
        }
        Err(Failure::Checks(k)) => {
            eprintln!("{k} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
