//! Command-line front end: evaluate the special functions and fundamental
//! solutions, run verification suites, and scan fields to CSV.

mod config;
mod csvout;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fasol::fundsol::{evaluate_q, evaluation_path, DeltaVector};
use fasol::lauricella::{fa_decomposed, fa_direct, fa_recurrence};
use fasol::special::{gauss_2f1, GaussParams};
use fasol::{Error, EvalResult, Result};

use config::{example_config, RunConfig};
use csvout::{format_value, scan_csv};

#[derive(Parser)]
#[command(
    name = "fasol",
    version,
    about = "Fundamental solutions of elliptic equations with singular coefficients",
    arg_required_else_help = true
)]
struct Cli {
    /// Print a complete example configuration file and exit.
    #[arg(long, exclusive = true)]
    dump_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Gauss hypergeometric function 2F1(a, b; c; x).
    #[command(name = "eval-2f1")]
    Eval2f1(Eval2f1Args),
    /// Evaluate the n-variable hypergeometric series by one or all methods.
    #[command(name = "eval-fa")]
    EvalFa(EvalFaArgs),
    /// Evaluate a fundamental solution q_k at a point.
    #[command(name = "eval-fundsol")]
    EvalFundsol(EvalFundsolArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Evaluate q_k over a grid and write CSV.
    Scan(ScanArgs),
}

#[derive(Args)]
struct Eval2f1Args {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum FaMethod {
    Direct,
    Decomposed,
    Recurrence,
    All,
}

#[derive(Args)]
struct EvalFaArgs {
    /// Configuration file with a [lauricella] section.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = FaMethod::All)]
    method: FaMethod,
    /// Overrides the tolerance from the configuration.
    #[arg(long)]
    tol: Option<f64>,
    /// Total-degree budget for the decomposed and recurrence methods.
    #[arg(long)]
    max_degree: Option<u32>,
}

#[derive(Args)]
struct EvalFundsolArgs {
    /// Configuration file with [problem] and x0.
    #[arg(long)]
    config: PathBuf,
    /// Evaluation point, comma-separated (m coordinates).
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    x: Vec<f64>,
    /// Solution selector, comma-separated 0/1 entries of length n
    /// (default: all zeros).
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(0..=1))]
    delta: Option<Vec<u8>>,
    /// Overrides gamma from the configuration.
    #[arg(long)]
    gamma: Option<f64>,
    /// Overrides the tolerance from the configuration.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy)]
enum SuiteName {
    Pde,
    Singularity,
    Boundary,
    Identity,
    Decomposition,
    All,
}

impl SuiteName {
    fn as_str(self) -> &'static str {
        match self {
            SuiteName::Pde => "pde",
            SuiteName::Singularity => "singularity",
            SuiteName::Boundary => "boundary",
            SuiteName::Identity => "identity",
            SuiteName::Decomposition => "decomposition",
            SuiteName::All => "all",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = SuiteName::All)]
    suite: SuiteName,
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Configuration file with [problem], x0 and [scan].
    #[arg(long)]
    config: PathBuf,
    /// Solution selector, comma-separated 0/1 entries of length n
    /// (default: all zeros).
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(0..=1))]
    delta: Option<Vec<u8>>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn delta_or_zeros(delta: &Option<Vec<u8>>, n: usize) -> Result<DeltaVector> {
    DeltaVector::new(delta.clone().unwrap_or_else(|| vec![0; n]))
}

fn print_eval_result(r: &EvalResult) {
    println!("value = {}", format_value(r.value));
    println!("error-estimate = {}", format_value(r.error_estimate));
    println!("terms = {}", r.terms_used);
    println!("converged = {}", r.converged);
}

fn cmd_eval_2f1(a: &Eval2f1Args) -> Result<ExitCode> {
    let p = GaussParams::new(a.a, a.b, a.c);
    let r = gauss_2f1(p, a.x, a.tol)?;
    print_eval_result(&r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval_fa(a: &EvalFaArgs) -> Result<ExitCode> {
    let rc = RunConfig::from_path(&a.config)?;
    let p = rc.lauricella_params()?;
    let tol = a.tol.unwrap_or(rc.tol);
    let budget = a.max_degree.unwrap_or(if p.n() <= 3 { 60 } else { 30 });
    let run = |method: FaMethod| -> Result<EvalResult> {
        match method {
            FaMethod::Direct => fa_direct(&p, tol, 150),
            FaMethod::Decomposed => fa_decomposed(&p, tol, budget),
            FaMethod::Recurrence => fa_recurrence(&p, tol, budget),
            FaMethod::All => unreachable!(),
        }
    };
    match a.method {
        FaMethod::All => {
            let direct = run(FaMethod::Direct)?;
            let dec = run(FaMethod::Decomposed)?;
            let rec = run(FaMethod::Recurrence)?;
            for (name, r) in [
                ("direct", &direct),
                ("decomposed", &dec),
                ("recurrence", &rec),
            ] {
                println!(
                    "method={name} value={} terms={} converged={}",
                    format_value(r.value),
                    r.terms_used,
                    r.converged
                );
            }
            let rd = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
            println!(
                "agreement direct-decomposed = {}",
                format_value(rd(direct.value, dec.value))
            );
            println!(
                "agreement direct-recurrence = {}",
                format_value(rd(direct.value, rec.value))
            );
        }
        m => {
            let r = run(m)?;
            print_eval_result(&r);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval_fundsol(a: &EvalFundsolArgs) -> Result<ExitCode> {
    let rc = RunConfig::from_path(&a.config)?;
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let d = delta_or_zeros(&a.delta, cfg.n())?;
    let gamma = a.gamma.unwrap_or(rc.gamma);
    let tol = a.tol.unwrap_or(rc.tol);
    let path = evaluation_path(&a.x, &x0, &cfg)?;
    let r = evaluate_q(&a.x, &x0, &cfg, &d, gamma, tol)?;
    println!("q = {}", format_value(r.value));
    println!("path = {path}");
    println!("error-estimate = {}", format_value(r.error_estimate));
    println!("converged = {}", r.converged);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let rc = RunConfig::from_path(&a.config)?;
    let report = suites::run_suite(a.suite.as_str(), &rc)?;
    let text = report.render();
    print!("{text}");
    if let Some(out) = &a.out {
        std::fs::write(out, &text)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_scan(a: &ScanArgs) -> Result<ExitCode> {
    let rc = RunConfig::from_path(&a.config)?;
    let cfg = rc.problem_config()?;
    let x0 = rc.x0_checked(&cfg)?;
    let scan = rc.scan_checked(&cfg)?;
    let d = delta_or_zeros(&a.delta, cfg.n())?;
    let (text, summary) = scan_csv(&cfg, &x0, &scan, &d, rc.gamma, rc.tol)?;
    std::fs::write(&a.out, &text)
        .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", a.out.display())))?;
    println!(
        "rows={} skipped={} out={}",
        summary.rows_written,
        summary.rows_skipped,
        a.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // Restore default SIGPIPE handling so truncated pipelines
    // (`fasol scan ... | head`) terminate the process quietly, as Unix
    // filters conventionally do, instead of panicking on a closed stdout.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if cli.dump_config {
        print!("{}", example_config().to_toml());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    let result = match &command {
        Command::Eval2f1(a) => cmd_eval_2f1(a),
        Command::EvalFa(a) => cmd_eval_fa(a),
        Command::EvalFundsol(a) => cmd_eval_fundsol(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
