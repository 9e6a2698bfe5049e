//! `sp4`: enumerate cosets, evaluate Ramanujan sums, Whittaker functions and
//! Eisenstein series, and run the verification suites.
//!
//! Every command prints one JSON document on stdout (`cosets` prints one
//! JSON object per line). Exit status: 0 success, 2 invalid input or budget
//! exceeded, 3 verification failure, 1 numerical failure.

mod commands;
mod config;
mod fixtures;
mod output;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "sp4", version, about = "Eisenstein series on Sp(4)")]
pub struct Cli {
    /// JSON run configuration (overrides $SP4_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format; overrides the config.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Add wall-clock time to the output (breaks byte-for-byte determinism).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coset representatives R_w or primitive points of V0, Va, Vb.
    Cosets(commands::CosetsArgs),
    /// Sp(4) Ramanujan sums and their Dirichlet series.
    Ramanujan(commands::RamanujanArgs),
    /// Jacquet–Whittaker functions W_w.
    Whittaker(commands::WhittakerArgs),
    /// Truncated Eisenstein series.
    Eval(commands::EvalArgs),
    /// Constant terms along P0, Pa, Pb.
    ConstantTerm(commands::ConstantArgs),
    /// Fourier coefficients along N0.
    Fourier(commands::FourierArgs),
    /// Run verification suites against independent oracles.
    Verify(verify::VerifyArgs),
    /// Record and replay content-addressed golden fixtures.
    Fixtures(fixtures::FixturesArgs),
}

/// Result of a command before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Doc(Value),
    Lines(Vec<Value>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    /// Report to print despite the failure (verification).
    pub output: Option<Output>,
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "invalid",
            message: msg.into(),
            output: None,
        }
    }

    pub fn verification(report: Output, msg: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            kind: "verification",
            message: msg.into(),
            output: Some(report),
        }
    }
}

impl From<sp4::Error> for Failure {
    fn from(e: sp4::Error) -> Failure {
        use sp4::Error::*;
        let (code, kind) = match &e {
            Budget(_) => (2, "budget"),
            Region(_) => (2, "region"),
            Pole(_) => (2, "pole"),
            Invalid(_) | Degenerate(_) | NotPrimitive(_) | NotSymplectic => (2, "invalid"),
            Quadrature(_) | Overflow => (1, "numerical"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
            output: None,
        }
    }
}

/// Run a parsed command under `cfg`.
pub fn run(command: &Command, cfg: &RunConfig) -> Result<Output, Failure> {
    match command {
        Command::Cosets(a) => commands::cosets(a, cfg),
        Command::Ramanujan(a) => commands::ramanujan(a, cfg),
        Command::Whittaker(a) => commands::whittaker(a, cfg),
        Command::Eval(a) => commands::eval(a, cfg),
        Command::ConstantTerm(a) => commands::constant_term(a, cfg),
        Command::Fourier(a) => commands::fourier(a, cfg),
        Command::Verify(a) => verify::run(a, cfg),
        Command::Fixtures(a) => fixtures::run(a, cfg),
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
    let mut cfg = match RunConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(f) => return report_failure(&f, Format::Json),
    };
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    let start = std::time::Instant::now();
    match run(&cli.command, &cfg) {
        Ok(mut out) => {
            if cli.timing {
                output::add_timing(&mut out, start.elapsed());
            }
            print!("{}", output::render(&out, cfg.format));
            ExitCode::SUCCESS
        }
        Err(f) => report_failure(&f, cfg.format),
    }
}

fn report_failure(f: &Failure, format: Format) -> ExitCode {
    match &f.output {
        Some(out) => print!("{}", output::render(out, format)),
        None => {
            let doc = serde_json::json!({"error": {"kind": f.kind, "message": f.message}});
            println!("{doc}");
        }
    }
    eprintln!("sp4: {}", f.message);
    ExitCode::from(f.code)
}
