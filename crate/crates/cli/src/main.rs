// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chmean::suites::Suite;
use chmean_cli::commands::{self, Format, Output, ReplayArgs};
use chmean_cli::complex_arg::parse_complex;
use chmean_cli::{CliError, Exit};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

/// Complex harmonic means and executable checks of their bounds.
///
/// Complex arguments are written without spaces as `a`, `bi`, `a+bi` or
/// `a-bi`, e.g. `1+i`, `-2.5i`, `4-3i`.
///
/// Exit status: 0 success, 1 input error, 2 degenerate mean (E[Z^-1] = 0),
/// 3 verification failure.
#[derive(Debug, Parser)]
#[command(name = "chmean", version)]
struct Cli {
    /// Tolerance for bound reports.
    #[arg(long, global = true, default_value_t = chmean::DEFAULT_TOL)]
    tol: f64,

    /// Root seed for randomized suites and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Modulus,
    Inner,
    Disk,
    Twopoint,
    Classical,
    #[value(name = "proofI", alias = "proofi")]
    ProofI,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E[Z], H[Z], |H[Z]| and the existence certificate of a distribution file.
    ///
    /// The file is JSON: {"atoms": [{"re": .., "im": .., "w": ..}, ..]} with
    /// weights summing to 1.
    Hmean {
        file: PathBuf,
        /// Direction c of the certificate c . z >= a > 0.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: Option<Complex64>,
    },
    /// Sweep the weight of a two-point law and print H[Z] against its locus.
    Sweep2 {
        #[arg(value_parser = parse_complex, allow_hyphen_values = true)]
        c1: Complex64,
        #[arg(value_parser = parse_complex, allow_hyphen_values = true)]
        c2: Complex64,
        /// Number of weights theta = k / (steps - 1).
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Run randomized bound checks, or replay one case from a file.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        /// Check this distribution instead of a random population.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Direction for the inner-product check.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: Option<Complex64>,
        /// Disk center for the disk check.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        center: Option<Complex64>,
        /// Disk radius for the disk check.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Complex lognormal experiment: E[exp Z] and H[exp Z] against exp(mu).
    Lognormal {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        mu: Complex64,
        /// Variance parameter, at most 4.
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
    },
}

fn suite(arg: SuiteArg) -> Suite {
    match arg {
        SuiteArg::Modulus => Suite::Modulus,
        SuiteArg::Inner => Suite::Inner,
        SuiteArg::Disk => Suite::Disk,
        SuiteArg::Twopoint => Suite::TwoPoint,
        SuiteArg::Classical => Suite::Classical,
        SuiteArg::ProofI => Suite::ProofI,
        SuiteArg::All => Suite::All,
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    if !(cli.tol >= 0.0) {
        return Err(CliError::Input(format!(
            "--tol {} must be non-negative",
            cli.tol
        )));
    }
    let format = cli.format.map(|f| match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Svg => Format::Svg,
        FormatArg::Json => Format::Json,
    });
    match cli.command {
        Command::Hmean { file, c } => commands::hmean(&file, c, format),
        Command::Sweep2 { c1, c2, steps } => commands::sweep2(c1, c2, steps, format),
        Command::Verify {
            suite: s,
            cases,
            file,
            c,
            center,
            radius,
        } => match file {
            Some(file) => commands::verify_case(
                suite(s),
                &ReplayArgs {
                    file,
                    c,
                    center,
                    radius,
                },
                cli.tol,
            ),
            None => commands::verify(suite(s), cases, cli.seed.unwrap_or(42), cli.tol),
        },
        Command::Lognormal { mu, sigma, n } => {
            commands::lognormal(mu, sigma, n, cli.seed.unwrap_or(7))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Exit::InputError as u8
            } else {
                0
            });
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|output| {
        emit(&output.text, out.as_ref())?;
        Ok(output)
    });
    match result {
        Ok(output) => {
            for w in &output.warnings {
                eprintln!("{w}");
            }
            ExitCode::from(output.exit as u8)
        }
        Err(e) => {
            eprintln!("chmean: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
