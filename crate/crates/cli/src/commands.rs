//! Subcommand bodies. Each returns the text to emit and the exit status;
//! hard failures come back as [`CliError`].

use std::path::{Path, PathBuf};

use chmean::estimates::{
    check_classical, check_disk_bound, check_inner_product, check_modulus, check_two_point,
    proof_quantity_i, BoundReport,
};
use chmean::geometry::Region;
use chmean::montecarlo::{lognormal_experiment, ComplexNormalParams};
use chmean::rv::{
    existence_certificate, expectation, harmonic_mean, FiniteDistribution, RealDistribution,
};
use chmean::suites::{run_all, run_suite, Suite, SuiteSummary};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::sweep::{sweep, to_csv, to_svg};
use crate::{CliError, Exit, Result};

/// Largest `sigma` the lognormal command accepts.
pub const SIGMA_CAP: f64 = 4.0;

/// Failures kept per suite in the printed summary.
pub const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
    pub exit: Exit,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            warnings: Vec::new(),
            exit: Exit::Success,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn wire(z: Complex64) -> chmean::serde_complex::Wire {
    chmean::serde_complex::Wire(z)
}

pub fn load_distribution(path: &Path) -> Result<FiniteDistribution> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn hmean(file: &Path, c: Option<Complex64>, format: Option<Format>) -> Result<Output> {
    if matches!(format, Some(Format::Csv | Format::Svg)) {
        return Err(CliError::Input("hmean only writes json".into()));
    }
    let dist = load_distribution(file)?;
    let c = c.unwrap_or(Complex64::new(1.0, 0.0));
    let cert = existence_certificate(&dist, c)?;
    let e = expectation(&dist);
    let h = harmonic_mean(&dist)?;
    let mut warnings = Vec::new();
    if let Some(index) = cert.violating_atom {
        warnings.push(format!(
            "warning: existence certificate fails for c = {c} at atom {index} (c . z = {}); H[Z] was still computed",
            cert.a
        ));
    }
    let text = to_json(&json!({
        "expectation": wire(e),
        "harmonic_mean": wire(h),
        "modulus": h.norm(),
        "certificate": cert,
    }));
    Ok(Output {
        text,
        warnings,
        exit: Exit::Success,
    })
}

pub fn sweep2(
    c1: Complex64,
    c2: Complex64,
    steps: usize,
    format: Option<Format>,
) -> Result<Output> {
    let s = sweep(c1, c2, steps)?;
    let mut warnings = Vec::new();
    if s.locus.is_degenerate() {
        warnings.push(
            "warning: 0 lies between c1 and c2; H[Z] passes through infinity and locus_dist is measured to their common line"
                .to_owned(),
        );
    }
    let degenerate = s.rows.iter().filter(|r| r.h.is_none()).count();
    if degenerate > 0 {
        warnings.push(format!(
            "warning: {degenerate} weight(s) give E[Z^-1] = 0 and are flagged degenerate"
        ));
    }
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&s.rows),
        Format::Svg => to_svg(&s),
        Format::Json => to_json(&json!({ "locus": s.locus, "rows": s.rows })),
    };
    Ok(Output {
        text,
        warnings,
        exit: Exit::Success,
    })
}

fn trimmed(mut s: SuiteSummary) -> SuiteSummary {
    s.failures.truncate(MAX_REPORTED_FAILURES);
    s
}

pub fn verify(suite: Suite, cases: usize, seed: u64, tol: f64) -> Result<Output> {
    let summaries = match suite {
        Suite::All => run_all(cases, seed, tol)?,
        single => vec![run_suite(single, cases, seed, tol)?],
    };
    let failed: usize = summaries.iter().map(|s| s.failed).sum();
    let summaries: Vec<SuiteSummary> = summaries.into_iter().map(trimmed).collect();
    let text = to_json(&json!({
        "seed": seed,
        "tol": tol,
        "cases": cases,
        "passed": failed == 0,
        "suites": summaries,
    }));
    let warnings = summaries
        .iter()
        .map(|s| {
            format!(
                "{}: {} passed, {} failed, {} refused, {} skipped; worst slack {}; seed {}",
                s.suite,
                s.passed,
                s.failed,
                s.refused,
                s.skipped,
                s.worst_slack.map_or("n/a".to_owned(), |w| format!("{w:e}")),
                s.seed
            )
        })
        .collect();
    let exit = if failed == 0 {
        Exit::Success
    } else {
        Exit::VerificationFailure
    };
    Ok(Output {
        text,
        warnings,
        exit,
    })
}

/// What a hand-built case needs besides the distribution.
#[derive(Debug, Default, Clone)]
pub struct ReplayArgs {
    pub file: PathBuf,
    pub c: Option<Complex64>,
    pub center: Option<Complex64>,
    pub radius: Option<f64>,
}

/// Runs one suite's check on a distribution file.
///
/// A check whose hypotheses fail is reported as `refused` and does not
/// change the exit status; only a breached inequality exits with 3.
pub fn verify_case(suite: Suite, args: &ReplayArgs, tol: f64) -> Result<Output> {
    let dist = load_distribution(&args.file)?;
    let one = Complex64::new(1.0, 0.0);
    let results: Vec<chmean::Result<BoundReport>> = match suite {
        Suite::Modulus => vec![check_modulus(&dist, tol)],
        Suite::Inner => vec![check_inner_product(&dist, args.c.unwrap_or(one), tol)],
        Suite::ProofI => vec![proof_quantity_i(&dist, tol)],
        Suite::Disk => {
            let (Some(center), Some(radius)) = (args.center, args.radius) else {
                return Err(CliError::Input(
                    "disk replay needs --center and --radius".into(),
                ));
            };
            vec![Region::disk(center, radius).and_then(|d| check_disk_bound(&dist, &d, tol))]
        }
        Suite::Classical => {
            if dist.points().iter().any(|z| z.im != 0.0) {
                return Err(CliError::Input("classical replay needs real atoms".into()));
            }
            let x = RealDistribution::new(dist.atoms().map(|(z, w)| (z.re, w)))?;
            match check_classical(&x, tol) {
                Ok(reports) => reports.into_iter().map(Ok).collect(),
                Err(e) => vec![Err(e)],
            }
        }
        Suite::TwoPoint => {
            let [(c1, _), (c2, theta)] = dist.atoms().collect::<Vec<_>>()[..] else {
                return Err(CliError::Input(
                    "two-point replay needs exactly two atoms".into(),
                ));
            };
            check_two_point(c1, c2, &[theta], tol)?
        }
        Suite::All => return Err(CliError::Input("replay runs a single suite".into())),
    };
    let mut any_failed = false;
    let entries: Vec<serde_json::Value> = results
        .into_iter()
        .map(|r| match r {
            Ok(report) => {
                let status = if report.all_hold() {
                    "passed"
                } else {
                    "failed"
                };
                any_failed |= !report.all_hold();
                json!({ "status": status, "report": report })
            }
            Err(e @ chmean::Error::DegenerateMean { .. })
            | Err(e @ chmean::Error::HypothesisViolated(_)) => {
                json!({ "status": "refused", "error": e.to_string() })
            }
            Err(e) => json!({ "status": "error", "error": e.to_string() }),
        })
        .collect();
    let exit = if any_failed {
        Exit::VerificationFailure
    } else {
        Exit::Success
    };
    Ok(Output {
        text: to_json(&json!({ "suite": suite, "checks": entries })),
        warnings: Vec::new(),
        exit,
    })
}

pub fn lognormal(mu: Complex64, sigma: f64, n: usize, seed: u64) -> Result<Output> {
    if !(sigma > 0.0 && sigma <= SIGMA_CAP) {
        return Err(CliError::Input(format!(
            "sigma = {sigma} must lie in (0, {SIGMA_CAP}]"
        )));
    }
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    let p = ComplexNormalParams::new(mu, sigma)?;
    let r = lognormal_experiment(&p, n, seed)?;
    let mut out = Output::ok(to_json(&r));
    if !r.within(10.0) {
        out.warnings.push(format!(
            "deviation exceeds 10 standard errors ({}): arith off by {}, harm off by {}",
            10.0 * r.se_estimate,
            r.err_arith,
            r.err_harm
        ));
        out.exit = Exit::VerificationFailure;
    }
    Ok(out)
}
