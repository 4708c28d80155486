//! Randomized verification populations for the bound checks.
//!
//! Case `k` of a run with root seed `s` draws from ChaCha8 stream `k` of `s`,
//! so cases can be evaluated in parallel and any single case can be replayed.
//! Tallies are folded in case order.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimates::{
    check_classical, check_disk_bound, check_inner_product, check_modulus, check_two_point,
    proof_quantity_i, BoundReport,
};
use crate::geometry::{smallest_enclosing_disk, Region};
use crate::rv::{
    existence_certificate, harmonic_mean, AtomRecord, ComplexLaw, FiniteDistribution,
    RealDistribution,
};

/// Relative agreement between the two-point closed form and the general
/// path, per unit of condition number.
pub const TWO_POINT_AGREEMENT: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Modulus,
    Inner,
    Disk,
    TwoPoint,
    Classical,
    ProofI,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Modulus,
        Suite::Inner,
        Suite::Disk,
        Suite::TwoPoint,
        Suite::Classical,
        Suite::ProofI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Modulus => "modulus",
            Suite::Inner => "inner",
            Suite::Disk => "disk",
            Suite::TwoPoint => "twopoint",
            Suite::Classical => "classical",
            Suite::ProofI => "proofI",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Everything needed to rerun one check by hand.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseInput {
    Distribution {
        atoms: Vec<AtomRecord>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c: Option<crate::serde_complex::Wire>,
        #[serde(skip_serializing_if = "Option::is_none")]
        region: Option<Region>,
    },
    TwoPoint {
        #[serde(with = "crate::serde_complex")]
        c1: Complex64,
        #[serde(with = "crate::serde_complex")]
        c2: Complex64,
        theta: f64,
    },
    Real {
        atoms: Vec<(f64, f64)>,
    },
}

impl CaseInput {
    fn dist(d: &FiniteDistribution) -> Self {
        CaseInput::Distribution {
            atoms: d
                .atoms()
                .map(|(z, w)| AtomRecord {
                    re: z.re,
                    im: z.im,
                    w,
                })
                .collect(),
            c: None,
            region: None,
        }
    }

    fn with_c(mut self, direction: Complex64) -> Self {
        if let CaseInput::Distribution { c, .. } = &mut self {
            *c = Some(crate::serde_complex::Wire(direction));
        }
        self
    }

    fn with_region(mut self, r: Region) -> Self {
        if let CaseInput::Distribution { region, .. } = &mut self {
            *region = Some(r);
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Refused,
    Skipped,
}

/// One evaluated check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub case: usize,
    pub check: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub input: CaseInput,
}

impl CheckOutcome {
    fn inequality(
        case: usize,
        check: &'static str,
        input: CaseInput,
        result: Result<BoundReport>,
    ) -> Self {
        match result {
            Ok(report) => Self {
                case,
                check,
                status: if report.all_hold() {
                    Status::Passed
                } else {
                    Status::Failed
                },
                report: Some(report),
                error: None,
                input,
            },
            Err(e) => Self::refused(case, check, input, e),
        }
    }

    /// The report must hold and its slack must also vanish within tolerance.
    fn equality(
        case: usize,
        check: &'static str,
        input: CaseInput,
        result: Result<BoundReport>,
    ) -> Self {
        let mut outcome = Self::inequality(case, check, input, result);
        if let Some(r) = &outcome.report {
            if r.slack.abs() > r.tol {
                outcome.status = Status::Failed;
            }
        }
        outcome
    }

    fn refused(case: usize, check: &'static str, input: CaseInput, e: Error) -> Self {
        Self {
            case,
            check,
            status: Status::Refused,
            report: None,
            error: Some(e.to_string()),
            input,
        }
    }

    fn skipped(case: usize, check: &'static str, input: CaseInput, why: &str) -> Self {
        Self {
            case,
            check,
            status: Status::Skipped,
            report: None,
            error: Some(why.to_owned()),
            input,
        }
    }

    /// Slack as a margin: negative slack for inequalities, `-|slack|` for
    /// equality checks.
    fn margin(&self) -> Option<f64> {
        let r = self.report.as_ref()?;
        Some(if self.check.ends_with("equality") {
            -r.slack.abs()
        } else {
            r.slack
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub refused: usize,
    pub skipped: usize,
    /// Smallest margin seen (`None` if no report was produced).
    pub worst_slack: Option<f64>,
    /// Counts per check name.
    pub by_check: BTreeMap<&'static str, CheckCounts>,
    pub failures: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub passed: usize,
    pub failed: usize,
    pub refused: usize,
    pub skipped: usize,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn tally(
        suite: Suite,
        seed: u64,
        cases: usize,
        outcomes: impl IntoIterator<Item = CheckOutcome>,
    ) -> Self {
        let mut s = SuiteSummary {
            suite,
            seed,
            cases,
            checks: 0,
            passed: 0,
            failed: 0,
            refused: 0,
            skipped: 0,
            worst_slack: None,
            by_check: BTreeMap::new(),
            failures: Vec::new(),
        };
        for o in outcomes {
            s.checks += 1;
            if let Some(m) = o.margin() {
                s.worst_slack = Some(s.worst_slack.map_or(m, |w: f64| w.min(m)));
            }
            let counts = s.by_check.entry(o.check).or_default();
            match o.status {
                Status::Passed => {
                    s.passed += 1;
                    counts.passed += 1;
                }
                Status::Refused => {
                    s.refused += 1;
                    counts.refused += 1;
                }
                Status::Skipped => {
                    s.skipped += 1;
                    counts.skipped += 1;
                }
                Status::Failed => {
                    s.failed += 1;
                    counts.failed += 1;
                    s.failures.push(o);
                }
            }
        }
        s
    }
}

/// The RNG for case `case` under root seed `seed`.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn polar(rng: &mut impl Rng, r_min: f64, r_max: f64) -> Complex64 {
    Complex64::from_polar(rng.random_range(r_min..=r_max), rng.random_range(0.0..TAU))
}

fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// 2 to 16 atoms drawn uniformly from `{Re z >= 0.1, |z| <= 10}`.
pub fn random_distribution(rng: &mut impl Rng) -> FiniteDistribution {
    let n = rng.random_range(2..=16);
    let points: Vec<Complex64> = (0..n)
        .map(|_| loop {
            let z = Complex64::new(rng.random_range(0.1..=10.0), rng.random_range(-10.0..=10.0));
            if z.norm() <= 10.0 {
                break z;
            }
        })
        .collect();
    FiniteDistribution::new(points.into_iter().zip(random_weights(rng, n))).expect("valid atoms")
}

/// `vX` with `v` non-zero and `X` positive, 2 to 16 atoms.
pub fn random_equality_case(rng: &mut impl Rng) -> (Complex64, FiniteDistribution) {
    let v = polar(rng, 0.1, 10.0);
    let n = rng.random_range(2..=16);
    let atoms: Vec<(Complex64, f64)> = random_weights(rng, n)
        .into_iter()
        .map(|w| (v * rng.random_range(0.1..=10.0), w))
        .collect();
    (v, FiniteDistribution::new(atoms).expect("valid atoms"))
}

/// A disk `|z - c| <= r` with `0.5 <= |c| <= 10`; `r = |c|` exactly when
/// `touching`, else `r` uniform in `[0.05, 0.95] |c|`. Atoms are uniform in
/// the disk and, when touching, at least `0.05 |c|` away from 0.
pub fn random_disk_case(rng: &mut impl Rng, touching: bool) -> (Region, FiniteDistribution) {
    let center = polar(rng, 0.5, 10.0);
    let modulus = center.norm();
    let radius = if touching {
        modulus
    } else {
        modulus * rng.random_range(0.05..=0.95)
    };
    let n = rng.random_range(2..=16);
    let points: Vec<Complex64> = (0..n)
        .map(|_| loop {
            let z = center
                + Complex64::from_polar(
                    radius * rng.random::<f64>().sqrt(),
                    rng.random_range(0.0..TAU),
                );
            if (z - center).norm() <= radius && z.norm() >= 0.05 * modulus {
                break z;
            }
        })
        .collect();
    let dist = FiniteDistribution::new(points.into_iter().zip(random_weights(rng, n)))
        .expect("valid atoms");
    (Region::disk(center, radius).expect("positive radius"), dist)
}

/// A positive law on `[0.01, 100]` (log-uniform points); one case in ten is
/// constant.
pub fn random_real_distribution(rng: &mut impl Rng) -> RealDistribution {
    let n = rng.random_range(1..=16);
    let constant = rng.random_bool(0.1);
    let fixed = 10f64.powf(rng.random_range(-2.0..=2.0));
    let weights = random_weights(rng, n);
    let atoms: Vec<(f64, f64)> = weights
        .into_iter()
        .map(|w| {
            let x = if constant {
                fixed
            } else {
                10f64.powf(rng.random_range(-2.0..=2.0))
            };
            (x, w)
        })
        .collect();
    RealDistribution::new(atoms).expect("valid atoms")
}

fn modulus_case(case: usize, rng: &mut ChaCha8Rng, tol: f64) -> Vec<CheckOutcome> {
    let z = random_distribution(rng);
    let (_, zv) = random_equality_case(rng);
    vec![
        CheckOutcome::inequality(case, "modulus", CaseInput::dist(&z), check_modulus(&z, tol)),
        CheckOutcome::equality(
            case,
            "modulus_equality",
            CaseInput::dist(&zv),
            check_modulus(&zv, tol),
        ),
    ]
}

fn inner_case(case: usize, rng: &mut ChaCha8Rng, tol: f64) -> Vec<CheckOutcome> {
    let z = random_distribution(rng);
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![CheckOutcome::inequality(
        case,
        "inner_product",
        CaseInput::dist(&z).with_c(one),
        check_inner_product(&z, one, tol),
    )];
    let direction = (0..64)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(-FRAC_PI_2..FRAC_PI_2)))
        .find(|&c| existence_certificate(&z, c).is_ok_and(|cert| cert.is_valid()));
    out.push(match direction {
        Some(c) => CheckOutcome::inequality(
            case,
            "inner_product_random_c",
            CaseInput::dist(&z).with_c(c),
            check_inner_product(&z, c, tol),
        ),
        None => CheckOutcome::skipped(
            case,
            "inner_product_random_c",
            CaseInput::dist(&z),
            "no certified c found",
        ),
    });
    let (v, zv) = random_equality_case(rng);
    let c = v / v.norm()
        * Complex64::from_polar(
            1.0,
            rng.random_range(-0.45 * std::f64::consts::PI..0.45 * std::f64::consts::PI),
        );
    out.push(CheckOutcome::equality(
        case,
        "inner_product_equality",
        CaseInput::dist(&zv).with_c(c),
        check_inner_product(&zv, c, tol),
    ));
    out
}

fn proof_case(case: usize, rng: &mut ChaCha8Rng, tol: f64) -> Vec<CheckOutcome> {
    let z = random_distribution(rng);
    vec![CheckOutcome::inequality(
        case,
        "proof_I",
        CaseInput::dist(&z),
        proof_quantity_i(&z, tol),
    )]
}

fn disk_case(case: usize, rng: &mut ChaCha8Rng, tol: f64, touching: bool) -> Vec<CheckOutcome> {
    let (region, z) = random_disk_case(rng, touching);
    let name = if touching {
        "disk_bound_half_plane"
    } else {
        "disk_bound"
    };
    let mut out = vec![CheckOutcome::inequality(
        case,
        name,
        CaseInput::dist(&z).with_region(region),
        check_disk_bound(&z, &region, tol),
    )];
    if !touching {
        // smallest enclosing disk of a general population, when 0 is outside it
        let z = random_distribution(rng);
        let input = CaseInput::dist(&z);
        out.push(match smallest_enclosing_disk(&z.range()) {
            Some((center, radius)) if radius > 0.0 && radius <= center.norm() => {
                let region = Region::disk(center, radius).expect("positive radius");
                CheckOutcome::inequality(
                    case,
                    "disk_bound_enclosing",
                    input.with_region(region),
                    check_disk_bound(&z, &region, tol),
                )
            }
            _ => CheckOutcome::skipped(
                case,
                "disk_bound_enclosing",
                input,
                "enclosing disk contains 0",
            ),
        });
    }
    out
}

/// Every weight `0, 0.01, .., 1`.
pub fn theta_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// Condition number of `E[Z^-1] = (1 - theta)/c1 + theta/c2`: relative
/// rounding in `H` is amplified by this factor.
fn two_point_condition(c1: Complex64, c2: Complex64, theta: f64) -> f64 {
    let (a, b) = ((1.0 - theta) / c1, theta / c2);
    (a.norm() + b.norm()) / (a + b).norm()
}

fn two_point_case(case: usize, rng: &mut ChaCha8Rng, tol: f64) -> Vec<CheckOutcome> {
    let c1 = polar(rng, 0.1, 10.0);
    let c2 = polar(rng, 0.1, 10.0);
    let thetas = theta_grid();
    let rows = match check_two_point(c1, c2, &thetas, tol) {
        Ok(rows) => rows,
        Err(e) => {
            let input = CaseInput::TwoPoint {
                c1,
                c2,
                theta: f64::NAN,
            };
            return vec![CheckOutcome::refused(case, "two_point", input, e)];
        }
    };
    thetas
        .iter()
        .zip(rows)
        .map(|(&theta, row)| {
            let input = CaseInput::TwoPoint { c1, c2, theta };
            let row = row.map(|report| {
                let crate::estimates::Quantity::Complex(h) = report.lhs else {
                    unreachable!("two-point lhs is complex")
                };
                let scale = c1.norm().max(c2.norm()).max(h.norm());
                let general =
                    FiniteDistribution::two_point(c1, c2, theta).and_then(|d| harmonic_mean(&d));
                let gap = general.map_or(f64::INFINITY, |g| (g - h).norm() / g.norm());
                let allowed = TWO_POINT_AGREEMENT * two_point_condition(c1, c2, theta);
                report.with_tol(tol * scale).with_cross_check(
                    "closed_form_matches_general",
                    gap,
                    gap <= allowed,
                )
            });
            CheckOutcome::inequality(case, "two_point", input, row)
        })
        .collect()
}

fn classical_case(case: usize, rng: &mut ChaCha8Rng, tol: f64) -> Vec<CheckOutcome> {
    let x = random_real_distribution(rng);
    let input = CaseInput::Real {
        atoms: x.atoms().collect(),
    };
    match check_classical(&x, tol) {
        Ok(reports) => reports
            .into_iter()
            .zip(["range_bound", "jensen"])
            .map(|(r, name)| CheckOutcome::inequality(case, name, input.clone(), Ok(r)))
            .collect(),
        Err(e) => vec![CheckOutcome::refused(case, "classical", input, e)],
    }
}

fn run_cases(
    suite: Suite,
    cases: usize,
    seed: u64,
    f: impl Fn(usize, &mut ChaCha8Rng) -> Vec<CheckOutcome> + Sync,
) -> SuiteSummary {
    let outcomes: Vec<Vec<CheckOutcome>> = (0..cases)
        .into_par_iter()
        .map(|case| f(case, &mut case_rng(seed, case)))
        .collect();
    SuiteSummary::tally(suite, seed, cases, outcomes.into_iter().flatten())
}

/// Runs one suite. `Suite::All` is rejected here; use [`run_all`].
///
/// The disk suite runs `cases` interior disks (each paired with an
/// enclosing-disk case) and `ceil(cases / 10)` touching disks (`r = |c|`),
/// the latter under case indices `cases..`.
pub fn run_suite(suite: Suite, cases: usize, seed: u64, tol: f64) -> Result<SuiteSummary> {
    if cases == 0 {
        return Err(Error::InvalidArgument("cases must be at least 1".into()));
    }
    Ok(match suite {
        Suite::Modulus => run_cases(suite, cases, seed, |k, rng| modulus_case(k, rng, tol)),
        Suite::Inner => run_cases(suite, cases, seed, |k, rng| inner_case(k, rng, tol)),
        Suite::ProofI => run_cases(suite, cases, seed, |k, rng| proof_case(k, rng, tol)),
        Suite::TwoPoint => run_cases(suite, cases, seed, |k, rng| two_point_case(k, rng, tol)),
        Suite::Classical => run_cases(suite, cases, seed, |k, rng| classical_case(k, rng, tol)),
        Suite::Disk => {
            let touching = cases.div_ceil(10);
            run_cases(suite, cases + touching, seed, |k, rng| {
                disk_case(k, rng, tol, k >= cases)
            })
        }
        Suite::All => {
            return Err(Error::InvalidArgument(
                "run_suite takes a single suite".into(),
            ))
        }
    })
}

pub fn run_all(cases: usize, seed: u64, tol: f64) -> Result<Vec<SuiteSummary>> {
    Suite::EACH
        .iter()
        .map(|&s| run_suite(s, cases, seed, tol))
        .collect()
}
