//! Executable bound checks. Each check evaluates both sides of an inequality
//! on a concrete law and returns a [`BoundReport`] with the signed slack.
//!
//! A check whose hypotheses are not met returns
//! [`Error::HypothesisViolated`] instead of a report, so a failing report
//! always means the inequality itself was breached.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{invert_region, two_point_locus, Region};
use crate::rv::{
    existence_certificate, harmonic_mean, harmonic_mean_positive, inner_product, inverse_mean,
    two_point_harmonic_mean, ComplexLaw, FiniteDistribution, RealDistribution,
};
use crate::DEFAULT_DEGENERATE_EPS;

/// Agreement required between the two algebraic forms of the proof quantity.
pub const PROOF_FORM_TOL: f64 = 1e-12;

/// Atoms may sit this far outside a region and still count as inside it.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Modulus,
    InnerProduct,
    DiskBound,
    TwoPoint,
    Jensen,
    RangeBound,
    #[serde(rename = "proof_I")]
    ProofI,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex(#[serde(with = "crate::serde_complex")] Complex64),
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex(z)
    }
}

/// A secondary condition checked alongside the main inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub slack: f64,
    pub holds: bool,
    pub tol: f64,
    pub notes: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheck>,
}

impl BoundReport {
    pub fn new(
        name: BoundName,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        slack: f64,
        tol: f64,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            name,
            lhs: lhs.into(),
            rhs: rhs.into(),
            slack,
            holds: slack >= -tol,
            tol,
            notes: notes.into(),
            cross_checks: Vec::new(),
        }
    }

    pub fn with_cross_check(mut self, name: &str, value: f64, holds: bool) -> Self {
        self.cross_checks.push(CrossCheck {
            name: name.to_owned(),
            value,
            holds,
        });
        self
    }

    /// Re-evaluates `holds` under a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.holds = self.slack >= -tol;
        self
    }

    /// Main inequality and every cross-check hold.
    pub fn all_hold(&self) -> bool {
        self.holds && self.cross_checks.iter().all(|c| c.holds)
    }
}

/// `|H[Z]| >= H[|Z|]`.
pub fn check_modulus<L: ComplexLaw>(law: &L, tol: f64) -> Result<BoundReport> {
    let h = harmonic_mean(law)?;
    let lhs = h.norm();
    let rhs = harmonic_mean_positive(&law.pushforward_modulus())?;
    Ok(BoundReport::new(
        BoundName::Modulus,
        lhs,
        rhs,
        lhs - rhs,
        tol,
        format!("H[Z] = {h}"),
    ))
}

/// `c . H[Z] >= H[c . Z]`, provided the range lies in `{c . z >= a}` with `a > 0`.
pub fn check_inner_product(
    dist: &FiniteDistribution,
    c: Complex64,
    tol: f64,
) -> Result<BoundReport> {
    let cert = existence_certificate(dist, c)?;
    if let Some(index) = cert.violating_atom {
        return Err(Error::HypothesisViolated(format!(
            "atom {index} has c . z = {} <= 0 for c = {c}",
            cert.a
        )));
    }
    let h = harmonic_mean(dist)?;
    let lhs = inner_product(c, h);
    let rhs = harmonic_mean_positive(&dist.pushforward_inner(c))?;
    Ok(BoundReport::new(
        BoundName::InnerProduct,
        lhs,
        rhs,
        lhs - rhs,
        tol,
        format!("c = {c}, a = {}, R = {}", cert.a, cert.radius),
    ))
}

/// The two algebraic forms of
/// `I = E[1/Re Z] E[Re Z/|Z|^2] - E[Re Z/|Z|^2]^2 - E[Im Z/|Z|^2]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofForms {
    /// The definition above.
    pub direct: f64,
    /// `E[(Im Z)^2/(Re Z |Z|^2)] E[Re Z/|Z|^2] - E[Im Z/|Z|^2]^2`.
    pub decomposed: f64,
}

pub fn proof_quantity_forms(dist: &FiniteDistribution) -> Result<ProofForms> {
    let range: Vec<(Complex64, f64)> = dist.atoms().filter(|&(_, w)| w > 0.0).collect();
    if let Some((z, _)) = range.iter().find(|(z, _)| !(z.re > 0.0)) {
        return Err(Error::HypothesisViolated(format!("atom {z} has Re z <= 0")));
    }
    let mean = |f: &dyn Fn(Complex64) -> f64| range.iter().fold(0.0, |acc, &(z, w)| acc + w * f(z));
    let inv_re = mean(&|z| 1.0 / z.re);
    let re_term = mean(&|z| z.re / z.norm_sqr());
    let im_term = mean(&|z| z.im / z.norm_sqr());
    let excess = mean(&|z| z.im * z.im / (z.re * z.norm_sqr()));
    Ok(ProofForms {
        direct: inv_re * re_term - re_term * re_term - im_term * im_term,
        decomposed: excess * re_term - im_term * im_term,
    })
}

/// `I >= 0`, plus agreement of its two forms within [`PROOF_FORM_TOL`].
pub fn proof_quantity_i(dist: &FiniteDistribution, tol: f64) -> Result<BoundReport> {
    let forms = proof_quantity_forms(dist)?;
    let gap = (forms.direct - forms.decomposed).abs();
    Ok(BoundReport::new(
        BoundName::ProofI,
        forms.direct,
        0.0,
        forms.direct,
        tol,
        format!("decomposed form = {}", forms.decomposed),
    )
    .with_cross_check("forms_agree", gap, gap <= PROOF_FORM_TOL))
}

/// `Range[Z] in D` implies `H[Z] in D` for a closed disk (or the half-plane
/// limit) with 0 outside its interior. Also checks the intermediate step
/// `E[Z^-1] in 1/D`.
pub fn check_disk_bound(
    dist: &FiniteDistribution,
    region: &Region,
    tol: f64,
) -> Result<BoundReport> {
    if !region.excludes_origin_interior() {
        return Err(Error::HypothesisViolated(
            "region contains 0 in its interior".into(),
        ));
    }
    if let Some((index, (z, _))) = dist
        .atoms()
        .enumerate()
        .find(|(_, (z, w))| *w > 0.0 && !region.contains(*z, MEMBERSHIP_TOL))
    {
        return Err(Error::HypothesisViolated(format!(
            "atom {index} = {z} lies outside the region"
        )));
    }
    let h = harmonic_mean(dist)?;
    let slack = region.margin(h);
    let rhs = match *region {
        Region::Disk { radius, .. } => radius,
        Region::HalfPlane { offset, .. } => offset,
    };
    let lhs = match *region {
        Region::Disk { center, .. } => Quantity::Real((h - center).norm()),
        Region::HalfPlane { normal, .. } => Quantity::Real(inner_product(normal, h)),
    };
    let image = invert_region(region)?;
    let m = inverse_mean(dist);
    let proof_margin = image.margin(m);
    let mut report = BoundReport::new(
        BoundName::DiskBound,
        lhs,
        rhs,
        slack,
        tol,
        format!("H[Z] = {h}, E[Z^-1] = {m}"),
    )
    .with_cross_check(
        "inverse_mean_in_inverted_region",
        proof_margin,
        proof_margin >= -tol,
    );
    // for disks the reported inequality reads radius >= |H - c|
    if let Region::Disk { .. } = region {
        std::mem::swap(&mut report.lhs, &mut report.rhs);
    }
    Ok(report)
}

/// Distance of `h(theta)` from the two-point locus, for each `theta`.
///
/// Each entry is a report whose slack is minus the distance, or an error when
/// the mean is degenerate at that weight or the locus itself is degenerate
/// (0 strictly between `c1` and `c2`).
pub fn check_two_point(
    c1: Complex64,
    c2: Complex64,
    thetas: &[f64],
    tol: f64,
) -> Result<Vec<Result<BoundReport>>> {
    let locus = two_point_locus(c1, c2)?;
    Ok(thetas
        .iter()
        .map(|&theta| {
            if locus.is_degenerate() {
                return Err(Error::HypothesisViolated(
                    "0 lies strictly between c1 and c2; the locus is not an arc or segment".into(),
                ));
            }
            let h = two_point_harmonic_mean(c1, c2, theta, DEFAULT_DEGENERATE_EPS)?;
            let distance = locus.distance(h);
            Ok(BoundReport::new(
                BoundName::TwoPoint,
                h,
                distance,
                -distance,
                tol,
                format!("theta = {theta}; rhs is the distance from h to the locus"),
            ))
        })
        .collect())
}

/// Range bound `inf <= H[X] <= sup` and Jensen bound `H[X] <= E[X]`.
///
/// The Jensen report carries an `equality_iff_constant` cross-check: the slack
/// is within `tol` of zero exactly when the law is constant.
pub fn check_classical(dist: &RealDistribution, tol: f64) -> Result<Vec<BoundReport>> {
    let h = harmonic_mean_positive(dist)?;
    let (inf, sup) = (dist.inf_range(), dist.sup_range());
    let range = BoundReport::new(
        BoundName::RangeBound,
        h,
        inf,
        (h - inf).min(sup - h),
        tol,
        format!("inf = {inf}, sup = {sup}"),
    );
    let e = dist.expectation();
    let slack = e - h;
    let constant = dist.is_constant();
    let equality = slack.abs() <= tol;
    let jensen = BoundReport::new(
        BoundName::Jensen,
        e,
        h,
        slack,
        tol,
        if constant {
            "constant law: equality expected"
        } else {
            "non-constant law: strict inequality expected"
        },
    )
    .with_cross_check("equality_iff_constant", slack, equality == constant);
    Ok(vec![range, jensen])
}
