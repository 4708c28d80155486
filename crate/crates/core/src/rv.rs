//! Non-zero complex random variables with finite support or given as samples,
//! and the mean functionals `E[.]` and `H[.]` over them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_DEGENERATE_EPS;

pub type ComplexScalar = Complex64;

/// Weights within this distance of summing to one are renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// `1/z` by Smith's scaling. Real inputs give exactly `1/x` with zero
/// imaginary part, so the complex and classical paths agree bit for bit.
pub fn recip(z: Complex64) -> Complex64 {
    if z.re.abs() >= z.im.abs() {
        let r = z.im / z.re;
        let d = z.re + z.im * r;
        Complex64::new(1.0 / d, -r / d)
    } else {
        let r = z.re / z.im;
        let d = z.re * r + z.im;
        Complex64::new(r / d, -1.0 / d)
    }
}

/// `c . z = Re(conj(c) z)`, the Euclidean inner product of the plane.
pub fn inner_product(c: Complex64, z: Complex64) -> f64 {
    c.re * z.re + c.im * z.im
}

fn normalize_weights(weights: &mut [f64]) -> Result<()> {
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight { index, weight: w });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum { sum });
    }
    if sum != 1.0 {
        weights.iter_mut().for_each(|w| *w /= sum);
    }
    Ok(())
}

/// A law on `C \ {0}` that the mean functionals can integrate against.
pub trait ComplexLaw {
    /// `E[f(Z)]`, accumulated in input order.
    fn mean_of<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64;

    fn mean_of_real<F: Fn(Complex64) -> f64>(&self, f: F) -> f64;

    /// Points carrying positive probability, in input order.
    fn range(&self) -> Vec<Complex64>;

    /// The law of `|Z|`.
    fn pushforward_modulus(&self) -> RealDistribution;

    /// The law of `c . Z`.
    fn pushforward_inner(&self, c: Complex64) -> RealDistribution;

    /// The single point of the range, if `Z` is almost surely constant.
    fn constant_value(&self) -> Option<Complex64> {
        let range = self.range();
        let first = *range.first()?;
        range.iter().all(|&z| z == first).then_some(first)
    }
}

/// Finitely many weighted atoms, all non-zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionFile", into = "DistributionFile")]
pub struct FiniteDistribution {
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl FiniteDistribution {
    /// Builds a distribution from `(point, weight)` pairs. Weights summing to
    /// one within `1e-9` are renormalized; anything further off is rejected.
    pub fn new(atoms: impl IntoIterator<Item = (Complex64, f64)>) -> Result<Self> {
        let (points, mut weights): (Vec<_>, Vec<_>) = atoms.into_iter().unzip();
        if points.is_empty() {
            return Err(Error::Empty);
        }
        for (index, z) in points.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if z.re == 0.0 && z.im == 0.0 {
                return Err(Error::ZeroAtom { index });
            }
        }
        normalize_weights(&mut weights)?;
        Ok(Self { points, weights })
    }

    pub fn constant(z: Complex64) -> Result<Self> {
        Self::new([(z, 1.0)])
    }

    /// The two-point law with `P(Z = c1) = 1 - theta` and `P(Z = c2) = theta`.
    pub fn two_point(c1: Complex64, c2: Complex64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} outside [0, 1]"
            )));
        }
        Self::new([(c1, 1.0 - theta), (c2, theta)])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `vZ` for a non-zero constant `v`.
    pub fn scaled(&self, v: Complex64) -> Result<Self> {
        Self::new(self.atoms().map(|(z, w)| (v * z, w)))
    }
}

impl ComplexLaw for FiniteDistribution {
    fn mean_of<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.atoms()
            .fold(Complex64::new(0.0, 0.0), |acc, (z, w)| acc + f(z) * w)
    }

    fn mean_of_real<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.atoms().fold(0.0, |acc, (z, w)| acc + w * f(z))
    }

    fn range(&self) -> Vec<Complex64> {
        self.atoms()
            .filter(|&(_, w)| w > 0.0)
            .map(|(z, _)| z)
            .collect()
    }

    fn pushforward_modulus(&self) -> RealDistribution {
        RealDistribution {
            points: self.points.iter().map(|z| z.norm()).collect(),
            weights: self.weights.clone(),
        }
    }

    fn pushforward_inner(&self, c: Complex64) -> RealDistribution {
        RealDistribution {
            points: self.points.iter().map(|&z| inner_product(c, z)).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// Interchange format: `{ "atoms": [ { "re": .., "im": .., "w": .. }, .. ] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionFile {
    pub atoms: Vec<AtomRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub re: f64,
    pub im: f64,
    pub w: f64,
}

impl TryFrom<DistributionFile> for FiniteDistribution {
    type Error = Error;

    fn try_from(file: DistributionFile) -> Result<Self> {
        Self::new(file.atoms.iter().map(|a| (Complex64::new(a.re, a.im), a.w)))
    }
}

impl From<FiniteDistribution> for DistributionFile {
    fn from(d: FiniteDistribution) -> Self {
        DistributionFile {
            atoms: d
                .atoms()
                .map(|(z, w)| AtomRecord {
                    re: z.re,
                    im: z.im,
                    w,
                })
                .collect(),
        }
    }
}

/// Equally weighted i.i.d. draws standing in for a continuous law.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<Complex64>,
    seed: u64,
}

impl SampleSet {
    pub fn new(samples: Vec<Complex64>, seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty);
        }
        for (index, z) in samples.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if z.re == 0.0 && z.im == 0.0 {
                return Err(Error::ZeroAtom { index });
            }
        }
        Ok(Self { samples, seed })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Applies `f` to every sample, keeping the seed tag.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.samples.iter().map(|&z| f(z)).collect(), self.seed)
    }
}

impl ComplexLaw for SampleSet {
    fn mean_of<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        let sum = self
            .samples
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &z| acc + f(z));
        sum / self.samples.len() as f64
    }

    fn mean_of_real<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        let sum = self.samples.iter().fold(0.0, |acc, &z| acc + f(z));
        sum / self.samples.len() as f64
    }

    fn range(&self) -> Vec<Complex64> {
        self.samples.clone()
    }

    fn pushforward_modulus(&self) -> RealDistribution {
        RealDistribution::uniform(self.samples.iter().map(|z| z.norm()).collect())
    }

    fn pushforward_inner(&self, c: Complex64) -> RealDistribution {
        RealDistribution::uniform(self.samples.iter().map(|&z| inner_product(c, z)).collect())
    }
}

/// A real-valued law with finitely many atoms, e.g. `|Z|` or `c . Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealDistribution {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl RealDistribution {
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (points, mut weights): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = points.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        normalize_weights(&mut weights)?;
        Ok(Self { points, weights })
    }

    fn uniform(points: Vec<f64>) -> Self {
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        Self { points, weights }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn expectation(&self) -> f64 {
        self.atoms().fold(0.0, |acc, (x, w)| acc + w * x)
    }

    fn range(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms().filter(|&(_, w)| w > 0.0).map(|(x, _)| x)
    }

    pub fn inf_range(&self) -> f64 {
        self.range().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_range(&self) -> f64 {
        self.range().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        let mut range = self.range();
        match range.next() {
            Some(first) => range.all(|x| x == first),
            None => false,
        }
    }
}

pub fn expectation<L: ComplexLaw>(law: &L) -> Complex64 {
    if let Some(z) = law.constant_value() {
        return z;
    }
    law.mean_of(|z| z)
}

/// `E[Z^-1]`.
pub fn inverse_mean<L: ComplexLaw>(law: &L) -> Complex64 {
    law.mean_of(recip)
}

/// `H[Z] = E[Z^-1]^-1` with the default degeneracy threshold.
pub fn harmonic_mean<L: ComplexLaw>(law: &L) -> Result<Complex64> {
    harmonic_mean_with(law, DEFAULT_DEGENERATE_EPS)
}

/// `H[Z]`, failing with [`Error::DegenerateMean`] when `|E[Z^-1]| < eps`.
pub fn harmonic_mean_with<L: ComplexLaw>(law: &L, eps: f64) -> Result<Complex64> {
    if let Some(z) = law.constant_value() {
        return Ok(z);
    }
    let m = inverse_mean(law);
    let modulus = m.norm();
    if !(modulus >= eps) {
        return Err(Error::DegenerateMean { modulus, eps });
    }
    Ok(recip(m))
}

/// `H[Z]` through the conjugate route `E[Z/|Z|^2] / |E[conj(Z)/|Z|^2]|^2`.
pub fn harmonic_mean_conjugate_form<L: ComplexLaw>(law: &L) -> Result<Complex64> {
    let conj_mean = law.mean_of(|z| z.conj() / z.norm_sqr());
    let denom = conj_mean.norm_sqr();
    let modulus = denom.sqrt();
    if !(modulus >= DEFAULT_DEGENERATE_EPS) {
        return Err(Error::DegenerateMean {
            modulus,
            eps: DEFAULT_DEGENERATE_EPS,
        });
    }
    Ok(law.mean_of(|z| z / z.norm_sqr()) / denom)
}

/// Classical harmonic mean `(sum w / x)^-1` of a law with positive range.
/// Zero-weight atoms are ignored.
pub fn harmonic_mean_positive(dist: &RealDistribution) -> Result<f64> {
    if let Some((index, (value, _))) = dist
        .atoms()
        .enumerate()
        .find(|(_, (x, w))| *w > 0.0 && !(*x > 0.0))
    {
        return Err(Error::InvalidSupport { index, value });
    }
    if dist.is_constant() {
        return Ok(dist.inf_range());
    }
    let m = dist
        .atoms()
        .filter(|&(_, w)| w > 0.0)
        .fold(0.0, |acc, (x, w)| acc + w * (1.0 / x));
    Ok(1.0 / m)
}

pub fn pushforward_modulus(dist: &FiniteDistribution) -> RealDistribution {
    dist.pushforward_modulus()
}

pub fn pushforward_inner(dist: &FiniteDistribution, c: Complex64) -> RealDistribution {
    dist.pushforward_inner(c)
}

/// Bounds `a = min c . z` and `R = max |z|` over the range. The sufficient
/// existence condition `Range[Z] in {c . z >= a} n {|z| <= R}` holds with
/// `a > 0`; otherwise `violating_atom` names the atom attaining the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(with = "crate::serde_complex")]
    pub c: Complex64,
    pub a: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub violating_atom: Option<usize>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.violating_atom.is_none()
    }
}

pub fn existence_certificate(dist: &FiniteDistribution, c: Complex64) -> Result<Certificate> {
    if c == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument(
            "direction c must be non-zero".into(),
        ));
    }
    let mut a = f64::INFINITY;
    let mut argmin = 0;
    let mut radius = 0.0_f64;
    for (index, (z, w)) in dist.atoms().enumerate() {
        if w <= 0.0 {
            continue;
        }
        let proj = inner_product(c, z);
        if proj < a {
            a = proj;
            argmin = index;
        }
        radius = radius.max(z.norm());
    }
    Ok(Certificate {
        c,
        a,
        radius,
        violating_atom: (a <= 0.0).then_some(argmin),
    })
}

/// The closed form `c1 c2 / (c1 theta + c2 (1 - theta))` for the two-point law
/// with `P(Z = c2) = theta`.
pub fn two_point_harmonic_mean(
    c1: Complex64,
    c2: Complex64,
    theta: f64,
    eps: f64,
) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!(
            "theta = {theta} outside [0, 1]"
        )));
    }
    let m = recip(c1) * (1.0 - theta) + recip(c2) * theta;
    let modulus = m.norm();
    if !(modulus >= eps) {
        return Err(Error::DegenerateMean { modulus, eps });
    }
    Ok(c1 * c2 / (c1 * theta + c2 * (1.0 - theta)))
}
