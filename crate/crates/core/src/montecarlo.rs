//! Complex normal sampling and the complex lognormal experiment.
//!
//! `CN(mu, sigma)` has density `exp(-|z - mu|^2 / sigma) / (pi sigma)`, so the
//! real and imaginary parts are independent Gaussians with variance
//! `sigma / 2`. For `Z ~ CN(mu, sigma)` both `E[exp Z]` and `H[exp Z]` equal
//! `exp(mu)`.
//!
//! Standard normals come from `rand_distr::StandardNormal` (ziggurat) driven
//! by ChaCha8. Draws are produced in fixed chunks of [`CHUNK`] samples; chunk
//! `k` uses the ChaCha stream `k` of the root seed, so the output depends only
//! on `(seed, n)` and not on how many threads generate it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rv::{expectation, harmonic_mean, SampleSet};

pub const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexNormalParams {
    pub mu: Complex64,
    pub sigma: f64,
}

impl ComplexNormalParams {
    pub fn new(mu: Complex64, sigma: f64) -> Result<Self> {
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(Error::InvalidArgument("mu must be finite".into()));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sigma = {sigma} must be positive"
            )));
        }
        Ok(Self { mu, sigma })
    }

    /// Maps a pair of standard normal draws to a `CN(mu, sigma)` draw.
    pub fn transform(&self, (x, y): (f64, f64)) -> Complex64 {
        let s = (0.5 * self.sigma).sqrt();
        self.mu + Complex64::new(s * x, s * y)
    }
}

/// `n` pairs of independent standard normals for `seed`.
pub fn standard_draws(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(n - k * CHUNK);
            (0..len)
                .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn sample_complex_normal(p: &ComplexNormalParams, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be at least 1".into(),
        ));
    }
    let samples = standard_draws(n, seed)
        .into_iter()
        .map(|d| p.transform(d))
        .collect();
    SampleSet::new(samples, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub n: usize,
    pub seed: u64,
    #[serde(with = "crate::serde_complex")]
    pub mu: Complex64,
    pub sigma: f64,
    /// Sample mean of `exp Z`.
    #[serde(with = "crate::serde_complex")]
    pub arith: Complex64,
    /// Sample harmonic mean of `exp Z`.
    #[serde(with = "crate::serde_complex")]
    pub harm: Complex64,
    /// `exp(mu)`.
    #[serde(with = "crate::serde_complex")]
    pub target: Complex64,
    pub err_arith: f64,
    pub err_harm: f64,
    /// `e^{Re mu} sqrt((e^sigma - 1) / n)`, the standard deviation of the
    /// sample mean of `exp Z`.
    pub se_estimate: f64,
}

impl ExperimentResult {
    /// Both means within `k` standard errors of the target and of each other.
    pub fn within(&self, k: f64) -> bool {
        let bound = k * self.se_estimate;
        self.err_arith <= bound
            && self.err_harm <= bound
            && (self.arith - self.harm).norm() <= bound
    }
}

pub fn lognormal_se(p: &ComplexNormalParams, n: usize) -> f64 {
    p.mu.re.exp() * (p.sigma.exp_m1() / n as f64).sqrt()
}

/// Draws `Z ~ CN(mu, sigma)`, and compares the sample arithmetic and
/// harmonic means of `exp Z` with `exp(mu)`.
pub fn lognormal_experiment(
    p: &ComplexNormalParams,
    n: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    let z = sample_complex_normal(p, n, seed)?;
    let w = z.map(Complex64::exp)?;
    lognormal_summary(p, &w)
}

fn lognormal_summary(p: &ComplexNormalParams, w: &SampleSet) -> Result<ExperimentResult> {
    let arith = expectation(w);
    let harm = harmonic_mean(w)?;
    let target = p.mu.exp();
    Ok(ExperimentResult {
        n: w.len(),
        seed: w.seed(),
        mu: p.mu,
        sigma: p.sigma,
        arith,
        harm,
        target,
        err_arith: (arith - target).norm(),
        err_harm: (harm - target).norm(),
        se_estimate: lognormal_se(p, w.len()),
    })
}

/// The lognormal experiment on explicitly supplied standard draws.
pub fn lognormal_from_draws(
    p: &ComplexNormalParams,
    draws: &[(f64, f64)],
    seed: u64,
) -> Result<ExperimentResult> {
    let w = SampleSet::new(draws.iter().map(|&d| p.transform(d).exp()).collect(), seed)?;
    lognormal_summary(p, &w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_deterministic_and_chunk_independent() {
        let a = standard_draws(CHUNK + 17, 5);
        let b = standard_draws(CHUNK + 17, 5);
        assert_eq!(a, b);
        // a shorter run is a prefix of a longer one
        assert_eq!(&standard_draws(100, 5)[..], &a[..100]);
        assert_ne!(standard_draws(100, 6), standard_draws(100, 5));
    }

    #[test]
    fn single_sample_shape() {
        let p = ComplexNormalParams::new(Complex64::new(0.3, -1.0), 2.0).unwrap();
        let s = sample_complex_normal(&p, 1, 11).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.samples()[0].re.is_finite() && s.samples()[0].im.is_finite());
        assert!(sample_complex_normal(&p, 0, 11).is_err());
    }

    #[test]
    fn single_sample_experiment_means_coincide() {
        let p = ComplexNormalParams::new(Complex64::new(0.0, 0.0), 0.5).unwrap();
        let r = lognormal_experiment(&p, 1, 3).unwrap();
        assert_eq!(r.arith, r.harm);
        let z = sample_complex_normal(&p, 1, 3).unwrap().samples()[0];
        assert_eq!(r.arith, z.exp());
    }

    #[test]
    fn invalid_params() {
        assert!(ComplexNormalParams::new(Complex64::new(0.0, 0.0), 0.0).is_err());
        assert!(ComplexNormalParams::new(Complex64::new(f64::NAN, 0.0), 1.0).is_err());
    }
}
