use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use chmean::montecarlo::{
    lognormal_experiment, lognormal_from_draws, sample_complex_normal, standard_draws,
    ComplexNormalParams,
};
use chmean::rv::{expectation, ComplexLaw};
use num_complex::Complex64;

const N: usize = 1_000_000;

#[test]
fn sample_mean_matches_mu() {
    let p = ComplexNormalParams::new(Complex64::new(1.0, 2.0), 1.0).unwrap();
    let s = sample_complex_normal(&p, N, 2024).unwrap();
    let mean = expectation(&s);
    let se = (p.sigma / (2.0 * N as f64)).sqrt();
    assert!((mean.re - 1.0).abs() <= 5.0 * se, "{mean}");
    assert!((mean.im - 2.0).abs() <= 5.0 * se, "{mean}");
}

#[test]
fn component_variances_are_half_sigma() {
    let p = ComplexNormalParams::new(Complex64::new(0.0, 0.0), 2.0).unwrap();
    let s = sample_complex_normal(&p, N, 77).unwrap();
    let mean = expectation(&s);
    let var_re = s.mean_of_real(|z| (z.re - mean.re).powi(2));
    let var_im = s.mean_of_real(|z| (z.im - mean.im).powi(2));
    // the sample variance of a N(0, 1) has standard error sqrt(2 / n)
    let se = (2.0 / N as f64).sqrt();
    assert!((var_re - 1.0).abs() <= 5.0 * se, "{var_re}");
    assert!((var_im - 1.0).abs() <= 5.0 * se, "{var_im}");
    let cov = s.mean_of_real(|z| (z.re - mean.re) * (z.im - mean.im));
    assert!(cov.abs() <= 5.0 * (1.0 / N as f64).sqrt(), "{cov}");
}

#[test]
fn lognormal_at_origin() {
    let p = ComplexNormalParams::new(Complex64::new(0.0, 0.0), 0.5).unwrap();
    let r = lognormal_experiment(&p, N, 7).unwrap();
    assert_eq!(r.target, Complex64::new(1.0, 0.0));
    assert!(r.err_arith <= 5.0 * r.se_estimate, "{r:?}");
    assert!(r.err_harm <= 5.0 * r.se_estimate, "{r:?}");
}

#[test]
fn lognormal_rotated() {
    let mu = Complex64::new(1.0, FRAC_PI_4);
    let p = ComplexNormalParams::new(mu, 0.25).unwrap();
    let r = lognormal_experiment(&p, N, 8).unwrap();
    let e = std::f64::consts::E;
    let target = Complex64::new(e * FRAC_1_SQRT_2, e * FRAC_1_SQRT_2);
    assert!((r.target - target).norm() < 1e-15);
    assert!(r.err_arith <= 5.0 * r.se_estimate, "{r:?}");
    assert!(r.err_harm <= 5.0 * r.se_estimate, "{r:?}");
}

#[test]
fn arithmetic_and_harmonic_means_coincide() {
    for (k, sigma) in [0.1, 0.5, 1.0].into_iter().enumerate() {
        let p = ComplexNormalParams::new(Complex64::new(-0.4, 2.5), sigma).unwrap();
        let r = lognormal_experiment(&p, 100_000, 100 + k as u64).unwrap();
        assert!((r.arith - r.harm).norm() <= 10.0 * r.se_estimate, "{r:?}");
    }
}

#[test]
fn experiments_are_reproducible() {
    let p = ComplexNormalParams::new(Complex64::new(0.2, -0.1), 0.8).unwrap();
    let a = lognormal_experiment(&p, 200_000, 5).unwrap();
    let b = lognormal_experiment(&p, 200_000, 5).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.arith.re.to_bits(), b.arith.re.to_bits());
    assert_ne!(lognormal_experiment(&p, 200_000, 6).unwrap(), a);
}

#[test]
fn rotation_equivariance() {
    let draws = standard_draws(100_000, 31);
    let base = ComplexNormalParams::new(Complex64::new(0.3, 0.0), 0.6).unwrap();
    let a = lognormal_from_draws(&base, &draws, 31).unwrap();
    for phi in [0.5, 2.0, -1.3] {
        let shifted =
            ComplexNormalParams::new(base.mu + Complex64::new(0.0, phi), base.sigma).unwrap();
        let b = lognormal_from_draws(&shifted, &draws, 31).unwrap();
        let rot = Complex64::from_polar(1.0, phi);
        assert!((b.arith - a.arith * rot).norm() <= 1e-12 * a.arith.norm());
        assert!((b.harm - a.harm * rot).norm() <= 1e-12 * a.harm.norm());
    }
}
