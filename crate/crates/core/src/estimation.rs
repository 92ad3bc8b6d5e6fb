//! Monte Carlo statistics of the label estimator built from the clones.
//!
//! Each clone is measured by heterodyne detection: an outcome on `|μ⟩` is
//! `μ + g` with independent real and imaginary Gaussian noise of variance
//! 1/2 each (the Husimi distribution of the coherent state). Averaging the
//! `N` clone outcomes and rescaling by `√N` gives an unbiased estimate of
//! the unknown label whose per-quadrature spread stays at `1/√2` for every
//! `N`. The control experiment measures `N` full-strength copies instead and
//! its spread falls as `1/√(2N)`.
//!
//! Trial `t` draws from its own ChaCha stream keyed by `(seed, t)`, so the
//! statistics are bit-identical whatever the thread layout.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::clone_engine::clone_labels;
use crate::error::{Error, Result};
use crate::states::ComplexAmplitude;

/// Per-quadrature standard deviation of a single heterodyne outcome.
pub const HETERODYNE_STD: f64 = FRAC_1_SQRT_2;

/// One heterodyne outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneSample {
    pub z: ComplexAmplitude,
}

/// Summary over repeated protocol runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStatistics {
    pub n_trials: usize,
    pub mean_est: ComplexAmplitude,
    pub std_re: f64,
    pub std_im: f64,
}

/// Which experiment a stream belongs to; keeps the cloning and control runs
/// on disjoint streams for the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Experiment {
    Cloning = 0,
    Control = 1,
}

fn trial_rng(seed: u64, experiment: Experiment, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((experiment as u64) << 56) | trial as u64);
    rng
}

pub fn sample_heterodyne<R: Rng + ?Sized>(mu: ComplexAmplitude, rng: &mut R) -> HeterodyneSample {
    let g_re: f64 = rng.sample(StandardNormal);
    let g_im: f64 = rng.sample(StandardNormal);
    let z = mu.value() + Complex64::new(g_re, g_im) * HETERODYNE_STD;
    HeterodyneSample {
        z: ComplexAmplitude::from_complex(z).expect("finite label plus Gaussian noise is finite"),
    }
}

/// `√N · mean(z)` over the `N` clone outcomes.
pub fn estimate_alpha(samples: &[HeterodyneSample], n_clones: usize) -> Result<ComplexAmplitude> {
    if samples.is_empty() || n_clones == 0 {
        return Err(Error::domain("at least one clone sample is required"));
    }
    if samples.len() != n_clones {
        return Err(Error::dimension(n_clones, samples.len()));
    }
    let n = n_clones as f64;
    let sum: Complex64 = samples.iter().map(|s| s.z.value()).sum();
    ComplexAmplitude::from_complex(sum / n * n.sqrt())
}

fn check_counts(n_copies: usize, n_trials: usize) -> Result<()> {
    if n_copies == 0 {
        return Err(Error::domain("the number of clones must be at least 1"));
    }
    if n_trials < 2 {
        return Err(Error::domain(format!(
            "at least 2 trials are needed for a standard deviation, got {n_trials}"
        )));
    }
    Ok(())
}

/// Mean and sample standard deviations, reduced in trial order.
fn summarize(estimates: &[Complex64]) -> Result<TrialStatistics> {
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<Complex64>() / n;
    let (ss_re, ss_im) = estimates.iter().fold((0.0, 0.0), |(r, i), z| {
        let d = z - mean;
        (r + d.re * d.re, i + d.im * d.im)
    });
    Ok(TrialStatistics {
        n_trials: estimates.len(),
        mean_est: ComplexAmplitude::from_complex(mean)?,
        std_re: (ss_re / (n - 1.0)).sqrt(),
        std_im: (ss_im / (n - 1.0)).sqrt(),
    })
}

/// Repeats the information-cloning estimate `n_trials` times. Each trial
/// measures every clone label produced by the cloning map on `|α⟩|0⟩^{⊗N}`.
pub fn run_trials(
    alpha: ComplexAmplitude,
    n_clones: usize,
    n_trials: usize,
    seed: u64,
) -> Result<TrialStatistics> {
    check_counts(n_clones, n_trials)?;
    let clones = clone_labels(alpha, ComplexAmplitude::ZERO, n_clones)?;
    let clones = clones.ancillas();

    let estimates = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, Experiment::Cloning, t);
            let samples: Vec<_> = clones
                .iter()
                .map(|&mu| sample_heterodyne(mu, &mut rng))
                .collect();
            estimate_alpha(&samples, n_clones).map(|a| a.value())
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(&estimates)
}

/// Control experiment: `n_copies` independent copies of `|α⟩` itself,
/// estimated by the plain mean of their outcomes.
pub fn run_control_trials(
    alpha: ComplexAmplitude,
    n_copies: usize,
    n_trials: usize,
    seed: u64,
) -> Result<TrialStatistics> {
    check_counts(n_copies, n_trials)?;
    let estimates: Vec<Complex64> = (0..n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, Experiment::Control, t);
            let sum: Complex64 = (0..n_copies)
                .map(|_| sample_heterodyne(alpha, &mut rng).z.value())
                .sum();
            sum / n_copies as f64
        })
        .collect();
    summarize(&estimates)
}

/// Expected per-quadrature spread of the control estimator, `1/√(2N)`.
pub fn control_expected_std(n_copies: usize) -> f64 {
    HETERODYNE_STD / (n_copies as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: f64, im: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(re, im).unwrap()
    }

    fn sample(re: f64, im: f64) -> HeterodyneSample {
        HeterodyneSample { z: amp(re, im) }
    }

    #[test]
    fn estimate_single_clone_is_identity() {
        let s = sample(0.4, -1.2);
        assert_eq!(estimate_alpha(&[s], 1).unwrap(), s.z);
    }

    #[test]
    fn estimate_noiseless_recovers_alpha() {
        let alpha = Complex64::new(1.0, 2.0);
        let n = 9;
        let label = alpha / (n as f64).sqrt();
        let samples = vec![sample(label.re, label.im); n];
        let est = estimate_alpha(&samples, n).unwrap();
        assert!((est.value() - alpha).norm() < 1e-15);
    }

    #[test]
    fn estimate_n4_half() {
        let samples = vec![sample(0.5, 0.0); 4];
        assert_eq!(estimate_alpha(&samples, 4).unwrap(), amp(1.0, 0.0));
    }

    #[test]
    fn estimate_errors() {
        assert!(matches!(estimate_alpha(&[], 0), Err(Error::Domain(_))));
        assert!(matches!(estimate_alpha(&[], 3), Err(Error::Domain(_))));
        assert_eq!(
            estimate_alpha(&[sample(0.0, 0.0)], 2),
            Err(Error::Dimension {
                expected: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn run_trials_rejects_bad_counts() {
        assert!(run_trials(amp(0.0, 0.0), 1, 1, 0).is_err());
        assert!(run_trials(amp(0.0, 0.0), 0, 10, 0).is_err());
        assert!(run_control_trials(amp(0.0, 0.0), 0, 10, 0).is_err());
    }

    #[test]
    fn sampler_moments() {
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for mu in [amp(0.0, 0.0), amp(1.5, -0.5)] {
            let zs: Vec<Complex64> = (0..n)
                .map(|_| sample_heterodyne(mu, &mut rng).z.value())
                .collect();
            let mean = zs.iter().sum::<Complex64>() / n as f64;
            let bound = 4.0 / (2.0 * n as f64).sqrt();
            assert!((mean.re - mu.re()).abs() < bound);
            assert!((mean.im - mu.im()).abs() < bound);
            let var_re = zs.iter().map(|z| (z.re - mean.re).powi(2)).sum::<f64>() / (n - 1) as f64;
            let var_im = zs.iter().map(|z| (z.im - mean.im).powi(2)).sum::<f64>() / (n - 1) as f64;
            assert!((var_re / 0.5 - 1.0).abs() < 0.01, "{var_re}");
            assert!((var_im / 0.5 - 1.0).abs() < 0.01, "{var_im}");
        }
    }

    #[test]
    fn shift_moves_samples_exactly() {
        let mu = amp(2.0, -3.0);
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z0 = sample_heterodyne(ComplexAmplitude::ZERO, &mut a).z.value();
            let z1 = sample_heterodyne(mu, &mut b).z.value();
            assert!((z1 - z0 - mu.value()).norm() < 1e-14);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = run_trials(amp(0.3, 0.1), 4, 2000, 11).unwrap();
        let b = run_trials(amp(0.3, 0.1), 4, 2000, 11).unwrap();
        assert_eq!(a, b);
        let c = run_trials(amp(0.3, 0.1), 4, 2000, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn deterministic_across_thread_pools() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_trials(amp(-1.0, 0.5), 8, 5000, 99).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn unbiased_at_zero() {
        let n_trials = 100_000;
        let stats = run_trials(ComplexAmplitude::ZERO, 1, n_trials, 0).unwrap();
        let bound = 5.0 * HETERODYNE_STD / (n_trials as f64).sqrt();
        assert!(stats.mean_est.re().abs() < bound);
        assert!(stats.mean_est.im().abs() < bound);
    }
}
