//! Closed-form coherent-state arithmetic on complex labels.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The complex label of a single-mode coherent state. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexAmplitude(Complex64);

impl ComplexAmplitude {
    pub const ZERO: ComplexAmplitude = ComplexAmplitude(Complex64::new(0.0, 0.0));

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(ComplexAmplitude(z))
        } else {
            Err(Error::domain(format!("non-finite amplitude {z}")))
        }
    }

    /// `r·e^{iθ}`.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(r, theta))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.0.re
    }

    #[inline]
    pub fn im(self) -> f64 {
        self.0.im
    }

    /// Mean excitation `|μ|²` of the coherent state.
    pub fn excitation(self) -> f64 {
        self.0.norm_sqr()
    }
}

impl From<ComplexAmplitude> for Complex64 {
    fn from(a: ComplexAmplitude) -> Self {
        a.0
    }
}

impl fmt::Display for ComplexAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` (no spaces). Parsing does not depend on
/// the locale.
impl FromStr for ComplexAmplitude {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed.contains(char::is_whitespace) {
            return Err(Error::Usage(format!("invalid complex literal {s:?}")));
        }
        let z: Complex64 = trimmed
            .parse()
            .map_err(|_| Error::Usage(format!("invalid complex literal {s:?}")))?;
        Self::from_complex(z)
    }
}

/// A disentangled product of coherent states. Mode 0 carries the unknown
/// state; modes `1..len` are the ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCoherentState {
    labels: Vec<ComplexAmplitude>,
}

impl ProductCoherentState {
    pub fn new(labels: Vec<ComplexAmplitude>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::domain("a product state needs at least one mode"));
        }
        Ok(ProductCoherentState { labels })
    }

    pub fn from_complex(labels: &[Complex64]) -> Result<Self> {
        let labels = labels
            .iter()
            .map(|&z| ComplexAmplitude::from_complex(z))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }

    /// `|α⟩ ⊗ |β⟩^{⊗N}`: one unknown mode followed by `n_ancillas` identical
    /// known ancillas.
    pub fn with_ancillas(
        alpha: ComplexAmplitude,
        beta: ComplexAmplitude,
        n_ancillas: usize,
    ) -> Result<Self> {
        let mut labels = Vec::with_capacity(n_ancillas + 1);
        labels.push(alpha);
        labels.extend(std::iter::repeat_n(beta, n_ancillas));
        Self::new(labels)
    }

    pub fn labels(&self) -> &[ComplexAmplitude] {
        &self.labels
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.labels.iter().map(|a| a.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of ancilla modes.
    pub fn n_ancillas(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn unknown(&self) -> ComplexAmplitude {
        self.labels[0]
    }

    pub fn ancillas(&self) -> &[ComplexAmplitude] {
        &self.labels[1..]
    }

    /// Total mean excitation `Σ|μ_k|²` over all modes.
    pub fn total_excitation(&self) -> f64 {
        self.labels.iter().map(|a| a.excitation()).sum()
    }
}

/// Squared overlap of two coherent states, `|⟨μ|ν⟩|² = exp(−|μ−ν|²)`.
pub fn overlap_sq(mu: ComplexAmplitude, nu: ComplexAmplitude) -> f64 {
    (-(mu.value() - nu.value()).norm_sqr()).exp()
}

/// Squared overlap of two product coherent states: the product of the
/// per-mode squared overlaps.
pub fn product_overlap_sq(
    psi: &ProductCoherentState,
    psi_prime: &ProductCoherentState,
) -> Result<f64> {
    if psi.len() != psi_prime.len() {
        return Err(Error::dimension(psi.len(), psi_prime.len()));
    }
    // A single exponential of the summed distance keeps the factors from
    // underflowing one by one.
    let distance: f64 = psi
        .labels
        .iter()
        .zip(&psi_prime.labels)
        .map(|(a, b)| (a.value() - b.value()).norm_sqr())
        .sum();
    Ok((-distance).exp())
}

/// Same quantity as [`product_overlap_sq`], under the name the validation
/// reports use.
pub fn fidelity_to(psi: &ProductCoherentState, psi_prime: &ProductCoherentState) -> Result<f64> {
    product_overlap_sq(psi, psi_prime)
}

/// How far a universal rescaling `|α⟩ → |λα⟩`, `|β⟩ → |λβ⟩` would move the
/// squared overlap: `|exp(−|α−β|²) − exp(−|λ|²|α−β|²)|`.
///
/// Zero exactly when `|λ| = 1` or `α = β`, so no unitary can rescale an
/// unknown label by a modulus other than one.
pub fn scaling_overlap_discrepancy(
    lambda: ComplexAmplitude,
    alpha: ComplexAmplitude,
    beta: ComplexAmplitude,
) -> f64 {
    let before = overlap_sq(alpha, beta);
    let scaled_alpha = ComplexAmplitude(lambda.value() * alpha.value());
    let scaled_beta = ComplexAmplitude(lambda.value() * beta.value());
    let after = overlap_sq(scaled_alpha, scaled_beta);
    (before - after).abs()
}
