//! Label-space form of the information-cloning unitary.
//!
//! The unitary `exp(−(π/(2√N))(a†·Σ r_j b_j − a·Σ r_j b_j†))` is generated by
//! a quadratic, number-conserving Hamiltonian. On product coherent states it
//! therefore acts linearly on the vector of labels, through the real
//! orthogonal matrix `exp(G)` where `G` is the antisymmetric coupling matrix
//! built here. With unit weights, `G` rotates the unknown mode into the
//! collective ancilla mode `(1/√N)Σ b_j` by a quarter turn:
//!
//! ```text
//! (α, β, …, β)  ↦  (−√N·β, α/√N, …, α/√N)
//! ```

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::states::{product_overlap_sq, ComplexAmplitude, ProductCoherentState};

/// Antisymmetric generator of the cloning map over `N + 1` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneGenerator {
    n_clones: usize,
    weights: Vec<f64>,
    matrix: DMatrix<f64>,
}

impl CloneGenerator {
    pub fn n_clones(&self) -> usize {
        self.n_clones
    }

    pub fn n_modes(&self) -> usize {
        self.n_clones + 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The prefactor `π/(2√N)`.
    pub fn coupling(&self) -> f64 {
        coupling(self.n_clones)
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }
}

fn coupling(n_clones: usize) -> f64 {
    FRAC_PI_2 / (n_clones as f64).sqrt()
}

/// Builds the generator for `n_clones` ancillas. Missing weights default to
/// one for every ancilla.
pub fn build_generator(n_clones: usize, weights: Option<&[f64]>) -> Result<CloneGenerator> {
    if n_clones == 0 {
        return Err(Error::domain("the number of clones must be at least 1"));
    }
    let weights = match weights {
        Some(w) if w.len() != n_clones => return Err(Error::dimension(n_clones, w.len())),
        Some(w) => {
            if let Some(bad) = w.iter().find(|x| !x.is_finite()) {
                return Err(Error::domain(format!("non-finite weight {bad}")));
            }
            w.to_vec()
        }
        None => vec![1.0; n_clones],
    };

    let c = coupling(n_clones);
    let dim = n_clones + 1;
    let mut matrix = DMatrix::zeros(dim, dim);
    for (j, &r) in weights.iter().enumerate() {
        let entry = c * r;
        matrix[(0, j + 1)] = -entry;
        matrix[(j + 1, 0)] = entry;
    }
    Ok(CloneGenerator {
        n_clones,
        weights,
        matrix,
    })
}

/// Real orthogonal matrix acting on label vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelRotation {
    matrix: DMatrix<f64>,
}

impl LabelRotation {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |(RᵀR − I)_{ij}|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim();
        (self.matrix.transpose() * &self.matrix - DMatrix::<f64>::identity(n, n)).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// `R·v` on complex labels.
    pub fn apply(&self, labels: &[Complex64]) -> Result<Vec<Complex64>> {
        if labels.len() != self.dim() {
            return Err(Error::dimension(self.dim(), labels.len()));
        }
        let re = DVector::from_iterator(labels.len(), labels.iter().map(|z| z.re));
        let im = DVector::from_iterator(labels.len(), labels.iter().map(|z| z.im));
        let re = &self.matrix * re;
        let im = &self.matrix * im;
        Ok(re
            .iter()
            .zip(im.iter())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect())
    }

    /// The rotation applied `k` times.
    pub fn power(&self, k: u32) -> LabelRotation {
        let n = self.dim();
        let matrix = (0..k).fold(DMatrix::identity(n, n), |acc, _| acc * &self.matrix);
        LabelRotation { matrix }
    }
}

pub fn exponentiate(gen: &CloneGenerator) -> LabelRotation {
    LabelRotation {
        matrix: expm(gen.matrix()),
    }
}

/// Applies the cloning map to a product coherent state.
pub fn apply_clone_map(
    psi: &ProductCoherentState,
    rotation: &LabelRotation,
) -> Result<ProductCoherentState> {
    let out = rotation.apply(&psi.to_complex())?;
    ProductCoherentState::from_complex(&out)
}

/// Squared overlaps of a pair of states before and after the cloning map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapCheck {
    pub before: f64,
    pub after: f64,
    pub abs_diff: f64,
}

pub fn verify_overlap_preservation(
    psi: &ProductCoherentState,
    psi_prime: &ProductCoherentState,
    rotation: &LabelRotation,
) -> Result<OverlapCheck> {
    let before = product_overlap_sq(psi, psi_prime)?;
    let out = apply_clone_map(psi, rotation)?;
    let out_prime = apply_clone_map(psi_prime, rotation)?;
    let after = product_overlap_sq(&out, &out_prime)?;
    Ok(OverlapCheck {
        before,
        after,
        abs_diff: (before - after).abs(),
    })
}

/// `c(N) = 1/√N`, the known scale between each clone label and the
/// original unknown label.
pub fn attenuation_factor(n_clones: usize) -> Result<f64> {
    if n_clones == 0 {
        return Err(Error::domain("the number of clones must be at least 1"));
    }
    Ok(1.0 / (n_clones as f64).sqrt())
}

/// `√N`, the gain applied to the known ancilla label on mode 0.
pub fn amplification_factor(n_clones: usize) -> Result<f64> {
    attenuation_factor(n_clones).map(|c| 1.0 / c)
}

/// Runs the unit-weight cloning map on `|α⟩|β⟩^{⊗N}`.
pub fn clone_labels(
    alpha: ComplexAmplitude,
    beta: ComplexAmplitude,
    n_clones: usize,
) -> Result<ProductCoherentState> {
    let rotation = exponentiate(&build_generator(n_clones, None)?);
    apply_clone_map(
        &ProductCoherentState::with_ancillas(alpha, beta, n_clones)?,
        &rotation,
    )
}
