//! Information cloning of harmonic-oscillator coherent states.
//!
//! The crate works at two levels. [`states`] and [`clone_engine`] act on the
//! complex labels of product coherent states, where the cloning unitary is a
//! real orthogonal rotation. [`fock`] rebuilds the same unitary from ladder
//! operators in a truncated Fock space and serves as an independent check.
//! [`estimation`] samples heterodyne outcomes on the clones and measures the
//! statistics of the resulting estimator, and [`cli`] wires everything into
//! reproducible reports.

pub mod cli;
pub mod clone_engine;
pub mod error;
pub mod estimation;
pub mod expm;
pub mod fock;
pub mod report;
pub mod states;

pub use clone_engine::{
    apply_clone_map, attenuation_factor, build_generator, exponentiate,
    verify_overlap_preservation, CloneGenerator, LabelRotation, OverlapCheck,
};
pub use error::{Error, Result};
pub use states::{
    fidelity_to, overlap_sq, product_overlap_sq, scaling_overlap_discrepancy, ComplexAmplitude,
    ProductCoherentState,
};

/// Absolute tolerance for comparing closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-12;
