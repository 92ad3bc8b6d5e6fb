//! Brute-force Fock-space oracle for the cloning unitary.
//!
//! Every mode is truncated to occupations `0..D`. Basis states are ordered
//! lexicographically by occupation with mode 0 varying slowest, so index
//! `i = Σ_k n_k · D^{M−1−k}`.
//!
//! Ladder operators are kept as weighted partial maps on basis states with
//! integer squared weights (`a|n⟩ = √n |n−1⟩` stores `n`). Products of ladder
//! operators stay in that form, which makes commutators exactly computable.
//!
//! The cloning exponent conserves the total occupation `Σ n_k`, and so does
//! its truncation. The unitary is therefore stored as dense blocks, one per
//! total occupation, rather than as one `D^M × D^M` matrix.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::clone_engine::CloneGenerator;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::states::{ComplexAmplitude, ProductCoherentState};

/// Default bound on `D^M`.
pub const DEFAULT_AMPLITUDE_BUDGET: usize = 1 << 20;

/// Largest dimension for which a full dense matrix is materialized.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    cutoff: usize,
    n_modes: usize,
    dim: usize,
}

impl FockSpace {
    pub fn new(cutoff: usize, n_modes: usize) -> Result<Self> {
        Self::with_budget(cutoff, n_modes, DEFAULT_AMPLITUDE_BUDGET)
    }

    pub fn with_budget(cutoff: usize, n_modes: usize, budget: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::domain(format!(
                "cutoff must be at least 2, got {cutoff}"
            )));
        }
        if n_modes == 0 {
            return Err(Error::domain("a Fock space needs at least one mode"));
        }
        let dimension = (cutoff as u128)
            .checked_pow(n_modes as u32)
            .unwrap_or(u128::MAX);
        if dimension > budget as u128 {
            return Err(Error::Resource {
                dimension,
                cutoff,
                modes: n_modes,
                budget,
            });
        }
        Ok(FockSpace {
            cutoff,
            n_modes,
            dim: dimension as usize,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoff.pow((self.n_modes - 1 - mode) as u32)
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.cutoff
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.n_modes)
            .map(|k| self.occupation(index, k))
            .collect()
    }

    pub fn index_of(&self, occupations: &[usize]) -> usize {
        occupations.iter().fold(0, |acc, &n| acc * self.cutoff + n)
    }

    pub fn total_occupation(&self, index: usize) -> usize {
        (0..self.n_modes).map(|k| self.occupation(index, k)).sum()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::Index {
                index: mode,
                len: self.n_modes,
            });
        }
        Ok(())
    }
}

/// An operator sending each basis state to at most one basis state, with
/// amplitude `√w` for an integer `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderOperator {
    /// Indexed by source basis state: `(target, w)`.
    map: Vec<Option<(usize, u64)>>,
}

impl LadderOperator {
    pub fn identity(dim: usize) -> Self {
        LadderOperator {
            map: (0..dim).map(|i| Some((i, 1))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &LadderOperator) -> LadderOperator {
        assert_eq!(self.dim(), rhs.dim());
        let map = rhs
            .map
            .iter()
            .map(|entry| {
                let (mid, w1) = (*entry)?;
                let (target, w2) = self.map[mid]?;
                Some((target, w1 * w2))
            })
            .collect();
        LadderOperator { map }
    }

    /// Hermitian conjugate. The maps are injective, so the transpose is again
    /// a partial map.
    pub fn adjoint(&self) -> LadderOperator {
        let mut map = vec![None; self.dim()];
        for (source, entry) in self.map.iter().enumerate() {
            if let Some((target, w)) = *entry {
                debug_assert!(map[target].is_none());
                map[target] = Some((source, w));
            }
        }
        LadderOperator { map }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        match self.map[col] {
            Some((target, w)) if target == row => exact_sqrt(w),
            _ => 0.0,
        }
    }

    /// Nonzero entries as `(row, col, √w)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(col, e)| e.map(|(row, w)| (row, col, exact_sqrt(w))))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (row, col, x) in self.entries() {
            out[row] += v[col] * x;
        }
        out
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        check_dense(self.dim())?;
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (row, col, x) in self.entries() {
            m[(row, col)] = Complex64::new(x, 0.0);
        }
        Ok(m)
    }
}

fn check_dense(dim: usize) -> Result<()> {
    if dim > DENSE_LIMIT {
        return Err(Error::Resource {
            dimension: dim as u128,
            cutoff: dim,
            modes: 1,
            budget: DENSE_LIMIT,
        });
    }
    Ok(())
}

/// `√w`, exact whenever `w` is a perfect square.
fn exact_sqrt(w: u64) -> f64 {
    let r = w.isqrt();
    if r * r == w {
        r as f64
    } else {
        (w as f64).sqrt()
    }
}

/// Lowering operator of `mode`, tensored with identities on the others.
pub fn annihilation_matrix(space: &FockSpace, mode: usize) -> Result<LadderOperator> {
    space.check_mode(mode)?;
    let stride = space.stride(mode);
    let map = (0..space.dim())
        .map(|i| {
            let n = space.occupation(i, mode);
            (n > 0).then(|| (i - stride, n as u64))
        })
        .collect();
    Ok(LadderOperator { map })
}

pub fn creation_matrix(space: &FockSpace, mode: usize) -> Result<LadderOperator> {
    annihilation_matrix(space, mode).map(|a| a.adjoint())
}

/// `[A, B] = AB − BA` with entries held as signed sums of `√w` terms.
#[derive(Debug, Clone, Default)]
pub struct Commutator {
    terms: BTreeMap<(usize, usize), BTreeMap<u64, i64>>,
}

impl Commutator {
    pub fn of(a: &LadderOperator, b: &LadderOperator) -> Self {
        let mut c = Commutator::default();
        c.accumulate(&a.mul(b), 1);
        c.accumulate(&b.mul(a), -1);
        c
    }

    fn accumulate(&mut self, op: &LadderOperator, sign: i64) {
        for (col, entry) in op.map.iter().enumerate() {
            if let Some((row, w)) = *entry {
                *self
                    .terms
                    .entry((row, col))
                    .or_default()
                    .entry(w)
                    .or_default() += sign;
            }
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.terms
            .get(&(row, col))
            .map(|t| t.iter().map(|(&w, &k)| k as f64 * exact_sqrt(w)).sum())
            .unwrap_or(0.0)
    }

    /// `max |[A,B] − s·I|` over entries whose row and column both pass
    /// `keep`.
    pub fn max_deviation(
        &self,
        dim: usize,
        identity_scale: f64,
        keep: impl Fn(usize) -> bool,
    ) -> f64 {
        let off_identity = self
            .terms
            .keys()
            .filter(|&&(r, c)| keep(r) && keep(c))
            .map(|&(r, c)| {
                let target = if r == c { identity_scale } else { 0.0 };
                (self.entry(r, c) - target).abs()
            })
            .fold(0.0, f64::max);
        // Diagonal positions with no terms at all still owe `s`.
        if identity_scale != 0.0 {
            let missing = (0..dim)
                .filter(|&i| keep(i) && !self.terms.contains_key(&(i, i)))
                .map(|_| identity_scale.abs())
                .fold(0.0, f64::max);
            return off_identity.max(missing);
        }
        off_identity
    }
}

/// Residuals of the canonical commutation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    /// `max |[a_k, a_k†] − I|` over states with `n_k ≤ D − 2`, all modes.
    pub canonical: f64,
    /// `max |[a_j, a_k]|` and `max |[a_j, a_k†]|` over `j ≠ k`.
    pub cross: f64,
}

pub fn commutator_residuals(space: &FockSpace) -> Result<CommutatorResiduals> {
    let lowering = (0..space.n_modes())
        .map(|k| annihilation_matrix(space, k))
        .collect::<Result<Vec<_>>>()?;
    let raising: Vec<_> = lowering.iter().map(|a| a.adjoint()).collect();
    let edge = space.cutoff() - 2;

    let mut canonical = 0.0f64;
    let mut cross = 0.0f64;
    for j in 0..space.n_modes() {
        let c = Commutator::of(&lowering[j], &raising[j]);
        canonical =
            canonical.max(c.max_deviation(space.dim(), 1.0, |i| space.occupation(i, j) <= edge));
        for k in 0..space.n_modes() {
            if k == j {
                continue;
            }
            cross = cross.max(Commutator::of(&lowering[j], &lowering[k]).max_deviation(
                space.dim(),
                0.0,
                |_| true,
            ));
            cross = cross.max(Commutator::of(&lowering[j], &raising[k]).max_deviation(
                space.dim(),
                0.0,
                |_| true,
            ));
        }
    }
    Ok(CommutatorResiduals { canonical, cross })
}

/// A normalized state in a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::dimension(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Fock coefficients `e^{−|μ|²/2} μⁿ/√(n!)` for `n < cutoff`, renormalized
/// over the truncated range.
pub fn single_mode_coefficients(mu: ComplexAmplitude, cutoff: usize) -> Vec<Complex64> {
    let mu = mu.value();
    let mut coeffs = Vec::with_capacity(cutoff);
    let mut c = Complex64::new((-0.5 * mu.norm_sqr()).exp(), 0.0);
    coeffs.push(c);
    for n in 1..cutoff {
        c = c * mu / (n as f64).sqrt();
        coeffs.push(c);
    }
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter().map(|z| z / norm).collect()
}

/// `|μ_0⟩ ⊗ … ⊗ |μ_{M−1}⟩` in the truncated basis.
pub fn coherent_vector(space: &FockSpace, labels: &[ComplexAmplitude]) -> Result<StateVector> {
    if labels.len() != space.n_modes() {
        return Err(Error::dimension(space.n_modes(), labels.len()));
    }
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    for &mu in labels {
        let coeffs = single_mode_coefficients(mu, space.cutoff());
        amplitudes = amplitudes
            .iter()
            .flat_map(|&a| coeffs.iter().map(move |&c| a * c))
            .collect();
    }
    Ok(StateVector { amplitudes })
}

/// Modes whose excitation `|μ|²` exceeds `D/4`, where truncation starts to
/// bite.
pub fn truncation_warnings(space: &FockSpace, labels: &[ComplexAmplitude]) -> Vec<usize> {
    let limit = space.cutoff() as f64 / 4.0;
    labels
        .iter()
        .enumerate()
        .filter(|(_, mu)| mu.excitation() > limit)
        .map(|(k, _)| k)
        .collect()
}

/// `|⟨v|w⟩|²`.
pub fn fidelity(v: &StateVector, w: &StateVector) -> Result<f64> {
    Ok(v.inner(w)?.norm_sqr())
}

#[derive(Debug, Clone)]
struct Block {
    /// Global basis indices, ascending.
    indices: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

/// The cloning unitary on a truncated Fock space, block-diagonal in the
/// total occupation.
#[derive(Debug, Clone)]
pub struct FockUnitary {
    space: FockSpace,
    blocks: Vec<Block>,
}

/// Basis indices grouped by total occupation, plus each index's position
/// within its group.
fn occupation_sectors(space: &FockSpace) -> (Vec<Vec<usize>>, Vec<usize>) {
    let max_total = space.n_modes() * (space.cutoff() - 1);
    let mut sectors = vec![Vec::new(); max_total + 1];
    let mut local = vec![0; space.dim()];
    for i in 0..space.dim() {
        let sector = &mut sectors[space.total_occupation(i)];
        local[i] = sector.len();
        sector.push(i);
    }
    (sectors, local)
}

/// Real blocks of the exponent `−(π/(2√N)) Σ_j r_j (a† b_j − a b_j†)`.
fn generator_blocks(
    space: &FockSpace,
    gen: &CloneGenerator,
) -> Result<Vec<(Vec<usize>, DMatrix<f64>)>> {
    if space.n_modes() != gen.n_modes() {
        return Err(Error::dimension(gen.n_modes(), space.n_modes()));
    }
    let (sectors, local) = occupation_sectors(space);
    let mut matrices: Vec<DMatrix<f64>> = sectors
        .iter()
        .map(|s| DMatrix::zeros(s.len(), s.len()))
        .collect();

    let a = annihilation_matrix(space, 0)?;
    let a_dag = a.adjoint();
    let c = gen.coupling();
    for (j, &r) in gen.weights().iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let b = annihilation_matrix(space, j + 1)?;
        let b_dag = b.adjoint();
        for (op, coef) in [(a_dag.mul(&b), -c * r), (a.mul(&b_dag), c * r)] {
            for (row, col, x) in op.entries() {
                let sector = space.total_occupation(col);
                debug_assert_eq!(sector, space.total_occupation(row));
                matrices[sector][(local[row], local[col])] += coef * x;
            }
        }
    }
    Ok(sectors.into_iter().zip(matrices).collect())
}

/// Exponentiates the cloning exponent on `space`.
///
/// The exponent is real antisymmetric for real weights, so each block is
/// exponentiated in real arithmetic and then stored as complex.
pub fn build_unitary(space: &FockSpace, gen: &CloneGenerator) -> Result<FockUnitary> {
    let blocks = generator_blocks(space, gen)?
        .into_par_iter()
        .map(|(indices, h)| Block {
            indices,
            matrix: expm(&h).map(|x| Complex64::new(x, 0.0)),
        })
        .collect();
    Ok(FockUnitary {
        space: *space,
        blocks,
    })
}

impl FockUnitary {
    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.space.dim() {
            return Err(Error::dimension(self.space.dim(), v.dim()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.dim()];
        for block in &self.blocks {
            for (r, &row) in block.indices.iter().enumerate() {
                out[row] = block
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(c, &col)| block.matrix[(r, c)] * v.amplitudes[col])
                    .sum();
            }
        }
        Ok(StateVector { amplitudes: out })
    }

    /// `max |(U†U − I)_{ij}|`. Entries between different blocks vanish
    /// identically.
    pub fn unitarity_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.indices.len();
                let gram = b.matrix.adjoint() * &b.matrix;
                (gram - DMatrix::<Complex64>::identity(n, n))
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        check_dense(self.space.dim())?;
        let mut m = DMatrix::zeros(self.space.dim(), self.space.dim());
        for b in &self.blocks {
            for (r, &row) in b.indices.iter().enumerate() {
                for (c, &col) in b.indices.iter().enumerate() {
                    m[(row, col)] = b.matrix[(r, c)];
                }
            }
        }
        Ok(m)
    }
}

/// Fidelity between `U|input⟩` and the product coherent state `predicted`,
/// both represented on `unitary`'s space.
pub fn oracle_fidelity(
    unitary: &FockUnitary,
    input: &ProductCoherentState,
    predicted: &ProductCoherentState,
) -> Result<f64> {
    let space = unitary.space();
    let evolved = unitary.apply(&coherent_vector(space, input.labels())?)?;
    let target = coherent_vector(space, predicted.labels())?;
    fidelity(&evolved, &target)
}
