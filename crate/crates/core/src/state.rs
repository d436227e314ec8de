//! Dense statevector over one register or a pair of registers.
//!
//! A pair-shaped state with register dimensions `(dim_a, dim_b)` stores the
//! amplitude of `|a⟩|b⟩` at index `a * dim_b + b`. Memory use is
//! `16 * dim_a * dim_b` bytes.
//!
//! Reductions (norms, means, marginals) are summed sequentially in index
//! order, so results are bit-for-bit reproducible.

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Tolerance accepted when constructing a state from caller amplitudes.
const CONSTRUCTION_NORM_TOL: f64 = 1e-10;

/// Layout of the basis over which amplitudes are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterShape {
    Single(usize),
    Pair(usize, usize),
}

impl RegisterShape {
    pub fn dim(&self) -> usize {
        match *self {
            RegisterShape::Single(d) => d,
            RegisterShape::Pair(a, b) => a * b,
        }
    }

    /// Dimension of one register. A single-register shape only has `First`.
    pub fn register_dim(&self, register: Register) -> Result<usize> {
        match (*self, register) {
            (RegisterShape::Single(d), Register::First) => Ok(d),
            (RegisterShape::Single(_), Register::Second) => Err(Error::Input(
                "single-register state has no second register".into(),
            )),
            (RegisterShape::Pair(a, _), Register::First) => Ok(a),
            (RegisterShape::Pair(_, b), Register::Second) => Ok(b),
        }
    }
}

/// Selects one register of a (possibly pair-shaped) state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    First,
    Second,
}

/// A normalized probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates non-negativity and unit total (within 1e-12).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDimension("empty distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::Input(format!(
                "probability {p} is not a finite non-negative value"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Input(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl std::ops::Index<usize> for ProbabilityDistribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// Pure quantum state with dense complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    shape: RegisterShape,
}

impl StateVector {
    /// Equal superposition over `dim` basis states.
    pub fn new_uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                "dimension must be at least 1".into(),
            ));
        }
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![amp; dim],
            shape: RegisterShape::Single(dim),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(
                "dimension must be at least 1".into(),
            ));
        }
        if index >= dim {
            return Err(Error::Input(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            shape: RegisterShape::Single(dim),
        })
    }

    /// Wraps caller amplitudes. The norm must already be 1 within 1e-10;
    /// the residual deviation is rescaled away.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, shape: RegisterShape) -> Result<Self> {
        if amplitudes.is_empty() || shape.dim() == 0 {
            return Err(Error::InvalidDimension(
                "dimension must be at least 1".into(),
            ));
        }
        if amplitudes.len() != shape.dim() {
            return Err(Error::InvalidDimension(format!(
                "{} amplitudes do not match register shape {:?}",
                amplitudes.len(),
                shape
            )));
        }
        if amplitudes
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Input("non-finite amplitude".into()));
        }
        let mut state = Self { amplitudes, shape };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > CONSTRUCTION_NORM_TOL {
            return Err(Error::Input(format!(
                "state norm² is {norm_sqr}, expected 1"
            )));
        }
        state.scale(1.0 / norm_sqr.sqrt());
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Σ|c_i|², summed in index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::from_raw(self.amplitudes.iter().map(|c| c.norm_sqr()).collect())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!(
                "inner product of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Negates every amplitude whose basis index satisfies `marked`.
    pub fn phase_flip<F>(&mut self, marked: F)
    where
        F: Fn(usize) -> bool,
    {
        for (i, c) in self.amplitudes.iter_mut().enumerate() {
            if marked(i) {
                *c = -*c;
            }
        }
    }

    /// Reflects each amplitude about the mean: `c_i ↦ 2⟨c⟩ − c_i`.
    ///
    /// On a pair-shaped state the reflection runs over the first register,
    /// independently for each value of the second register.
    pub fn invert_about_average(&mut self) {
        match self.shape {
            RegisterShape::Single(dim) => {
                let mean = self.amplitudes.iter().sum::<Complex64>() / dim as f64;
                let twice = mean * 2.0;
                for c in &mut self.amplitudes {
                    *c = twice - *c;
                }
            }
            RegisterShape::Pair(dim_a, dim_b) => {
                for b in 0..dim_b {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for a in 0..dim_a {
                        sum += self.amplitudes[a * dim_b + b];
                    }
                    let twice = sum * (2.0 / dim_a as f64);
                    for a in 0..dim_a {
                        let c = &mut self.amplitudes[a * dim_b + b];
                        *c = twice - *c;
                    }
                }
            }
        }
    }

    /// Discrete Fourier transform on one register:
    /// `c'_k = (1/√q) Σ_a exp(+2πi·ak/q) c_a`.
    pub fn qft(&mut self, register: Register) -> Result<()> {
        self.fourier(register, true)
    }

    /// Inverse of [`StateVector::qft`] (sign `−2πi`, same normalization).
    pub fn inverse_qft(&mut self, register: Register) -> Result<()> {
        self.fourier(register, false)
    }

    fn fourier(&mut self, register: Register, positive: bool) -> Result<()> {
        let len = self.shape.register_dim(register)?;
        let mut planner = FftPlanner::<f64>::new();
        // rustfft's "inverse" is the unnormalized +2πi transform.
        let fft = if positive {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let scale = 1.0 / (len as f64).sqrt();
        match (self.shape, register) {
            (RegisterShape::Single(_), _) | (RegisterShape::Pair(_, _), Register::Second) => {
                // Second-register rows are contiguous.
                fft.process(&mut self.amplitudes);
            }
            (RegisterShape::Pair(dim_a, dim_b), Register::First) => {
                let mut column = vec![Complex64::new(0.0, 0.0); dim_a];
                for b in 0..dim_b {
                    if (0..dim_a)
                        .all(|a| self.amplitudes[a * dim_b + b] == Complex64::new(0.0, 0.0))
                    {
                        continue;
                    }
                    for (a, slot) in column.iter_mut().enumerate() {
                        *slot = self.amplitudes[a * dim_b + b];
                    }
                    fft.process(&mut column);
                    for (a, value) in column.iter().enumerate() {
                        self.amplitudes[a * dim_b + b] = *value;
                    }
                }
            }
        }
        self.scale(scale);
        Ok(())
    }

    /// Marginal distribution of one register.
    pub fn marginal(&self, register: Register) -> Result<Vec<f64>> {
        let len = self.shape.register_dim(register)?;
        let mut marginal = vec![0.0; len];
        match self.shape {
            RegisterShape::Single(_) => {
                for (m, c) in marginal.iter_mut().zip(&self.amplitudes) {
                    *m = c.norm_sqr();
                }
            }
            RegisterShape::Pair(_, dim_b) => {
                for (i, c) in self.amplitudes.iter().enumerate() {
                    let (a, b) = (i / dim_b, i % dim_b);
                    let slot = match register {
                        Register::First => a,
                        Register::Second => b,
                    };
                    marginal[slot] += c.norm_sqr();
                }
            }
        }
        Ok(marginal)
    }

    /// Draws an outcome of `register` with its marginal probability,
    /// without collapsing.
    pub fn sample<R: Rng + ?Sized>(&self, register: Register, rng: &mut R) -> Result<usize> {
        let marginal = self.marginal(register)?;
        sample_index(&marginal, rng)
    }

    /// Projective measurement of one register. Collapses `self` onto the
    /// observed value and renormalizes; returns the outcome.
    pub fn measure<R: Rng + ?Sized>(&mut self, register: Register, rng: &mut R) -> Result<usize> {
        let outcome = self.sample(register, rng)?;
        self.project(register, outcome)?;
        Ok(outcome)
    }

    /// Projects onto `register = value` and renormalizes.
    pub fn project(&mut self, register: Register, value: usize) -> Result<()> {
        let len = self.shape.register_dim(register)?;
        if value >= len {
            return Err(Error::Input(format!(
                "outcome {value} out of range for register of size {len}"
            )));
        }
        let dim_b = match self.shape {
            RegisterShape::Single(_) => 1,
            RegisterShape::Pair(_, b) => b,
        };
        let keep = |i: usize| match (self.shape, register) {
            (RegisterShape::Single(_), _) => i == value,
            (RegisterShape::Pair(..), Register::First) => i / dim_b == value,
            (RegisterShape::Pair(..), Register::Second) => i % dim_b == value,
        };
        let mask: Vec<bool> = (0..self.dim()).map(keep).collect();
        for (c, kept) in self.amplitudes.iter_mut().zip(&mask) {
            if !kept {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let norm_sqr = self.norm_sqr();
        if norm_sqr.is_nan() || norm_sqr <= 0.0 {
            return Err(Error::Internal(format!(
                "projection onto {register:?} = {value} has zero norm"
            )));
        }
        self.scale(1.0 / norm_sqr.sqrt());
        Ok(())
    }

    fn scale(&mut self, factor: f64) {
        for c in &mut self.amplitudes {
            *c *= factor;
        }
    }
}

/// Inverse-CDF draw from unnormalized non-negative weights. Zero-weight
/// entries are never selected.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Internal(
            "cannot sample from zero total weight".into(),
        ));
    }
    let target = rng.random::<f64>() * total;
    let mut cumulative = 0.0;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        cumulative += w;
        last_positive = Some(i);
        if target < cumulative {
            return Ok(i);
        }
    }
    // Rounding can leave `target` just past the final cumulative sum.
    last_positive.ok_or_else(|| Error::Internal("no positive weight".into()))
}
