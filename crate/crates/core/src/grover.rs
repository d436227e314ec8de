//! Grover search by closed-form recursion, by the continuous analytic
//! path, and by statevector simulation.
//!
//! With `M` of `N` items marked and `sin θ = √(M/N)`, the state after `j`
//! iterations lies at `φ_j = (2j+1)θ` on the path
//! `|ψ(φ)⟩ = sin φ |marked⟩ + cos φ |unmarked⟩`, where both class states are
//! uniform superpositions.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{PathSample, ProbabilityPath};
use crate::state::{ProbabilityDistribution, RegisterShape, StateVector};

/// Slack on the `[0, π/2]` domain of [`GroverInstance::analytic_path`] so
/// that `φ_j` computed as `(2j+1)θ` is accepted at the end point.
const DOMAIN_SLACK: f64 = 1e-12;

/// A search problem over `n_items` basis states with a marked subset.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverInstance {
    n_items: usize,
    marked: Vec<usize>,
    theta: f64,
}

impl GroverInstance {
    pub fn new<I>(n_items: usize, marked: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        marked.dedup();
        if marked.is_empty() {
            return Err(Error::Input("marked set is empty".into()));
        }
        if let Some(&bad) = marked.iter().find(|&&i| i >= n_items) {
            return Err(Error::Input(format!(
                "marked index {bad} out of range for {n_items} items"
            )));
        }
        if marked.len() >= n_items {
            return Err(Error::Input(format!(
                "{} marked items leave nothing unmarked among {n_items}",
                marked.len()
            )));
        }
        let theta = (marked.len() as f64 / n_items as f64).sqrt().asin();
        Ok(Self {
            n_items,
            marked,
            theta,
        })
    }

    /// One marked item, at index 0.
    pub fn single(n_items: usize) -> Result<Self> {
        Self::new(n_items, [0])
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn n_marked(&self) -> usize {
        self.marked.len()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.marked.binary_search(&index).is_ok()
    }

    fn marked_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_items];
        for &i in &self.marked {
            mask[i] = true;
        }
        mask
    }

    /// `φ_j = (2j+1)θ`.
    pub fn phi_of_step(&self, step: usize) -> f64 {
        (2 * step + 1) as f64 * self.theta
    }

    /// `⌊π/(4θ)⌋`.
    pub fn optimal_iterations(&self) -> usize {
        (std::f64::consts::FRAC_PI_4 / self.theta).floor() as usize
    }

    /// Closed-form marked mass after `steps` iterations: `sin²((2j+1)θ)`.
    pub fn marked_mass_after(&self, steps: usize) -> f64 {
        self.phi_of_step(steps).sin().powi(2)
    }

    /// Probabilities on the continuous path: `sin²φ` shared equally by the
    /// marked items and `cos²φ` by the rest. Defined for `φ ∈ [0, π/2]`.
    pub fn analytic_path(&self, phi: f64) -> Result<ProbabilityDistribution> {
        if !(-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&phi) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, π/2]")));
        }
        let amps = self.analytic_amplitudes(phi);
        Ok(ProbabilityDistribution::from_raw(
            amps.iter().map(|c| c.norm_sqr()).collect(),
        ))
    }

    /// Signed real amplitudes of the path, continued to any real `φ`.
    pub fn analytic_amplitudes(&self, phi: f64) -> Vec<Complex64> {
        let m = self.marked.len() as f64;
        let rest = (self.n_items - self.marked.len()) as f64;
        let on = Complex64::new(phi.sin() / m.sqrt(), 0.0);
        let off = Complex64::new(phi.cos() / rest.sqrt(), 0.0);
        self.marked_mask()
            .into_iter()
            .map(|is_marked| if is_marked { on } else { off })
            .collect()
    }

    pub fn analytic_state(&self, phi: f64) -> StateVector {
        StateVector::from_amplitudes(
            self.analytic_amplitudes(phi),
            RegisterShape::Single(self.n_items),
        )
        .expect("analytic amplitudes are normalized")
    }

    /// Samples the analytic path from `φ_0` to `φ_steps`, splitting every
    /// step interval into equal pieces no wider than `max_dphi`, and
    /// extending `pad` pieces past both ends. Amplitudes are recorded.
    pub fn resample(&self, steps: usize, max_dphi: f64, pad: usize) -> Result<ResampledPath> {
        if !(max_dphi > 0.0 && max_dphi.is_finite()) {
            return Err(Error::Input(format!(
                "sampling step {max_dphi} must be positive"
            )));
        }
        let per_step = ((2.0 * self.theta / max_dphi).ceil() as usize).max(1);
        let h = 2.0 * self.theta / per_step as f64;
        let total = steps * per_step + 2 * pad + 1;
        let mut samples = Vec::with_capacity(total);
        for i in 0..total {
            let phi = self.theta + (i as f64 - pad as f64) * h;
            let amplitudes = self.analytic_amplitudes(phi);
            samples.push(PathSample {
                phi,
                probabilities: amplitudes.iter().map(|c| c.norm_sqr()).collect(),
                amplitudes: Some(amplitudes),
            });
        }
        Ok(ResampledPath {
            path: ProbabilityPath::from_samples(samples)?,
            step_indices: (0..=steps).map(|j| pad + j * per_step).collect(),
            spacing: h,
        })
    }
}

/// Analytic path sampled on a grid that contains every `φ_j`.
#[derive(Debug, Clone)]
pub struct ResampledPath {
    pub path: ProbabilityPath,
    /// Index into `path` of the sample at `φ_j`, for `j = 0..=steps`.
    pub step_indices: Vec<usize>,
    pub spacing: f64,
}

/// Amplitudes `(k_j, l_j)` on the marked item and on each unmarked item,
/// for a single marked item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    pub k: f64,
    pub l: f64,
    pub step: usize,
}

impl RecursionState {
    /// The uniform start, `k_0 = l_0 = 1/√N`.
    pub fn initial(n_items: usize) -> Self {
        let a = 1.0 / (n_items as f64).sqrt();
        Self {
            k: a,
            l: a,
            step: 0,
        }
    }

    /// One Grover iteration in the two-dimensional invariant subspace.
    pub fn next(&self, n_items: usize) -> Self {
        let n = n_items as f64;
        Self {
            k: (n - 2.0) / n * self.k + 2.0 * (n - 1.0) / n * self.l,
            l: -2.0 / n * self.k + (n - 2.0) / n * self.l,
            step: self.step + 1,
        }
    }

    pub fn norm_sqr(&self, n_items: usize) -> f64 {
        self.k * self.k + (n_items as f64 - 1.0) * self.l * self.l
    }
}

/// Result of [`run_grover`].
#[derive(Debug, Clone)]
pub struct GroverTrajectory {
    /// One sample per step `j = 0..=steps`, at `φ_j`.
    pub path: ProbabilityPath,
    pub final_state: StateVector,
}

impl GroverTrajectory {
    pub fn marked_mass(&self, inst: &GroverInstance, step: usize) -> f64 {
        inst.marked
            .iter()
            .map(|&i| self.path.samples()[step].probabilities[i])
            .sum()
    }
}

/// Simulates `steps` Grover iterations from the uniform state. Probabilities
/// are kept for every step; amplitudes only when `record` is set.
pub fn run_grover(inst: &GroverInstance, steps: usize, record: bool) -> Result<GroverTrajectory> {
    let mask = inst.marked_mask();
    let mut state = StateVector::new_uniform(inst.n_items)?;
    let mut path = ProbabilityPath::new();
    path.push_state(inst.phi_of_step(0), &state, record)?;
    for j in 1..=steps {
        state.phase_flip(|i| mask[i]);
        state.invert_about_average();
        path.push_state(inst.phi_of_step(j), &state, record)?;
    }
    Ok(GroverTrajectory {
        path,
        final_state: state,
    })
}
