//! Fisher information along state paths, the Fubini-Study distance, the
//! Fisher action, and the geodesic equations in amplitude coordinates
//! `x_i = √p_i`.
//!
//! Derivatives along a path are taken with three-point finite differences
//! (central in the interior, one-sided second order at the ends), valid
//! for non-uniform spacing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::ProbabilityPath;
use crate::state::StateVector;

/// Smallest Fisher value the geodesic equation will divide by.
pub const FISHER_GUARD: f64 = 1e-12;

/// Fisher information and phase spread at one path parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherSample {
    pub phi: f64,
    pub fisher: f64,
    pub phase_var: f64,
    /// Induced Fubini-Study line element per `dφ²`: `(ℱ + 4σ²)/4`.
    pub induced_ds2_per_dphi2: f64,
}

impl FisherSample {
    fn new(phi: f64, fisher: f64, phase_var: f64) -> Self {
        Self {
            phi,
            fisher,
            phase_var,
            induced_ds2_per_dphi2: (fisher + 4.0 * phase_var) / 4.0,
        }
    }
}

/// Three-point first-derivative stencil at `i` as `(index, weight)` pairs.
fn first_derivative_stencil(phis: &[f64], i: usize) -> [(usize, f64); 3] {
    let n = phis.len();
    if i == 0 {
        let (h1, h2) = (phis[1] - phis[0], phis[2] - phis[1]);
        [
            (0, -(2.0 * h1 + h2) / (h1 * (h1 + h2))),
            (1, (h1 + h2) / (h1 * h2)),
            (2, -h1 / (h2 * (h1 + h2))),
        ]
    } else if i == n - 1 {
        let (h1, h2) = (phis[n - 2] - phis[n - 3], phis[n - 1] - phis[n - 2]);
        [
            (n - 3, h2 / (h1 * (h1 + h2))),
            (n - 2, -(h1 + h2) / (h1 * h2)),
            (n - 1, (2.0 * h2 + h1) / (h2 * (h1 + h2))),
        ]
    } else {
        let (h1, h2) = (phis[i] - phis[i - 1], phis[i + 1] - phis[i]);
        [
            (i - 1, -h2 / (h1 * (h1 + h2))),
            (i, (h2 - h1) / (h1 * h2)),
            (i + 1, h1 / (h2 * (h1 + h2))),
        ]
    }
}

/// Three-point second-derivative stencil at an interior `i`.
fn second_derivative_stencil(phis: &[f64], i: usize) -> [(usize, f64); 3] {
    let (h1, h2) = (phis[i] - phis[i - 1], phis[i + 1] - phis[i]);
    [
        (i - 1, 2.0 / (h1 * (h1 + h2))),
        (i, -2.0 / (h1 * h2)),
        (i + 1, 2.0 / (h2 * (h1 + h2))),
    ]
}

fn apply_stencil<T, F>(stencil: &[(usize, f64); 3], dim: usize, value: F) -> Vec<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(usize, usize) -> T,
{
    (0..dim)
        .map(|k| {
            stencil
                .iter()
                .fold(T::default(), |acc, &(idx, w)| acc + value(idx, k) * w)
        })
        .collect()
}

fn require_samples(path: &ProbabilityPath, min: usize) -> Result<()> {
    if path.len() < min {
        return Err(Error::Input(format!(
            "path has {} samples, at least {min} required",
            path.len()
        )));
    }
    Ok(())
}

/// `Σ ṗ²/p` over components with `p > 0`.
pub fn fisher_from_probability_derivatives(p: &[f64], pdot: &[f64]) -> f64 {
    p.iter()
        .zip(pdot)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, d)| d * d / p)
        .sum()
}

/// `4 Σ ẋ²` for amplitude coordinates `x = √p`.
pub fn fisher_from_amplitude_derivatives(xdot: &[f64]) -> f64 {
    4.0 * xdot.iter().map(|d| d * d).sum::<f64>()
}

/// Splits `Σ|ċ|²` into its modulus and phase parts at one sample.
///
/// Writing `c = |c| e^{iϑ}`, `Im(c̄ ċ) = p ϑ̇`, so the phase velocity is
/// read off without unwrapping angles. Returns `(fisher, phase_var)`.
fn complex_decomposition(c: &[Complex64], cdot: &[Complex64]) -> (f64, f64) {
    let mut speed = 0.0;
    let mut weighted_sq = 0.0;
    let mut weighted = 0.0;
    for (a, d) in c.iter().zip(cdot) {
        speed += d.norm_sqr();
        let p = a.norm_sqr();
        if p > 0.0 {
            let flux = (a.conj() * d).im;
            weighted_sq += flux * flux / p;
            weighted += flux;
        }
    }
    let fisher = (4.0 * (speed - weighted_sq)).max(0.0);
    let phase_var = (weighted_sq - weighted * weighted).max(0.0);
    (fisher, phase_var)
}

/// Fisher information at every sample of `path`.
///
/// With recorded amplitudes the derivative is taken on the complex
/// amplitudes, which stays smooth where a real amplitude changes sign;
/// otherwise on `x = √p`, with zero phase spread.
pub fn fisher_discrete(path: &ProbabilityPath) -> Result<Vec<FisherSample>> {
    require_samples(path, 3)?;
    let phis = path.phis();
    let samples = path.samples();
    let dim = path.dim();

    if path.has_amplitudes() {
        let amp = |idx: usize, k: usize| samples[idx].amplitudes.as_ref().unwrap()[k];
        Ok((0..samples.len())
            .map(|i| {
                let stencil = first_derivative_stencil(&phis, i);
                let cdot: Vec<Complex64> = apply_stencil(&stencil, dim, amp);
                let (fisher, phase_var) =
                    complex_decomposition(samples[i].amplitudes.as_ref().unwrap(), &cdot);
                FisherSample::new(phis[i], fisher, phase_var)
            })
            .collect())
    } else {
        let roots: Vec<Vec<f64>> = samples
            .iter()
            .map(|s| s.probabilities.iter().map(|p| p.max(0.0).sqrt()).collect())
            .collect();
        Ok((0..samples.len())
            .map(|i| {
                let stencil = first_derivative_stencil(&phis, i);
                let xdot: Vec<f64> = apply_stencil(&stencil, dim, |idx, k| roots[idx][k]);
                FisherSample::new(phis[i], fisher_from_amplitude_derivatives(&xdot), 0.0)
            })
            .collect())
    }
}

/// Per-sample comparison of the Fubini-Study speed with `ℱ/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityResidual {
    pub phi: f64,
    /// Squared speed orthogonal to the state: `⟨ψ̇|ψ̇⟩ − |⟨ψ|ψ̇⟩|²`.
    pub speed_sq: f64,
    /// `Σ ṗ²/p`, from probabilities alone.
    pub fisher: f64,
    pub phase_var: f64,
    /// `|speed_sq − ℱ/4|`; equals the phase spread up to discretization.
    pub residual: f64,
    /// `|ℱ/4 − 1|`, the deviation from the unit-speed value of a Grover path.
    pub unit_deviation: f64,
}

/// Compares the squared state speed with `ℱ/4` along a path with recorded
/// amplitudes. The Fisher value comes from probabilities only, so the
/// two sides are computed independently.
pub fn unitarity_identity_check(path: &ProbabilityPath) -> Result<Vec<UnitarityResidual>> {
    require_samples(path, 3)?;
    if !path.has_amplitudes() {
        return Err(Error::Input(
            "unitarity check needs recorded amplitudes".into(),
        ));
    }
    let probability_only = ProbabilityPath::from_probabilities(
        path.samples()
            .iter()
            .map(|s| (s.phi, s.probabilities.clone())),
    )?;
    let fisher = fisher_discrete(&probability_only)?;
    let phis = path.phis();
    let samples = path.samples();
    let dim = path.dim();
    let amp = |idx: usize, k: usize| samples[idx].amplitudes.as_ref().unwrap()[k];

    Ok((0..samples.len())
        .map(|i| {
            let c = samples[i].amplitudes.as_ref().unwrap();
            let cdot: Vec<Complex64> = apply_stencil(&first_derivative_stencil(&phis, i), dim, amp);
            let total: f64 = cdot.iter().map(|d| d.norm_sqr()).sum();
            let overlap: Complex64 = c.iter().zip(&cdot).map(|(a, d)| a.conj() * d).sum();
            let speed_sq = total - overlap.norm_sqr();
            let (_, phase_var) = complex_decomposition(c, &cdot);
            let f = fisher[i].fisher;
            UnitarityResidual {
                phi: phis[i],
                speed_sq,
                fisher: f,
                phase_var,
                residual: (speed_sq - f / 4.0).abs(),
                unit_deviation: (f / 4.0 - 1.0).abs(),
            }
        })
        .collect())
}

/// `arccos |⟨a|b⟩|`, in `[0, π/2]`.
pub fn fubini_study_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().clamp(0.0, 1.0).acos())
}

/// Linear interpolation of the Fisher value at `phi`.
pub fn interpolate_fisher(samples: &[FisherSample], phi: f64) -> Result<f64> {
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Input("no Fisher samples".into())),
    };
    if !(phi >= first.phi && phi <= last.phi) {
        return Err(Error::Domain(format!(
            "phi = {phi} outside sampled range [{}, {}]",
            first.phi, last.phi
        )));
    }
    let upper = samples.partition_point(|s| s.phi < phi);
    if upper == 0 {
        return Ok(first.fisher);
    }
    let (a, b) = (&samples[upper - 1], &samples[upper]);
    let t = (phi - a.phi) / (b.phi - a.phi);
    Ok(a.fisher + t * (b.fisher - a.fisher))
}

/// Trapezoidal `½ ∫ √ℱ dφ` over `[from, to]` from precomputed samples.
/// Interval ends falling between samples are linearly interpolated.
pub fn action_from_samples(samples: &[FisherSample], from: f64, to: f64) -> Result<f64> {
    if to < from {
        return Err(Error::Domain(format!(
            "action interval [{from}, {to}] is reversed"
        )));
    }
    let lagrangian = |f: f64| 0.5 * f.max(0.0).sqrt();
    let start = lagrangian(interpolate_fisher(samples, from)?);
    let end = lagrangian(interpolate_fisher(samples, to)?);
    if to == from {
        return Ok(0.0);
    }
    let mut knots = vec![(from, start)];
    knots.extend(
        samples
            .iter()
            .filter(|s| s.phi > from && s.phi < to)
            .map(|s| (s.phi, lagrangian(s.fisher))),
    );
    knots.push((to, end));
    Ok(knots
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum())
}

/// The Fisher action `½ ∫ √ℱ dφ` of `path` over `[from, to]`.
pub fn action(path: &ProbabilityPath, from: f64, to: f64) -> Result<f64> {
    action_from_samples(&fisher_discrete(path)?, from, to)
}

/// `ℱ` at `phi0`, interpolated from the path's Fisher samples.
pub fn input_information(path: &ProbabilityPath, phi0: f64) -> Result<f64> {
    interpolate_fisher(&fisher_discrete(path)?, phi0)
}

/// Evaluates `ẍ_i − (ℱ̇/ℱ) ẋ_i + (ℱ/4) x_i` along a path.
///
/// The coordinates are the signed real amplitudes when the path records
/// real amplitudes, and `√p` otherwise.
#[derive(Debug, Clone)]
pub struct GeodesicEvaluator {
    phis: Vec<f64>,
    coords: Vec<Vec<f64>>,
    fisher: Vec<FisherSample>,
}

impl GeodesicEvaluator {
    pub fn new(path: &ProbabilityPath) -> Result<Self> {
        require_samples(path, 5)?;
        let real_amplitudes = path.has_amplitudes()
            && path
                .samples()
                .iter()
                .flat_map(|s| s.amplitudes.as_ref().unwrap())
                .all(|c| c.im.abs() <= 1e-14 * (1.0 + c.re.abs()));
        let coords = path
            .samples()
            .iter()
            .map(|s| {
                if real_amplitudes {
                    s.amplitudes
                        .as_ref()
                        .unwrap()
                        .iter()
                        .map(|c| c.re)
                        .collect()
                } else {
                    s.probabilities.iter().map(|p| p.max(0.0).sqrt()).collect()
                }
            })
            .collect();
        Ok(Self {
            phis: path.phis(),
            coords,
            fisher: fisher_discrete(path)?,
        })
    }

    pub fn fisher(&self) -> &[FisherSample] {
        &self.fisher
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    /// Residual vector at an interior sample.
    pub fn residual(&self, index: usize) -> Result<Vec<f64>> {
        if index == 0 || index + 1 >= self.phis.len() {
            return Err(Error::Input(format!(
                "sample {index} is not interior to a path of {} samples",
                self.phis.len()
            )));
        }
        let first = first_derivative_stencil(&self.phis, index);
        let second = second_derivative_stencil(&self.phis, index);
        let dim = self.coords[index].len();
        let xdot: Vec<f64> = apply_stencil(&first, dim, |i, k| self.coords[i][k]);
        let xddot: Vec<f64> = apply_stencil(&second, dim, |i, k| self.coords[i][k]);
        // ℱ = 4Σẋ² and ℱ̇ = 8Σẋẍ from the same centred stencils, so no
        // one-sided end estimate leaks into the neighbouring residuals
        let f = fisher_from_amplitude_derivatives(&xdot);
        if f < FISHER_GUARD {
            return Err(Error::DegenerateFisher { index, fisher: f });
        }
        let fdot = 8.0 * xdot.iter().zip(&xddot).map(|(a, b)| a * b).sum::<f64>();
        Ok((0..dim)
            .map(|k| xddot[k] - fdot / f * xdot[k] + f / 4.0 * self.coords[index][k])
            .collect())
    }

    /// Largest residual component in absolute value at an interior sample.
    pub fn max_residual(&self, index: usize) -> Result<f64> {
        Ok(self
            .residual(index)?
            .iter()
            .fold(0.0, |m, r| m.max(r.abs())))
    }
}

/// Residual of the geodesic equation at one interior sample of `path`.
pub fn geodesic_residual(path: &ProbabilityPath, index: usize) -> Result<Vec<f64>> {
    GeodesicEvaluator::new(path)?.residual(index)
}

/// Amplitude coordinates and their velocity at a path parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
    pub phi: f64,
}

impl GeodesicState {
    /// `Σ(ẋ² + ω²x²)`.
    pub fn energy(&self, omega_sq: f64) -> f64 {
        self.x
            .iter()
            .zip(&self.xdot)
            .map(|(x, v)| v * v + omega_sq * x * x)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.x.iter().map(|x| x * x).collect()
    }
}

const CONSTRAINT_TOL: f64 = 1e-9;

/// Integrates `ẍ_i + (ℱ/4) x_i = 0` from `init` to `phi_end` with classic
/// fourth-order Runge-Kutta at fixed step `dt`; the last step is shortened
/// to land on `phi_end`. Returns every state including the initial one.
pub fn integrate_geodesic(
    init: &GeodesicState,
    fisher_const: f64,
    phi_end: f64,
    dt: f64,
) -> Result<Vec<GeodesicState>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Input(format!(
            "step size {dt} must be positive and finite"
        )));
    }
    if !(fisher_const > 0.0 && fisher_const.is_finite()) {
        return Err(Error::Input(format!(
            "Fisher constant {fisher_const} must be positive and finite"
        )));
    }
    if !phi_end.is_finite() || !init.phi.is_finite() || phi_end < init.phi {
        return Err(Error::Input(format!(
            "cannot integrate from {} to {phi_end}",
            init.phi
        )));
    }
    if init.x.len() != init.xdot.len() || init.x.is_empty() {
        return Err(Error::InvalidDimension(
            "position and velocity lengths differ".into(),
        ));
    }
    if init.x.iter().chain(&init.xdot).any(|v| !v.is_finite()) {
        return Err(Error::Input("non-finite initial state".into()));
    }
    let norm: f64 = init.x.iter().map(|x| x * x).sum();
    let radial: f64 = init.x.iter().zip(&init.xdot).map(|(x, v)| x * v).sum();
    if (norm - 1.0).abs() > CONSTRAINT_TOL || radial.abs() > CONSTRAINT_TOL {
        return Err(Error::Input(format!(
            "initial state violates Σx² = 1 or Σxẋ = 0 (Σx² = {norm}, Σxẋ = {radial})"
        )));
    }

    let omega_sq = fisher_const / 4.0;
    let span = phi_end - init.phi;
    let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(init.clone());
    let mut state = init.clone();
    for s in 0..steps {
        let next_phi = if s + 1 == steps {
            phi_end
        } else {
            init.phi + (s + 1) as f64 * dt
        };
        let h = next_phi - state.phi;
        state = rk4_step(&state, omega_sq, h, next_phi);
        out.push(state.clone());
    }
    Ok(out)
}

fn rk4_step(s: &GeodesicState, omega_sq: f64, h: f64, next_phi: f64) -> GeodesicState {
    // (x, v)' = (v, −ω²x)
    let n = s.x.len();
    let mut x = s.x.clone();
    let mut v = s.xdot.clone();
    for i in 0..n {
        let (x0, v0) = (s.x[i], s.xdot[i]);
        let (k1x, k1v) = (v0, -omega_sq * x0);
        let (k2x, k2v) = (v0 + 0.5 * h * k1v, -omega_sq * (x0 + 0.5 * h * k1x));
        let (k3x, k3v) = (v0 + 0.5 * h * k2v, -omega_sq * (x0 + 0.5 * h * k2x));
        let (k4x, k4v) = (v0 + h * k3v, -omega_sq * (x0 + h * k3x));
        x[i] = x0 + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v[i] = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    GeodesicState {
        x,
        xdot: v,
        phi: next_phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grover::GroverInstance;
    use crate::path::PathSample;
    use crate::state::RegisterShape;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

    /// Even grid from `from` to exactly `to`, spacing at most `h`.
    fn grid(from: f64, to: f64, h: f64) -> Vec<f64> {
        let n = ((to - from) / h - 1e-9).ceil() as usize;
        let h = (to - from) / n as f64;
        (0..=n)
            .map(|i| if i == n { to } else { from + i as f64 * h })
            .collect()
    }

    fn analytic_probability_path(inst: &GroverInstance, phis: &[f64]) -> ProbabilityPath {
        ProbabilityPath::from_probabilities(phis.iter().map(|&phi| {
            (
                phi,
                inst.analytic_amplitudes(phi)
                    .iter()
                    .map(|c| c.norm_sqr())
                    .collect(),
            )
        }))
        .unwrap()
    }

    fn analytic_amplitude_path(inst: &GroverInstance, phis: &[f64]) -> ProbabilityPath {
        ProbabilityPath::from_states(
            phis.iter()
                .map(|&phi| (phi, inst.analytic_state(phi)))
                .collect::<Vec<_>>()
                .iter()
                .map(|(p, s)| (*p, s)),
            true,
        )
        .unwrap()
    }

    #[test]
    fn grover_fisher_is_four() {
        let inst = GroverInstance::single(16).unwrap();
        let path = analytic_probability_path(&inst, &grid(inst.theta(), FRAC_PI_2, 0.01));
        for s in fisher_discrete(&path).unwrap() {
            assert!((s.fisher - 4.0).abs() < 1e-3, "{s:?}");
            assert_eq!(s.phase_var, 0.0);
        }
    }

    #[test]
    fn constant_path_has_zero_fisher() {
        let path =
            ProbabilityPath::from_probabilities((0..6).map(|i| (i as f64 * 0.1, vec![0.3, 0.7])))
                .unwrap();
        assert!(fisher_discrete(&path)
            .unwrap()
            .iter()
            .all(|s| s.fisher < 1e-20));
        assert!(input_information(&path, 0.25).unwrap() < 1e-20);
    }

    #[test]
    fn two_level_fisher_at_point() {
        let h = 0.01;
        let path = ProbabilityPath::from_probabilities(
            [0.3 - h, 0.3, 0.3 + h]
                .map(|phi: f64| (phi, vec![phi.sin().powi(2), phi.cos().powi(2)])),
        )
        .unwrap();
        let f = fisher_discrete(&path).unwrap()[1].fisher;
        assert!((f - 4.0).abs() < 1e-3);
    }

    #[test]
    fn fisher_needs_three_samples() {
        let path =
            ProbabilityPath::from_probabilities([(0.0, vec![1.0]), (0.1, vec![1.0])]).unwrap();
        assert!(matches!(fisher_discrete(&path), Err(Error::Input(_))));
    }

    #[test]
    fn signed_amplitudes_carry_fisher_through_zero() {
        // Past π/2 the unmarked amplitude changes sign; √p has a kink there.
        let inst = GroverInstance::single(8).unwrap();
        let path = analytic_amplitude_path(&inst, &grid(1.2, 2.0, 0.01));
        for s in fisher_discrete(&path).unwrap() {
            assert!((s.fisher - 4.0).abs() < 1e-3, "{s:?}");
            assert!(s.phase_var < 1e-12);
        }
    }

    #[test]
    fn induced_metric_invariant() {
        let s = FisherSample::new(0.0, 3.2, 0.15);
        assert!((s.induced_ds2_per_dphi2 - (3.2 + 0.6) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn regularized_fisher_matches_direct_form() {
        // exact derivatives of a non-Grover family p = (a sin²φ, a cos²φ, 1 − a)·...
        for &phi in &[0.2f64, 0.7, 1.1] {
            let p = [0.6 * phi.sin().powi(2), 0.6 * phi.cos().powi(2), 0.4];
            let pdot = [
                1.2 * phi.sin() * phi.cos(),
                -1.2 * phi.sin() * phi.cos(),
                0.0,
            ];
            let xdot: Vec<f64> = p
                .iter()
                .zip(&pdot)
                .map(|(p, d)| d / (2.0 * p.sqrt()))
                .collect();
            let direct = fisher_from_probability_derivatives(&p, &pdot);
            assert!((direct - fisher_from_amplitude_derivatives(&xdot)).abs() < 1e-8);
            assert!((direct - 2.4).abs() < 1e-12);
        }
    }

    #[test]
    fn unitarity_identity_on_grover_path() {
        let inst = GroverInstance::single(8).unwrap();
        let path = analytic_amplitude_path(&inst, &grid(inst.theta(), FRAC_PI_2, 0.01));
        for r in unitarity_identity_check(&path).unwrap() {
            assert!(r.residual < 1e-3, "{r:?}");
            assert!(r.unit_deviation < 1e-3, "{r:?}");
        }
    }

    #[test]
    fn unitarity_identity_on_stationary_path() {
        let s = StateVector::new_uniform(3).unwrap();
        let path = ProbabilityPath::from_states((0..5).map(|i| (i as f64, &s)), true).unwrap();
        for r in unitarity_identity_check(&path).unwrap() {
            assert!(r.speed_sq.abs() < 1e-20);
            assert!(r.fisher.abs() < 1e-20);
            assert!(r.residual.abs() < 1e-20);
        }
    }

    #[test]
    fn injected_phase_shows_up_as_phase_variance() {
        // c_0 = sin φ e^{iφ}, c_j = cos φ/√3: the bracket is p_0(1 − p_0).
        let phis = grid(0.3, 1.2, 0.005);
        let samples: Vec<PathSample> = phis
            .iter()
            .map(|&phi| {
                let mut amps = vec![Complex64::new(phi.cos() / 3f64.sqrt(), 0.0); 4];
                amps[0] = Complex64::from_polar(phi.sin(), phi);
                PathSample {
                    phi,
                    probabilities: amps.iter().map(|c| c.norm_sqr()).collect(),
                    amplitudes: Some(amps),
                }
            })
            .collect();
        let path = ProbabilityPath::from_samples(samples).unwrap();
        for r in unitarity_identity_check(&path).unwrap() {
            let p0 = r.phi.sin().powi(2);
            let expected = p0 * (1.0 - p0);
            assert!(expected > 0.0);
            assert!((r.residual - expected).abs() < 1e-3, "{r:?} vs {expected}");
            assert!((r.phase_var - expected).abs() < 1e-3);
        }
        assert!(unitarity_identity_check(
            &ProbabilityPath::from_probabilities(phis.iter().map(|&p| (p, vec![1.0]))).unwrap()
        )
        .is_err());
    }

    #[test]
    fn fubini_study_examples() {
        let u = StateVector::new_uniform(4).unwrap();
        assert!(fubini_study_distance(&u, &u).unwrap().abs() < 1e-7);
        let (a, b) = (
            StateVector::basis(4, 0).unwrap(),
            StateVector::basis(4, 2).unwrap(),
        );
        assert!((fubini_study_distance(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let d = fubini_study_distance(&u, &a).unwrap();
        assert!((d - FRAC_PI_3).abs() < 1e-12);
        assert!((d - (FRAC_PI_2 - FRAC_PI_6)).abs() < 1e-12);
        assert!(fubini_study_distance(&u, &StateVector::new_uniform(3).unwrap()).is_err());
    }

    #[test]
    fn action_examples() {
        let inst = GroverInstance::single(4).unwrap();
        let path = analytic_probability_path(&inst, &grid(FRAC_PI_6, FRAC_PI_2, 0.01));
        let s = action(&path, FRAC_PI_6, FRAC_PI_2).unwrap();
        assert!((s - FRAC_PI_3).abs() < 1e-3);
        let distance = fubini_study_distance(
            &inst.analytic_state(FRAC_PI_6),
            &inst.analytic_state(FRAC_PI_2),
        )
        .unwrap();
        assert!((s - distance).abs() < 1e-3);
        assert_eq!(action(&path, 1.0, 1.0).unwrap(), 0.0);
        assert!(action(&path, 1.0, 0.9).is_err());
        assert!(action(&path, 0.0, 1.0).is_err());
    }

    #[test]
    fn grover_path_satisfies_geodesic_equation() {
        let inst = GroverInstance::single(8).unwrap();
        let path = analytic_probability_path(&inst, &grid(inst.theta(), FRAC_PI_2, 0.01));
        let eval = GeodesicEvaluator::new(&path).unwrap();
        for i in 1..eval.len() - 1 {
            assert!(eval.max_residual(i).unwrap() < 1e-2);
        }
        assert!(eval.residual(0).is_err());
        assert!(eval.residual(eval.len() - 1).is_err());
    }

    #[test]
    fn straight_line_is_not_a_geodesic() {
        let phis = grid(0.2, 0.4, 0.001);
        let path = ProbabilityPath::from_probabilities(phis.iter().map(|&p| (p, vec![p, 1.0 - p])))
            .unwrap();
        let i = phis.iter().position(|p| (p - 0.3).abs() < 1e-9).unwrap();
        let r = geodesic_residual(&path, i).unwrap();
        // x_0 = √φ: ẍ − (ℱ̇/ℱ)ẋ + (ℱ/4)x with ℱ = 1/(φ(1−φ))
        let phi: f64 = 0.3;
        let f = 1.0 / (phi * (1.0 - phi));
        let fdot_over_f = -(1.0 - 2.0 * phi) / (phi * (1.0 - phi));
        let x = phi.sqrt();
        let expected0 = -0.25 * phi.powf(-1.5) - fdot_over_f * 0.5 / x + f / 4.0 * x;
        assert!(expected0 > 0.5);
        assert!((r[0] - expected0).abs() < 1e-3, "{} vs {expected0}", r[0]);
    }

    #[test]
    fn harmonic_path_is_a_geodesic() {
        let a = [0.6, 0.8, 0.0];
        let b = [0.0, 0.0, 1.0];
        let phis = grid(0.1, 1.4, 0.01);
        let path = ProbabilityPath::from_probabilities(phis.iter().map(|&phi| {
            (
                phi,
                (0..3)
                    .map(|i| (a[i] * phi.sin() + b[i] * phi.cos()).powi(2))
                    .collect(),
            )
        }))
        .unwrap();
        let eval = GeodesicEvaluator::new(&path).unwrap();
        for i in 1..eval.len() - 1 {
            assert!(eval.max_residual(i).unwrap() < 1e-2);
        }
    }

    #[test]
    fn geodesic_residual_guards_small_fisher() {
        let path = ProbabilityPath::from_probabilities((0..6).map(|i| (i as f64, vec![0.5, 0.5])))
            .unwrap();
        assert!(matches!(
            geodesic_residual(&path, 2),
            Err(Error::DegenerateFisher { index: 2, .. })
        ));
        let short =
            ProbabilityPath::from_probabilities((0..4).map(|i| (i as f64, vec![1.0]))).unwrap();
        assert!(geodesic_residual(&short, 1).is_err());
    }

    #[test]
    fn integrator_reaches_marked_state() {
        let (s, c) = FRAC_PI_6.sin_cos();
        let init = GeodesicState {
            x: vec![s, c / 3f64.sqrt(), c / 3f64.sqrt(), c / 3f64.sqrt()],
            xdot: vec![c, -s / 3f64.sqrt(), -s / 3f64.sqrt(), -s / 3f64.sqrt()],
            phi: FRAC_PI_6,
        };
        assert!(init.x.iter().all(|v| (v - 0.5).abs() < 1e-15));
        let traj = integrate_geodesic(&init, 4.0, FRAC_PI_2, 1e-3).unwrap();
        let end = traj.last().unwrap();
        assert_eq!(end.phi, FRAC_PI_2);
        for (x, e) in end.x.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((x - e).abs() < 1e-8);
        }
    }

    #[test]
    fn integrator_cosine_solution_and_energy() {
        let x0 = vec![0.6, 0.8];
        let init = GeodesicState {
            x: x0.clone(),
            xdot: vec![0.0, 0.0],
            phi: 0.0,
        };
        let traj = integrate_geodesic(&init, 4.0, 2.0 * PI, 1e-3).unwrap();
        let e0 = init.energy(1.0);
        for s in &traj {
            for (x, a) in s.x.iter().zip(&x0) {
                assert!((x - a * s.phi.cos()).abs() < 1e-8);
            }
            assert!((s.energy(1.0) - e0).abs() < 1e-8);
        }
    }

    #[test]
    fn integrator_rejects_bad_input() {
        let ok = GeodesicState {
            x: vec![1.0, 0.0],
            xdot: vec![0.0, 1.0],
            phi: 0.0,
        };
        assert!(integrate_geodesic(&ok, 4.0, 1.0, 0.0).is_err());
        assert!(integrate_geodesic(&ok, 4.0, 1.0, f64::NAN).is_err());
        assert!(integrate_geodesic(&ok, 4.0, f64::INFINITY, 0.1).is_err());
        assert!(integrate_geodesic(&ok, 0.0, 1.0, 0.1).is_err());
        let unnormalized = GeodesicState {
            x: vec![1.0, 1.0],
            xdot: vec![0.0, 0.0],
            phi: 0.0,
        };
        assert!(integrate_geodesic(&unnormalized, 4.0, 1.0, 0.1).is_err());
        let radial = GeodesicState {
            x: vec![1.0, 0.0],
            xdot: vec![1.0, 0.0],
            phi: 0.0,
        };
        assert!(integrate_geodesic(&radial, 4.0, 1.0, 0.1).is_err());
        assert_eq!(integrate_geodesic(&ok, 4.0, 0.0, 0.1).unwrap().len(), 1);
    }

    #[test]
    fn input_information_examples() {
        let inst = GroverInstance::single(32).unwrap();
        let path = analytic_probability_path(&inst, &grid(inst.theta(), FRAC_PI_2, 0.01));
        for phi0 in [inst.theta(), 0.6, 1.3] {
            assert!((input_information(&path, phi0).unwrap() - 4.0).abs() < 1e-3);
        }
        let two = GroverInstance::single(2).unwrap();
        let path = analytic_probability_path(&two, &grid(0.5, 0.9, 0.01));
        assert!((input_information(&path, 0.7).unwrap() - 4.0).abs() < 1e-3);
        assert!(input_information(&path, 1.0).is_err());
    }

    #[test]
    fn analytic_state_matches_shape() {
        let s = GroverInstance::single(5).unwrap().analytic_state(0.3);
        assert_eq!(s.shape(), RegisterShape::Single(5));
    }
}
