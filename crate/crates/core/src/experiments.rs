//! File-oriented experiments: per-step Grover traces with their geometry,
//! and the geodesic check against integration and simulation.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    action_from_samples, fisher_discrete, fubini_study_distance, integrate_geodesic,
    GeodesicEvaluator, GeodesicState,
};
use crate::grover::{run_grover, GroverInstance};
use crate::path::ProbabilityPath;

pub const FORMAT_VERSION: u32 = 1;

/// Integration step of the geodesic check.
pub const GEODESIC_DT: f64 = 1e-4;

/// Allowed gap between integrated and reference probabilities.
pub const GEODESIC_DEVIATION_TOL: f64 = 1e-6;

/// Allowed gap between action and distance, in units of `Δφ²`.
pub const ACTION_TOL_FACTOR: f64 = 5.0;

fn check_cap(needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::Resource { needed, cap });
    }
    Ok(())
}

fn check_dphi(dphi: f64) -> Result<()> {
    if !(dphi > 0.0 && dphi <= 0.1) {
        return Err(Error::Input(format!(
            "sampling step {dphi} must lie in (0, 0.1]"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub phi: f64,
    /// Total probability on the marked items.
    pub p_marked: f64,
    /// Total probability on the unmarked items.
    pub p_unmarked: f64,
    pub fisher_estimate: f64,
    pub geodesic_residual_max: f64,
    /// Action from `φ_0` to this step.
    pub action_cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverTrace {
    pub format_version: u32,
    pub n_items: usize,
    pub marked: Vec<usize>,
    pub theta: f64,
    /// Spacing of the refined analytic grid the geometry is evaluated on.
    pub dphi: f64,
    /// Largest gap between simulated and analytic probabilities over all steps.
    pub analytic_max_deviation: f64,
    pub rows: Vec<TraceRow>,
}

/// Simulates `steps` iterations and evaluates Fisher information, the
/// geodesic residual and the cumulative action at every step point, on
/// the analytic path refined to spacing at most `dphi`.
pub fn grover_trace(
    inst: &GroverInstance,
    steps: usize,
    dphi: f64,
    memory_cap: u64,
) -> Result<GroverTrace> {
    check_dphi(dphi)?;
    let per_step = (2.0 * inst.theta() / dphi).ceil().max(1.0) as u128;
    let grid = steps as u128 * per_step + 5;
    check_cap(
        inst.n_items() as u128 * (grid + steps as u128 + 1),
        memory_cap,
    )?;

    let sim = run_grover(inst, steps, false)?;
    let refined = inst.resample(steps, dphi, 2)?;
    let eval = GeodesicEvaluator::new(&refined.path)?;
    let fisher = eval.fisher();
    let phi0 = inst.phi_of_step(0);

    let mut deviation: f64 = 0.0;
    let mut rows = Vec::with_capacity(steps + 1);
    for (j, sample) in sim.path.samples().iter().enumerate() {
        let idx = refined.step_indices[j];
        let analytic = &refined.path.samples()[idx].probabilities;
        for (p, a) in sample.probabilities.iter().zip(analytic) {
            deviation = deviation.max((p - a).abs());
        }
        let p_marked: f64 = inst.marked().iter().map(|&i| sample.probabilities[i]).sum();
        let p_total: f64 = sample.probabilities.iter().sum();
        rows.push(TraceRow {
            step: j,
            phi: sample.phi,
            p_marked,
            p_unmarked: p_total - p_marked,
            fisher_estimate: fisher[idx].fisher,
            geodesic_residual_max: eval.max_residual(idx)?,
            action_cumulative: action_from_samples(fisher, phi0, refined.path.samples()[idx].phi)?,
        });
    }
    Ok(GroverTrace {
        format_version: FORMAT_VERSION,
        n_items: inst.n_items(),
        marked: inst.marked().to_vec(),
        theta: inst.theta(),
        dphi: refined.spacing,
        analytic_max_deviation: deviation,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicTolerances {
    pub deviation: f64,
    pub action: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCheck {
    pub format_version: u32,
    pub n_items: usize,
    pub theta: f64,
    pub dphi: f64,
    pub dt: f64,
    /// Max probability gap between the integrated geodesic and the analytic
    /// path on the `[θ, π/2]` grid.
    pub integrator_vs_analytic_max_dev: f64,
    /// Max probability gap between the integrated geodesic and the simulated
    /// Grover states at every `φ_j`.
    pub integrator_vs_simulated_max_dev: f64,
    pub simulated_steps: usize,
    /// Action over `[θ, π/2]`.
    pub action: f64,
    /// Fubini-Study distance between the uniform and the marked state.
    pub fs_distance: f64,
    pub action_distance_gap: f64,
    pub tolerances: GeodesicTolerances,
    pub passed: bool,
}

fn initial_geodesic_state(inst: &GroverInstance) -> GeodesicState {
    let theta = inst.theta();
    let rest = ((inst.n_items() - 1) as f64).sqrt();
    let (s, c) = theta.sin_cos();
    let x = (0..inst.n_items())
        .map(|i| if inst.is_marked(i) { s } else { c / rest })
        .collect();
    let xdot = (0..inst.n_items())
        .map(|i| if inst.is_marked(i) { c } else { -s / rest })
        .collect();
    GeodesicState {
        x,
        xdot,
        phi: theta,
    }
}

fn advance(state: &GeodesicState, to: f64) -> Result<GeodesicState> {
    Ok(integrate_geodesic(state, 4.0, to, GEODESIC_DT)?
        .pop()
        .expect("integration returns at least the initial state"))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Integrates the harmonic geodesic equation from the uniform state of an
/// `n_items` search with one marked item and checks it against the analytic
/// path, the simulated Grover states, and the Fubini-Study distance.
pub fn geodesic_check(n_items: usize, dphi: f64, memory_cap: u64) -> Result<GeodesicCheck> {
    check_dphi(dphi)?;
    let inst = GroverInstance::single(n_items)?;
    let theta = inst.theta();
    let pieces = ((FRAC_PI_2 - theta) / dphi).ceil().max(2.0) as usize;
    check_cap(n_items as u128 * (pieces as u128 + 1), memory_cap)?;
    let h = (FRAC_PI_2 - theta) / pieces as f64;
    let grid: Vec<f64> = (0..=pieces)
        .map(|k| {
            if k == pieces {
                FRAC_PI_2
            } else {
                theta + k as f64 * h
            }
        })
        .collect();

    let init = initial_geodesic_state(&inst);
    let mut state = init.clone();
    let mut analytic_dev: f64 = 0.0;
    for &phi in &grid[1..] {
        state = advance(&state, phi)?;
        let reference = inst.analytic_path(phi)?;
        analytic_dev = analytic_dev.max(max_gap(&state.probabilities(), reference.as_slice()));
    }

    let steps = inst.optimal_iterations();
    let sim = run_grover(&inst, steps, false)?;
    let mut state = init;
    let mut simulated_dev: f64 = 0.0;
    for (j, sample) in sim.path.samples().iter().enumerate() {
        if j > 0 {
            state = advance(&state, sample.phi)?;
        }
        simulated_dev = simulated_dev.max(max_gap(&state.probabilities(), &sample.probabilities));
    }

    let path = ProbabilityPath::from_states(
        grid.iter()
            .map(|&phi| (phi, inst.analytic_state(phi)))
            .collect::<Vec<_>>()
            .iter()
            .map(|(p, s)| (*p, s)),
        false,
    )?;
    let fisher = fisher_discrete(&path)?;
    let action = action_from_samples(&fisher, theta, FRAC_PI_2)?;
    let fs_distance =
        fubini_study_distance(&inst.analytic_state(theta), &inst.analytic_state(FRAC_PI_2))?;
    let gap = (action - fs_distance).abs();
    let tolerances = GeodesicTolerances {
        deviation: GEODESIC_DEVIATION_TOL,
        action: ACTION_TOL_FACTOR * h * h,
    };
    let passed = analytic_dev <= tolerances.deviation
        && simulated_dev <= tolerances.deviation
        && gap <= tolerances.action;
    Ok(GeodesicCheck {
        format_version: FORMAT_VERSION,
        n_items,
        theta,
        dphi: h,
        dt: GEODESIC_DT,
        integrator_vs_analytic_max_dev: analytic_dev,
        integrator_vs_simulated_max_dev: simulated_dev,
        simulated_steps: steps,
        action,
        fs_distance,
        action_distance_gap: gap,
        tolerances,
        passed,
    })
}
