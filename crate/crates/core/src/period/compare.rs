use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    eta_trajectory, grover_period, shor_period, Counters, MeasurementEvent, Method, PeriodInstance,
    PeriodResult, PeriodSettings,
};
use crate::error::{Error, Result};
use crate::geometry::fisher_discrete;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub modulus: u64,
    pub base: u64,
    pub register_size: u64,
    /// Arguments marked by the oracle `f(a) = f(1)`.
    pub marked_count: u64,
    pub loop_iterations: u64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub success: bool,
    pub period: Option<u64>,
    pub counters: Counters,
    pub non_unitary_projections: u64,
    pub measurement_events: Vec<MeasurementEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherTracePoint {
    pub phi: f64,
    pub fisher: f64,
    pub phase_var: f64,
}

/// Side-by-side run of both period finders on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub format_version: u32,
    pub seed: u64,
    pub instance: InstanceSummary,
    pub methods: Vec<MethodReport>,
    /// Fisher information along the amplification loop, from `φ_0` to the
    /// final step, sampled at `fisher_trace_dphi` or finer.
    pub fisher_trace: Vec<FisherTracePoint>,
    pub fisher_trace_dphi: f64,
    /// Largest gap between simulated loop probabilities and the analytic
    /// path at the loop's step points.
    pub trajectory_max_deviation: f64,
}

impl ComparisonReport {
    pub fn method(&self, method: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub fn all_succeeded(&self) -> bool {
        self.methods.iter().all(|m| m.success)
    }
}

fn method_report(method: Method, outcome: Result<PeriodResult>) -> Result<MethodReport> {
    match outcome {
        Ok(res) => Ok(MethodReport {
            method,
            success: true,
            period: Some(res.period),
            non_unitary_projections: res.counters.measurements,
            counters: res.counters,
            measurement_events: res.events,
        }),
        Err(Error::BudgetExhausted { counters, .. }) => Ok(MethodReport {
            method,
            success: false,
            period: None,
            non_unitary_projections: counters.measurements,
            counters,
            measurement_events: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

fn method_rng(seed: u64, method: Method) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match method {
        Method::Shor => 0,
        Method::GroverAdiabatic => 1,
    });
    rng
}

/// Runs both methods from independent streams of `seed` and traces the
/// Fisher information of the amplification loop.
pub fn compare_methods(
    inst: &PeriodInstance,
    seed: u64,
    settings: &PeriodSettings,
    dphi: f64,
) -> Result<ComparisonReport> {
    let shor = method_report(
        Method::Shor,
        shor_period(inst, &mut method_rng(seed, Method::Shor), settings),
    )?;
    let grover = method_report(
        Method::GroverAdiabatic,
        grover_period(
            inst,
            &mut method_rng(seed, Method::GroverAdiabatic),
            settings,
        ),
    )?;

    let (eta, traj) = eta_trajectory(inst, settings.memory_cap)?;
    let mut deviation: f64 = 0.0;
    for (j, sample) in traj.path.samples().iter().enumerate() {
        let analytic = eta.search.analytic_amplitudes(eta.search.phi_of_step(j));
        for (p, c) in sample.probabilities.iter().zip(&analytic) {
            deviation = deviation.max((p - c.norm_sqr()).abs());
        }
    }

    // one padding sample on each side keeps every traced point centred
    let resampled = eta.search.resample(eta.iterations, dphi, 1)?;
    let fisher = fisher_discrete(&resampled.path)?;
    let (first, last) = (
        resampled.step_indices[0],
        *resampled.step_indices.last().unwrap(),
    );
    let fisher_trace = fisher[first..=last]
        .iter()
        .map(|s| FisherTracePoint {
            phi: s.phi,
            fisher: s.fisher,
            phase_var: s.phase_var,
        })
        .collect();

    Ok(ComparisonReport {
        format_version: REPORT_FORMAT_VERSION,
        seed,
        instance: InstanceSummary {
            modulus: inst.modulus(),
            base: inst.base(),
            register_size: inst.register_size(),
            marked_count: eta.tau() as u64,
            loop_iterations: eta.iterations as u64,
            theta: eta.search.theta(),
        },
        methods: vec![shor, grover],
        fisher_trace,
        fisher_trace_dphi: resampled.spacing,
        trajectory_max_deviation: deviation,
    })
}
