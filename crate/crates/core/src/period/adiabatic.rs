//! Period finding with a multi-target Grover loop instead of a projection.
//!
//! The loop amplifies every argument `a` with `f(a) = f(1)`, i.e. the comb
//! `{1 + jr}`, into `|η⟩`. The oracle computes `f` into a scratch register,
//! compares, flips the phase and uncomputes, so the loop runs on the
//! argument register alone. Samples of `|η⟩` differ by multiples of `r`.

use rand::Rng;

use super::{
    check_cap, Counters, MeasurementEvent, MeasurementStage, Method, PeriodInstance, PeriodResult,
    PeriodSettings,
};
use crate::error::{Error, Result};
use crate::grover::{run_grover, GroverInstance, GroverTrajectory};
use crate::number::{gcd, minimize_order};
use crate::state::{Register, StateVector};

/// The amplification loop for one order-finding instance.
#[derive(Debug, Clone)]
pub struct EtaLoop {
    pub search: GroverInstance,
    pub iterations: usize,
}

impl EtaLoop {
    pub fn new(inst: &PeriodInstance, memory_cap: u64) -> Result<Self> {
        check_cap(inst.register_size() as u128, memory_cap)?;
        let marked = inst.marked_arguments().into_iter().map(|a| a as usize);
        let search = GroverInstance::new(inst.register_size() as usize, marked)?;
        let iterations = search.optimal_iterations();
        Ok(Self { search, iterations })
    }

    /// Number of marked arguments.
    pub fn tau(&self) -> usize {
        self.search.n_marked()
    }

    /// Prepares the uniform argument register and runs the loop.
    fn prepare(&self, counters: &mut Counters) -> Result<StateVector> {
        let mask: Vec<bool> = (0..self.search.n_items())
            .map(|a| self.search.is_marked(a))
            .collect();
        let mut state = StateVector::new_uniform(self.search.n_items())?;
        counters.preparations += 1;
        for _ in 0..self.iterations {
            state.phase_flip(|a| mask[a]);
            state.invert_about_average();
            counters.grover_steps += 1;
            counters.oracle_calls += 1;
        }
        Ok(state)
    }
}

/// The loop's full trajectory from the uniform register to `|η⟩`, with
/// amplitudes recorded.
pub fn eta_trajectory(
    inst: &PeriodInstance,
    memory_cap: u64,
) -> Result<(EtaLoop, GroverTrajectory)> {
    let eta = EtaLoop::new(inst, memory_cap)?;
    let traj = run_grover(&eta.search, eta.iterations, true)?;
    Ok((eta, traj))
}

/// Candidate multiple of the period from a batch of samples: the gcd of
/// their differences. Zero when all samples coincide.
fn difference_gcd(samples: &[u64]) -> u64 {
    samples
        .iter()
        .skip(1)
        .fold(0, |g, &s| gcd(g, s.abs_diff(samples[0])))
}

/// Order finding by sampling the amplified comb `|η⟩`.
///
/// Every batch draws `settings.samples` measurements, each from a freshly
/// prepared and amplified register. The gcd of differences is verified
/// and reduced to the order; a failed batch is discarded and redrawn.
pub fn grover_period<R: Rng + ?Sized>(
    inst: &PeriodInstance,
    rng: &mut R,
    settings: &PeriodSettings,
) -> Result<PeriodResult> {
    if settings.samples < 2 {
        return Err(Error::Input(format!(
            "need at least 2 samples per batch, got {}",
            settings.samples
        )));
    }
    let eta = EtaLoop::new(inst, settings.memory_cap)?;
    let mut counters = Counters::default();
    let mut events = Vec::new();

    for attempt in 1..=settings.max_attempts as u64 {
        counters.attempts += 1;
        let mut batch = Vec::with_capacity(settings.samples);
        for _ in 0..settings.samples {
            let mut state = eta.prepare(&mut counters)?;
            let a = state.measure(Register::First, rng)? as u64;
            counters.measurements += 1;
            events.push(MeasurementEvent {
                attempt,
                stage: MeasurementStage::EtaSample,
                outcome: a,
            });
            batch.push(a);
        }
        if let Some(period) = minimize_order(inst.base(), difference_gcd(&batch), inst.modulus()) {
            return Ok(PeriodResult {
                period,
                method: Method::GroverAdiabatic,
                counters,
                events,
            });
        }
    }
    Err(Error::BudgetExhausted {
        method: Method::GroverAdiabatic,
        counters,
    })
}
