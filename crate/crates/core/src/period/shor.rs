use rand::Rng;

use super::{
    build_register, Counters, MeasurementEvent, MeasurementStage, Method, PeriodInstance,
    PeriodResult, PeriodSettings,
};
use crate::error::{Error, Result};
use crate::number::{continued_fraction_denominator, lcm, minimize_order};
use crate::state::{Register, StateVector};

/// Measures the function register of a state built by [`build_register`],
/// leaving the argument register on the comb `{a : f(a) = l}`.
pub fn shor_project<R: Rng + ?Sized>(
    state: &StateVector,
    rng: &mut R,
) -> Result<(u64, StateVector)> {
    let mut collapsed = state.clone();
    let l = collapsed.measure(Register::Second, rng)?;
    Ok((l as u64, collapsed))
}

/// Projection + Fourier order finding.
///
/// Each attempt prepares the register, measures `f`, transforms the
/// argument register, reads `c` and takes the continued-fraction
/// denominator of `c/q`. A denominator that fails verification is combined
/// by lcm with earlier failures before the attempt is written off.
pub fn shor_period<R: Rng + ?Sized>(
    inst: &PeriodInstance,
    rng: &mut R,
    settings: &PeriodSettings,
) -> Result<PeriodResult> {
    let (n, y, q) = (inst.modulus(), inst.base(), inst.register_size());
    let mut counters = Counters::default();
    let mut events = Vec::new();
    let mut pending: Option<u64> = None;
    let register = build_register(inst, settings.memory_cap)?;

    for attempt in 1..=settings.max_attempts as u64 {
        counters.attempts += 1;
        counters.preparations += 1;
        counters.oracle_calls += 1;

        let (l, mut state) = shor_project(&register, rng)?;
        counters.measurements += 1;
        events.push(MeasurementEvent {
            attempt,
            stage: MeasurementStage::FunctionRegister,
            outcome: l,
        });

        state.qft(Register::First)?;
        let c = state.measure(Register::First, rng)? as u64;
        counters.measurements += 1;
        events.push(MeasurementEvent {
            attempt,
            stage: MeasurementStage::FourierReadout,
            outcome: c,
        });

        let Some(d) = continued_fraction_denominator(c, q, n) else {
            continue;
        };
        let combined = pending.map(|p| lcm(p, d));
        if let Some(period) =
            minimize_order(y, d, n).or_else(|| combined.and_then(|m| minimize_order(y, m, n)))
        {
            return Ok(PeriodResult {
                period,
                method: Method::Shor,
                counters,
                events,
            });
        }
        // the order is below N, so an lcm past it carries no information
        pending = match combined {
            Some(m) if m < n => Some(m),
            _ => Some(d),
        };
    }
    Err(Error::BudgetExhausted {
        method: Method::Shor,
        counters,
    })
}
