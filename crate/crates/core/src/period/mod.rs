//! Order finding for `f(a) = y^a mod N`, by Fourier projection and by an
//! amplitude-amplification loop, plus the factoring driver built on both.

mod adiabatic;
mod compare;
mod factor;
mod shor;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{gcd, modpow};
use crate::state::{RegisterShape, StateVector};

pub use adiabatic::{eta_trajectory, grover_period, EtaLoop};
pub use compare::{
    compare_methods, ComparisonReport, FisherTracePoint, InstanceSummary, MethodReport,
};
pub use factor::{factor, FactorBudget, FactorRoute, Factorization};
pub use shor::{shor_period, shor_project};

/// Default cap on the number of complex amplitudes held by one state.
pub const DEFAULT_MEMORY_CAP: u64 = 1 << 26;

/// Which period finder to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Shor,
    GroverAdiabatic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Shor => "shor",
            Method::GroverAdiabatic => "grover-adiabatic",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shor" => Ok(Method::Shor),
            "grover-adiabatic" => Ok(Method::GroverAdiabatic),
            other => Err(Error::Input(format!("unknown method {other:?}"))),
        }
    }
}

/// Cost counters accumulated by a period finder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Rounds of the method: Shor runs, or sample batches of the loop.
    pub attempts: u64,
    /// Coherent applications of `f`: one per register preparation for
    /// the projection method, one per loop iteration for the loop method.
    pub oracle_calls: u64,
    pub grover_steps: u64,
    /// Projective (non-unitary) measurements.
    pub measurements: u64,
    pub preparations: u64,
}

impl Counters {
    pub fn absorb(&mut self, other: &Counters) {
        self.attempts += other.attempts;
        self.oracle_calls += other.oracle_calls;
        self.grover_steps += other.grover_steps;
        self.measurements += other.measurements;
        self.preparations += other.preparations;
    }
}

/// Where in a method a measurement happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementStage {
    /// Measuring `|f(a)⟩`, collapsing the argument register onto a comb.
    FunctionRegister,
    /// Reading the argument register after the Fourier transform.
    FourierReadout,
    /// Sampling the amplified state `|η⟩`.
    EtaSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub attempt: u64,
    pub stage: MeasurementStage,
    pub outcome: u64,
}

/// A verified period with the cost of finding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodResult {
    pub period: u64,
    pub method: Method,
    pub counters: Counters,
    pub events: Vec<MeasurementEvent>,
}

/// Knobs shared by both period finders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSettings {
    /// Shor runs, or sample batches of the loop method.
    pub max_attempts: usize,
    /// Measurements of `|η⟩` per batch.
    pub samples: usize,
    pub memory_cap: u64,
}

impl Default for PeriodSettings {
    fn default() -> Self {
        Self {
            max_attempts: 32,
            samples: 3,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// Modulus, base and argument-register size of an order-finding problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodInstance {
    modulus: u64,
    base: u64,
    register_size: u64,
}

impl PeriodInstance {
    /// Uses the smallest power of two in `(N², 2N²)` for the register.
    pub fn new(modulus: u64, base: u64) -> Result<Self> {
        Self::validate_pair(modulus, base)?;
        let square = modulus
            .checked_mul(modulus)
            .ok_or_else(|| Error::Input(format!("modulus {modulus} too large")))?;
        let q = (square + 1).next_power_of_two();
        Self::with_register_size(modulus, base, q)
    }

    pub fn with_register_size(modulus: u64, base: u64, register_size: u64) -> Result<Self> {
        Self::validate_pair(modulus, base)?;
        let square = modulus as u128 * modulus as u128;
        let q = register_size as u128;
        if !register_size.is_power_of_two() || q <= square || q >= 2 * square {
            return Err(Error::Input(format!(
                "register size {register_size} must be a power of two in ({square}, {})",
                2 * square
            )));
        }
        Ok(Self {
            modulus,
            base,
            register_size,
        })
    }

    fn validate_pair(modulus: u64, base: u64) -> Result<()> {
        if modulus < 3 {
            return Err(Error::Input(format!(
                "modulus {modulus} must be at least 3"
            )));
        }
        if base <= 1 || base >= modulus {
            return Err(Error::Input(format!(
                "base {base} must lie in (1, {modulus})"
            )));
        }
        if gcd(base, modulus) != 1 {
            return Err(Error::Input(format!(
                "base {base} shares a factor with {modulus}"
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn register_size(&self) -> u64 {
        self.register_size
    }

    /// `f(a) = y^a mod N`.
    pub fn f(&self, a: u64) -> u64 {
        modpow(self.base, a, self.modulus)
    }

    /// The oracle predicate: `f(a) = f(1)`.
    pub fn oracle(&self) -> impl Fn(u64) -> bool + '_ {
        let target = self.f(1);
        move |a| self.f(a) == target
    }

    /// Arguments in `[0, q)` accepted by the oracle, in increasing order.
    pub fn marked_arguments(&self) -> Vec<u64> {
        let oracle = self.oracle();
        (0..self.register_size).filter(|&a| oracle(a)).collect()
    }
}

fn check_cap(needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::Resource { needed, cap });
    }
    Ok(())
}

/// `(1/√q) Σ_a |a⟩|y^a mod N⟩` as a pair-shaped state of size `q × N`.
pub fn build_register(inst: &PeriodInstance, memory_cap: u64) -> Result<StateVector> {
    let q = inst.register_size as usize;
    let n = inst.modulus as usize;
    check_cap(q as u128 * n as u128, memory_cap)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); q * n];
    let amp = Complex64::new(1.0 / (q as f64).sqrt(), 0.0);
    // f(a+1) = y·f(a) mod N
    let mut value = 1 % inst.modulus;
    for a in 0..q {
        amplitudes[a * n + value as usize] = amp;
        value = value * inst.base % inst.modulus;
    }
    StateVector::from_amplitudes(amplitudes, RegisterShape::Pair(q, n))
}
