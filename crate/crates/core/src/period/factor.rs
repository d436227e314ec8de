use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{grover_period, shor_period, Counters, Method, PeriodInstance, PeriodSettings};
use crate::error::{Error, Result};
use crate::number::{gcd, is_prime, modpow, prime_power};

/// How a factor was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FactorRoute {
    /// From an even period `r` of `base` with `base^(r/2) ≢ −1`.
    Period { base: u64, period: u64 },
    /// The random base already shared a factor with `N`.
    SharedFactor { base: u64 },
    /// `N` is even; no period finding attempted.
    Even,
    /// `N = p^k`; no period finding attempted.
    PrimePower { prime: u64, exponent: u32 },
}

impl FactorRoute {
    /// Whether the factor came from classical pre-checks on `N` itself.
    pub fn is_classical_precheck(&self) -> bool {
        matches!(self, FactorRoute::Even | FactorRoute::PrimePower { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub modulus: u64,
    /// Non-trivial factors with `factors[0] * factors[1] == modulus`, ascending.
    pub factors: [u64; 2],
    pub method: Method,
    pub route: FactorRoute,
    pub bases_tried: u64,
    pub counters: Counters,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorBudget {
    /// Random bases to try before giving up.
    pub max_bases: usize,
    pub period: PeriodSettings,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            max_bases: 16,
            period: PeriodSettings::default(),
        }
    }
}

fn split(modulus: u64, d: u64) -> [u64; 2] {
    let (a, b) = (d, modulus / d);
    [a.min(b), a.max(b)]
}

/// Factors `modulus` through period finding on random bases.
///
/// Even moduli and prime powers are answered classically; primes and
/// moduli below 3 are rejected.
pub fn factor<R: Rng + ?Sized>(
    modulus: u64,
    method: Method,
    rng: &mut R,
    budget: &FactorBudget,
) -> Result<Factorization> {
    if modulus < 3 {
        return Err(Error::Input(format!("{modulus} is too small to factor")));
    }
    let classical = |route, d| Factorization {
        modulus,
        factors: split(modulus, d),
        method,
        route,
        bases_tried: 0,
        counters: Counters::default(),
    };
    if modulus.is_multiple_of(2) {
        return Ok(classical(FactorRoute::Even, 2));
    }
    if is_prime(modulus) {
        return Err(Error::Input(format!("{modulus} is prime")));
    }
    if let Some((prime, exponent)) = prime_power(modulus) {
        return Ok(classical(
            FactorRoute::PrimePower { prime, exponent },
            prime,
        ));
    }

    let mut counters = Counters::default();
    for tried in 1..=budget.max_bases as u64 {
        let base = rng.random_range(2..modulus);
        let shared = gcd(base, modulus);
        if shared > 1 {
            return Ok(Factorization {
                modulus,
                factors: split(modulus, shared),
                method,
                route: FactorRoute::SharedFactor { base },
                bases_tried: tried,
                counters,
            });
        }
        let inst = PeriodInstance::new(modulus, base)?;
        let found = match method {
            Method::Shor => shor_period(&inst, rng, &budget.period),
            Method::GroverAdiabatic => grover_period(&inst, rng, &budget.period),
        };
        let period = match found {
            Ok(res) => {
                counters.absorb(&res.counters);
                res.period
            }
            Err(Error::BudgetExhausted {
                counters: spent, ..
            }) => {
                counters.absorb(&spent);
                continue;
            }
            Err(e) => return Err(e),
        };
        if period % 2 != 0 {
            continue;
        }
        let half = modpow(base, period / 2, modulus);
        if half == modulus - 1 {
            continue;
        }
        let d = gcd(half - 1, modulus);
        return Ok(Factorization {
            modulus,
            factors: split(modulus, d),
            method,
            route: FactorRoute::Period { base, period },
            bases_tried: tried,
            counters,
        });
    }
    Err(Error::BudgetExhausted { method, counters })
}
