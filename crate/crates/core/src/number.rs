//! Integer utilities for order finding and factoring.

use crate::error::{Error, Result};

/// Largest modulus accepted by [`order_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn modpow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    let m = modulus as u128;
    let mut result = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// Multiplicative order of `base` modulo `modulus` by direct iteration.
pub fn order_bruteforce(base: u64, modulus: u64) -> Result<u64> {
    if !(2..=BRUTEFORCE_LIMIT).contains(&modulus) {
        return Err(Error::Input(format!(
            "modulus {modulus} outside [2, {BRUTEFORCE_LIMIT}]"
        )));
    }
    if gcd(base, modulus) != 1 {
        return Err(Error::Input(format!(
            "{base} is not coprime with {modulus}"
        )));
    }
    let b = base % modulus;
    let mut value = b;
    let mut r = 1;
    while value != 1 {
        value = value * b % modulus;
        r += 1;
    }
    Ok(r)
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// `Some((p, k))` when `n = p^k` with `p` prime and `k ≥ 2`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match prime_factors(n).as_slice() {
        [p] if *p != n => {
            let mut k = 0;
            let mut m = n;
            while m.is_multiple_of(*p) {
                m /= p;
                k += 1;
            }
            Some((*p, k))
        }
        _ => None,
    }
}

/// Reduces a known multiple of the order of `base` to the order itself by
/// dividing out prime factors while `base^(m/p) ≡ 1` still holds.
/// Returns `None` when `base^multiple ≢ 1`.
pub fn minimize_order(base: u64, multiple: u64, modulus: u64) -> Option<u64> {
    if multiple == 0 || modpow(base, multiple, modulus) != 1 {
        return None;
    }
    let mut r = multiple;
    for p in prime_factors(multiple) {
        while r.is_multiple_of(p) && modpow(base, r / p, modulus) == 1 {
            r /= p;
        }
    }
    Some(r)
}

/// Largest convergent denominator of `c/q` not exceeding `bound`, or `None`
/// when `c = 0`.
pub fn continued_fraction_denominator(c: u64, q: u64, bound: u64) -> Option<u64> {
    if c == 0 || q == 0 {
        return None;
    }
    // convergent recurrence: k_n = a_n k_{n−1} + k_{n−2}
    let (mut num, mut den) = (c, q);
    let (mut prev, mut cur) = (0u64, 1u64);
    let mut best = None;
    // the leading term ⌊c/q⌋ contributes denominator 1
    let a0 = num / den;
    (num, den) = (den, num - a0 * den);
    if cur <= bound {
        best = Some(cur);
    }
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        let next = a.saturating_mul(cur).saturating_add(prev);
        if next > bound {
            break;
        }
        (prev, cur) = (cur, next);
        best = Some(cur);
    }
    best
}
