use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::basis::{AlphaParams, Basis};
use crate::error::{param, Result};

/// A validated Ostrowski digit string for α = [0; 1, m, …], least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    params: AlphaParams,
    digits: Vec<u32>,
}

impl DigitString {
    pub fn new(params: AlphaParams, digits: Vec<u32>) -> Result<Self> {
        let basis = Basis::periodic(params, digits.len().max(1));
        basis.validate(&digits)?;
        Ok(Self { params, digits })
    }

    pub fn params(&self) -> AlphaParams {
        self.params
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().map(|&b| u64::from(b)).sum()
    }
}

/// Base-q digits of a non-negative integer, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseQDigits {
    pub q: u32,
    pub digits: Vec<u32>,
}

impl BaseQDigits {
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().map(|&b| u64::from(b)).sum()
    }
}

pub fn base_q_digits(n: &BigUint, q: u32) -> Result<BaseQDigits> {
    if q < 2 {
        return param(format!("base q must be at least 2, got {q}"));
    }
    let radix = BigUint::from(q);
    let mut digits = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem(&radix);
        digits.push(rem.to_u32().unwrap());
        rest = quot;
    }
    Ok(BaseQDigits { q, digits })
}

/// Greedy Ostrowski representation of `n`.
pub fn encode(n: &BigUint, m: u32) -> Result<DigitString> {
    let params = AlphaParams::new(m)?;
    let basis = Basis::covering(params, n);
    let digits = basis.encode(n)?;
    Ok(DigitString { params, digits })
}

/// `Σ b_i q_i`.
pub fn decode(ds: &DigitString) -> Result<BigUint> {
    let basis = Basis::periodic(ds.params, ds.digits.len().max(1));
    basis.decode(&ds.digits)
}

/// Ostrowski digit sum; zero for negative `n`.
pub fn s_alpha(n: &BigInt, m: u32) -> Result<u64> {
    let params = AlphaParams::new(m)?;
    match n.to_biguint() {
        Some(n) => {
            let basis = Basis::covering(params, &n);
            Ok(basis.encode(&n)?.iter().map(|&b| u64::from(b)).sum())
        }
        None => Ok(0),
    }
}

/// Base-q digit sum; zero for negative `n`.
pub fn s_q(n: &BigInt, q: u32) -> Result<u64> {
    if q < 2 {
        return param(format!("base q must be at least 2, got {q}"));
    }
    if n.sign() == Sign::Minus {
        return Ok(0);
    }
    Ok(base_q_digits(n.magnitude(), q)?.digit_sum())
}

/// `(t_α(n;k), S_{α,k}(n))`: value and digit sum of the digits below index `k`.
pub fn truncate_alpha(n: &BigUint, k: usize, m: u32) -> Result<(BigUint, u64)> {
    let params = AlphaParams::new(m)?;
    if k < 1 {
        return param("truncation index k must be at least 1");
    }
    let basis = Basis::covering(params, n);
    let digits = basis.encode(n)?;
    let mut t = BigUint::zero();
    let mut s = 0u64;
    for (i, &b) in digits.iter().enumerate().take(k) {
        if b != 0 {
            t += basis.q(i) * b;
            s += u64::from(b);
        }
    }
    Ok((t, s))
}

/// `S_q(n mod q^t)`; zero for negative `n`.
pub fn s_q_trunc(n: &BigInt, t: u32, q: u32) -> Result<u64> {
    if q < 2 {
        return param(format!("base q must be at least 2, got {q}"));
    }
    if n.sign() == Sign::Minus {
        return Ok(0);
    }
    let window = BigUint::from(q).pow(t);
    let low = n.magnitude() % window;
    Ok(base_q_digits(&low, q)?.digit_sum())
}

/// Number of valid digit strings `b₀..b_{k−1}` (zero padded), counted by a
/// transfer over positions from the top down. Equals `q_k` by uniqueness.
pub fn count_valid_strings(k: usize, m: u32) -> Result<BigUint> {
    let params = AlphaParams::new(m)?;
    if k < 1 {
        return param("length k must be at least 1");
    }
    let basis = Basis::periodic(params, k);
    // free: strings of the processed top part whose lowest digit is not maximal
    // forced: those whose lowest digit is maximal, forcing the next digit to 0
    let mut free = BigUint::one();
    let mut forced = BigUint::zero();
    for i in (0..k).rev() {
        let bound = basis.digit_bound(i).unwrap();
        let total = &free + &forced;
        let (next_free, next_forced) = if i == 0 {
            // b₀ carries no forcing of its own
            (&free * (bound + 1) + &forced, BigUint::zero())
        } else if bound == 0 {
            (total, BigUint::zero())
        } else {
            (&free * bound + &forced, free.clone())
        };
        free = next_free;
        forced = next_forced;
    }
    Ok(free + forced)
}
