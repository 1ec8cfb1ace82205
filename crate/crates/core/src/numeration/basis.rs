use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{param, Error, Result};
use crate::quadratic::{phi_pow, QuadNum};

/// Largest supported `m`; keeps `d = m² + 4m` inside a `u64`.
pub const MAX_M: u32 = 1 << 31;

/// Parameters of α = [0; 1, m, 1, m, …].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlphaParams {
    m: u32,
}

impl AlphaParams {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return param(format!("m must be at least 2, got {m}"));
        }
        if m > MAX_M {
            return param(format!("m must be at most {MAX_M}, got {m}"));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The discriminant `d = m² + 4m` of the field containing φ.
    pub fn d(&self) -> u64 {
        let m = u64::from(self.m);
        m * m + 4 * m
    }

    /// Partial quotient `a_i` for `i ≥ 1`: 1 at odd indices, m at even ones.
    pub fn partial_quotient(&self, i: usize) -> u32 {
        debug_assert!(i >= 1, "partial quotients are indexed from 1");
        if i % 2 == 1 {
            1
        } else {
            self.m
        }
    }
}

/// Source of the partial quotients `a₁, a₂, …` behind a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quotients {
    Periodic(AlphaParams),
    /// `a₁..a_K` given explicitly; the basis stops at `q_K`.
    Finite(Vec<u32>),
}

impl Quotients {
    /// `a_i` for `i ≥ 1`, or `None` past the end of a finite list.
    pub fn get(&self, i: usize) -> Option<u32> {
        match self {
            Quotients::Periodic(p) => Some(p.partial_quotient(i)),
            Quotients::Finite(a) => a.get(i - 1).copied(),
        }
    }
}

/// The denominators `q₀..q_K` of the convergents, as exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    quotients: Quotients,
    q: Vec<BigUint>,
}

impl Basis {
    /// `q₀..q_K` for the periodic expansion with parameter `m`.
    pub fn periodic(params: AlphaParams, k: usize) -> Self {
        let mut basis = Basis {
            quotients: Quotients::Periodic(params),
            q: vec![BigUint::one(), BigUint::one()],
        };
        basis.extend_to(k);
        basis.q.truncate(k.max(1) + 1);
        basis
    }

    /// Smallest periodic basis whose top element exceeds `n`.
    pub fn covering(params: AlphaParams, n: &BigUint) -> Self {
        let mut basis = Basis::periodic(params, 1);
        while basis.q.last().unwrap() <= n {
            let k = basis.q.len();
            basis.extend_to(k);
        }
        basis
    }

    /// Basis for arbitrary positive partial quotients `a₁..a_K` (so `q₀ = 1`,
    /// `q₁ = a₁`, `q_n = a_n q_{n−1} + q_{n−2}`).
    pub fn from_partial_quotients(a: &[u32]) -> Result<Self> {
        if a.is_empty() {
            return param("at least one partial quotient is required");
        }
        if let Some(i) = a.iter().position(|&x| x == 0) {
            return param(format!("partial quotient a_{} must be positive", i + 1));
        }
        let mut q = Vec::with_capacity(a.len() + 1);
        q.push(BigUint::one());
        q.push(BigUint::from(a[0]));
        for n in 2..=a.len() {
            let next = &q[n - 1] * a[n - 1] + &q[n - 2];
            q.push(next);
        }
        Ok(Basis {
            quotients: Quotients::Finite(a.to_vec()),
            q,
        })
    }

    fn extend_to(&mut self, k: usize) {
        while self.q.len() <= k {
            let n = self.q.len();
            let a = self
                .quotients
                .get(n)
                .expect("periodic quotients are unbounded");
            let next = &self.q[n - 1] * a + &self.q[n - 2];
            self.q.push(next);
        }
    }

    pub fn quotients(&self) -> &Quotients {
        &self.quotients
    }

    /// Largest index `K` held.
    pub fn top(&self) -> usize {
        self.q.len() - 1
    }

    pub fn q(&self, i: usize) -> &BigUint {
        &self.q[i]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.q
    }

    /// Bound on digit `b_i`: `a₁ − 1` at index 0, `a_{i+1}` above.
    pub(crate) fn digit_bound(&self, i: usize) -> Option<u32> {
        let a = self.quotients.get(i + 1)?;
        Some(if i == 0 { a - 1 } else { a })
    }

    /// Checks the three digit conditions. Trailing zeros are allowed.
    pub fn validate(&self, digits: &[u32]) -> Result<()> {
        for (i, &b) in digits.iter().enumerate() {
            let bound = self.digit_bound(i).ok_or_else(|| {
                Error::InvalidDigits(format!("digit index {i} is beyond the partial quotients"))
            })?;
            if b > bound {
                return Err(Error::InvalidDigits(format!(
                    "b_{i} = {b} exceeds its bound {bound}"
                )));
            }
            if i >= 1 && b == bound && digits[i - 1] != 0 {
                return Err(Error::InvalidDigits(format!(
                    "b_{i} = a_{} forces b_{} = 0, found {}",
                    i + 1,
                    i - 1,
                    digits[i - 1]
                )));
            }
        }
        Ok(())
    }

    /// Greedy Ostrowski encoding, least significant digit first, no trailing zeros.
    pub fn encode(&self, n: &BigUint) -> Result<Vec<u32>> {
        if n.is_zero() {
            return Ok(Vec::new());
        }
        let top = self.top();
        if n >= &self.q[top] {
            return param(format!("{n} is not below q_{top} = {}", self.q[top]));
        }
        // largest index with q_l <= n
        let mut l = top;
        while &self.q[l] > n {
            l -= 1;
        }
        let mut digits = vec![0u32; l + 1];
        let mut rem = n.clone();
        for i in (1..=l).rev() {
            if rem < self.q[i] {
                continue;
            }
            let bound = self.digit_bound(i).unwrap();
            let b = (&rem / &self.q[i])
                .to_u64()
                .map_or(bound, |v| v.min(u64::from(bound)) as u32);
            rem -= &self.q[i] * b;
            digits[i] = b;
        }
        digits[0] = rem.to_u32().expect("remainder below q_1");
        debug_assert!(self.validate(&digits).is_ok());
        Ok(digits)
    }

    /// `Σ b_i q_i`; digit strings longer than the basis are rejected.
    pub fn decode(&self, digits: &[u32]) -> Result<BigUint> {
        if digits.len() > self.q.len() {
            return param(format!(
                "{} digits exceed a basis of {} elements",
                digits.len(),
                self.q.len()
            ));
        }
        self.validate(digits)?;
        Ok(digits
            .iter()
            .zip(&self.q)
            .filter(|(&b, _)| b != 0)
            .map(|(&b, q)| q * b)
            .sum())
    }
}

/// `q₀..q_K` for α = [0; 1, m, 1, m, …].
pub fn build_basis(m: u32, k: usize) -> Result<Basis> {
    let params = AlphaParams::new(m)?;
    if k < 1 {
        return param("K must be at least 1");
    }
    Ok(Basis::periodic(params, k))
}

/// Closed form of `q_n` in Q(√d):
/// `q_{2ℓ} = (m+√d)/(2√d)·φ^ℓ − (m−√d)/(2√d)·φ^{−ℓ}`,
/// `q_{2ℓ+1} = (φ^{ℓ+1} − φ^{−ℓ−1})/√d`.
pub fn closed_form_q(m: u32, n: usize) -> Result<QuadNum> {
    let params = AlphaParams::new(m)?;
    let d = params.d();
    let mi = BigInt::from(m);
    let sqrt_d = QuadNum::new(BigInt::zero(), BigInt::one(), BigInt::one(), d)?;
    let ell = (n / 2) as i64;
    let value = if n.is_multiple_of(2) {
        let plus = QuadNum::new(mi.clone(), BigInt::one(), BigInt::from(2), d)?;
        let minus = QuadNum::new(mi, -BigInt::one(), BigInt::from(2), d)?;
        let lhs = &(&plus / &sqrt_d) * &phi_pow(m, ell)?;
        let rhs = &(&minus / &sqrt_d) * &phi_pow(m, -ell)?;
        &lhs - &rhs
    } else {
        &(&phi_pow(m, ell + 1)? - &phi_pow(m, -ell - 1)?) / &sqrt_d
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_u64(b: &Basis) -> Vec<u64> {
        b.values()
            .iter()
            .map(|x| x.to_u64_digits().first().copied().unwrap_or(0))
            .collect()
    }

    #[test]
    fn basis_small_cases() {
        assert_eq!(
            as_u64(&build_basis(2, 7).unwrap()),
            [1, 1, 3, 4, 11, 15, 41, 56]
        );
        assert_eq!(as_u64(&build_basis(3, 4).unwrap()), [1, 1, 4, 5, 19]);
        assert_eq!(as_u64(&build_basis(2, 1).unwrap()), [1, 1]);
    }

    #[test]
    fn basis_rejects_bad_parameters() {
        assert!(matches!(build_basis(1, 5), Err(Error::Parameter(_))));
        assert!(matches!(build_basis(0, 5), Err(Error::Parameter(_))));
        assert!(matches!(build_basis(2, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn lacunarity() {
        for m in 2..=6u32 {
            let b = build_basis(m, 60).unwrap();
            for k in 1..60 {
                // q_{k+1}/q_k >= 1 + 1/(m+1)  <=>  (m+1) q_{k+1} >= (m+2) q_k
                assert!(b.q(k + 1) * (m + 1) >= b.q(k) * (m + 2), "m={m} k={k}");
                assert!(b.q(k + 1) > b.q(k));
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_q(2, 4).unwrap(), QuadNum::from_int(11, 12));
        assert_eq!(closed_form_q(2, 0).unwrap(), QuadNum::from_int(1, 12));
        assert_eq!(closed_form_q(3, 3).unwrap(), QuadNum::from_int(5, 21));
    }

    #[test]
    fn closed_form_matches_recurrence() {
        for m in 2..=6u32 {
            let b = build_basis(m, 60).unwrap();
            let d = AlphaParams::new(m).unwrap().d();
            for n in 0..=60 {
                let expected = QuadNum::from_integer(BigInt::from(b.q(n).clone()), d);
                assert_eq!(closed_form_q(m, n).unwrap(), expected, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn general_quotients() {
        // golden ratio: Zeckendorf with q = 1, 1, 2, 3, 5, 8
        let b = Basis::from_partial_quotients(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(as_u64(&b), [1, 1, 2, 3, 5, 8]);
        let digits = b.encode(&BigUint::from(7u32)).unwrap();
        assert_eq!(digits, [0, 0, 1, 0, 1]);
        assert_eq!(b.decode(&digits).unwrap(), BigUint::from(7u32));
        for n in 0u32..8 {
            let ds = b.encode(&BigUint::from(n)).unwrap();
            assert_eq!(b.decode(&ds).unwrap(), BigUint::from(n));
        }
        // a₁ > 1 allows a nonzero b₀
        let b = Basis::from_partial_quotients(&[3, 2, 4]).unwrap();
        assert_eq!(as_u64(&b), [1, 3, 7, 31]);
        for n in 0u32..31 {
            let ds = b.encode(&BigUint::from(n)).unwrap();
            assert_eq!(b.decode(&ds).unwrap(), BigUint::from(n), "n={n} {ds:?}");
        }
        assert!(b.encode(&BigUint::from(31u32)).is_err());
        assert!(Basis::from_partial_quotients(&[1, 0]).is_err());
    }
}
