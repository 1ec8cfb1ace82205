//! Incremental digit automata for streaming over consecutive integers.
//!
//! Both counters keep the full digit vector of the current `n` and its digit sum,
//! and step to `n + 1` in amortised O(1) digit operations. They work on `u64`
//! values, which is the regime of every bulk range computation in the crate.

use super::basis::AlphaParams;
use crate::error::{param, Result};

pub trait DigitCounter {
    /// The current integer.
    fn value(&self) -> u64;
    /// Digit sum of the current integer.
    fn digit_sum(&self) -> u64;
    /// Advance to the next integer.
    fn increment(&mut self);
}

/// Base-q digits of a running integer.
#[derive(Clone, Debug)]
pub struct BaseQCounter {
    q: u32,
    digits: Vec<u32>,
    sum: u64,
    n: u64,
}

impl BaseQCounter {
    pub fn new(q: u32, start: u64) -> Result<Self> {
        if q < 2 {
            return param(format!("base q must be at least 2, got {q}"));
        }
        let mut digits = Vec::new();
        let mut rest = start;
        while rest > 0 {
            digits.push((rest % u64::from(q)) as u32);
            rest /= u64::from(q);
        }
        let sum = digits.iter().map(|&b| u64::from(b)).sum();
        Ok(Self {
            q,
            digits,
            sum,
            n: start,
        })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit sum of `n mod q^t`.
    pub fn truncated_sum(&self, t: usize) -> u64 {
        self.digits.iter().take(t).map(|&b| u64::from(b)).sum()
    }
}

impl DigitCounter for BaseQCounter {
    fn value(&self) -> u64 {
        self.n
    }

    fn digit_sum(&self) -> u64 {
        self.sum
    }

    fn increment(&mut self) {
        let top = self.q - 1;
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.digits.push(1);
                self.sum += 1;
                break;
            }
            if self.digits[i] < top {
                self.digits[i] += 1;
                self.sum += 1;
                break;
            }
            self.digits[i] = 0;
            self.sum -= u64::from(top);
            i += 1;
        }
        self.n += 1;
    }
}

/// The Ostrowski basis restricted to values that fit a `u64`, with greedy
/// encoding on machine integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiTable {
    params: AlphaParams,
    q: Vec<u64>,
    bounds: Vec<u32>,
}

impl OstrowskiTable {
    pub fn new(params: AlphaParams) -> Self {
        let mut q: Vec<u64> = vec![1, 1];
        loop {
            let n = q.len();
            let a = u64::from(params.partial_quotient(n));
            match a
                .checked_mul(q[n - 1])
                .and_then(|x| x.checked_add(q[n - 2]))
            {
                Some(next) => q.push(next),
                None => break,
            }
        }
        let bounds = (0..q.len())
            .map(|i| {
                if i == 0 {
                    0
                } else {
                    params.partial_quotient(i + 1)
                }
            })
            .collect();
        Self { params, q, bounds }
    }

    pub fn params(&self) -> AlphaParams {
        self.params
    }

    pub fn q(&self) -> &[u64] {
        &self.q
    }

    /// Largest index `k` with `q_k ≤ limit`.
    pub fn index_at_most(&self, limit: u64) -> usize {
        self.q.iter().rposition(|&x| x <= limit).unwrap_or(0)
    }

    /// Exclusive upper bound on values the counters accept.
    pub fn capacity(&self) -> u64 {
        self.q[self.q.len() - 2]
    }

    pub fn encode(&self, n: u64) -> Vec<u32> {
        assert!(n < self.capacity(), "{n} exceeds the u64 Ostrowski table");
        if n == 0 {
            return Vec::new();
        }
        let top = self.q.iter().rposition(|&x| x <= n).unwrap();
        let mut digits = vec![0u32; top + 1];
        greedy_fill(&self.q, &self.bounds, &mut digits, n);
        digits
    }

    pub fn digit_sum(&self, n: u64) -> u64 {
        self.encode(n).iter().map(|&b| u64::from(b)).sum()
    }
}

fn greedy_fill(q: &[u64], bounds: &[u32], digits: &mut [u32], mut rem: u64) -> u64 {
    let mut sum = 0;
    for i in (0..digits.len()).rev() {
        let b = (rem / q[i]).min(u64::from(bounds[i]));
        digits[i] = b as u32;
        rem -= b * q[i];
        sum += b;
    }
    debug_assert_eq!(rem, 0);
    sum
}

/// Ostrowski digits of a running integer.
#[derive(Clone, Debug)]
pub struct OstrowskiCounter {
    table: OstrowskiTable,
    digits: Vec<u32>,
    sum: u64,
    n: u64,
}

impl OstrowskiCounter {
    pub fn new(params: AlphaParams, start: u64) -> Self {
        Self::with_table(OstrowskiTable::new(params), start)
    }

    pub fn with_table(table: OstrowskiTable, start: u64) -> Self {
        let mut digits = table.encode(start);
        let sum = digits.iter().map(|&b| u64::from(b)).sum();
        digits.resize(table.q.len(), 0);
        Self {
            table,
            digits,
            sum,
            n: start,
        }
    }

    /// Digits padded with zeros to the table length.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `S_{α,k}(n)`.
    pub fn truncated_sum(&self, k: usize) -> u64 {
        self.digits.iter().take(k).map(|&b| u64::from(b)).sum()
    }

    /// `t_α(n;k)`.
    pub fn truncation(&self, k: usize) -> u64 {
        self.digits
            .iter()
            .zip(&self.table.q)
            .take(k)
            .map(|(&b, &q)| u64::from(b) * q)
            .sum()
    }
}

impl DigitCounter for OstrowskiCounter {
    fn value(&self) -> u64 {
        self.n
    }

    fn digit_sum(&self) -> u64 {
        self.sum
    }

    /// Finds the lowest `j` such that `t + 1 < q_j` for the value `t` of the digits
    /// below `j`, and such that the digit at `j` stays compatible with the new low
    /// part; the high digits are kept and `t + 1` is re-encoded greedily below `j`.
    fn increment(&mut self) {
        assert!(
            self.n + 1 < self.table.capacity(),
            "Ostrowski counter overflow"
        );
        let q = &self.table.q;
        let bounds = &self.table.bounds;
        let mut low = 0u64;
        let mut j = 1;
        loop {
            low += u64::from(self.digits[j - 1]) * q[j - 1];
            let next = low + 1;
            if next < q[j] && (self.digits[j] < bounds[j] || next < q[j - 1]) {
                let removed: u64 = self.digits[..j].iter().map(|&b| u64::from(b)).sum();
                let added = greedy_fill(q, bounds, &mut self.digits[..j], next);
                self.sum = self.sum - removed + added;
                break;
            }
            j += 1;
        }
        self.n += 1;
    }
}
