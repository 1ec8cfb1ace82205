//! Joint exponential sums over the base-q and Ostrowski digit sums.

use std::ops::Range;

use num_complex::Complex64;
use num_integer::Integer;

use super::angle::{Angle, PhaseTable};
use super::sum::{blocked_sum, compensated_sum, ComplexSum};
use crate::error::{param, Error, Result};
use crate::numeration::{
    AlphaParams, BaseQCounter, DigitCounter, OstrowskiCounter, OstrowskiTable,
};

const PHASES: usize = 4096;

/// `Σ_{n<N} e(θ S_q(n) + γ S_α(n))`.
pub fn joint_exp_sum(n: u64, q: u32, m: u32, theta: Angle, gamma: Angle) -> Result<Complex64> {
    Ok(joint_exp_sum_at(&[n], q, m, theta, gamma)?[0])
}

/// The joint sum at each of the increasing cut-offs in `grid`, from one pass.
pub fn joint_exp_sum_at(
    grid: &[u64],
    q: u32,
    m: u32,
    theta: Angle,
    gamma: Angle,
) -> Result<Vec<Complex64>> {
    BaseQCounter::new(q, 0)?;
    let table = checked_table(m, grid)?;
    let tq = PhaseTable::new(theta, PHASES);
    let ta = PhaseTable::new(gamma, PHASES);
    prefix_sums(grid, |range| {
        let mut cq = BaseQCounter::new(q, range.start).expect("q validated");
        let mut ca = OstrowskiCounter::with_table(table.clone(), range.start);
        let mut acc = ComplexSum::default();
        for _ in range {
            acc.add(tq.get(cq.digit_sum()) * ta.get(ca.digit_sum()));
            cq.increment();
            ca.increment();
        }
        acc.value()
    })
}

/// `Σ_{n<N} e(a n + (k₁/m₁) S_q(n))`, under `1 ≤ k₁ < m₁` and `gcd(m₁, q − 1) = 1`.
pub fn gelfond_sum(n: u64, q: u32, k1: u32, m1: u32, a: Angle) -> Result<Complex64> {
    Ok(gelfond_sum_at(&[n], q, k1, m1, a)?[0])
}

pub fn gelfond_sum_at(grid: &[u64], q: u32, k1: u32, m1: u32, a: Angle) -> Result<Vec<Complex64>> {
    BaseQCounter::new(q, 0)?;
    if !(1 <= k1 && k1 < m1) {
        return param(format!("need 1 ≤ k₁ < m₁, got k₁ = {k1}, m₁ = {m1}"));
    }
    if m1.gcd(&(q - 1)) != 1 {
        return Err(Error::Hypothesis(format!(
            "gcd(m₁, q − 1) = gcd({m1}, {}) ≠ 1",
            q - 1
        )));
    }
    check_grid(grid)?;
    let digit = PhaseTable::new(Angle::rational(i64::from(k1), i64::from(m1))?, PHASES);
    prefix_sums(grid, |range| {
        let mut cq = BaseQCounter::new(q, range.start).expect("q validated");
        let mut acc = ComplexSum::default();
        for n in range {
            acc.add(a.times_u64(n).e() * digit.get(cq.digit_sum()));
            cq.increment();
        }
        acc.value()
    })
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return param("cut-offs must be nondecreasing");
    }
    Ok(())
}

fn checked_table(m: u32, grid: &[u64]) -> Result<OstrowskiTable> {
    check_grid(grid)?;
    let table = OstrowskiTable::new(AlphaParams::new(m)?);
    let top = grid.last().copied().unwrap_or(0);
    if top >= table.capacity() {
        return Err(Error::Resource(format!(
            "N = {top} exceeds the streaming counter range {}",
            table.capacity()
        )));
    }
    Ok(table)
}

/// Sums `leaf` over `[0, grid[0])`, `[grid[0], grid[1])`, ... and accumulates.
fn prefix_sums<F>(grid: &[u64], leaf: F) -> Result<Vec<Complex64>>
where
    F: Fn(Range<u64>) -> Complex64 + Sync + Send,
{
    let mut parts = Vec::with_capacity(grid.len());
    let mut out = Vec::with_capacity(grid.len());
    let mut lo = 0;
    for &hi in grid {
        parts.push(blocked_sum(lo..hi, &leaf));
        out.push(compensated_sum(parts.iter().copied()));
        lo = hi;
    }
    Ok(out)
}
