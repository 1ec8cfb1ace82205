//! Checkers for the elementary exponential-sum inequalities, the Fejér kernel
//! `κ_H`, the sums `M_k^{(i)}`, and the truncation mismatch counts.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::Serialize;

use super::angle::Angle;
use super::sum::{compensated_sum, Neumaier};
use crate::error::{param, Result};
use crate::intervals::Regime;
use crate::numeration::{
    AlphaParams, BaseQCounter, DigitCounter, OstrowskiCounter, OstrowskiTable,
};
use crate::quadratic::QuadNum;

/// `M_k^{(i)}(h, γ) = Σ_u e(γ S_α(u) − h p_k(u))` over `u < q_{k−1}` (first regime)
/// or `q_{k−1} ≤ u < q_k` (second regime).
pub fn m_sum(k: usize, h: i64, gamma: Angle, m: u32, which: Regime) -> Result<Complex64> {
    let params = AlphaParams::new(m)?;
    if k < 2 {
        return param(format!("k must be at least 2, got {k}"));
    }
    let table = OstrowskiTable::new(params);
    if k + 2 >= table.q().len() {
        return param(format!("k = {k} is out of range"));
    }
    let (lo, hi) = match which {
        Regime::First => (0, table.q()[k - 1]),
        Regime::Second => (table.q()[k - 1], table.q()[k]),
    };
    // −h p_k(u) = (−1)^{k+1} h u φ
    let phi = Angle::from_quad(&QuadNum::phi(params));
    let step = phi.times(if k.is_multiple_of(2) { -h } else { h });
    let mut counter = OstrowskiCounter::with_table(table, lo);
    let terms = (lo..hi).map(|u| {
        let z = (gamma.times_u64(counter.digit_sum()) + step.times_u64(u)).e();
        counter.increment();
        z
    });
    Ok(compensated_sum(terms))
}

/// Fejér-type kernel `κ_H(t) = (2(H+1))^{−1} Σ_{|h|≤H} (1 − |h|/(H+1)) e(ht)`,
/// evaluated as a real cosine sum.
pub fn kappa(big_h: u32, t: f64) -> Result<f64> {
    if big_h < 1 {
        return param("H must be at least 1");
    }
    let h1 = f64::from(big_h) + 1.0;
    let r = t - t.round();
    let mut s = Neumaier::default();
    s.add(1.0);
    for h in 1..=big_h {
        let w = 1.0 - f64::from(h) / h1;
        s.add(2.0 * w * (std::f64::consts::TAU * f64::from(h) * r).cos());
    }
    Ok(s.value() / (2.0 * h1))
}

/// Both sides of the Weyl–van der Corput inequality
/// `|Σ z_n|² ≤ (N+R−1)/R · Σ_{|r|<R} (1 − |r|/R) |Σ_{0≤n,n+r<N} conj(z_n) z_{n+r}|`.
pub fn vdc_check(z: &[Complex64], r_max: usize) -> Result<(f64, f64)> {
    if r_max < 1 {
        return param("R must be at least 1");
    }
    let n = z.len();
    let lhs = compensated_sum(z.iter().copied()).norm_sqr();
    let rf = r_max as f64;
    let mut inner = Neumaier::default();
    for r in -(r_max as i64 - 1)..=(r_max as i64 - 1) {
        let shift = r.unsigned_abs() as usize;
        if shift >= n {
            continue;
        }
        let corr = if r >= 0 {
            compensated_sum((0..n - shift).map(|i| z[i].conj() * z[i + shift]))
        } else {
            compensated_sum((shift..n).map(|i| z[i].conj() * z[i - shift]))
        };
        inner.add((1.0 - shift as f64 / rf) * corr.norm());
    }
    let rhs = (n as f64 + rf - 1.0) / rf * inner.value();
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementaryCheck {
    /// `|Σ_{n<N} e(nx)|`
    pub sum_abs: f64,
    /// `min(N, 1/(2‖x‖))`, or `N` when `‖x‖ = 0`.
    pub bound: f64,
    /// `|Σ_{|r|<R} (R−|r|) e(rx) − |Σ_{r<R} e(rx)|²|`
    pub identity_residual: f64,
    pub bound_holds: bool,
    pub identity_holds: bool,
}

/// Geometric-sum bound and the Fejér identity for a single `x`.
pub fn elementary_bounds_check(x: Angle, n: u64, r: u64) -> ElementaryCheck {
    let sum = compensated_sum((0..n).map(|k| x.times_u64(k).e()));
    let nx = x.norm();
    let bound = if nx == 0.0 {
        n as f64
    } else {
        (n as f64).min(1.0 / (2.0 * nx))
    };
    let sum_abs = sum.norm();
    let ri = r as i64;
    let weighted =
        compensated_sum((-(ri - 1)..ri.max(1)).map(|k| x.times(k).e() * (ri - k.abs()) as f64));
    let weighted = if r == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        weighted
    };
    let square = compensated_sum((0..r).map(|k| x.times_u64(k).e())).norm_sqr();
    let identity_residual = (weighted - Complex64::new(square, 0.0)).norm();
    ElementaryCheck {
        sum_abs,
        bound,
        identity_residual,
        bound_holds: sum_abs <= bound * (1.0 + 1e-9),
        identity_holds: identity_residual < 1e-9,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    /// `Σ_{h∈I} min(K, ‖a + hφ‖^{−2})`
    pub lhs: f64,
    /// `√K λ(I)`
    pub sqrt_k_term: f64,
    /// `K ln λ(I)`
    pub k_log_term: f64,
    /// `lhs / (√K λ(I) + K ln λ(I))`
    pub ratio: f64,
    /// Number of integers in `I`, used as `λ(I)`.
    pub length: u64,
}

/// The discrepancy-type sum over the integers `lo ≤ h ≤ hi`, reported next to the
/// two terms of its upper bound so the implied constant can be tracked.
pub fn discrepancy_sum(
    lo: i64,
    hi: i64,
    big_k: f64,
    a: Angle,
    m: u32,
) -> Result<DiscrepancyReport> {
    let params = AlphaParams::new(m)?;
    if lo > hi {
        return param(format!("empty interval [{lo}, {hi}]"));
    }
    if big_k.is_nan() || big_k < 1.0 || !big_k.is_finite() {
        return param(format!("K must be a finite number ≥ 1, got {big_k}"));
    }
    let phi = Angle::from_quad(&QuadNum::phi(params));
    let mut s = Neumaier::default();
    for h in lo..=hi {
        let dist = (a + phi.times(h)).norm();
        let term = if dist == 0.0 {
            big_k
        } else {
            big_k.min(1.0 / (dist * dist))
        };
        s.add(term);
    }
    let length = (hi - lo) as u64 + 1;
    let lambda = length as f64;
    let sqrt_k_term = big_k.sqrt() * lambda;
    let k_log_term = big_k * lambda.ln();
    let lhs = s.value();
    Ok(DiscrepancyReport {
        lhs,
        sqrt_k_term,
        k_log_term,
        ratio: lhs / (sqrt_k_term + k_log_term),
        length,
    })
}

/// Digit window used by [`trunc_mismatch_count`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Window {
    /// Base-q digits below `q^t`.
    BaseQ { q: u32, t: u32 },
    /// Ostrowski digits below index `k` (`k ≥ 2`).
    Ostrowski { m: u32, k: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct MismatchReport {
    pub count: u64,
    /// Numerator and denominator of the bound `N r/q^t + r` or `N r/q_{k−1}`.
    pub bound_num: u128,
    pub bound_den: u128,
    /// `count ≤ bound`, decided by cross-multiplication.
    pub within_bound: bool,
}

/// Number of `n < N` with
/// `e(x S(n+r)) conj(e(x S(n))) ≠ e(x S_w(n+r)) conj(e(x S_w(n)))`,
/// where `S_w` is the digit sum restricted to the window. The event is decided
/// exactly: it happens iff `x·(S(n+r) − S(n) − S_w(n+r) + S_w(n)) ∉ ℤ`.
pub fn trunc_mismatch_count(
    n_max: u64,
    r: u64,
    window: Window,
    x: Angle,
) -> Result<MismatchReport> {
    let pairs: Box<dyn FnMut() -> (i64, i64)> = match window {
        Window::BaseQ { q, t } => {
            let mut c = BaseQCounter::new(q, 0)?;
            let t = t as usize;
            Box::new(move || {
                let v = (c.digit_sum() as i64, c.truncated_sum(t) as i64);
                c.increment();
                v
            })
        }
        Window::Ostrowski { m, k } => {
            if k < 2 {
                return param(format!("k must be at least 2, got {k}"));
            }
            let mut c = OstrowskiCounter::new(AlphaParams::new(m)?, 0);
            Box::new(move || {
                let v = (c.digit_sum() as i64, c.truncated_sum(k) as i64);
                c.increment();
                v
            })
        }
    };
    let mut next = pairs;
    let mut recent: VecDeque<(i64, i64)> = VecDeque::with_capacity(r as usize + 1);
    let mut count = 0u64;
    for idx in 0..n_max + r {
        recent.push_back(next());
        if idx >= r {
            let (full_nr, win_nr) = *recent.back().unwrap();
            let (full_n, win_n) = recent.pop_front().unwrap();
            let diff = full_nr - full_n - win_nr + win_n;
            if !x.times(diff).is_zero() {
                count += 1;
            }
        }
    }
    let (n, rr) = (u128::from(n_max), u128::from(r));
    let (bound_num, bound_den) = match window {
        Window::BaseQ { q, t } => {
            let qt = u128::from(q).pow(t);
            (n * rr + rr * qt, qt)
        }
        Window::Ostrowski { m, k } => {
            let table = OstrowskiTable::new(AlphaParams::new(m)?);
            (n * rr, u128::from(table.q()[k - 1]))
        }
    };
    Ok(MismatchReport {
        count,
        bound_num,
        bound_den,
        within_bound: u128::from(count) * bound_den <= bound_num,
    })
}
