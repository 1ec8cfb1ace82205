//! Normalised partial sums `μ_k = q_k^{−1} Σ_{u<q_k} e(γ S_α(u) + β u)` and the
//! contraction of `M̃_k = max(|μ_k|, |μ_{k−1}|)`.

use num_complex::Complex64;
use serde::Serialize;

use super::angle::Angle;
use super::sum::compensated_sum;
use crate::error::{param, Error, Result};
use crate::numeration::{AlphaParams, OstrowskiTable};

/// Relative slack allowed on the floating-point side of the decay inequalities.
pub const DECAY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct MuSequence {
    pub m: u32,
    pub gamma: Angle,
    pub beta: Angle,
    /// `q_0..q_K`.
    pub q: Vec<u64>,
    /// `μ_0..μ_K`.
    pub mu: Vec<Complex64>,
    /// `M̃_k` for `k ≥ 1`; entry 0 holds `|μ_0|`.
    pub m_tilde: Vec<f64>,
    /// `c_k = γ + β q_k`.
    pub c: Vec<Angle>,
    /// `ψ_k = 1 − min(1/12, 3‖c_k‖²/(20m))`.
    pub psi_k: Vec<f64>,
    /// `ψ = 1 − min(‖γ‖, ‖mγ‖)²/(60m³)`.
    pub psi: f64,
}

impl MuSequence {
    pub fn top(&self) -> usize {
        self.mu.len() - 1
    }
}

pub fn mu_sequence(m: u32, gamma: Angle, beta: Angle, k_max: usize) -> Result<MuSequence> {
    let params = AlphaParams::new(m)?;
    if k_max < 2 {
        return param(format!("K must be at least 2, got {k_max}"));
    }
    let table = OstrowskiTable::new(params);
    if k_max + 2 >= table.q().len() {
        return Err(Error::Resource(format!(
            "q_{k_max} does not fit in 64 bits"
        )));
    }
    let q = table.q()[..=k_max].to_vec();
    // Split u < q_k by its top digit b = b_{k−1} ≤ a_k; b = a_k forces b_{k−2} = 0,
    // so T_k = Σ_{b<a_k} e(b(γ + βq_{k−1})) T_{k−1} + e(a_k(γ + βq_{k−1})) T_{k−2}.
    let mut total = vec![Complex64::new(1.0, 0.0); k_max + 1];
    for k in 2..=k_max {
        let a = u64::from(params.partial_quotient(k));
        let step = gamma + beta.times_u64(q[k - 1]);
        let geometric = compensated_sum((0..a).map(|b| step.times_u64(b).e()));
        total[k] = geometric * total[k - 1] + step.times_u64(a).e() * total[k - 2];
    }
    let mu: Vec<Complex64> = total.iter().zip(&q).map(|(t, &qk)| t / qk as f64).collect();
    let mut m_tilde = Vec::with_capacity(mu.len());
    m_tilde.push(mu[0].norm());
    for k in 1..mu.len() {
        m_tilde.push(mu[k].norm().max(mu[k - 1].norm()));
    }
    let mf = f64::from(m);
    let c: Vec<Angle> = q.iter().map(|&qk| gamma + beta.times_u64(qk)).collect();
    let psi_k = c
        .iter()
        .map(|ck| 1.0 - (1.0 / 12.0f64).min(3.0 / (20.0 * mf) * ck.norm().powi(2)))
        .collect();
    let g = gamma.norm().min(gamma.times(i64::from(m)).norm());
    let psi = 1.0 - g * g / (60.0 * mf.powi(3));
    Ok(MuSequence {
        m,
        gamma,
        beta,
        q,
        mu,
        m_tilde,
        c,
        psi_k,
        psi,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayVerdict {
    /// `M̃_k ≤ M̃_{k−1}` for all `k ≥ 2`.
    pub monotone: bool,
    /// `M̃_k ≤ M̃_5 ψ^{⌊(k−5)/5⌋}` for all `k ≥ 5`.
    pub chain_bound: bool,
    /// Largest `M̃_k / (M̃_5 ψ^{⌊(k−5)/5⌋})` seen; at most 1 when the bound holds.
    pub worst_chain_ratio: f64,
    /// Indices and values where an inequality failed.
    pub failures: Vec<String>,
}

impl DecayVerdict {
    pub fn ok(&self) -> bool {
        self.monotone && self.chain_bound
    }
}

pub fn mu_decay_check(seq: &MuSequence) -> Result<DecayVerdict> {
    if seq.gamma.times(i64::from(seq.m)).is_zero() {
        return Err(Error::Hypothesis(format!(
            "‖mγ‖ = 0 for m = {}, γ = {}",
            seq.m, seq.gamma
        )));
    }
    let mt = &seq.m_tilde;
    let mut failures = Vec::new();
    let mut monotone = true;
    for k in 2..mt.len() {
        if mt[k] > mt[k - 1] * (1.0 + DECAY_TOLERANCE) {
            monotone = false;
            failures.push(format!(
                "M̃_{k} = {:.12e} > M̃_{} = {:.12e}",
                mt[k],
                k - 1,
                mt[k - 1]
            ));
        }
    }
    let mut chain_bound = true;
    let mut worst = 0.0f64;
    for k in 5..mt.len() {
        let rhs = mt[5] * seq.psi.powi(((k - 5) / 5) as i32);
        if rhs > 0.0 {
            worst = worst.max(mt[k] / rhs);
        }
        if mt[k] > rhs * (1.0 + DECAY_TOLERANCE) {
            chain_bound = false;
            failures.push(format!(
                "M̃_{k} = {:.12e} > M̃_5 ψ^⌊(k−5)/5⌋ = {rhs:.12e}",
                mt[k]
            ));
        }
    }
    Ok(DecayVerdict {
        monotone,
        chain_bound,
        worst_chain_ratio: worst,
        failures,
    })
}
