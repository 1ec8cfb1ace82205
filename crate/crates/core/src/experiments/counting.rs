use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::numeration::{
    AlphaParams, BaseQCounter, DigitCounter, OstrowskiCounter, OstrowskiTable,
};
use crate::spectra::{blocks, joint_exp_sum, Angle};

/// Largest `N` accepted by [`corollary_identity_check`].
pub const IDENTITY_MAX_N: u64 = 10_000;

/// Joint residue-class counts of `(S_q(n) mod m₁, S_α(n) mod m₂)` over `n < N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointCountReport {
    pub q: u32,
    pub m: u32,
    pub m1: u32,
    pub m2: u32,
    pub n: u64,
    /// `counts[a₁][a₂]`.
    pub counts: Vec<Vec<u64>>,
    /// `N/(m₁m₂)` in lowest terms.
    pub expected_num: u64,
    pub expected_den: u64,
    /// `max |count − N/(m₁m₂)|` over all classes, over `expected_den`.
    pub max_deviation_num: u128,
    pub gcd_q_ok: bool,
    pub gcd_m_ok: bool,
}

impl JointCountReport {
    fn from_counts(q: u32, m: u32, m1: u32, m2: u32, n: u64, flat: &[u64]) -> Self {
        let cells = u64::from(m1) * u64::from(m2);
        let g = n.gcd(&cells);
        let (expected_num, expected_den) = (n / g, cells / g);
        let counts: Vec<Vec<u64>> = flat.chunks(m2 as usize).map(<[u64]>::to_vec).collect();
        let max_deviation_num = flat
            .iter()
            .map(|&c| {
                (i128::from(c) * i128::from(expected_den) - i128::from(expected_num)).unsigned_abs()
            })
            .max()
            .unwrap_or(0);
        Self {
            q,
            m,
            m1,
            m2,
            n,
            counts,
            expected_num,
            expected_den,
            max_deviation_num,
            gcd_q_ok: (q - 1).gcd(&m1) == 1,
            gcd_m_ok: m.gcd(&m2) == 1,
        }
    }

    /// Both coprimality conditions of the equidistribution statement.
    pub fn hypotheses_hold(&self) -> bool {
        self.gcd_q_ok && self.gcd_m_ok
    }

    /// Signed `count − N/(m₁m₂)` for one class, as a float.
    pub fn deviation(&self, a1: usize, a2: usize) -> f64 {
        let c = self.counts[a1][a2] as f64;
        c - self.expected_num as f64 / self.expected_den as f64
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_num as f64 / self.expected_den as f64
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

fn check_moduli(q: u32, m: u32, m1: u32, m2: u32) -> Result<OstrowskiTable> {
    if q < 2 || m1 < 2 || m2 < 2 {
        return param(format!(
            "need q, m₁, m₂ ≥ 2, got q = {q}, m₁ = {m1}, m₂ = {m2}"
        ));
    }
    Ok(OstrowskiTable::new(AlphaParams::new(m)?))
}

pub fn joint_count(n: u64, q: u32, m: u32, m1: u32, m2: u32) -> Result<JointCountReport> {
    Ok(joint_count_at(&[n], q, m, m1, m2)?.remove(0))
}

/// Reports at each cut-off of the nondecreasing `grid`, from a single pass over
/// `n < max(grid)`.
pub fn joint_count_at(
    grid: &[u64],
    q: u32,
    m: u32,
    m1: u32,
    m2: u32,
) -> Result<Vec<JointCountReport>> {
    let table = check_moduli(q, m, m1, m2)?;
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return param("cut-offs must be nondecreasing");
    }
    let top = grid.last().copied().unwrap_or(0);
    if top >= table.capacity() {
        return Err(Error::Resource(format!(
            "N = {top} exceeds the counter range"
        )));
    }
    let cells = (m1 * m2) as usize;
    let mut running = vec![0u64; cells];
    let mut out = Vec::with_capacity(grid.len());
    let mut lo = 0;
    for &hi in grid {
        let parts: Vec<Vec<u64>> = blocks(lo..hi)
            .into_par_iter()
            .map(|range| {
                let mut cq = BaseQCounter::new(q, range.start).expect("q checked");
                let mut ca = OstrowskiCounter::with_table(table.clone(), range.start);
                let mut local = vec![0u64; cells];
                for _ in range {
                    let a1 = (cq.digit_sum() % u64::from(m1)) as usize;
                    let a2 = (ca.digit_sum() % u64::from(m2)) as usize;
                    local[a1 * m2 as usize + a2] += 1;
                    cq.increment();
                    ca.increment();
                }
                local
            })
            .collect();
        for part in parts {
            for (r, c) in running.iter_mut().zip(part) {
                *r += c;
            }
        }
        out.push(JointCountReport::from_counts(q, m, m1, m2, hi, &running));
        lo = hi;
    }
    Ok(out)
}

/// Rebuilds every class count from the `m₁m₂` joint exponential sums at
/// `θ = k₁/m₁`, `γ = k₂/m₂` and returns the largest absolute difference from the
/// exact counts.
pub fn corollary_identity_check(n: u64, q: u32, m: u32, m1: u32, m2: u32) -> Result<f64> {
    if n > IDENTITY_MAX_N {
        return param(format!("N = {n} exceeds the oracle limit {IDENTITY_MAX_N}"));
    }
    let direct = joint_count(n, q, m, m1, m2)?;
    let (i1, i2) = (i64::from(m1), i64::from(m2));
    let mut sums = vec![Complex64::new(0.0, 0.0); (m1 * m2) as usize];
    for k1 in 0..i1 {
        for k2 in 0..i2 {
            let theta = Angle::rational(k1, i1)?;
            let gamma = Angle::rational(k2, i2)?;
            sums[(k1 * i2 + k2) as usize] = joint_exp_sum(n, q, m, theta, gamma)?;
        }
    }
    let mut residual = 0.0f64;
    for a1 in 0..i1 {
        for a2 in 0..i2 {
            let mut acc = crate::spectra::ComplexSum::default();
            for k1 in 0..i1 {
                for k2 in 0..i2 {
                    // e(−k₁a₁/m₁ − k₂a₂/m₂)
                    let phase = Angle::rational(-(k1 * a1 * i2 + k2 * a2 * i1), i1 * i2)?;
                    acc.add(phase.e() * sums[(k1 * i2 + k2) as usize]);
                }
            }
            let rebuilt = acc.value() / (i1 * i2) as f64;
            let exact = direct.counts[a1 as usize][a2 as usize] as f64;
            residual = residual.max((rebuilt - Complex64::new(exact, 0.0)).norm());
        }
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::{s_alpha, s_q};
    use num_bigint::BigInt;

    fn naive(n: u64, q: u32, m: u32, m1: u32, m2: u32) -> Vec<Vec<u64>> {
        let mut c = vec![vec![0u64; m2 as usize]; m1 as usize];
        for v in 0..n {
            let v = BigInt::from(v);
            let a1 = s_q(&v, q).unwrap() % u64::from(m1);
            let a2 = s_alpha(&v, m).unwrap() % u64::from(m2);
            c[a1 as usize][a2 as usize] += 1;
        }
        c
    }

    #[test]
    fn small_examples() {
        let r = joint_count(1, 5, 3, 2, 5).unwrap();
        assert_eq!(r.counts[0][0], 1);
        assert_eq!(r.total(), 1);

        let r = joint_count(3, 2, 2, 3, 3).unwrap();
        assert_eq!(r.counts, vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 0]]);
        assert_eq!((r.expected_num, r.expected_den), (1, 3));
        assert!(r.hypotheses_hold());

        let r = joint_count(0, 2, 2, 3, 3).unwrap();
        assert_eq!(r.total(), 0);
        assert!(joint_count(10, 1, 2, 3, 3).is_err());
        assert!(joint_count(10, 2, 2, 1, 3).is_err());
    }

    #[test]
    fn streaming_matches_naive_grid() {
        for q in [2, 3] {
            for m in [2, 3] {
                for m1 in [2, 3, 5] {
                    for m2 in [2, 3, 5] {
                        let n = 2_000;
                        let fast = joint_count(n, q, m, m1, m2).unwrap();
                        assert_eq!(fast.counts, naive(n, q, m, m1, m2), "{q} {m} {m1} {m2}");
                    }
                }
            }
        }
    }

    #[test]
    fn gcd_flags() {
        let r = joint_count(100, 4, 2, 3, 2).unwrap();
        assert!(!r.gcd_q_ok && !r.gcd_m_ok);
        assert!(!r.hypotheses_hold());
    }

    #[test]
    fn checkpoints_match_single_runs() {
        let grid = [0, 17, 65_536, 70_000, 200_000];
        let all = joint_count_at(&grid, 3, 2, 2, 3).unwrap();
        for (r, &n) in all.iter().zip(&grid) {
            assert_eq!(r, &joint_count(n, 3, 2, 2, 3).unwrap());
            assert_eq!(r.total(), n);
        }
    }

    #[test]
    fn identity_examples() {
        assert!(corollary_identity_check(100, 2, 2, 2, 3).unwrap() < 1e-4);
        assert!(corollary_identity_check(0, 2, 2, 2, 3).unwrap() < 1e-12);
        assert!(corollary_identity_check(5000, 3, 3, 2, 2).unwrap() < 5e-3);
        assert!(corollary_identity_check(IDENTITY_MAX_N + 1, 2, 2, 2, 2).is_err());
    }
}
