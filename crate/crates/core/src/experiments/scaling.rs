use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::counting::joint_count_at;
use crate::error::{param, Error, Result};
use crate::spectra::{gelfond_sum_at, joint_exp_sum_at, Angle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingTarget {
    /// Largest class deviation of the joint residue counts.
    JointCountDev,
    /// `|Σ_{n<N} e(θ S_q(n) + γ S_α(n))|`.
    ExpSumMag,
    /// `|Σ_{n<N} e(a n + (k₁/m₁) S_q(n))|`.
    GelfondMag,
}

impl fmt::Display for ScalingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalingTarget::JointCountDev => "joint_count_dev",
            ScalingTarget::ExpSumMag => "exp_sum_mag",
            ScalingTarget::GelfondMag => "gelfond_mag",
        })
    }
}

impl FromStr for ScalingTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "joint_count_dev" => Ok(ScalingTarget::JointCountDev),
            "exp_sum_mag" => Ok(ScalingTarget::ExpSumMag),
            "gelfond_mag" => Ok(ScalingTarget::GelfondMag),
            _ => param(format!("unknown scaling target `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingParams {
    pub q: u32,
    pub m: u32,
    pub m1: u32,
    pub m2: u32,
    pub theta: Angle,
    pub gamma: Angle,
    pub k1: u32,
    pub a: Angle,
}

impl Default for ScalingParams {
    fn default() -> Self {
        Self {
            q: 2,
            m: 2,
            m1: 3,
            m2: 3,
            theta: Angle::Rational { num: 1, den: 3 },
            gamma: Angle::Rational { num: 1, den: 3 },
            k1: 1,
            a: Angle::ZERO,
        }
    }
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub residuals: Vec<f64>,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return param("least squares needs at least 3 paired points");
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return param("abscissae must not all coincide");
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - intercept - slope * a)
        .collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        stderr,
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub target: ScalingTarget,
    pub params: ScalingParams,
    pub grid: Vec<u64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub residuals: Vec<f64>,
    /// `slope < 1`.
    pub verdict: bool,
}

impl ScalingReport {
    /// `(1 − slope)/stderr`, infinite for an exact fit below 1.
    pub fn margin_in_stderr(&self) -> f64 {
        (1.0 - self.slope) / self.stderr
    }
}

/// Measures `target` at every `N` of the grid in one pass and fits
/// `log value` against `log N`.
pub fn scaling_study(
    grid: &[u64],
    target: ScalingTarget,
    params: ScalingParams,
) -> Result<ScalingReport> {
    if grid.len() < 3 {
        return param(format!("grid needs at least 3 points, got {}", grid.len()));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return param("grid must be positive and strictly increasing");
    }
    if (grid[grid.len() - 1] as f64) < 100.0 * grid[0] as f64 {
        return param("grid must span at least two decades");
    }
    let ScalingParams {
        q,
        m,
        m1,
        m2,
        theta,
        gamma,
        k1,
        a,
    } = params;
    let values: Vec<f64> = match target {
        ScalingTarget::JointCountDev => {
            let reports = joint_count_at(grid, q, m, m1, m2)?;
            if !reports[0].hypotheses_hold() {
                return Err(Error::Hypothesis(format!(
                    "gcd(q − 1, m₁) = gcd(m, m₂) = 1 fails for q = {q}, m = {m}, m₁ = {m1}, m₂ = {m2}"
                )));
            }
            reports.iter().map(|r| r.max_deviation()).collect()
        }
        ScalingTarget::ExpSumMag => joint_exp_sum_at(grid, q, m, theta, gamma)?
            .iter()
            .map(|z| z.norm())
            .collect(),
        ScalingTarget::GelfondMag => gelfond_sum_at(grid, q, k1, m1, a)?
            .iter()
            .map(|z| z.norm())
            .collect(),
    };
    if let Some(i) = values.iter().position(|&v| v.is_nan() || v <= 0.0) {
        return param(format!(
            "value at N = {} is {}; its logarithm is undefined",
            grid[i], values[i]
        ));
    }
    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let fit = least_squares(&xs, &ys)?;
    Ok(ScalingReport {
        target,
        params,
        grid: grid.to_vec(),
        values,
        slope: fit.slope,
        intercept: fit.intercept,
        stderr: fit.stderr,
        residuals: fit.residuals,
        verdict: fit.slope < 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let fit = least_squares(&x, &y).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!(fit.stderr < 1e-14);
    }

    #[test]
    fn noisy_line_stderr() {
        // residuals ±1 around y = x: SSR = 4, Sxx = 5, stderr = √(4/2/5)
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 0.0, 3.0, 2.0];
        let fit = least_squares(&x, &y).unwrap();
        assert!((fit.slope - 0.6).abs() < 1e-14);
        let ssr: f64 = fit.residuals.iter().map(|r| r * r).sum();
        assert!((fit.stderr - (ssr / 2.0 / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn negative_control_has_unit_slope() {
        let params = ScalingParams {
            theta: Angle::ZERO,
            gamma: Angle::ZERO,
            ..ScalingParams::default()
        };
        let r = scaling_study(&[100, 1_000, 10_000], ScalingTarget::ExpSumMag, params).unwrap();
        assert!((r.slope - 1.0).abs() < 1e-12);
        assert!(!r.verdict);
    }

    #[test]
    fn grid_validation() {
        let p = ScalingParams::default();
        assert!(scaling_study(&[100, 1000], ScalingTarget::ExpSumMag, p).is_err());
        assert!(scaling_study(&[100, 500, 900], ScalingTarget::ExpSumMag, p).is_err());
        assert!(scaling_study(&[100, 50, 100_000], ScalingTarget::ExpSumMag, p).is_err());
        assert!(scaling_study(&[0, 50, 100_000], ScalingTarget::ExpSumMag, p).is_err());
    }

    #[test]
    fn hypotheses_are_enforced_for_counts() {
        let p = ScalingParams {
            m2: 2,
            ..ScalingParams::default()
        };
        assert!(matches!(
            scaling_study(&[100, 1_000, 10_000], ScalingTarget::JointCountDev, p),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn target_names_round_trip() {
        for t in [
            ScalingTarget::JointCountDev,
            ScalingTarget::ExpSumMag,
            ScalingTarget::GelfondMag,
        ] {
            assert_eq!(t.to_string().parse::<ScalingTarget>().unwrap(), t);
        }
        assert_eq!(
            "exp-sum-mag".parse::<ScalingTarget>().unwrap(),
            ScalingTarget::ExpSumMag
        );
        assert!("slope".parse::<ScalingTarget>().is_err());
    }
}
