use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::CheckLine;
use crate::error::Result;
use crate::spectra::{
    dft_reconstruct_check, elementary_bounds_check, fourier_table, kappa, trunc_mismatch_count,
    vdc_check, Angle, Window,
};

/// Settings for [`lemma_checks`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub q: u32,
    pub m: u32,
    pub seed: u64,
    /// Number of random sequences for the van der Corput check.
    pub sequences: usize,
    /// Range length for the truncation mismatch counts.
    pub n: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            q: 2,
            m: 2,
            seed: 0,
            sequences: 200,
            n: 20_000,
        }
    }
}

fn line(name: impl Into<String>, value: f64, bound: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        ok: value <= bound,
        value,
        bound,
    }
}

/// Random complex sequences of length at most 64 with entries in the unit square.
pub fn random_sequences(seed: u64, count: usize) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=64);
            (0..len)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

/// Runs the auxiliary inequalities on fixed and seeded inputs and reports the
/// worst case of each.
pub fn lemma_checks(cfg: SuiteConfig) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for z in random_sequences(cfg.seed, cfg.sequences) {
        for r in 1..=z.len() {
            let (lhs, rhs) = vdc_check(&z, r)?;
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs);
            }
        }
    }
    out.push(line("van der Corput lhs/rhs", worst, 1.0 + 1e-9));

    let (mut ratio, mut residual) = (0.0f64, 0.0f64);
    for den in 1..=24i64 {
        for num in 0..den {
            let c = elementary_bounds_check(Angle::rational(num, den)?, 200, 40);
            ratio = ratio.max(c.sum_abs / c.bound);
            residual = residual.max(c.identity_residual);
        }
    }
    out.push(line(
        "geometric sum / min(N, 1/(2||x||))",
        ratio,
        1.0 + 1e-9,
    ));
    out.push(line("Fejer identity residual", residual, 1e-9));

    for h in [1u32, 8, 64] {
        let mut lowest = f64::INFINITY;
        for i in 0..10_000 {
            lowest = lowest.min(kappa(h, f64::from(i) / 10_000.0)?);
        }
        out.push(line(format!("-min kappa_{h}"), -lowest, 1e-12));
        out.push(line(
            format!("|kappa_{h}(0) - 1/2|"),
            (kappa(h, 0.0)? - 0.5).abs(),
            1e-12,
        ));
    }

    let mut parseval = 0.0f64;
    let mut inversion = 0.0f64;
    for t in 1..=4 {
        for theta in [Angle::ZERO, Angle::rational(1, 3)?, Angle::rational(2, 7)?] {
            let table = fourier_table(cfg.q, t, theta)?;
            parseval = parseval.max((table.parseval_sum() - 1.0).abs());
            let samples: Vec<u64> = (0..64).collect();
            inversion = inversion.max(dft_reconstruct_check(&table, &samples));
        }
    }
    out.push(line("Parseval residual", parseval, 1e-9));
    out.push(line("Fourier inversion residual", inversion, 1e-9));

    let x = Angle::rational(1, 3)?;
    let mut worst = 0.0f64;
    let mut within = true;
    let windows = (2..=6)
        .map(|t| Window::BaseQ { q: cfg.q, t })
        .chain((3..=8).map(|k| Window::Ostrowski { m: cfg.m, k }));
    for window in windows {
        for r in 1..=8 {
            let rep = trunc_mismatch_count(cfg.n, r, window, x)?;
            worst = worst.max(rep.count as f64 * rep.bound_den as f64 / rep.bound_num as f64);
            within &= rep.within_bound;
        }
    }
    out.push(CheckLine {
        name: "truncation mismatch count / bound".into(),
        ok: within,
        value: worst,
        bound: 1.0,
    });
    Ok(out)
}
