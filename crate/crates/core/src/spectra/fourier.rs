//! Discrete Fourier coefficients of `u ↦ e(θ S_q(u))` on `[0, q^t)`:
//!
//! `G_t(ℓ, θ) = q^{−t} Σ_{u<q^t} e(θ S_q(u) − ℓ u q^{−t})`.
//!
//! Because `S_q` is additive over base-q digits the sum factors as
//! `G_t(ℓ) = Π_{s=1..t} F_s(ℓ mod q^s)` with
//! `F_s(r) = q^{−1} Σ_{v<q} e(θ v − r v q^{−s})`, which is what [`fourier_table`]
//! evaluates.

use num_complex::Complex64;

use super::angle::{unit_fraction, Angle};
use super::sum::{compensated_sum, Neumaier};
use crate::error::{param, Error, Result};

/// Largest `q^t` for which a table is built.
pub const MAX_TABLE_LEN: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct FourierTable {
    q: u32,
    t: u32,
    theta: Angle,
    values: Vec<Complex64>,
}

impl FourierTable {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn theta(&self) -> Angle {
        self.theta
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `G_t(ℓ)` for any integer `ℓ` (the coefficients are `q^t`-periodic).
    pub fn get(&self, l: i64) -> Complex64 {
        let n = self.values.len() as i64;
        self.values[l.rem_euclid(n) as usize]
    }

    /// `Σ_ℓ |G_t(ℓ)|²`, which should be 1.
    pub fn parseval_sum(&self) -> f64 {
        let mut s = Neumaier::default();
        for z in &self.values {
            s.add(z.norm_sqr());
        }
        s.value()
    }
}

fn table_len(q: u32, t: u32) -> Result<u64> {
    u64::from(q)
        .checked_pow(t)
        .filter(|&n| n <= MAX_TABLE_LEN)
        .ok_or_else(|| Error::Resource(format!("q^t = {q}^{t} exceeds {MAX_TABLE_LEN} entries")))
}

pub fn fourier_table(q: u32, t: u32, theta: Angle) -> Result<FourierTable> {
    if q < 2 {
        return param(format!("base q must be at least 2, got {q}"));
    }
    let len = table_len(q, t)?;
    let digit_phase: Vec<Complex64> = (0..u64::from(q)).map(|v| theta.times_u64(v).e()).collect();
    let scale = 1.0 / f64::from(q);
    let mut values = vec![Complex64::new(1.0, 0.0); len as usize];
    let mut modulus = 1u64;
    for _ in 0..t {
        modulus *= u64::from(q);
        let factor: Vec<Complex64> = (0..modulus)
            .map(|r| {
                let terms = (0..u64::from(q)).map(|v| {
                    let x = (r * v) % modulus;
                    digit_phase[v as usize] * unit_fraction((modulus - x) % modulus, modulus)
                });
                compensated_sum(terms) * scale
            })
            .collect();
        for (l, g) in values.iter_mut().enumerate() {
            *g *= factor[(l as u64 % modulus) as usize];
        }
    }
    Ok(FourierTable {
        q,
        t,
        theta,
        values,
    })
}

/// Largest residual of the two inversion formulas
///
/// `e(θ S_{q,t}(n)) = Σ_ℓ e(ℓ n q^{−t}) G_t(ℓ)` and
/// `e(−θ S_{q,t}(n)) = Σ_ℓ e(ℓ n q^{−t}) conj(G_t(−ℓ))`
///
/// over the sampled `n`.
pub fn dft_reconstruct_check(table: &FourierTable, samples: &[u64]) -> f64 {
    let len = table.values.len() as u64;
    let roots: Vec<Complex64> = (0..len).map(|x| unit_fraction(x, len)).collect();
    let mut worst = 0.0f64;
    for &n in samples {
        let window = n % len;
        let mut s = 0u64;
        let mut x = window;
        while x > 0 {
            s += x % u64::from(table.q);
            x /= u64::from(table.q);
        }
        let direct = table.theta.times_u64(s).e();
        let forward = compensated_sum((0..len).map(|l| {
            roots[((u128::from(l) * u128::from(window)) % u128::from(len)) as usize]
                * table.values[l as usize]
        }));
        let backward = compensated_sum((0..len).map(|l| {
            roots[((u128::from(l) * u128::from(window)) % u128::from(len)) as usize]
                * table.get(-(l as i64)).conj()
        }));
        worst = worst
            .max((forward - direct).norm())
            .max((backward - direct.conj()).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `G_t(ℓ)` straight from its definition.
    fn direct(q: u32, t: u32, theta: Angle, l: u64) -> Complex64 {
        let len = u64::from(q).pow(t);
        let terms = (0..len).map(|u| {
            let mut s = 0;
            let mut x = u;
            while x > 0 {
                s += x % u64::from(q);
                x /= u64::from(q);
            }
            let x = (l * u) % len;
            theta.times_u64(s).e() * unit_fraction((len - x) % len, len)
        });
        compensated_sum(terms) / len as f64
    }

    fn rat(p: i64, q: i64) -> Angle {
        Angle::rational(p, q).unwrap()
    }

    #[test]
    fn small_tables() {
        let g = fourier_table(2, 1, rat(1, 2)).unwrap();
        assert!(g.get(0).norm() < 1e-15);
        assert!((g.get(1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let g = fourier_table(2, 1, Angle::ZERO).unwrap();
        assert!((g.get(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(g.get(1).norm() < 1e-15);

        let g = fourier_table(3, 2, rat(1, 3)).unwrap();
        assert_eq!(g.len(), 9);
        assert!((g.parseval_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_formula_matches_definition() {
        for (q, t) in [(2u32, 4u32), (3, 3), (5, 2), (10, 2)] {
            for theta in [
                Angle::ZERO,
                rat(1, 3),
                rat(2, 7),
                Angle::from_f64(0.123_456).unwrap(),
            ] {
                let table = fourier_table(q, t, theta).unwrap();
                for l in 0..table.len() as u64 {
                    let diff = (table.get(l as i64) - direct(q, t, theta, l)).norm();
                    assert!(diff < 1e-13, "q={q} t={t} θ={theta} ℓ={l}");
                }
            }
        }
    }

    #[test]
    fn inversion_residuals() {
        let g = fourier_table(2, 3, rat(1, 3)).unwrap();
        let samples: Vec<u64> = (0..64).collect();
        assert!(dft_reconstruct_check(&g, &samples) < 1e-9);

        let g = fourier_table(2, 3, Angle::ZERO).unwrap();
        assert!(dft_reconstruct_check(&g, &samples) < 1e-14);

        let g = fourier_table(5, 2, rat(2, 7)).unwrap();
        let samples: Vec<u64> = (0..100).collect();
        assert!(dft_reconstruct_check(&g, &samples) < 1e-9);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            fourier_table(10, 9, Angle::ZERO),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            fourier_table(1, 2, Angle::ZERO),
            Err(Error::Parameter(_))
        ));
        let g = fourier_table(7, 0, rat(1, 3)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.get(0), Complex64::new(1.0, 0.0));
    }
}
