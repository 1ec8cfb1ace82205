//! Angles measured in turns, so that `e(x) = exp(2πix)` depends only on `x mod 1`.

use std::fmt;
use std::ops::{Add, Neg};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::quadratic::QuadNum;

const TWO_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of ℝ/ℤ.
///
/// Rational angles are kept exactly as `num/den` with `0 ≤ num < den`. Other reals
/// are stored as 128-bit binary fractions of a turn; integer multiples of those are
/// exact modulo `2^−128`, which keeps `e(nβ)` accurate far beyond the `n` reached
/// by any sum here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Angle {
    Rational { num: u64, den: u64 },
    Fixed(u128),
}

impl Angle {
    pub const ZERO: Angle = Angle::Rational { num: 0, den: 1 };

    /// `num/den` reduced mod 1.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return param("angle denominator must be nonzero");
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Ok(Angle::Rational {
            num: num.rem_euclid(den) as u64,
            den: den as u64,
        })
    }

    /// Fractional part of a finite `f64`, taken exactly.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return param(format!("angle must be finite, got {x}"));
        }
        let frac = x - x.floor();
        // frac · 2^128 is exact in binary; the cast truncates only below 2^-128
        let scaled = frac * TWO_128;
        Ok(Angle::Fixed(if scaled >= TWO_128 {
            0
        } else {
            scaled as u128
        }))
    }

    /// `{x}` of an exact quadratic irrational, truncated to 128 bits.
    pub fn from_quad(x: &QuadNum) -> Self {
        let f = x.fract().into_inner();
        let scaled = f.scaled_floor(128);
        let digits = scaled.to_u64_digits().1;
        let lo = digits.first().copied().unwrap_or(0) as u128;
        let hi = digits.get(1).copied().unwrap_or(0) as u128;
        Angle::Fixed(lo | (hi << 64))
    }

    fn to_fixed(self) -> u128 {
        match self {
            Angle::Fixed(x) => x,
            Angle::Rational { num, den } => {
                // ⌊num · 2^128 / den⌋ by long division in two 64-bit halves
                let num = u128::from(num);
                let den = u128::from(den);
                let hi = (num << 64) / den;
                let rem = (num << 64) % den;
                let lo = (rem << 64) / den;
                (hi << 64) | lo
            }
        }
    }

    /// `n·x mod 1`.
    pub fn times(self, n: i64) -> Self {
        match self {
            Angle::Rational { num, den } => {
                let v = (i128::from(n) * i128::from(num)).rem_euclid(i128::from(den));
                Angle::Rational { num: v as u64, den }
            }
            Angle::Fixed(x) => {
                let prod = x.wrapping_mul(n.unsigned_abs() as u128);
                Angle::Fixed(if n < 0 { prod.wrapping_neg() } else { prod })
            }
        }
    }

    pub fn times_u64(self, n: u64) -> Self {
        match self {
            Angle::Rational { num, den } => Angle::Rational {
                num: ((u128::from(n) * u128::from(num)) % u128::from(den)) as u64,
                den,
            },
            Angle::Fixed(x) => Angle::Fixed(x.wrapping_mul(u128::from(n))),
        }
    }

    fn sum(self, other: Angle) -> Self {
        match (self, other) {
            (Angle::Rational { num: a, den: b }, Angle::Rational { num: c, den: d }) => {
                let l = b.lcm(&d);
                let v = (u128::from(a) * u128::from(l / b) + u128::from(c) * u128::from(l / d))
                    % u128::from(l);
                Angle::rational_reduced(v as u64, l)
            }
            _ => Angle::Fixed(self.to_fixed().wrapping_add(other.to_fixed())),
        }
    }

    fn negated(self) -> Self {
        match self {
            Angle::Rational { num, den } => Angle::Rational {
                num: (den - num) % den,
                den,
            },
            Angle::Fixed(x) => Angle::Fixed(x.wrapping_neg()),
        }
    }

    fn rational_reduced(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        Angle::Rational {
            num: num / g,
            den: den / g,
        }
    }

    /// Exact test for `x ∈ ℤ`.
    pub fn is_zero(self) -> bool {
        match self {
            Angle::Rational { num, .. } => num == 0,
            Angle::Fixed(x) => x == 0,
        }
    }

    /// Representative in `[0, 1)`.
    pub fn turns(self) -> f64 {
        match self {
            Angle::Rational { num, den } => num as f64 / den as f64,
            Angle::Fixed(x) => {
                (x >> 64) as f64 / 18_446_744_073_709_551_616.0 + (x as u64) as f64 / TWO_128
            }
        }
    }

    /// `‖x‖`, the distance to the nearest integer.
    pub fn norm(self) -> f64 {
        match self {
            Angle::Rational { num, den } => num.min(den - num) as f64 / den as f64,
            Angle::Fixed(x) => Angle::Fixed(x.min(x.wrapping_neg())).turns(),
        }
    }

    /// `e(x)`.
    pub fn e(self) -> Complex64 {
        match self {
            Angle::Rational { num, den } => unit_fraction(num, den),
            Angle::Fixed(_) => cis_turns(self.turns()),
        }
    }

    pub fn as_rational(self) -> Option<(u64, u64)> {
        match self {
            Angle::Rational { num, den } => Some((num, den)),
            Angle::Fixed(_) => None,
        }
    }
}

impl Add for Angle {
    type Output = Angle;

    fn add(self, other: Angle) -> Angle {
        self.sum(other)
    }
}

impl Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        self.negated()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational { num, den: 1 } => write!(f, "{num}"),
            Angle::Rational { num, den } => write!(f, "{num}/{den}"),
            Angle::Fixed(_) => write!(f, "{:.17}", self.turns()),
        }
    }
}

impl std::str::FromStr for Angle {
    type Err = crate::Error;

    /// Accepts `p/q` or a decimal real.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parameter(format!("bad angle numerator in {s:?}")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parameter(format!("bad angle denominator in {s:?}")))?;
            return Angle::rational(p, q);
        }
        if let Ok(n) = s.parse::<i64>() {
            return Angle::rational(n, 1);
        }
        let x: f64 = s
            .parse()
            .map_err(|_| crate::Error::Parameter(format!("bad angle {s:?}")))?;
        Angle::from_f64(x)
    }
}

/// `e(x)` for `x` given in turns; reduces `x` to `[−1/2, 1/2]` before the call.
pub fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (std::f64::consts::TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(num/den)` with the numerator folded into the first octant so that the
/// trigonometric argument is small and exactly symmetric.
pub fn unit_fraction(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // use the residue closest to zero, then symmetries of the circle
    let n = u128::from(num);
    let d = u128::from(den);
    if 2 * n == d {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * n == d {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * n == 3 * d {
        return Complex64::new(0.0, -1.0);
    }
    let x = if 2 * n < d {
        n as f64 / d as f64
    } else {
        -((d - n) as f64 / d as f64)
    };
    cis_turns(x)
}

/// `e(x·s)` for small non-negative integers `s`, cached.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    angle: Angle,
    values: Vec<Complex64>,
}

impl PhaseTable {
    pub fn new(angle: Angle, len: usize) -> Self {
        let values = (0..len as u64).map(|s| angle.times_u64(s).e()).collect();
        Self { angle, values }
    }

    pub fn get(&self, s: u64) -> Complex64 {
        match self.values.get(s as usize) {
            Some(&z) => z,
            None => self.angle.times_u64(s).e(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::AlphaParams;

    #[test]
    fn rational_reduction() {
        assert_eq!(
            Angle::rational(4, 6).unwrap(),
            Angle::Rational { num: 2, den: 3 }
        );
        assert_eq!(
            Angle::rational(-1, 3).unwrap(),
            Angle::Rational { num: 2, den: 3 }
        );
        assert_eq!(
            Angle::rational(1, -3).unwrap(),
            Angle::Rational { num: 2, den: 3 }
        );
        assert_eq!(Angle::rational(3, 3).unwrap(), Angle::ZERO);
        assert!(Angle::rational(1, 0).is_err());
    }

    #[test]
    fn rational_multiples_are_exact() {
        let g = Angle::rational(1, 3).unwrap();
        assert!(g.times(3).is_zero());
        assert!(g.times(-6).is_zero());
        assert_eq!(g.times(5), Angle::rational(2, 3).unwrap());
        assert!(g.times_u64(u64::MAX).is_zero());
        assert_eq!(g.norm(), 1.0 / 3.0);
        let sum = g + Angle::rational(1, 6).unwrap();
        assert_eq!(sum, Angle::rational(1, 2).unwrap());
    }

    #[test]
    fn fixed_point_angles() {
        let x = Angle::from_f64(0.25).unwrap();
        assert_eq!(x, Angle::Fixed(1u128 << 126));
        assert!(x.times(4).is_zero());
        assert_eq!(x.times(-1), Angle::from_f64(0.75).unwrap());
        assert_eq!(x.norm(), 0.25);
        assert_eq!(Angle::from_f64(-0.25).unwrap().turns(), 0.75);
        let mixed = x + Angle::rational(1, 2).unwrap();
        assert_eq!(mixed.turns(), 0.75);
    }

    #[test]
    fn quadratic_angles() {
        let phi = QuadNum::phi(AlphaParams::new(2).unwrap());
        let a = Angle::from_quad(&phi);
        assert!((a.turns() - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        // n φ mod 1 stays accurate for large n
        let n = 10_000_000i64;
        let exact = phi.mul_integer(&n.into()).fract().into_inner().to_f64();
        assert!((a.times(n).turns() - exact).abs() < 1e-15);
    }

    #[test]
    fn unit_roots() {
        assert_eq!(unit_fraction(0, 5), Complex64::new(1.0, 0.0));
        assert_eq!(unit_fraction(1, 2), Complex64::new(-1.0, 0.0));
        let w = unit_fraction(1, 3);
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
        let w = unit_fraction(2, 3);
        assert!((w - Complex64::new(-0.5, -3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn parse() {
        assert_eq!(
            "1/3".parse::<Angle>().unwrap(),
            Angle::rational(1, 3).unwrap()
        );
        assert_eq!("0".parse::<Angle>().unwrap(), Angle::ZERO);
        assert_eq!(
            "0.5".parse::<Angle>().unwrap(),
            Angle::from_f64(0.5).unwrap()
        );
        assert!("x".parse::<Angle>().is_err());
    }
}
