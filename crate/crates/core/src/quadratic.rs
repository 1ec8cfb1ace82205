//! Exact arithmetic in the real quadratic field Q(√d).
//!
//! A [`QuadNum`] is `(a + b√d)/c` with integer `a, b`, positive `c`,
//! `gcd(a, b, c) = 1`, and `d > 0` not a perfect square, so equal values have equal
//! representations. Signs, floors and fractional parts are decided with integer
//! arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{param, Error, Result};
use crate::numeration::AlphaParams;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

/// Binary operations accepted by [`qn_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Negates the left operand; the right one only has to live in the same field.
    Neg,
}

fn is_square(d: u64) -> bool {
    let r = d.sqrt();
    r * r == d
}

fn check_discriminant(d: u64) -> Result<()> {
    if d == 0 || is_square(d) {
        return param(format!("d = {d} must be a positive non-square"));
    }
    Ok(())
}

impl QuadNum {
    /// `(a + b√d)/c`, canonicalised.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: u64) -> Result<Self> {
        check_discriminant(d)?;
        if c.is_zero() {
            return Err(Error::DivisionByZero(d));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: u64) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if a.is_zero() && b.is_zero() {
            c = BigInt::one();
        }
        QuadNum { a, b, c, d }
    }

    /// An integer as an element of Q(√d). `d` must be a positive non-square.
    pub fn from_integer(n: BigInt, d: u64) -> Self {
        debug_assert!(check_discriminant(d).is_ok());
        QuadNum {
            a: n,
            b: BigInt::zero(),
            c: BigInt::one(),
            d,
        }
    }

    pub fn from_int(n: i64, d: u64) -> Self {
        Self::from_integer(BigInt::from(n), d)
    }

    /// The rational `num/den`.
    pub fn from_ratio(num: i64, den: i64, d: u64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::zero(), BigInt::from(den), d)
    }

    pub fn zero(d: u64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: u64) -> Self {
        Self::from_int(1, d)
    }

    pub fn sqrt_d(d: u64) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    /// φ = (m + 2 + √d)/2 with d = m² + 4m.
    pub fn phi(params: AlphaParams) -> Self {
        Self::canonical(
            BigInt::from(params.m()) + 2,
            BigInt::one(),
            BigInt::from(2),
            params.d(),
        )
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadNum {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d,
        }
    }

    /// Field norm `(a² − b²d)/c²` as an unreduced numerator/denominator pair.
    pub fn norm(&self) -> (BigInt, BigInt) {
        (
            &self.a * &self.a - &self.b * &self.b * self.d,
            &self.c * &self.c,
        )
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::FieldMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(if self.c == rhs.c {
            Self::canonical(&self.a + &rhs.a, &self.b + &rhs.b, self.c.clone(), self.d)
        } else {
            Self::canonical(
                &self.a * &rhs.c + &rhs.a * &self.c,
                &self.b * &rhs.c + &rhs.b * &self.c,
                &self.c * &rhs.c,
                self.d,
            )
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self::canonical(
            &self.a * &rhs.a + &self.b * &rhs.b * self.d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.c * &rhs.c,
            self.d,
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero(self.d));
        }
        // 1/v = c (a − b√d) / (a² − b²d)
        let (norm_num, _) = rhs.norm();
        let inv = Self::canonical(&rhs.c * &rhs.a, -(&rhs.c * &rhs.b), norm_num, self.d);
        self.checked_mul(&inv)
    }

    pub fn mul_integer(&self, n: &BigInt) -> Self {
        Self::canonical(&self.a * n, &self.b * n, self.c.clone(), self.d)
    }

    pub fn add_integer(&self, n: &BigInt) -> Self {
        Self::canonical(
            &self.a + n * &self.c,
            self.b.clone(),
            self.c.clone(),
            self.d,
        )
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            Self::one(self.d).checked_div(self)?
        } else {
            self.clone()
        };
        let mut result = Self::one(self.d);
        let mut power = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &power;
            }
            k >>= 1;
            if k > 0 {
                power = &power * &power;
            }
        }
        Ok(result)
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> i8 {
        sign_of(&self.a, &self.b, self.d)
    }

    /// Exact comparison of two values of the same field.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        self.same_field(other)?;
        // sign((a1 c2 − a2 c1) + (b1 c2 − b2 c1)√d), denominators positive
        let a = &self.a * &other.c - &other.a * &self.c;
        let b = &self.b * &other.c - &other.b * &self.c;
        Ok(sign_of(&a, &b, self.d).cmp(&0))
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        floor_parts(&self.a, &self.b, &self.c, self.d)
    }

    /// `⌊value · 2^shift⌋`.
    pub fn scaled_floor(&self, shift: u32) -> BigInt {
        floor_parts(&(&self.a << shift), &(&self.b << shift), &self.c, self.d)
    }

    /// `{x} = x − ⌊x⌋`, exactly in `[0, 1)`.
    pub fn fract(&self) -> Mod1Value {
        let fl = self.floor();
        Mod1Value(self.add_integer(&-fl))
    }

    /// `‖x‖ = min({x}, 1 − {x})`.
    pub fn dist_to_z(&self) -> Self {
        let f = self.fract().0;
        let g = Self::one(self.d).checked_sub(&f).unwrap();
        if f.cmp_exact(&g).unwrap() == Ordering::Greater {
            g
        } else {
            f
        }
    }

    /// Nearest `f64`, computed from an exact scaled floor so that cancellation in
    /// `a + b√d` does not lose precision.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let mut shift = 64u32;
        loop {
            let f = self.scaled_floor(shift);
            let bits = f.bits();
            if bits >= 62 || shift >= 2048 {
                return scale_down(&f, shift);
            }
            shift += 64 - bits as u32;
        }
    }
}

fn scale_down(f: &BigInt, shift: u32) -> f64 {
    // exponent handled in two steps to stay clear of intermediate overflow
    let bits = f.bits();
    let drop = bits.saturating_sub(64) as u32;
    let mantissa = (f >> drop).to_f64().unwrap();
    mantissa * 2f64.powi(drop as i32 - shift as i32)
}

fn sign_of(a: &BigInt, b: &BigInt, d: u64) -> i8 {
    let sa = a.sign();
    let sb = b.sign();
    match (sa, sb) {
        (Sign::NoSign, Sign::NoSign) => 0,
        (Sign::Plus, Sign::Plus) | (Sign::Plus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => 1,
        (Sign::Minus, Sign::Minus) | (Sign::Minus, Sign::NoSign) | (Sign::NoSign, Sign::Minus) => {
            -1
        }
        _ => {
            // opposite signs: compare a² with b²d; never equal since d is not a square
            let a2 = a * a;
            let b2d = b * b * d;
            let a_dominates = a2 > b2d;
            if a_dominates == (sa == Sign::Plus) {
                1
            } else {
                -1
            }
        }
    }
}

/// `⌊b√d⌋` via the integer square root of `b²d`.
fn floor_b_sqrt_d(b: &BigInt, d: u64) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let r = (b * b * d).sqrt();
    if b.is_positive() {
        r
    } else {
        -r - 1
    }
}

fn floor_parts(a: &BigInt, b: &BigInt, c: &BigInt, d: u64) -> BigInt {
    // a + b√d lies in [n, n + 1) with n = a + ⌊b√d⌋, and in fact in (n, n + 1)
    // unless b = 0; either way ⌊(a + b√d)/c⌋ = ⌊n/c⌋.
    let n = a + floor_b_sqrt_d(b, d);
    n.div_floor(c)
}

/// An exact value in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod1Value(QuadNum);

impl Mod1Value {
    pub fn new(x: QuadNum) -> Result<Self> {
        if x.signum() < 0 || x.floor() != BigInt::zero() {
            return param(format!("{x} is not in [0, 1)"));
        }
        Ok(Self(x))
    }

    pub fn value(&self) -> &QuadNum {
        &self.0
    }

    pub fn into_inner(self) -> QuadNum {
        self.0
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({} {} {}*sqrt({}))/{}",
            self.a,
            sign,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            /// Panics when the operands live in different fields (or on division by zero).
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

pub fn qn_arith(u: &QuadNum, v: &QuadNum, op: ArithOp) -> Result<QuadNum> {
    match op {
        ArithOp::Add => u.checked_add(v),
        ArithOp::Sub => u.checked_sub(v),
        ArithOp::Mul => u.checked_mul(v),
        ArithOp::Div => u.checked_div(v),
        ArithOp::Neg => {
            u.same_field(v)?;
            Ok(-u)
        }
    }
}

pub fn qn_sign(u: &QuadNum) -> i8 {
    u.signum()
}

pub fn qn_floor(u: &QuadNum) -> BigInt {
    u.floor()
}

pub fn qn_fract(u: &QuadNum) -> Mod1Value {
    u.fract()
}

pub fn qn_dist_to_z(u: &QuadNum) -> QuadNum {
    u.dist_to_z()
}

/// φ^e for φ = (m + 2 + √d)/2. φ has norm 1, so φ^{−1} is its conjugate.
pub fn phi_pow(m: u32, e: i64) -> Result<QuadNum> {
    let params = AlphaParams::new(m)?;
    let phi = QuadNum::phi(params);
    let base = if e < 0 { phi.conjugate() } else { phi };
    base.pow(e.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qn(a: i64, b: i64, c: i64, d: u64) -> QuadNum {
        QuadNum::new(a.into(), b.into(), c.into(), d).unwrap()
    }

    #[test]
    fn phi_is_a_unit() {
        let phi = phi_pow(2, 1).unwrap();
        let bar = phi.conjugate();
        assert_eq!(&phi * &bar, QuadNum::one(12));
    }

    #[test]
    fn additive_identity() {
        let x = qn(3, -7, 5, 12);
        assert_eq!(&x + &QuadNum::zero(12), x);
    }

    #[test]
    fn inverse_of_phi() {
        let inv = &QuadNum::one(12) / &phi_pow(2, 1).unwrap();
        assert_eq!(inv, qn(4, -1, 2, 12));
        assert_eq!(inv, phi_pow(2, -1).unwrap());
        // (4 − √12)/2 is already canonical: gcd(4, 1, 2) = 1
        assert_eq!(inv.a(), &BigInt::from(4));
        assert_eq!(inv.b(), &BigInt::from(-1));
        assert_eq!(inv.c(), &BigInt::from(2));
    }

    #[test]
    fn canonical_form() {
        let x = qn(-8, -2, -4, 12);
        assert_eq!((x.a(), x.b(), x.c()), (&4.into(), &1.into(), &2.into()));
        assert_eq!(qn(0, 0, -7, 12), QuadNum::zero(12));
        assert!(QuadNum::new(1.into(), 1.into(), 1.into(), 16).is_err());
        assert!(QuadNum::new(1.into(), 1.into(), 0.into(), 12).is_err());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let x = qn(1, 1, 1, 12);
        let y = qn(1, 1, 1, 21);
        assert!(matches!(
            x.checked_add(&y),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(matches!(
            qn_arith(&x, &y, ArithOp::Mul),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(matches!(
            x.checked_div(&QuadNum::zero(12)),
            Err(Error::DivisionByZero(12))
        ));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(qn_sign(&qn(2, -1, 2, 12)), -1);
        assert_eq!(qn_sign(&QuadNum::zero(12)), 0);
        assert_eq!(qn_sign(&qn(-2, 1, 2, 12)), 1);
    }

    #[test]
    fn floor_examples() {
        let phi = phi_pow(2, 1).unwrap();
        assert_eq!(qn_floor(&phi), BigInt::from(3));
        assert_eq!(qn_floor(&QuadNum::from_int(7, 12)), BigInt::from(7));
        assert_eq!(qn_floor(&-&phi), BigInt::from(-4));
        assert_eq!(qn_floor(&qn(-7, 0, 2, 12)), BigInt::from(-4));
    }

    #[test]
    fn fract_examples() {
        let phi = phi_pow(2, 1).unwrap();
        assert_eq!(qn_fract(&phi).into_inner(), qn(-2, 1, 2, 12));
        assert_eq!(
            qn_fract(&QuadNum::from_int(5, 12)).into_inner(),
            QuadNum::zero(12)
        );
        let f = qn_fract(&-&phi).into_inner();
        // 4 − φ
        assert_eq!(f, qn(4, -1, 2, 12));
        assert!((f.to_f64() - 0.267_949_192_431_122_7).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let phi = phi_pow(2, 1).unwrap();
        assert_eq!(qn_dist_to_z(&phi), qn(4, -1, 2, 12));
        assert_eq!(qn_dist_to_z(&qn(1, 0, 2, 12)), qn(1, 0, 2, 12));
        assert_eq!(qn_dist_to_z(&QuadNum::from_int(3, 12)), QuadNum::zero(12));
    }

    #[test]
    fn phi_powers() {
        assert_eq!(phi_pow(2, 1).unwrap(), qn(4, 1, 2, 12));
        assert_eq!(phi_pow(2, 0).unwrap(), QuadNum::one(12));
        assert_eq!(phi_pow(2, -1).unwrap(), qn(4, -1, 2, 12));
        for m in 2..=6u32 {
            let d = AlphaParams::new(m).unwrap().d();
            for e in 0..=40i64 {
                let p = phi_pow(m, e).unwrap();
                let q = phi_pow(m, -e).unwrap();
                assert_eq!(&p * &q, QuadNum::one(d), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn to_f64_handles_cancellation() {
        // φ^{−30} has huge coefficients of opposite sign
        let x = phi_pow(2, -30).unwrap();
        let expected = (2.0 + 3f64.sqrt()).powi(-30);
        assert!(((x.to_f64() - expected) / expected).abs() < 1e-14);
    }

    #[test]
    fn display() {
        assert_eq!(qn(4, -1, 2, 12).to_string(), "(4 - 1*sqrt(12))/2");
    }
}
