use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;

use ostrowski::intervals::membership;
use ostrowski::numeration::{
    decode, encode, truncate_alpha, AlphaParams, DigitCounter, OstrowskiCounter, OstrowskiTable,
};
use ostrowski::quadratic::QuadNum;
use ostrowski::spectra::{fourier_table, kappa, vdc_check, Angle};

const NON_SQUARES: [u64; 10] = [2, 3, 5, 6, 7, 8, 12, 21, 32, 45];

fn quad() -> impl Strategy<Value = (i64, i64, i64)> {
    (
        -500i64..500,
        -500i64..500,
        prop_oneof![1i64..300, -300i64..-1],
    )
}

fn qn(d: u64, (a, b, c): (i64, i64, i64)) -> QuadNum {
    QuadNum::new(a.into(), b.into(), c.into(), d).unwrap()
}

/// Floor of `(a + b√d)/c` from `s = ⌊√d·2^k⌋`, when the enclosure pins it down.
fn bracketed_floor(x: &QuadNum, bits: u32) -> Option<BigInt> {
    let scale = BigInt::one() << bits;
    let s = (BigInt::from(x.d()) * &scale * &scale).sqrt();
    let ends = [s.clone(), s + 1];
    let vals: Vec<BigInt> = ends
        .iter()
        .map(|e| {
            let num = x.a() * &scale + x.b() * e;
            let den = x.c() * &scale;
            num_integer::Integer::div_floor(&num, &den)
        })
        .collect();
    (vals[0] == vals[1]).then(|| vals[0].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn encode_decode_round_trip(n in any::<u64>(), m in 2u32..60) {
        let big = BigUint::from(n);
        let ds = encode(&big, m).unwrap();
        prop_assert_eq!(decode(&ds).unwrap(), big);
        let params = AlphaParams::new(m).unwrap();
        let b = ds.digits();
        if let Some(&b0) = b.first() {
            prop_assert!(b0 < params.partial_quotient(1));
        }
        for i in 1..b.len() {
            let bound = params.partial_quotient(i + 1);
            prop_assert!(b[i] <= bound);
            if b[i] == bound {
                prop_assert_eq!(b[i - 1], 0);
            }
        }
    }

    #[test]
    fn counter_tracks_encoding(start in 0u64..1_000_000_000_000, m in 2u32..9) {
        let table = OstrowskiTable::new(AlphaParams::new(m).unwrap());
        let mut c = OstrowskiCounter::with_table(table.clone(), start);
        for _ in 0..300 {
            prop_assert_eq!(c.digit_sum(), table.digit_sum(c.value()));
            c.increment();
        }
    }

    #[test]
    fn field_axioms(d in prop::sample::select(NON_SQUARES.to_vec()), x in quad(), y in quad(), z in quad()) {
        let (x, y, z) = (qn(d, x), qn(d, y), qn(d, z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert_eq!(&x / &x, QuadNum::one(d));
            prop_assert_eq!(&(&y / &x) * &x, y);
        }
    }

    #[test]
    fn floor_matches_high_precision(d in prop::sample::select(NON_SQUARES.to_vec()), x in quad()) {
        let x = qn(d, x);
        let f = x.floor();
        if let Some(g) = bracketed_floor(&x, 256) {
            prop_assert_eq!(&f, &g);
        }
        let lo = QuadNum::from_integer(f.clone(), d);
        let hi = QuadNum::from_integer(f + 1, d);
        prop_assert!(lo <= x && x < hi);
        let frac = x.fract().into_inner();
        prop_assert!(frac.signum() >= 0 && frac < QuadNum::one(d));
    }

    #[test]
    fn sign_agrees_with_float(d in prop::sample::select(NON_SQUARES.to_vec()), x in quad()) {
        let x = qn(d, x);
        let f = x.to_f64();
        prop_assert!(f.is_finite());
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.signum(), if f > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.signum() == 0, x.is_zero());
    }

    #[test]
    fn norm_is_multiplicative(d in prop::sample::select(NON_SQUARES.to_vec()), x in quad(), y in quad()) {
        let (x, y) = (qn(d, x), qn(d, y));
        let (n1, d1) = x.norm();
        let (n2, d2) = y.norm();
        let (n3, d3) = (&x * &y).norm();
        prop_assert_eq!(n3 * (&d1 * &d2), n1 * n2 * d3);
    }

    #[test]
    fn van_der_corput(
        z in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..48),
        r in 1usize..60,
    ) {
        let z: Vec<Complex64> = z.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let (lhs, rhs) = vdc_check(&z, r).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn kappa_is_nonnegative(h in 1u32..200, t in 0.0f64..1.0) {
        prop_assert!(kappa(h, t).unwrap() >= -1e-12);
    }

    #[test]
    fn angle_multiples_are_additive(p in 0i64..1000, q in 1i64..1000, x in 0.0f64..1.0, a in -10_000i64..10_000, b in -10_000i64..10_000) {
        for g in [Angle::rational(p, q).unwrap(), Angle::from_f64(x).unwrap()] {
            let lhs = g.times(a + b);
            let rhs = g.times(a) + g.times(b);
            prop_assert!((lhs + -rhs).is_zero());
        }
    }

    #[test]
    fn parseval_for_real_angles(q in 2u32..7, t in 1u32..5, theta in 0.0f64..1.0) {
        let table = fourier_table(q, t, Angle::from_f64(theta).unwrap()).unwrap();
        prop_assert!((table.parseval_sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn membership_picks_the_truncation(n in 0u64..1_000_000_000_000, k in 2usize..16, m in 2u32..5) {
        let (t, _) = truncate_alpha(&BigUint::from(n), k, m).unwrap();
        let table = OstrowskiTable::new(AlphaParams::new(m).unwrap());
        let q_k = table.q()[k];
        let n = BigInt::from(n);
        let t = BigInt::from(t);
        prop_assert!(membership(&n, k, &t, m).unwrap());
        let other = (&t + 1u32) % BigInt::from(q_k);
        if other != t {
            prop_assert!(!membership(&n, k, &other, m).unwrap());
        }
    }
}
