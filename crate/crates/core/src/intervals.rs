//! Intervals on ℝ/ℤ that characterise Ostrowski truncations.
//!
//! For `k ≥ 2`, `k₀ = ⌊k/2⌋` and `p_k(n) = (−1)^k n φ`:
//!
//! | k    | A_k^(1)                              | A_k^(2)                                 |
//! |------|--------------------------------------|-----------------------------------------|
//! | even | `[(m−√d)/(2φ^k₀), φ^−k₀)`            | `[(m−√d)/(2φ^k₀), φ^−(k₀+1))`           |
//! | odd  | `[−φ^−(k₀+1), (−m+√d)/(2φ^k₀))`      | `[−φ^−(k₀+1), (−m−1+√d)/φ^k₀)`          |
//!
//! and `R_k(u) = p_k(u) + A_k^(1)` for `u < q_{k−1}`, `p_k(u) + A_k^(2)` for
//! `q_{k−1} ≤ u < q_k`. Then `t_α(n;k) = u` exactly when `p_k(n) ∈ R_k(u) + ℤ`,
//! and the reductions of the `R_k(u)` mod 1 tile `[0, 1)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{param, Result};
use crate::numeration::{AlphaParams, OstrowskiTable};
use crate::quadratic::{phi_pow, Mod1Value, QuadNum};

/// Which of the two base intervals applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `u < q_{k−1}`
    First,
    /// `q_{k−1} ≤ u < q_k`
    Second,
}

impl Regime {
    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Regime::First),
            2 => Ok(Regime::Second),
            _ => param(format!("interval selector must be 1 or 2, got {which}")),
        }
    }
}

/// A half-open interval `[lo, hi)` with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: QuadNum,
    pub hi: QuadNum,
}

impl Interval {
    pub fn measure(&self) -> QuadNum {
        &self.hi - &self.lo
    }

    pub fn shifted(&self, by: &QuadNum) -> Self {
        Interval {
            lo: &self.lo + by,
            hi: &self.hi + by,
        }
    }

    pub fn contains(&self, x: &QuadNum) -> bool {
        self.lo.cmp_exact(x).unwrap() != Ordering::Greater
            && x.cmp_exact(&self.hi).unwrap() == Ordering::Less
    }

    /// True when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo.cmp_exact(&self.lo).unwrap() != Ordering::Greater
            && self.hi.cmp_exact(&other.hi).unwrap() != Ordering::Greater
    }
}

/// An interval `[lo, hi)` together with its image in `[0, 1)`: one piece, or two
/// when it wraps past an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMod1 {
    pub lo: QuadNum,
    pub hi: QuadNum,
    pub reduced: Vec<Interval>,
}

impl IntervalMod1 {
    pub fn new(interval: Interval) -> Result<Self> {
        let Interval { lo, hi } = interval;
        let d = lo.d();
        let width = &hi - &lo;
        if width.signum() <= 0 {
            return param(format!("empty interval [{lo}, {hi})"));
        }
        if width.cmp_exact(&QuadNum::one(d))? == Ordering::Greater {
            return param(format!("interval [{lo}, {hi}) is longer than 1"));
        }
        let shift = lo.floor();
        let start = lo.add_integer(&-&shift);
        let end = hi.add_integer(&-&shift);
        let one = QuadNum::one(d);
        let reduced = if end.cmp_exact(&one)? != Ordering::Greater {
            vec![Interval { lo: start, hi: end }]
        } else {
            vec![
                Interval { lo: start, hi: one },
                Interval {
                    lo: QuadNum::zero(d),
                    hi: end.add_integer(&BigInt::from(-1)),
                },
            ]
        };
        Ok(Self { lo, hi, reduced })
    }

    pub fn measure(&self) -> QuadNum {
        &self.hi - &self.lo
    }

    /// Whether `x ∈ [lo, hi) + ℤ`.
    pub fn contains_mod1(&self, x: &Mod1Value) -> bool {
        self.reduced.iter().any(|piece| piece.contains(x.value()))
    }
}

/// `p_k(n) = (−1)^k n φ`.
pub fn p_k(n: &BigInt, k: usize, m: u32) -> Result<QuadNum> {
    let params = AlphaParams::new(m)?;
    if k < 2 {
        return param(format!("k must be at least 2, got {k}"));
    }
    let phi = QuadNum::phi(params);
    let signed = if k.is_multiple_of(2) { n.clone() } else { -n };
    Ok(phi.mul_integer(&signed))
}

/// The base interval `A_k^{(which)}`.
pub fn build_a(k: usize, m: u32, which: Regime) -> Result<Interval> {
    let params = AlphaParams::new(m)?;
    if k < 2 {
        return param(format!("k must be at least 2, got {k}"));
    }
    let d = params.d();
    let k0 = (k / 2) as i64;
    let mi = BigInt::from(m);
    let sqrt_d = QuadNum::sqrt_d(d)?;
    let inv_k0 = phi_pow(m, -k0)?;
    let inv_k0_1 = phi_pow(m, -k0 - 1)?;
    let two = QuadNum::from_int(2, d);
    let interval = if k.is_multiple_of(2) {
        // (m − √d)/(2φ^k₀)
        let lo = &(&QuadNum::from_integer(mi, d) - &sqrt_d) * &inv_k0 / two;
        let hi = match which {
            Regime::First => inv_k0,
            Regime::Second => inv_k0_1,
        };
        Interval { lo, hi }
    } else {
        let lo = -inv_k0_1;
        let hi = match which {
            // (−m + √d)/(2φ^k₀)
            Regime::First => &(&sqrt_d - &QuadNum::from_integer(mi, d)) * &inv_k0 / two,
            // (−m − 1 + √d)/φ^k₀
            Regime::Second => &(&sqrt_d - &QuadNum::from_integer(mi + 1, d)) * &inv_k0,
        };
        Interval { lo, hi }
    };
    Ok(interval)
}

/// Exact endpoint paired with an `f64` approximation used to skip exact
/// comparisons when the two values are clearly apart.
#[derive(Clone, Debug)]
struct Endpoint {
    exact: QuadNum,
    approx: f64,
}

impl Endpoint {
    fn new(exact: QuadNum) -> Self {
        let approx = exact.to_f64();
        Self { exact, approx }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        // to_f64 is accurate to a few ulps; values here lie in [0, 1]
        let gap = self.approx - other.approx;
        if gap > 1e-12 {
            Ordering::Greater
        } else if gap < -1e-12 {
            Ordering::Less
        } else {
            self.exact.cmp_exact(&other.exact).unwrap()
        }
    }
}

#[derive(Clone, Debug)]
struct Piece {
    start: Endpoint,
    end: Endpoint,
    u: u64,
}

/// All `R_k(u)`, `0 ≤ u < q_k`, with their reductions sorted along `[0, 1)`.
#[derive(Clone, Debug)]
pub struct RkFamily {
    params: AlphaParams,
    k: usize,
    boundary: u64,
    intervals: Vec<IntervalMod1>,
    pieces: Vec<Piece>,
}

/// First failure found by [`verify_partition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `[0, 1)` not fully covered: nothing starts at `point`, which follows the
    /// piece of `after` (or is 0 when `after` is `None`).
    Gap { point: QuadNum, after: Option<u64> },
    /// The pieces of `u` and `v` both contain `point`.
    Overlap { point: QuadNum, u: u64, v: u64 },
    /// The reduced measures do not add up to 1.
    Measure { total: QuadNum },
}

impl Violation {
    pub fn describe(&self) -> String {
        match self {
            Violation::Gap { point, after } => match after {
                Some(u) => format!("gap at {point} ≈ {:.12} after R({u})", point.to_f64()),
                None => format!("gap at {point} ≈ {:.12}", point.to_f64()),
            },
            Violation::Overlap { point, u, v } => format!(
                "R({u}) and R({v}) overlap at {point} ≈ {:.12}",
                point.to_f64()
            ),
            Violation::Measure { total } => {
                format!("measures sum to {total} ≈ {:.12}", total.to_f64())
            }
        }
    }
}

impl RkFamily {
    pub fn build(k: usize, m: u32) -> Result<Self> {
        let params = AlphaParams::new(m)?;
        if k < 2 {
            return param(format!("k must be at least 2, got {k}"));
        }
        let table = OstrowskiTable::new(params);
        if k + 1 >= table.q().len() {
            return param(format!("k = {k} is too large for an explicit family"));
        }
        let q_k = table.q()[k];
        let boundary = table.q()[k - 1];
        let first = build_a(k, m, Regime::First)?;
        let second = build_a(k, m, Regime::Second)?;
        let phi = QuadNum::phi(params);
        let intervals = (0..q_k)
            .into_par_iter()
            .map(|u| {
                let base = if u < boundary { &first } else { &second };
                let shift = p_k_with(&phi, u, k);
                IntervalMod1::new(base.shifted(&shift))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut family = Self {
            params,
            k,
            boundary,
            intervals,
            pieces: Vec::new(),
        };
        family.index();
        Ok(family)
    }

    fn index(&mut self) {
        let mut pieces: Vec<Piece> = self
            .intervals
            .par_iter()
            .enumerate()
            .flat_map_iter(|(u, iv)| {
                iv.reduced.iter().map(move |p| Piece {
                    start: Endpoint::new(p.lo.clone()),
                    end: Endpoint::new(p.hi.clone()),
                    u: u as u64,
                })
            })
            .collect();
        pieces.par_sort_by(|a, b| a.start.cmp(&b.start).then(a.u.cmp(&b.u)));
        self.pieces = pieces;
    }

    pub fn params(&self) -> AlphaParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `q_{k−1}`, where the second regime begins.
    pub fn boundary(&self) -> u64 {
        self.boundary
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval(&self, u: u64) -> &IntervalMod1 {
        &self.intervals[u as usize]
    }

    pub fn regime(&self, u: u64) -> Regime {
        if u < self.boundary {
            Regime::First
        } else {
            Regime::Second
        }
    }

    /// Exact sum of the measures of all reduced pieces.
    pub fn total_measure(&self) -> QuadNum {
        let d = self.params.d();
        self.pieces.iter().fold(QuadNum::zero(d), |acc, p| {
            &acc + &(&p.end.exact - &p.start.exact)
        })
    }

    /// The `u` whose reduced interval contains `x`, by binary search over the
    /// sorted pieces. Meaningful once [`verify_partition`] has passed.
    pub fn locate(&self, x: &Mod1Value) -> Option<u64> {
        let probe = Endpoint::new(x.value().clone());
        let idx = self
            .pieces
            .partition_point(|p| p.start.cmp(&probe) != Ordering::Greater);
        let piece = self.pieces.get(idx.checked_sub(1)?)?;
        (probe.cmp(&piece.end) == Ordering::Less).then_some(piece.u)
    }

    /// `u` such that `t_α(n;k) = u`, read off the partition.
    pub fn truncation_of(&self, n: &BigInt) -> Option<u64> {
        let phi = QuadNum::phi(self.params);
        let signed = if self.k.is_multiple_of(2) {
            n.clone()
        } else {
            -n
        };
        self.locate(&phi.mul_integer(&signed).fract())
    }

    /// Replaces `R_k(u)` by `[lo, hi + delta)`; used to check that faults are caught.
    pub fn widen(&mut self, u: u64, delta: &QuadNum) -> Result<()> {
        let iv = &self.intervals[u as usize];
        let widened = Interval {
            lo: iv.lo.clone(),
            hi: &iv.hi + delta,
        };
        self.intervals[u as usize] = IntervalMod1::new(widened)?;
        self.index();
        Ok(())
    }
}

fn p_k_with(phi: &QuadNum, u: u64, k: usize) -> QuadNum {
    let n = if k.is_multiple_of(2) {
        BigInt::from(u)
    } else {
        -BigInt::from(u)
    };
    phi.mul_integer(&n)
}

/// Exact check that the reduced `R_k(u)` are pairwise disjoint, cover `[0, 1)`,
/// and have total measure 1. Returns the first violation found.
pub fn verify_partition(family: &RkFamily) -> std::result::Result<(), Violation> {
    let d = family.params.d();
    let zero = QuadNum::zero(d);
    let one = QuadNum::one(d);
    let mut cursor = zero;
    let mut last: Option<u64> = None;
    for piece in &family.pieces {
        match piece.start.exact.cmp_exact(&cursor).unwrap() {
            Ordering::Greater => {
                return Err(Violation::Gap {
                    point: cursor,
                    after: last,
                })
            }
            Ordering::Less => {
                return Err(Violation::Overlap {
                    point: piece.start.exact.clone(),
                    u: last.expect("first piece cannot start below 0"),
                    v: piece.u,
                })
            }
            Ordering::Equal => {}
        }
        cursor = piece.end.exact.clone();
        last = Some(piece.u);
    }
    if cursor != one {
        let covered_past = cursor.cmp_exact(&one).unwrap() == Ordering::Greater;
        if covered_past {
            // a piece reaching past 1 would have been split on reduction
            return Err(Violation::Measure {
                total: family.total_measure(),
            });
        }
        return Err(Violation::Gap {
            point: cursor,
            after: last,
        });
    }
    let total = family.total_measure();
    if total != QuadNum::one(d) {
        return Err(Violation::Measure { total });
    }
    Ok(())
}

pub fn build_rk_family(k: usize, m: u32) -> Result<RkFamily> {
    RkFamily::build(k, m)
}

/// Whether `(−1)^k n φ ∈ R_k(u) + ℤ`.
pub fn membership(n: &BigInt, k: usize, u: &BigInt, m: u32) -> Result<bool> {
    let params = AlphaParams::new(m)?;
    if k < 2 {
        return param(format!("k must be at least 2, got {k}"));
    }
    let table = OstrowskiTable::new(params);
    if k >= table.q().len() {
        return param(format!("k = {k} is out of range"));
    }
    let q_k = table.q()[k];
    let u = match u.to_u64() {
        Some(u) if u < q_k => u,
        _ => return param(format!("u = {u} must lie in [0, q_{k}) = [0, {q_k})")),
    };
    let which = if u < table.q()[k - 1] {
        Regime::First
    } else {
        Regime::Second
    };
    let phi = QuadNum::phi(params);
    let r = IntervalMod1::new(build_a(k, m, which)?.shifted(&p_k_with(&phi, u, k)))?;
    let x = p_k(n, k, m)?.fract();
    Ok(r.contains_mod1(&x))
}
