//! Ostrowski and base-q numeration.
//!
//! For α = [0; 1, m, 1, m, …] the partial quotients are `a_i = 1` for odd `i` and
//! `a_i = m` for even `i`, giving the basis `q₀ = q₁ = 1`,
//! `q_n = m·q_{n−1} + q_{n−2}` (n even), `q_n = q_{n−1} + q_{n−2}` (n odd).
//! Every `n ≥ 0` has a unique digit string `b₀, b₁, …` (least significant first)
//! with `0 ≤ b₀ < a₁`, `0 ≤ b_i ≤ a_{i+1}` and `b_i = a_{i+1} ⇒ b_{i−1} = 0`.
//!
//! Encoding and decoding also accept an arbitrary finite list of positive partial
//! quotients through [`Basis::from_partial_quotients`]; everything else in the crate
//! works with the periodic case only.

mod basis;
mod counter;
mod digits;

pub use basis::{build_basis, closed_form_q, AlphaParams, Basis, Quotients};
pub use counter::{BaseQCounter, DigitCounter, OstrowskiCounter, OstrowskiTable};
pub use digits::{
    base_q_digits, count_valid_strings, decode, encode, s_alpha, s_q, s_q_trunc, truncate_alpha,
    BaseQDigits, DigitString,
};
