//! Ostrowski α-representations for α = [0; 1, m, 1, m, …] (m ≥ 2), base-q digit
//! sums, and the exponential-sum machinery used to study the joint distribution
//! of `(S_q(n) mod m₁, S_α(n) mod m₂)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeration`]: basis sequences, greedy encoding, digit sums, truncations and
//!   streaming digit automata for both numeration systems.
//! - [`quadratic`]: exact arithmetic in the real quadratic field Q(√d), d = m² + 4m.
//! - [`intervals`]: the mod-1 intervals characterising digit truncations and the
//!   exact partition check.
//! - [`spectra`]: Fourier coefficients, μ-sequences, kernels and the inequality
//!   checkers for the elementary exponential-sum lemmas.
//! - [`experiments`]: joint residue-class counts, scaling studies and report output.

pub mod error;
pub mod experiments;
pub mod intervals;
pub mod numeration;
pub mod quadratic;
pub mod spectra;

pub use error::{Error, Result};
