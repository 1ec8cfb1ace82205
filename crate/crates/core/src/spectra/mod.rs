//! Exponential sums attached to digit sums: Fourier coefficients of the base-q
//! digit function, the contraction sequence `μ_k`, joint sums, and numerical
//! checkers for the auxiliary inequalities.

mod angle;
mod fourier;
mod joint;
mod lemmas;
mod mu;
mod sum;

pub use angle::{cis_turns, unit_fraction, Angle, PhaseTable};
pub use fourier::{dft_reconstruct_check, fourier_table, FourierTable, MAX_TABLE_LEN};
pub use joint::{gelfond_sum, gelfond_sum_at, joint_exp_sum, joint_exp_sum_at};
pub use lemmas::{
    discrepancy_sum, elementary_bounds_check, kappa, m_sum, trunc_mismatch_count, vdc_check,
    DiscrepancyReport, ElementaryCheck, MismatchReport, Window,
};
pub use mu::{mu_decay_check, mu_sequence, DecayVerdict, MuSequence, DECAY_TOLERANCE};
pub use sum::{blocked_sum, blocks, compensated_sum, ComplexSum, Neumaier, BLOCK};
