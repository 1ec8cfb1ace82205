//! Residue-class counting, scaling studies and report output.

mod counting;
mod report;
mod scaling;
mod suite;

pub use counting::{
    corollary_identity_check, joint_count, joint_count_at, JointCountReport, IDENTITY_MAX_N,
};
pub use report::{
    emit_report, mu_decay_report, partition_report, render, to_csv, to_json, CheckLine,
    ExpSumReport, Format, MuDecayReport, PartitionReport, Report,
};
pub use scaling::{
    least_squares, scaling_study, LinearFit, ScalingParams, ScalingReport, ScalingTarget,
};
pub use suite::{lemma_checks, random_sequences, SuiteConfig};
