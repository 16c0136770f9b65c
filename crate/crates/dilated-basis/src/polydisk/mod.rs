//! Multi-frequency analysis in the Hardy space of the polydisk.
//!
//! On each dilation chain the system reads v(alpha) = A(w) w^alpha in
//! H^2(D^m) with the Taylor-coefficient inner product. This module computes
//! the reciprocal Taylor table of A, the explicit biorthogonal duals
//! Phi_tau, shell sums with the H^2 membership verdict for 1/A, the
//! Riesz-basis verdict, exact Gram sections, and partial-sum operator norms.

mod duals;
mod estar;
mod riesz;
mod shells;
mod sigma;
pub mod table;

pub use duals::{
    biorthogonality_suite, dual_functional, dual_functional_from_table, BiorthReport,
    DualFunctional,
};
pub use estar::EStarSymbol;
pub use riesz::{gram_section_polydisk, riesz_basis_verdict, RieszAnswer, RieszVerdict};
pub use shells::{
    h2_verdict, h2_verdict_with, shell_sums, shell_sums_from_table, DivergenceEvidence,
    H2Membership, H2Verdict, ShellSums,
};
pub use sigma::{
    partial_sum_norms, rank_one_norm_by_matrix, ExhaustionCheck, PartialSumReport, SigmaOptions,
};
pub use table::{coefficient_series, CoefficientTable, StorageMode};
