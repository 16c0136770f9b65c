//! Weighted L^2(T^m; P) computations: the weight P = |A|^2 and the local
//! model weight, the profile of P near its zero, Muckenhoupt A_2 rectangle
//! scans, the singular-integral finiteness test, and finite sections of the
//! half-space projection Q_M and of partial-sum projections in the weighted
//! norm.

mod a2;
mod integral;
mod profile;
mod qm;
mod weight;

pub use a2::{a2_estimate, A2Options, A2Report, QuadStatus, RectangleResult, ScaleRow};
pub use integral::{
    integral_test, reduced_closed_form, IntegralOptions, IntegralTest, IntegralVerdict,
};
pub use profile::{weight_profile_check, WeightProfile};
pub use qm::{
    qm_projection_norm, weighted_partial_sum_norms, LinearForm, NormRow, OperatorNormReport,
};
pub use weight::{weight_from_estar, weight_from_symbol, TorusWeight};
