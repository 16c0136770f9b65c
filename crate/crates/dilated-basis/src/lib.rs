//! Numerical analysis of dilated function systems u_n(x) = S(nx) generated
//! by trigonometric polynomials.
//!
//! The crate decides and evidences three structural properties of such
//! systems — completeness, minimality, and (Riesz) basisness — in two models:
//!
//! * **Single-prime model** ([`dilation`]): S has frequency support on powers
//!   of one prime p, so u_n = a(T){sin nx} for the dilation T: f(x) -> f(px)
//!   and a polynomial symbol a(z). Verdicts follow from classifying the roots
//!   of a against the unit circle ([`symbol::classify_roots`]); the module
//!   also builds biorthogonal duals, incompleteness witnesses, and the
//!   dual-norm growth law.
//!
//! * **Multi-frequency model** ([`polydisk`]): frequencies factor over a set
//!   of primes p_1..p_m, l^2(N) splits into chains isomorphic to the Hardy
//!   space H^2(D^m), and the system becomes v(alpha) = A(w) w^alpha for a
//!   sparse symbol A. The module computes Taylor coefficients of 1/A,
//!   explicit dual functionals, shell sums with the H^2 membership verdict,
//!   Riesz-basis verdicts, and partial-sum operator norms.
//!
//! * **Weighted-torus experiments** ([`weighted`]): the weight P = |A|^2 on
//!   T^m, its local profile near the zero set, Muckenhoupt A_2 rectangle
//!   scans, a singular-integral finiteness test, and finite sections of the
//!   half-space projection Q_M in weighted L^2.
//!
//! All inner products are exact finite coefficient sums; quadrature only
//! appears where a weight must be averaged. Operations are pure functions of
//! their inputs and deterministic at any thread count.

pub mod dilation;
pub mod error;
pub mod linalg;
pub mod numerics;
pub mod polydisk;
pub mod symbol;
pub mod weighted;

pub use error::{Error, Result};
