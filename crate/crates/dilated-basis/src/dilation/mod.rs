//! Single-prime dilation analysis in L^2[0, pi].
//!
//! With e_n = sqrt(2/pi) sin(nx) orthonormal and T: f(x) -> f(px), the system
//! under study is u_n = a(T){sin nx} = sum_j a_j e_{p^j n} (up to one global
//! constant that cancels from every verdict). Everything here works on those
//! coefficient ladders: Gram sections, basis/completeness/minimality
//! verdicts driven by root classification, reproducing-kernel incompleteness
//! witnesses, biorthogonal dual chains, and the dual-norm growth law.

mod duals;
mod gram;
mod verdict;
mod witness;

pub use duals::{
    dual_chain_norms, exponent_fit, minimality_duals, DualChainNorms, DualFunctional1D,
    ExponentFit, MinimalityReport,
};
pub use gram::gram_section;
pub use verdict::{basis_verdict, BasisVerdict, Completeness};
pub use witness::{incompleteness_witness, Witness};

use crate::error::{Error, Result};
use crate::symbol::{PrimeSet, UnivariatePolynomial};
use num_complex::Complex64;

/// A dilated system specified by its frequency-ladder coefficients a_0..a_m
/// and the dilation prime p: u_n = sum_j a_j e_{p^j n}.
#[derive(Debug, Clone)]
pub struct DilationSystemSpec {
    coeffs: Vec<Complex64>,
    prime: u64,
    pub label: String,
}

impl DilationSystemSpec {
    pub fn new(coeffs: Vec<Complex64>, prime: u64, label: impl Into<String>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegenerateInput(
                "dilation spec needs degree >= 1 (at least two coefficients)".into(),
            ));
        }
        if coeffs[0].norm() == 0.0 {
            return Err(Error::DegenerateInput("a_0 must be nonzero".into()));
        }
        if coeffs.last().unwrap().norm() == 0.0 {
            return Err(Error::DegenerateInput("a_m must be nonzero".into()));
        }
        PrimeSet::new(vec![prime])?;
        Ok(DilationSystemSpec {
            coeffs,
            prime,
            label: label.into(),
        })
    }

    pub fn from_real(coeffs: &[f64], prime: u64, label: impl Into<String>) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            prime,
            label,
        )
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The symbol a(z) = sum a_j z^j.
    pub fn symbol(&self) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.coeffs.clone()).expect("validated at construction")
    }

    /// Exponent of p in n together with the coprime part: n = omega * p^tau.
    pub fn chain_position(&self, n: u64) -> (u64, u32) {
        let mut omega = n;
        let mut tau = 0;
        while omega % self.prime == 0 {
            omega /= self.prime;
            tau += 1;
        }
        (omega, tau)
    }

    /// Coefficient of u_n on e_k: sum of a_j over j with p^j n = k. At most
    /// one j contributes.
    pub fn u_coefficient(&self, n: u64, k: u64) -> Complex64 {
        if k % n == 0 {
            let mut q = k / n;
            let mut j = 0usize;
            while q % self.prime == 0 {
                q /= self.prime;
                j += 1;
            }
            if q == 1 && j <= self.degree() {
                return self.coeffs[j];
            }
        }
        Complex64::new(0.0, 0.0)
    }
}
