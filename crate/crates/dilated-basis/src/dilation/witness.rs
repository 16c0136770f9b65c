//! Incompleteness witnesses from reproducing kernels.
//!
//! For a root alpha_0 of a(z) with |alpha_0| < 1, the H^2 reproducing kernel
//! at alpha_0, carried on the omega = 1 chain (coefficient conj(alpha_0)^j at
//! index p^j), is orthogonal to every u_n: on the chain the inner product is
//! alpha_0^t a(alpha_0) = 0, and off the chain it vanishes for support
//! reasons. Truncating at order N and normalizing leaves residuals bounded by
//! |alpha_0|^N (1 - |alpha_0|^2)^{-1/2} max|a_j| (m+1).

use crate::dilation::DilationSystemSpec;
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::symbol::classify_roots;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// The inner root alpha_0 in F^-.
    pub root: (f64, f64),
    /// Chain carrying the kernel (omega = 1).
    pub omega: u64,
    /// Truncation order: coefficients at p^0 .. p^N.
    pub truncation: usize,
    /// Unit-norm coefficients g_j at index p^j.
    pub coeffs: Vec<(f64, f64)>,
    /// max over tested n of |<u_n, g>|.
    pub max_residual: f64,
    /// Analytic truncation bound the residuals must respect.
    pub residual_bound: f64,
    /// Range of n the residual was measured over.
    pub n_tested: u64,
}

/// Build and verify the truncated reproducing-kernel witness for the
/// `which_root`-th inner root (ordered by modulus).
pub fn incompleteness_witness(
    spec: &DilationSystemSpec,
    which_root: usize,
    truncation: usize,
    n_test: u64,
) -> Result<Witness> {
    let cls = classify_roots(&spec.symbol(), 1e-8)?;
    let inner = cls.f_minus();
    if inner.is_empty() {
        return Err(Error::NoInnerRoot);
    }
    if which_root >= inner.len() {
        return Err(Error::DegenerateInput(format!(
            "root index {which_root} out of range: only {} inner roots",
            inner.len()
        )));
    }
    let alpha = inner[which_root].location_complex();

    // Kernel coefficients conj(alpha)^j, j = 0..truncation, normalized.
    let raw: Vec<Complex64> = (0..=truncation)
        .map(|j| alpha.conj().powu(j as u32))
        .collect();
    let norms: Vec<f64> = raw.iter().map(|c| c.norm_sqr()).collect();
    let norm = pairwise_sum(&norms).sqrt();
    let coeffs: Vec<Complex64> = raw.iter().map(|c| c / norm).collect();

    // <u_n, g> in the Hermitian coefficient inner product. Only n on the
    // omega = 1 chain (n = p^t) can overlap the kernel support.
    let m = spec.degree();
    let a = spec.coeffs();
    let mut max_residual = 0.0f64;
    for n in 1..=n_test {
        let (omega, t) = spec.chain_position(n);
        if omega != 1 {
            continue;
        }
        let t = t as usize;
        let mut inner_product = Complex64::new(0.0, 0.0);
        for (j, &aj) in a.iter().enumerate().take(m + 1) {
            if t + j <= truncation {
                inner_product += aj * coeffs[t + j].conj();
            }
        }
        max_residual = max_residual.max(inner_product.norm());
    }

    let max_a = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r = alpha.norm();
    let residual_bound = r.powi(truncation as i32) / (1.0 - r * r).sqrt() * max_a * (m as f64 + 1.0);

    Ok(Witness {
        root: (alpha.re, alpha.im),
        omega: 1,
        truncation,
        coeffs: coeffs.iter().map(|c| (c.re, c.im)).collect(),
        max_residual,
        residual_bound,
        n_tested: n_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_for_half_root() {
        let spec = DilationSystemSpec::from_real(&[1.0, -2.0], 2, "t").unwrap();
        let w = incompleteness_witness(&spec, 0, 30, 64).unwrap();
        assert!((w.root.0 - 0.5).abs() < 1e-10);
        assert!(w.max_residual <= 1e-8, "measured {}", w.max_residual);
        assert!(w.max_residual <= w.residual_bound);
        // Unit norm.
        let n2: f64 = w.coeffs.iter().map(|(re, im)| re * re + im * im).sum();
        assert!((n2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_inner_root_is_an_error() {
        let spec = DilationSystemSpec::from_real(&[2.0, -1.0], 2, "t").unwrap();
        assert!(matches!(
            incompleteness_witness(&spec, 0, 30, 64),
            Err(Error::NoInnerRoot)
        ));
    }

    #[test]
    fn witness_with_extra_outer_factor() {
        // (1 - 2z)(3 - z) = 3 - 7z + 2z^2; inner root 1/2 still works.
        let spec = DilationSystemSpec::from_real(&[3.0, -7.0, 2.0], 2, "t").unwrap();
        let w = incompleteness_witness(&spec, 0, 30, 64).unwrap();
        assert!((w.root.0 - 0.5).abs() < 1e-9);
        assert!(w.max_residual <= w.residual_bound);
        assert!(w.max_residual <= 1e-7);
    }

    #[test]
    fn residual_bound_holds_across_root_moduli() {
        // Short truncation with a deep test range so the measured residual
        // genuinely contains truncated tail terms (n = 2^t with t near the
        // truncation order), not just rounding noise.
        for &r in &[0.3f64, 0.5, 0.9] {
            // a(z) = (r - z)(2 - z) has the inner root r.
            let coeffs = [2.0 * r, -(r + 2.0), 1.0];
            let spec = DilationSystemSpec::from_real(&coeffs, 2, "t").unwrap();
            let w = incompleteness_witness(&spec, 0, 6, 512).unwrap();
            assert!(
                w.max_residual > 1e-12,
                "test should exercise actual truncation at r = {r}"
            );
            assert!(
                w.max_residual <= w.residual_bound,
                "bound violated at r = {r}: measured {} bound {}",
                w.max_residual,
                w.residual_bound
            );
        }
    }
}
