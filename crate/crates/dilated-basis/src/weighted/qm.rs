//! Finite sections of coordinate projections in weighted L^2(T^m; P).
//!
//! On the exponent box the Gram matrix is G(alpha, beta) = p(beta - alpha)
//! (Hermitian Toeplitz in the multi-index difference). A coordinate
//! projection Q keeping a subset of modes has section norm
//! sqrt(lambda_max(Q G Q, G)), computed through the Cholesky factor of G.
//!
//! Two projections matter here: the half-space projection Q_M keeping modes
//! with M(alpha) = sum alpha_j log p_j >= 0 (equivalently prod p_j^{alpha_j}
//! >= 1, decided exactly in integer arithmetic), and the partial-sum
//! projections onto {alpha <= tau}. The Q_M growth tables are exploratory:
//! finite sections bound the operator norm from below only.

use crate::error::{Error, Result};
use crate::linalg::pencil_largest_eigenvalue;
use crate::weighted::weight::TorusWeight;
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Serialize;

pub const MAX_QM_DIM: usize = 4096;

/// The linear ordering form: logarithms of primes (rationally independent)
/// or explicit rational weights for the comparison case.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearForm {
    PrimeLog { primes: Vec<u64> },
    Rational { coeffs: Vec<i64> },
}

impl LinearForm {
    pub fn arity(&self) -> usize {
        match self {
            LinearForm::PrimeLog { primes } => primes.len(),
            LinearForm::Rational { coeffs } => coeffs.len(),
        }
    }

    /// Whether the mode alpha is kept, i.e. M(alpha) >= 0, decided exactly.
    pub fn keeps(&self, alpha: &[i64]) -> bool {
        match self {
            LinearForm::PrimeLog { primes } => {
                let mut num = BigUint::from(1u32);
                let mut den = BigUint::from(1u32);
                for (&p, &a) in primes.iter().zip(alpha) {
                    if a > 0 {
                        num *= BigUint::from(p).pow(a as u32);
                    } else if a < 0 {
                        den *= BigUint::from(p).pow((-a) as u32);
                    }
                }
                num >= den
            }
            LinearForm::Rational { coeffs } => {
                let v: i128 = coeffs
                    .iter()
                    .zip(alpha)
                    .map(|(&c, &a)| c as i128 * a as i128)
                    .sum();
                v >= 0
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub index_label: String,
    pub dim: usize,
    pub kept: usize,
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorNormReport {
    pub label: String,
    pub rows: Vec<NormRow>,
}

/// Gram matrix on an explicit list of exponents.
fn gram_on_exponents(weight: &TorusWeight, exponents: &[Vec<i64>]) -> Result<DMatrix<Complex64>> {
    let dim = exponents.len();
    if dim > MAX_QM_DIM {
        return Err(Error::SizeLimit {
            requested: dim,
            maximum: MAX_QM_DIM,
        });
    }
    let mut g = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for i in 0..dim {
        for j in 0..dim {
            let gamma: Vec<i64> = exponents[j]
                .iter()
                .zip(&exponents[i])
                .map(|(&b, &a)| b - a)
                .collect();
            g[(i, j)] = weight.fourier_coefficient(&gamma);
        }
    }
    Ok(g)
}

/// Section norm of the coordinate projection keeping `kept[i] == true`.
fn projection_section_norm(
    g: &DMatrix<Complex64>,
    kept: &[bool],
) -> Result<(f64, usize, bool)> {
    let dim = g.nrows();
    let mut qgq = g.clone();
    for i in 0..dim {
        for j in 0..dim {
            if !kept[i] || !kept[j] {
                qgq[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    // Near-degenerate top pairs stall the power iteration; cap it early and
    // let the dense fallback decide.
    let res = pencil_largest_eigenvalue(&qgq, g, 1e-10, 2_000)?;
    Ok((res.value.max(0.0).sqrt(), res.iterations, res.converged))
}

fn centered_box(arity: usize, n: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let width = (2 * n + 1) as usize;
    let total = width.pow(arity as u32);
    for mut idx in 0..total {
        let mut alpha = vec![0i64; arity];
        for slot in alpha.iter_mut() {
            *slot = (idx % width) as i64 - n;
            idx /= width;
        }
        out.push(alpha);
    }
    out
}

/// Norms of the Q_M half-space projection on boxes |alpha_j| <= n for
/// n = 1..=n_max, reported per n to expose growth or saturation.
pub fn qm_projection_norm(
    weight: &TorusWeight,
    form: &LinearForm,
    n_max: i64,
) -> Result<OperatorNormReport> {
    if form.arity() != weight.arity() {
        return Err(Error::DegenerateInput(format!(
            "form arity {} does not match weight arity {}",
            form.arity(),
            weight.arity()
        )));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let exponents = centered_box(weight.arity(), n);
        let g = gram_on_exponents(weight, &exponents)?;
        let kept: Vec<bool> = exponents.iter().map(|a| form.keeps(a)).collect();
        let kept_count = kept.iter().filter(|&&k| k).count();
        let (norm, iterations, converged) = projection_section_norm(&g, &kept)?;
        rows.push(NormRow {
            index_label: n.to_string(),
            dim: exponents.len(),
            kept: kept_count,
            norm,
            iterations,
            converged,
        });
    }
    Ok(OperatorNormReport {
        label: "qm_projection".into(),
        rows,
    })
}

fn nonneg_box(arity: usize, n: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let width = (n + 1) as usize;
    let total = width.pow(arity as u32);
    for mut idx in 0..total {
        let mut alpha = vec![0i64; arity];
        for slot in alpha.iter_mut() {
            *slot = (idx % width) as i64;
            idx /= width;
        }
        out.push(alpha);
    }
    out
}

/// Weighted norms of the partial-sum projections onto {alpha <= tau} on the
/// box [0, box_n]^m.
pub fn weighted_partial_sum_norms(
    weight: &TorusWeight,
    taus: &[Vec<u32>],
    box_n: u32,
) -> Result<OperatorNormReport> {
    let m = weight.arity();
    for tau in taus {
        if tau.len() != m {
            return Err(Error::DegenerateInput(format!(
                "tau {tau:?} has wrong arity for weight of arity {m}"
            )));
        }
        if tau.iter().any(|&t| t > box_n) {
            return Err(Error::DegenerateInput(format!(
                "tau {tau:?} exceeds the section box [0, {box_n}]^m"
            )));
        }
    }
    let exponents = nonneg_box(m, box_n);
    let g = gram_on_exponents(weight, &exponents)?;
    let mut rows = Vec::new();
    for tau in taus {
        let kept: Vec<bool> = exponents
            .iter()
            .map(|alpha| alpha.iter().zip(tau).all(|(&a, &t)| a <= t as i64))
            .collect();
        let kept_count = kept.iter().filter(|&&k| k).count();
        let (norm, iterations, converged) = projection_section_norm(&g, &kept)?;
        rows.push(NormRow {
            index_label: format!("{tau:?}"),
            dim: exponents.len(),
            kept: kept_count,
            norm,
            iterations,
            converged,
        });
    }
    Ok(OperatorNormReport {
        label: "weighted_partial_sums".into(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydisk::EStarSymbol;
    use crate::symbol::{MultiIndex, SparseSymbol};
    use crate::weighted::weight::{weight_from_estar, weight_from_symbol};
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn unit_weight(m: usize) -> TorusWeight {
        let a = SparseSymbol::new(m, vec![(MultiIndex(vec![0; m]), re(1.0))]).unwrap();
        weight_from_symbol(&a).unwrap()
    }

    #[test]
    fn prime_log_form_decides_exactly() {
        let f = LinearForm::PrimeLog { primes: vec![2, 3] };
        assert!(f.keeps(&[0, 0])); // 1 >= 1
        assert!(f.keeps(&[1, 0])); // 2 >= 1
        assert!(!f.keeps(&[-1, 0])); // 1/2 < 1
        assert!(f.keeps(&[-1, 1])); // 3/2 >= 1
        assert!(!f.keeps(&[2, -2])); // 4/9 < 1
        assert!(f.keeps(&[-2, 2])); // 9/4 >= 1
    }

    #[test]
    fn rational_form_is_a_half_space() {
        let f = LinearForm::Rational { coeffs: vec![1, 0] };
        assert!(f.keeps(&[0, -5]));
        assert!(f.keeps(&[3, 2]));
        assert!(!f.keeps(&[-1, 7]));
    }

    #[test]
    fn unweighted_projection_has_unit_norm() {
        for form in [
            LinearForm::PrimeLog { primes: vec![2, 3] },
            LinearForm::Rational { coeffs: vec![1, 0] },
        ] {
            let w = unit_weight(2);
            let report = qm_projection_norm(&w, &form, 4).unwrap();
            for row in &report.rows {
                assert!(
                    (row.norm - 1.0).abs() <= 1e-10,
                    "norm {} at n = {}",
                    row.norm,
                    row.index_label
                );
            }
        }
    }

    #[test]
    fn a2_weight_riesz_projection_saturates() {
        // 1D weight 5/4 - cos t is an A_2 weight; the half-line projection
        // norms must stay bounded as the section grows. The sections carry a
        // parity oscillation (the kept half of the box gains a row every
        // other step), so saturation is judged along each parity class.
        let a = SparseSymbol::from_univariate(&[re(1.0), re(-0.5)]).unwrap();
        let w = weight_from_symbol(&a).unwrap();
        let form = LinearForm::Rational { coeffs: vec![1] };
        let report = qm_projection_norm(&w, &form, 48).unwrap();
        let norms: Vec<f64> = report.rows.iter().map(|r| r.norm).collect();
        let last = *norms.last().unwrap();
        assert!(norms.iter().all(|&n| n < 3.0), "norms {norms:?}");
        let same_parity = norms[norms.len() - 3];
        assert!(
            (last - same_parity).abs() <= 0.02 * last,
            "no saturation: {} vs {}",
            same_parity,
            last
        );
    }

    #[test]
    fn weight_scaling_leaves_norms_invariant() {
        let a = SparseSymbol::from_univariate(&[re(1.0), re(-0.5)]).unwrap();
        let w = weight_from_symbol(&a).unwrap();
        let form = LinearForm::Rational { coeffs: vec![1] };
        let base = qm_projection_norm(&w, &form, 6).unwrap();
        for c in [0.1f64, 10.0] {
            let scaled = qm_projection_norm(&w.scaled(c), &form, 6).unwrap();
            for (a_row, b_row) in base.rows.iter().zip(&scaled.rows) {
                assert!(
                    (a_row.norm - b_row.norm).abs() <= 1e-8 * a_row.norm,
                    "scale {c}"
                );
            }
        }
    }

    #[test]
    fn gram_is_toeplitz_in_the_difference() {
        let e = EStarSymbol::uniform(2).unwrap();
        let w = weight_from_estar(&e).unwrap();
        let exps = centered_box(2, 2);
        let g = gram_on_exponents(&w, &exps).unwrap();
        for i in 0..exps.len() {
            for j in 0..exps.len() {
                // Find another pair with the same difference and compare.
                let d: Vec<i64> = exps[j].iter().zip(&exps[i]).map(|(&b, &a)| b - a).collect();
                for i2 in 0..exps.len() {
                    let j2_target: Vec<i64> =
                        exps[i2].iter().zip(&d).map(|(&a, &dd)| a + dd).collect();
                    if let Some(j2) = exps.iter().position(|e| *e == j2_target) {
                        assert!((g[(i, j)] - g[(i2, j2)]).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_sections_unit_weight_all_one() {
        let w = unit_weight(2);
        let taus: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 2], vec![3, 3]];
        let report = weighted_partial_sum_norms(&w, &taus, 4).unwrap();
        for row in &report.rows {
            assert!((row.norm - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn estar_m4_weighted_sections_grow() {
        // The section box must leave headroom above tau: a projection that
        // covers almost the whole box reverts toward the identity. Box 5 with
        // tau up to 2 keeps the coordinates dominated by the projection gap.
        let e = EStarSymbol::uniform(4).unwrap();
        let w = weight_from_estar(&e).unwrap();
        let taus: Vec<Vec<u32>> = (1..=2).map(|n| vec![n; 4]).collect();
        let report = weighted_partial_sum_norms(&w, &taus, 5).unwrap();
        let norms: Vec<f64> = report.rows.iter().map(|r| r.norm).collect();
        for pair in norms.windows(2) {
            assert!(pair[1] > pair[0], "norms {norms:?}");
        }
        assert!(norms[0] > 1.0);
    }

    #[test]
    fn model_weight_gram_stays_positive() {
        let w = TorusWeight::model(2);
        let form = LinearForm::PrimeLog { primes: vec![2, 3] };
        let report = qm_projection_norm(&w, &form, 5).unwrap();
        assert_eq!(report.rows.len(), 5);
        for row in &report.rows {
            assert!(row.norm >= 1.0 - 1e-9);
        }
    }
}
