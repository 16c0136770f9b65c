//! Partial-sum operators Sigma(tau) f = sum_{alpha <= tau} <Phi_alpha, f>
//! v(alpha) and their norms.
//!
//! The functional <Phi_alpha, .> only reads coefficients f_gamma with
//! gamma <= alpha, and v(alpha) = A w^alpha only writes exponents up to
//! alpha + deg(A). Sigma(tau) therefore acts exactly as a finite matrix from
//! the input box {gamma <= tau} to the output box {e <= tau + deg(A)}; a box
//! that large makes the finite section exact, and enlarging it only appends
//! zeros — the stability check guards the off-by-one cases.
//!
//! The rank-one projection P_tau f = <Phi_tau, f> v(tau) has norm
//! ||Phi_tau|| * ||v(tau)|| with ||v(tau)|| = ||A||_2 independent of tau.

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::polydisk::table::{coefficient_series, CoefficientTable, StorageMode};
use crate::symbol::{MultiIndex, SparseSymbol};
use serde::Serialize;
use std::collections::HashMap;

pub const MAX_SIGMA_INPUT: usize = 20_000;
pub const MAX_SIGMA_OUTPUT: usize = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct ExhaustionCheck {
    pub base_norm: f64,
    pub enlarged_norm: f64,
    pub rel_change: f64,
    /// Set when enlargement moved the norm by more than 2%.
    pub non_exhausted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartialSumReport {
    pub tau: MultiIndex,
    pub input_dim: usize,
    pub output_dim: usize,
    /// ||Sigma(tau)|| as the largest singular value of the exact section.
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// ||P_tau|| = ||Phi_tau|| * ||v(tau)||.
    pub rank_one_norm: f64,
    pub phi_norm: f64,
    pub v_norm: f64,
    pub exhaustion: ExhaustionCheck,
}

pub struct SigmaOptions {
    /// Extra box padding beyond tau + deg(A) for the stability check.
    pub slack: u32,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SigmaOptions {
    fn default() -> Self {
        SigmaOptions {
            slack: 2,
            tol: 1e-6,
            max_iter: 20_000,
        }
    }
}

/// Norms of Sigma(tau) for each tau in the list.
pub fn partial_sum_norms(
    a: &SparseSymbol,
    taus: &[MultiIndex],
    opts: &SigmaOptions,
) -> Result<Vec<PartialSumReport>> {
    let max_total = taus.iter().map(|t| t.total()).max().unwrap_or(0);
    let table = coefficient_series(a, max_total, StorageMode::Full)?;
    taus.iter()
        .map(|tau| partial_sum_norm_single(a, &table, tau, opts))
        .collect()
}

fn partial_sum_norm_single(
    a: &SparseSymbol,
    table: &CoefficientTable,
    tau: &MultiIndex,
    opts: &SigmaOptions,
) -> Result<PartialSumReport> {
    let m = a.arity();
    if tau.arity() != m {
        return Err(Error::DegenerateInput(format!(
            "tau {tau:?} has wrong arity for a symbol of arity {m}"
        )));
    }
    let deg = a.degree_profile();
    let exact_box = tau.add(&deg);

    let input_dim = MultiIndex::box_size(tau);
    if input_dim > MAX_SIGMA_INPUT {
        return Err(Error::SizeLimit {
            requested: input_dim,
            maximum: MAX_SIGMA_INPUT,
        });
    }

    let (base, base_iter) = section_norm(a, table, tau, &exact_box, opts)?;
    let slack_box = MultiIndex(exact_box.0.iter().map(|&e| e + opts.slack).collect());
    let (enlarged, _) = section_norm(a, table, tau, &slack_box, opts)?;
    let rel_change = (enlarged.0 - base.0).abs() / base.0.max(1e-300);

    let phi_norm = table.norm_sq_box(tau)?.sqrt();
    let v_norm = a.l2_norm();

    Ok(PartialSumReport {
        tau: tau.clone(),
        input_dim,
        output_dim: MultiIndex::box_size(&exact_box),
        norm: base.0,
        iterations: base_iter,
        converged: base.1,
        rank_one_norm: phi_norm * v_norm,
        phi_norm,
        v_norm,
        exhaustion: ExhaustionCheck {
            base_norm: base.0,
            enlarged_norm: enlarged.0,
            rel_change,
            non_exhausted: rel_change > 0.02,
        },
    })
}

/// Assemble the section of Sigma(tau) on the given output box and return its
/// largest singular value.
fn section_norm(
    a: &SparseSymbol,
    table: &CoefficientTable,
    tau: &MultiIndex,
    out_box: &MultiIndex,
    opts: &SigmaOptions,
) -> Result<((f64, bool), usize)> {
    let matrix = assemble_section(a, table, tau, out_box)?;
    let sv = matrix.largest_singular_value(opts.tol, opts.max_iter);
    Ok(((sv.value, sv.converged), sv.iterations))
}

/// M[e, gamma] = sum_{alpha <= tau, alpha >= gamma, e - alpha in K}
/// a(e - alpha) b(alpha - gamma), built from triplets over
/// (alpha, gamma <= alpha, beta in K).
fn assemble_section(
    a: &SparseSymbol,
    table: &CoefficientTable,
    tau: &MultiIndex,
    out_box: &MultiIndex,
) -> Result<SparseMatrix> {
    let output_dim = MultiIndex::box_size(out_box);
    if output_dim > MAX_SIGMA_OUTPUT {
        return Err(Error::SizeLimit {
            requested: output_dim,
            maximum: MAX_SIGMA_OUTPUT,
        });
    }
    let in_indices: Vec<MultiIndex> = MultiIndex::box_iter(tau).collect();
    let in_rank: HashMap<MultiIndex, u32> = in_indices
        .iter()
        .enumerate()
        .map(|(i, idx)| (idx.clone(), i as u32))
        .collect();
    let out_indices: Vec<MultiIndex> = MultiIndex::box_iter(out_box).collect();
    let out_rank: HashMap<MultiIndex, u32> = out_indices
        .iter()
        .enumerate()
        .map(|(i, idx)| (idx.clone(), i as u32))
        .collect();

    let mut triplets = Vec::new();
    for alpha in MultiIndex::box_iter(tau) {
        for gamma in MultiIndex::box_iter(&alpha) {
            let b = table
                .get(&alpha.checked_sub(&gamma).expect("gamma <= alpha"))
                .expect("table covers |tau|");
            if b.norm() == 0.0 {
                continue;
            }
            let col = in_rank[&gamma];
            for (beta, &ab) in a.terms() {
                let e = alpha.add(beta);
                // Out-of-box rows are dropped; with the exact box this never
                // happens, and the exhaustion check exposes it if it does.
                if let Some(&row) = out_rank.get(&e) {
                    triplets.push((row, col, ab * b));
                }
            }
        }
    }
    Ok(SparseMatrix::from_triplets(
        output_dim,
        MultiIndex::box_size(tau),
        triplets,
    ))
}

/// Matrix-route norm of the rank-one projection P_tau, for cross-checking
/// the product identity ||P_tau|| = ||Phi_tau|| ||v(tau)||.
pub fn rank_one_norm_by_matrix(a: &SparseSymbol, tau: &MultiIndex, tol: f64) -> Result<f64> {
    let table = coefficient_series(a, tau.total(), StorageMode::Full)?;
    let deg = a.degree_profile();
    let out_box = tau.add(&deg);
    let out_indices: Vec<MultiIndex> = MultiIndex::box_iter(&out_box).collect();
    let out_rank: HashMap<MultiIndex, u32> = out_indices
        .iter()
        .enumerate()
        .map(|(i, idx)| (idx.clone(), i as u32))
        .collect();
    let in_indices: Vec<MultiIndex> = MultiIndex::box_iter(tau).collect();

    let mut triplets = Vec::new();
    for (col, gamma) in in_indices.iter().enumerate() {
        let b = table.get(&tau.checked_sub(gamma).expect("gamma <= tau")).unwrap();
        if b.norm() == 0.0 {
            continue;
        }
        for (beta, &ab) in a.terms() {
            let e = tau.add(beta);
            triplets.push((out_rank[&e], col as u32, ab * b));
        }
    }
    let matrix = SparseMatrix::from_triplets(out_indices.len(), in_indices.len(), triplets);
    Ok(matrix.largest_singular_value(tol, 20_000).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydisk::estar::EStarSymbol;
    use num_complex::Complex64;

    #[test]
    fn sigma_zero_is_the_rank_one_projection() {
        // ||Sigma(0)|| = ||A||_2 / |A(0)|; for (E*) m=4 this is sqrt(1.25).
        let a = EStarSymbol::uniform(4).unwrap().symbol();
        let taus = vec![MultiIndex::zeros(4)];
        let reports = partial_sum_norms(&a, &taus, &SigmaOptions::default()).unwrap();
        let want = 1.25f64.sqrt();
        assert!(
            (reports[0].norm - want).abs() <= 1e-6 * want,
            "norm {} want {want}",
            reports[0].norm
        );
        assert!((reports[0].rank_one_norm - want).abs() <= 1e-12);
        assert!(!reports[0].exhaustion.non_exhausted);
    }

    #[test]
    fn riesz_case_norms_stay_bounded() {
        let a = SparseSymbol::from_univariate(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 0.0),
        ])
        .unwrap();
        let taus: Vec<MultiIndex> = (1..=6u32).map(|n| MultiIndex(vec![8 * n])).collect();
        let reports = partial_sum_norms(&a, &taus, &SigmaOptions::default()).unwrap();
        let norms: Vec<f64> = reports.iter().map(|r| r.norm).collect();
        for w in &norms {
            assert!(*w < 4.0, "norms {norms:?}");
        }
        // Saturation: the last two agree within 5%.
        let k = norms.len();
        assert!((norms[k - 1] - norms[k - 2]).abs() <= 0.05 * norms[k - 1]);
    }

    #[test]
    fn rank_one_identity_cross_checked_by_matrix_route() {
        let a = EStarSymbol::uniform(3).unwrap().symbol();
        for tau in [MultiIndex(vec![1, 0, 2]), MultiIndex(vec![2, 2, 2])] {
            let matrix_norm = rank_one_norm_by_matrix(&a, &tau, 1e-9).unwrap();
            let table = coefficient_series(&a, tau.total(), StorageMode::Full).unwrap();
            let product = table.norm_sq_box(&tau).unwrap().sqrt() * a.l2_norm();
            assert!(
                (matrix_norm - product).abs() <= 1e-6 * product,
                "tau {tau:?}: matrix {matrix_norm} product {product}"
            );
        }
    }

    #[test]
    fn estar_diagonal_norms_increase() {
        let a = EStarSymbol::uniform(4).unwrap().symbol();
        let taus: Vec<MultiIndex> = (1..=3u32).map(|n| MultiIndex(vec![n; 4])).collect();
        let reports = partial_sum_norms(&a, &taus, &SigmaOptions::default()).unwrap();
        for pair in reports.windows(2) {
            assert!(
                pair[1].norm > pair[0].norm,
                "expected strict growth: {} then {}",
                pair[0].norm,
                pair[1].norm
            );
        }
    }

    #[test]
    fn oversized_input_box_rejected() {
        let a = EStarSymbol::uniform(4).unwrap().symbol();
        let taus = vec![MultiIndex(vec![20; 4])];
        assert!(matches!(
            partial_sum_norms(&a, &taus, &SigmaOptions::default()),
            Err(Error::SizeLimit { .. })
        ));
    }
}
