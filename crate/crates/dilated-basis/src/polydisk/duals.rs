//! Explicit biorthogonal duals on the polydisk.
//!
//! Under the bilinear pairing <f, g> = (2pi)^{-m} integral of f*g over T^m
//! (no conjugation), monomials pair by exponent cancellation:
//! <w^{-tau}, w^alpha> = delta(alpha, tau). Truncating w^{-tau}/A(w) to its
//! finitely many non-positive exponents gives
//! Phi_tau = sum_{sigma <= tau} b(sigma) w^{sigma - tau}, and
//! <Phi_tau, v(alpha)> = delta(alpha, tau) for v(alpha) = A w^alpha — the
//! minimality certificate whenever A(0) != 0.

use crate::error::Result;
use crate::numerics::pairwise_sum;
use crate::polydisk::table::{coefficient_series, CoefficientTable, StorageMode};
use crate::symbol::{MultiIndex, SparseSymbol};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Phi_tau as a finite collection of coefficients b(sigma) over sigma <= tau;
/// the term at sigma multiplies w^{sigma - tau}.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    pub tau: MultiIndex,
    /// sigma -> b(sigma) over the box sigma <= tau.
    pub terms: BTreeMap<MultiIndex, Complex64>,
    /// ||Phi_tau||^2 = sum |b(sigma)|^2.
    pub norm_sq: f64,
}

impl DualFunctional {
    /// Bilinear pairing with v(alpha) = A w^alpha:
    /// sum_{beta in K, beta <= tau - alpha} a(beta) b(tau - alpha - beta).
    pub fn pair(&self, a: &SparseSymbol, alpha: &MultiIndex) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let Some(gap) = self.tau.checked_sub(alpha) else {
            return acc;
        };
        for (beta, &ab) in a.terms() {
            if let Some(sigma) = gap.checked_sub(beta) {
                if let Some(&b) = self.terms.get(&sigma) {
                    acc += ab * b;
                }
            }
        }
        acc
    }
}

/// Build Phi_tau from a coefficient table covering total degree |tau|.
pub fn dual_functional_from_table(
    table: &CoefficientTable,
    tau: &MultiIndex,
) -> Result<DualFunctional> {
    let mut terms = BTreeMap::new();
    let mut sq = Vec::with_capacity(MultiIndex::box_size(tau));
    for sigma in MultiIndex::box_iter(tau) {
        let b = table.get(&sigma).ok_or_else(|| {
            crate::error::Error::DegenerateInput(format!(
                "table cutoff {} too small for tau {tau:?}",
                table.cutoff()
            ))
        })?;
        sq.push(b.norm_sqr());
        if b.norm() > 0.0 {
            terms.insert(sigma, b);
        }
    }
    Ok(DualFunctional {
        tau: tau.clone(),
        terms,
        norm_sq: pairwise_sum(&sq),
    })
}

/// Build Phi_tau directly from the symbol.
pub fn dual_functional(a: &SparseSymbol, tau: &MultiIndex) -> Result<DualFunctional> {
    let table = coefficient_series(a, tau.total(), StorageMode::Full)?;
    dual_functional_from_table(&table, tau)
}

#[derive(Debug, Clone)]
pub struct BiorthReport {
    pub max_residual: f64,
    pub pairs_checked: usize,
    pub box_bound: MultiIndex,
}

/// Check |<Phi_tau, v(alpha)> - delta(alpha, tau)| over all alpha, tau in the
/// box and report the worst residual.
pub fn biorthogonality_suite(a: &SparseSymbol, tau_box: &MultiIndex) -> Result<BiorthReport> {
    let table = coefficient_series(a, tau_box.total(), StorageMode::Full)?;
    let mut max_residual = 0.0f64;
    let mut pairs = 0usize;
    for tau in MultiIndex::box_iter(tau_box) {
        let phi = dual_functional_from_table(&table, &tau)?;
        for alpha in MultiIndex::box_iter(tau_box) {
            let delta = if alpha == tau { 1.0 } else { 0.0 };
            let residual = (phi.pair(a, &alpha) - Complex64::new(delta, 0.0)).norm();
            max_residual = max_residual.max(residual);
            pairs += 1;
        }
    }
    Ok(BiorthReport {
        max_residual,
        pairs_checked: pairs,
        box_bound: tau_box.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydisk::estar::EStarSymbol;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn hand_computed_dual_for_two_variable_symbol() {
        // A = 1 - (w1 + w2)/2, tau = (1, 0): Phi = b(0,0) w1^{-1} + b(1,0)
        // with b(0,0) = 1 and b(1,0) = 1/2.
        let a = EStarSymbol::uniform(2).unwrap().symbol();
        let tau = MultiIndex(vec![1, 0]);
        let phi = dual_functional(&a, &tau).unwrap();
        assert!((phi.terms[&MultiIndex(vec![0, 0])] - re(1.0)).norm() < 1e-15);
        assert!((phi.terms[&MultiIndex(vec![1, 0])] - re(0.5)).norm() < 1e-15);
        // Pairing with v(0,0) = A: (-1/2) + (1/2) = 0.
        let p = phi.pair(&a, &MultiIndex(vec![0, 0]));
        assert!(p.norm() < 1e-15);
        // Pairing with v(tau) = 1.
        let p = phi.pair(&a, &tau);
        assert!((p - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_dual_is_reciprocal_of_constant() {
        let a = EStarSymbol::uniform(3).unwrap().symbol();
        let zero = MultiIndex(vec![0, 0, 0]);
        let phi = dual_functional(&a, &zero).unwrap();
        assert!((phi.pair(&a, &zero) - re(1.0)).norm() < 1e-15);
        assert_eq!(phi.terms.len(), 1);
    }

    #[test]
    fn exhaustive_box_check_for_estar_m3() {
        let a = EStarSymbol::uniform(3).unwrap().symbol();
        let report = biorthogonality_suite(&a, &MultiIndex(vec![2, 2, 2])).unwrap();
        assert_eq!(report.pairs_checked, 27 * 27);
        assert!(report.max_residual <= 1e-12, "got {}", report.max_residual);
    }

    #[test]
    fn dual_norm_matches_box_sum() {
        let a = EStarSymbol::uniform(2).unwrap().symbol();
        let tau = MultiIndex(vec![3, 2]);
        let phi = dual_functional(&a, &tau).unwrap();
        let table = coefficient_series(&a, 5, StorageMode::Full).unwrap();
        let box_sum = table.norm_sq_box(&tau).unwrap();
        assert!((phi.norm_sq - box_sum).abs() <= 1e-14 * box_sum);
    }
}
