//! Dense Hermitian linear algebra used by the Gram-section and operator-norm
//! machinery: eigenvalue extremes, power iteration for largest singular
//! values, and generalized eigenvalue bounds for weighted projections.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// A finite Hermitian section of a Gram matrix together with its eigenvalue
/// extremes and condition estimate.
#[derive(Debug, Clone)]
pub struct GramSection {
    pub dim: usize,
    pub matrix: DMatrix<Complex64>,
    pub hermitian_ok: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// lambda_max / lambda_min, or None when lambda_min <= 0 numerically.
    pub condition: Option<f64>,
}

/// Serializable digest of a [`GramSection`] (the matrix itself is omitted).
#[derive(Debug, Clone, Serialize)]
pub struct GramSummary {
    pub dim: usize,
    pub hermitian_ok: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub condition: Option<f64>,
}

impl GramSection {
    /// Build from a dense Hermitian matrix, computing eigenvalue extremes.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        assert_eq!(dim, matrix.ncols());
        let mut hermitian_ok = true;
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
        for i in 0..dim {
            for j in i..dim {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > 1e-12 * scale {
                    hermitian_ok = false;
                }
            }
        }
        let eigs = hermitian_eigenvalues(&matrix)?;
        let lambda_min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        let lambda_max = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let condition = if lambda_min > 0.0 {
            Some(lambda_max / lambda_min)
        } else {
            None
        };
        Ok(GramSection {
            dim,
            matrix,
            hermitian_ok,
            lambda_min,
            lambda_max,
            condition,
        })
    }

    pub fn summary(&self) -> GramSummary {
        GramSummary {
            dim: self.dim,
            hermitian_ok: self.hermitian_ok,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            condition: self.condition,
        }
    }
}

/// Eigenvalues of a Hermitian matrix (real, unsorted).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let sym = nalgebra::linalg::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or(
        Error::NonConvergence {
            degree: m.nrows(),
            attempts: 1,
        },
    )?;
    Ok(sym.eigenvalues.iter().cloned().collect())
}

/// Outcome of a power iteration.
#[derive(Debug, Clone, Serialize)]
pub struct PowerIterate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Deterministic start vector: near-uniform with a fixed aperiodic ripple so
/// it is not orthogonal to symmetric eigenvectors.
pub fn start_vector(dim: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(dim, Complex64::new(1.0, 0.0));
    for i in 0..dim {
        let r = ((i as u64).wrapping_mul(2654435761) % 1000) as f64 / 1000.0;
        v[i] += Complex64::new(0.05 * r, 0.01 * r);
    }
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// `apply`, by power iteration with a relative tolerance on the Rayleigh
/// quotient.
pub fn power_iteration<F>(dim: usize, mut apply: F, rel_tol: f64, max_iter: usize) -> PowerIterate
where
    F: FnMut(&DVector<Complex64>) -> DVector<Complex64>,
{
    let mut v = start_vector(dim);
    let mut lambda = 0.0f64;
    for it in 1..=max_iter {
        let w = apply(&v);
        let norm = w.norm();
        if norm == 0.0 {
            return PowerIterate {
                value: 0.0,
                iterations: it,
                converged: true,
            };
        }
        let new_lambda = v.dotc(&w).re;
        v = w / Complex64::new(norm, 0.0);
        if it > 8 && (new_lambda - lambda).abs() <= rel_tol * new_lambda.abs().max(1e-300) {
            return PowerIterate {
                value: new_lambda,
                iterations: it,
                converged: true,
            };
        }
        lambda = new_lambda;
    }
    PowerIterate {
        value: lambda,
        iterations: max_iter,
        converged: false,
    }
}

/// Sparse complex matrix in triplet/CSR-lite form for operator-norm work.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    /// Row-major entries: (row, col, value), sorted by (row, col).
    pub entries: Vec<(u32, u32, Complex64)>,
}

impl SparseMatrix {
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(u32, u32, Complex64)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, Complex64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            if let Some(last) = entries.last_mut() {
                if last.0 == r && last.1 == c {
                    last.2 += v;
                    continue;
                }
            }
            entries.push((r, c, v));
        }
        SparseMatrix {
            nrows,
            ncols,
            entries,
        }
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.nrows, Complex64::new(0.0, 0.0));
        for &(r, c, val) in &self.entries {
            out[r as usize] += val * v[c as usize];
        }
        out
    }

    pub fn apply_adjoint(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.ncols, Complex64::new(0.0, 0.0));
        for &(r, c, val) in &self.entries {
            out[c as usize] += val.conj() * v[r as usize];
        }
        out
    }

    /// Largest singular value via power iteration on A*A.
    pub fn largest_singular_value(&self, rel_tol: f64, max_iter: usize) -> PowerIterate {
        let res = power_iteration(
            self.ncols,
            |v| self.apply_adjoint(&self.apply(v)),
            rel_tol,
            max_iter,
        );
        PowerIterate {
            value: res.value.max(0.0).sqrt(),
            iterations: res.iterations,
            converged: res.converged,
        }
    }
}

/// Largest generalized eigenvalue of the pencil (S, G) with G Hermitian
/// positive definite and S Hermitian positive semidefinite, via Cholesky
/// G = L L^H and power iteration on L^{-1} S L^{-H}. Falls back to a dense
/// eigensolve for small dimensions when the iteration stalls.
pub fn pencil_largest_eigenvalue(
    s: &DMatrix<Complex64>,
    g: &DMatrix<Complex64>,
    rel_tol: f64,
    max_iter: usize,
) -> Result<PowerIterate> {
    let dim = g.nrows();
    let chol = nalgebra::linalg::Cholesky::new(g.clone()).ok_or_else(|| {
        Error::GramNotPositive(format!(
            "Cholesky failed on {dim}x{dim} Gram matrix (smallest eigenvalue <= 0)"
        ))
    })?;
    let l = chol.l();
    let apply = |v: &DVector<Complex64>| {
        // x = L^{-H} v, y = S x, z = L^{-1} y
        let x = l.ad_solve_upper_triangular_unchecked(v);
        let y = s * x;
        l.solve_lower_triangular_unchecked(&y)
    };
    let res = power_iteration(dim, apply, rel_tol, max_iter);
    if res.converged || dim > 2401 {
        return Ok(res);
    }
    // Dense fallback for small pencils.
    let li = l
        .clone_owned()
        .try_inverse()
        .ok_or_else(|| Error::GramNotPositive("Cholesky factor not invertible".into()))?;
    let m = &li * s * li.adjoint();
    let eigs = hermitian_eigenvalues(&m)?;
    let value = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerIterate {
        value,
        iterations: res.iterations,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_eigen_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(2.0, 0.0)],
        );
        let mut eigs = hermitian_eigenvalues(&m).unwrap();
        eigs.sort_by(f64::total_cmp);
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_diagonal() {
        let d = DVector::from_vec(vec![1.0, 4.0, 2.5]);
        let res = power_iteration(
            3,
            |v| {
                DVector::from_iterator(3, (0..3).map(|i| v[i] * Complex64::new(d[i], 0.0)))
            },
            1e-10,
            1000,
        );
        assert!(res.converged);
        assert!((res.value - 4.0).abs() < 1e-8);
    }

    #[test]
    fn sparse_singular_value_matches_dense() {
        let triplets = vec![
            (0u32, 0u32, cplx(3.0, 0.0)),
            (0, 1, cplx(0.0, 1.0)),
            (1, 1, cplx(-2.0, 0.0)),
            (2, 0, cplx(1.0, 0.0)),
        ];
        let sp = SparseMatrix::from_triplets(3, 2, triplets);
        let sv = sp.largest_singular_value(1e-10, 5000);
        // Oracle: singular values of the dense matrix via A^H A eigenvalues.
        let a = DMatrix::from_row_slice(
            3,
            2,
            &[
                cplx(3.0, 0.0),
                cplx(0.0, 1.0),
                cplx(0.0, 0.0),
                cplx(-2.0, 0.0),
                cplx(1.0, 0.0),
                cplx(0.0, 0.0),
            ],
        );
        let ata = a.adjoint() * &a;
        let eigs = hermitian_eigenvalues(&ata).unwrap();
        let expect = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).sqrt();
        assert!((sv.value - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn pencil_identity_gram_reduces_to_plain_eigenvalue() {
        let g = DMatrix::identity(3, 3);
        let mut s = DMatrix::from_element(3, 3, cplx(0.0, 0.0));
        s[(0, 0)] = cplx(1.0, 0.0);
        s[(1, 1)] = cplx(5.0, 0.0);
        let res = pencil_largest_eigenvalue(&s, &g, 1e-10, 2000).unwrap();
        assert!((res.value - 5.0).abs() < 1e-8);
    }
}
