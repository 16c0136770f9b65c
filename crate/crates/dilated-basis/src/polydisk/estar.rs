//! The obstruction family A(w) = 1 - sum c_k w_k with positive weights
//! summing to one. Its symbol vanishes at w = (1,...,1) and nowhere else on
//! the closed polydisk, and 1/A lies in H^2(D^m) exactly when m >= 4.

use crate::error::{Error, Result};
use crate::symbol::{MultiIndex, SparseSymbol};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct EStarSymbol {
    weights: Vec<f64>,
}

impl EStarSymbol {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::DegenerateInput("no weights given".into()));
        }
        if weights.iter().any(|&c| c <= 0.0) {
            return Err(Error::DegenerateInput(
                "obstruction weights must be strictly positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateInput(format!(
                "weights must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(EStarSymbol { weights })
    }

    /// Equal weights c_k = 1/m.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::DegenerateInput("arity must be positive".into()));
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    /// The symbol 1 - sum c_k w_k.
    pub fn symbol(&self) -> SparseSymbol {
        let m = self.weights.len();
        let mut terms = vec![(MultiIndex::zeros(m), Complex64::new(1.0, 0.0))];
        for (k, &c) in self.weights.iter().enumerate() {
            terms.push((MultiIndex::unit(m, k), Complex64::new(-c, 0.0)));
        }
        SparseSymbol::new(m, terms).expect("validated weights")
    }
}
