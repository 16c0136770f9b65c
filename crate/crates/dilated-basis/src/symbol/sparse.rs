//! Sparse multivariate symbols A(w) = sum_{alpha in K} a(alpha) w^alpha with
//! finite support K in N_0^m, and the grouping of a trigonometric polynomial's
//! frequencies into omega-classes.

use crate::error::{Error, Result};
use crate::symbol::multiindex::MultiIndex;
use crate::symbol::omega::{omega_decompose, PrimeSet};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// A finitely supported symbol on the polydisk.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymbol {
    arity: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
    primes: Option<PrimeSet>,
}

impl SparseSymbol {
    pub fn new(arity: usize, terms: Vec<(MultiIndex, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.arity() != arity {
                return Err(Error::DegenerateInput(format!(
                    "multi-index {alpha:?} has arity {} but the symbol has arity {arity}",
                    alpha.arity()
                )));
            }
            if c.norm() == 0.0 {
                continue;
            }
            *map.entry(alpha).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm() > 0.0);
        Ok(SparseSymbol {
            arity,
            terms: map,
            primes: None,
        })
    }

    /// 1D dense constructor: a(z) = sum a_j z^j as a one-variable symbol.
    pub fn from_univariate(coeffs: &[Complex64]) -> Result<Self> {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (MultiIndex(vec![j as u32]), c))
            .collect();
        SparseSymbol::new(1, terms)
    }

    pub fn with_primes(mut self, primes: PrimeSet) -> Result<Self> {
        if primes.arity() != self.arity {
            return Err(Error::DegenerateInput(format!(
                "{} primes given for a symbol of arity {}",
                primes.arity(),
                self.arity
            )));
        }
        self.primes = Some(primes);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    pub fn primes(&self) -> Option<&PrimeSet> {
        self.primes.as_ref()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::zeros(self.arity))
    }

    /// Largest total degree over the support.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|a| a.total()).max().unwrap_or(0)
    }

    /// Componentwise maximum of the support.
    pub fn degree_profile(&self) -> MultiIndex {
        let mut deg = vec![0u32; self.arity];
        for alpha in self.terms.keys() {
            for (d, &a) in deg.iter_mut().zip(&alpha.0) {
                *d = (*d).max(a);
            }
        }
        MultiIndex(deg)
    }

    /// max |a(alpha)| over the support.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// l^2 norm of the coefficient sequence, equal to the H^2 norm of A.
    pub fn l2_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn eval(&self, w: &[Complex64]) -> Complex64 {
        assert_eq!(w.len(), self.arity);
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, &c) in &self.terms {
            let mut term = c;
            for (j, &a) in alpha.0.iter().enumerate() {
                term *= w[j].powu(a);
            }
            acc += term;
        }
        acc
    }

    /// Evaluate on the torus, w_j = exp(i t_j).
    pub fn eval_torus(&self, t: &[f64]) -> Complex64 {
        let w: Vec<Complex64> = t.iter().map(|&tj| Complex64::from_polar(1.0, tj)).collect();
        self.eval(&w)
    }

    /// Partial derivative with respect to w_j, evaluated at w.
    pub fn partial_eval(&self, w: &[Complex64], j: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, &c) in &self.terms {
            let a = alpha.0[j];
            if a == 0 {
                continue;
            }
            let mut term = c * a as f64;
            for (k, &ak) in alpha.0.iter().enumerate() {
                let power = if k == j { ak - 1 } else { ak };
                term *= w[k].powu(power);
            }
            acc += term;
        }
        acc
    }
}

/// One omega-class of a multi-frequency spectrum: the class label and the
/// symbol made of its exponent tuples.
#[derive(Debug, Clone)]
pub struct OmegaClass {
    pub omega: u64,
    pub symbol: SparseSymbol,
}

/// Outcome of grouping a frequency spectrum by omega-part.
#[derive(Debug, Clone)]
pub struct SymbolPartition {
    pub classes: Vec<OmegaClass>,
    pub multi_class: bool,
    pub warnings: Vec<String>,
}

impl SymbolPartition {
    /// The unique symbol when the input was single-class.
    pub fn single(&self) -> Option<&SparseSymbol> {
        if self.classes.len() == 1 {
            Some(&self.classes[0].symbol)
        } else {
            None
        }
    }
}

/// Group frequencies of S(x) = sum a_j exp(ijx) by their omega-part and build
/// one symbol A(w) per class. Prime factors outside the given list fold into
/// omega, so the grouping is total; inputs spanning several classes are
/// flagged rather than rejected.
pub fn build_symbol(
    spectrum: &BTreeMap<u64, Complex64>,
    primes: &PrimeSet,
) -> Result<SymbolPartition> {
    if spectrum.is_empty() {
        return Err(Error::DegenerateInput("empty frequency spectrum".into()));
    }
    if spectrum.keys().any(|&f| f == 0) {
        return Err(Error::DegenerateInput(
            "frequencies must be positive integers".into(),
        ));
    }
    let mut grouped: BTreeMap<u64, Vec<(MultiIndex, Complex64)>> = BTreeMap::new();
    for (&freq, &coeff) in spectrum {
        let d = omega_decompose(freq, primes);
        grouped.entry(d.omega).or_default().push((d.alpha, coeff));
    }
    let multi_class = grouped.len() > 1;
    let mut warnings = Vec::new();
    if multi_class {
        let labels: Vec<String> = grouped.keys().map(|o| o.to_string()).collect();
        warnings.push(format!(
            "spectrum spans {} omega-classes: {}",
            grouped.len(),
            labels.join(", ")
        ));
    }
    let mut classes = Vec::new();
    for (omega, terms) in grouped {
        let symbol = SparseSymbol::new(primes.arity(), terms)?.with_primes(primes.clone())?;
        classes.push(OmegaClass { omega, symbol });
    }
    Ok(SymbolPartition {
        classes,
        multi_class,
        warnings,
    })
}

/// Serializable digest of a partition.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub class_count: usize,
    pub omegas: Vec<u64>,
    pub multi_class: bool,
    pub warnings: Vec<String>,
}

impl SymbolPartition {
    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            class_count: self.classes.len(),
            omegas: self.classes.iter().map(|c| c.omega).collect(),
            multi_class: self.multi_class,
            warnings: self.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn powers_of_two_form_single_class() {
        let ps = PrimeSet::new(vec![2]).unwrap();
        let mut spectrum = BTreeMap::new();
        spectrum.insert(1, re(1.0));
        spectrum.insert(2, re(-1.0));
        spectrum.insert(4, re(1.0));
        let part = build_symbol(&spectrum, &ps).unwrap();
        assert!(!part.multi_class);
        let a = part.single().unwrap();
        assert_eq!(a.support_size(), 3);
        assert_eq!(a.coeff(&MultiIndex(vec![0])), re(1.0));
        assert_eq!(a.coeff(&MultiIndex(vec![1])), re(-1.0));
        assert_eq!(a.coeff(&MultiIndex(vec![2])), re(1.0));
    }

    #[test]
    fn mixed_prime_frequencies_share_omega_one() {
        // 6 = 2*3, 12 = 2^2*3, 18 = 2*3^2: one class omega = 1.
        let ps = PrimeSet::new(vec![2, 3]).unwrap();
        let mut spectrum = BTreeMap::new();
        for f in [6u64, 12, 18] {
            spectrum.insert(f, re(1.0));
        }
        let part = build_symbol(&spectrum, &ps).unwrap();
        assert!(!part.multi_class);
        let a = part.single().unwrap();
        let expected: Vec<MultiIndex> = vec![
            MultiIndex(vec![1, 1]),
            MultiIndex(vec![1, 2]),
            MultiIndex(vec![2, 1]),
        ];
        let support: Vec<MultiIndex> = a.terms().keys().cloned().collect();
        assert_eq!(support, expected);
        // Oracle: each exponent tuple reconstructs its frequency.
        for alpha in a.terms().keys() {
            let n = 2u64.pow(alpha.0[0]) * 3u64.pow(alpha.0[1]);
            assert!(spectrum.contains_key(&n));
        }
    }

    #[test]
    fn foreign_prime_splits_classes() {
        let ps = PrimeSet::new(vec![2]).unwrap();
        let mut spectrum = BTreeMap::new();
        spectrum.insert(2, re(1.0));
        spectrum.insert(5, re(1.0));
        let part = build_symbol(&spectrum, &ps).unwrap();
        assert!(part.multi_class);
        assert_eq!(part.classes.len(), 2);
        assert_eq!(part.classes[0].omega, 1);
        assert_eq!(part.classes[1].omega, 5);
        assert_eq!(part.warnings.len(), 1);
    }

    #[test]
    fn eval_matches_hand_expansion() {
        // A(w) = 1 - w1 + w1^2 at w1 = i: 1 - i + (-1) = -i.
        let a = SparseSymbol::from_univariate(&[re(1.0), re(-1.0), re(1.0)]).unwrap();
        let v = a.eval(&[Complex64::new(0.0, 1.0)]);
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_frequency_rejected() {
        let ps = PrimeSet::new(vec![2]).unwrap();
        let mut spectrum = BTreeMap::new();
        spectrum.insert(0, re(1.0));
        assert!(build_symbol(&spectrum, &ps).is_err());
    }
}
