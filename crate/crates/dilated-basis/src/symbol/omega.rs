//! Prime-power decomposition of integers and the induced orthogonal
//! splitting of l^2(N) into dilation chains.
//!
//! Every n in N factors uniquely as n = omega * p_1^{a_1} ... p_m^{a_m} with
//! omega coprime to all p_j. The set N(omega) = {omega * p^alpha} carries the
//! Taylor-coefficient model of H^2(D^m), and l^2(N) splits as the orthogonal
//! sum over omega of these chain subspaces.

use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::symbol::multiindex::MultiIndex;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// A validated list of pairwise-distinct primes p_1..p_m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSet(Vec<u64>);

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeSet {
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::DegenerateInput("prime list is empty".into()));
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::DegenerateInput(format!("{p} is not prime")));
            }
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::DegenerateInput("primes must be distinct".into()));
        }
        Ok(PrimeSet(primes))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

/// n = omega * p^alpha with omega coprime to every p_j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaDecomposition {
    pub omega: u64,
    pub alpha: MultiIndex,
}

impl OmegaDecomposition {
    /// Reconstruct n = omega * prod p_j^{alpha_j}.
    pub fn reconstruct(&self, primes: &PrimeSet) -> u64 {
        let mut n = self.omega;
        for (j, &p) in primes.as_slice().iter().enumerate() {
            for _ in 0..self.alpha.0[j] {
                n *= p;
            }
        }
        n
    }
}

/// Strip all p_j factors from n. Total on n >= 1.
pub fn omega_decompose(n: u64, primes: &PrimeSet) -> OmegaDecomposition {
    assert!(n >= 1, "omega decomposition needs n >= 1");
    let mut rest = n;
    let mut alpha = vec![0u32; primes.arity()];
    for (j, &p) in primes.as_slice().iter().enumerate() {
        while rest % p == 0 {
            rest /= p;
            alpha[j] += 1;
        }
    }
    OmegaDecomposition {
        omega: rest,
        alpha: MultiIndex(alpha),
    }
}

/// |  ||f||^2 - sum_omega ||Q(omega) f||^2  | for a finitely supported f.
///
/// The chains partition the support, so the discrepancy is pure floating
/// rounding; the contract is <= 1e-12 * ||f||^2.
pub fn omega_parseval_check(f: &BTreeMap<u64, Complex64>, primes: &PrimeSet) -> f64 {
    let sq: Vec<f64> = f.values().map(|v| v.norm_sqr()).collect();
    let total = pairwise_sum(&sq);

    let mut per_omega: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (&n, v) in f {
        let omega = omega_decompose(n, primes).omega;
        per_omega.entry(omega).or_default().push(v.norm_sqr());
    }
    let chain_sums: Vec<f64> = per_omega.values().map(|xs| pairwise_sum(xs)).collect();
    let chain_total = pairwise_sum(&chain_sums);
    (total - chain_total).abs()
}

/// The coefficient model tying L^2[0, pi] to the chain decomposition.
///
/// The orthonormal system e_n = sqrt(2/pi) sin(nx) identifies L^2[0, pi] with
/// l^2(N). The dilation T_j: f(x) -> f(p_j x) acts on indices as n -> p_j n,
/// so on the chain N(omega) it is multiplication by w_j in the
/// Taylor-coefficient model of H^2(D^m).
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub primes: PrimeSet,
}

impl ChainModel {
    pub fn new(primes: PrimeSet) -> Self {
        ChainModel { primes }
    }

    /// Basis index of omega * p^alpha.
    pub fn index(&self, omega: u64, alpha: &MultiIndex) -> u64 {
        OmegaDecomposition {
            omega,
            alpha: alpha.clone(),
        }
        .reconstruct(&self.primes)
    }

    /// The action of T_j on a basis index: omega * p^alpha -> omega * p^{alpha + e_j}.
    pub fn shift_index(&self, n: u64, j: usize) -> u64 {
        n * self.primes.as_slice()[j]
    }
}
