//! Multi-indices in N_0^m with the componentwise partial order, plus
//! constant-total-degree ("shell") ranking used by the dense power-series
//! recurrences.

use serde::Serialize;
use std::fmt;

/// An exponent tuple in N_0^m.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex(pub Vec<u32>);

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl MultiIndex {
    pub fn zeros(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    pub fn unit(arity: usize, j: usize) -> Self {
        let mut v = vec![0; arity];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total degree |sigma|.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise partial order sigma <= tau.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// sigma - other when other <= sigma, None otherwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.leq(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// All sigma with sigma <= tau, in lexicographic order. Box size is the
    /// product of (tau_j + 1).
    pub fn box_iter(tau: &MultiIndex) -> BoxIter {
        BoxIter {
            tau: tau.clone(),
            next: Some(MultiIndex::zeros(tau.arity())),
        }
    }

    pub fn box_size(tau: &MultiIndex) -> usize {
        tau.0.iter().map(|&t| t as usize + 1).product()
    }
}

/// Lexicographic odometer over the box {sigma : sigma <= tau}.
pub struct BoxIter {
    tau: MultiIndex,
    next: Option<MultiIndex>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let m = succ.arity();
        let mut j = m;
        while j > 0 {
            j -= 1;
            if succ.0[j] < self.tau.0[j] {
                succ.0[j] += 1;
                for k in j + 1..m {
                    succ.0[k] = 0;
                }
                self.next = Some(succ);
                return Some(current);
            }
        }
        self.next = None;
        Some(current)
    }
}

/// Binomial table and rank/unrank maps for the shells {sigma : |sigma| = n}.
///
/// Shell order: descending on the leading coordinates, i.e. (n,0,…,0) has
/// rank 0 and (0,…,0,n) has the largest rank. `shell_size(m, n)` equals
/// C(n + m - 1, m - 1).
pub struct ShellIndexer {
    arity: usize,
    /// binom[i][j] = C(i, j) for j <= arity.
    binom: Vec<Vec<u64>>,
}

impl ShellIndexer {
    pub fn new(arity: usize, max_degree: u32) -> Self {
        let rows = max_degree as usize + arity + 2;
        let cols = arity + 1;
        let mut binom = vec![vec![0u64; cols]; rows];
        for (i, row) in binom.iter_mut().enumerate() {
            row[0] = 1;
            for j in 1..cols.min(i + 1) {
                // C(i, j) = C(i-1, j-1) + C(i-1, j); table rows are filled in order.
                row[j] = 0;
            }
        }
        for i in 1..rows {
            for j in 1..cols {
                let prev = &binom[i - 1];
                let v = prev[j - 1] + prev[j];
                binom[i][j] = v;
            }
        }
        ShellIndexer { arity, binom }
    }

    fn c(&self, n: usize, k: usize) -> u64 {
        if k > self.arity || n >= self.binom.len() {
            panic!("binomial table overflow: C({n}, {k})");
        }
        self.binom[n][k]
    }

    /// Number of multi-indices of arity `m` with total degree `n`.
    pub fn shell_size(&self, n: u32) -> usize {
        if self.arity == 0 {
            return usize::from(n == 0);
        }
        self.c(n as usize + self.arity - 1, self.arity - 1) as usize
    }

    /// Rank of sigma within its shell (0-based).
    pub fn rank(&self, sigma: &[u32]) -> usize {
        debug_assert_eq!(sigma.len(), self.arity);
        let mut rank = 0u64;
        let mut rem: u32 = sigma.iter().sum();
        for j in 0..self.arity - 1 {
            let k = self.arity - 1 - j; // remaining coordinates after j
            // Count shell members whose j-th coordinate exceeds sigma[j]:
            // sum over t in (sigma_j, rem] of C(rem - t + k - 1, k - 1)
            // = C(rem - sigma_j - 1 + k, k)  (hockey stick).
            if sigma[j] < rem {
                rank += self.c((rem - sigma[j] - 1) as usize + k, k);
            }
            rem -= sigma[j];
        }
        rank as usize
    }

    /// Inverse of [`ShellIndexer::rank`] for total degree `n`.
    pub fn unrank(&self, n: u32, rank: usize, out: &mut Vec<u32>) {
        out.clear();
        let mut remaining = rank as u64;
        let mut rem = n;
        for j in 0..self.arity - 1 {
            let k = self.arity - 1 - j;
            let mut chosen = rem;
            let mut t = rem as i64;
            while t >= 0 {
                let cnt = self.c((rem - t as u32) as usize + k - 1, k - 1);
                if remaining < cnt {
                    chosen = t as u32;
                    break;
                }
                remaining -= cnt;
                t -= 1;
            }
            out.push(chosen);
            rem -= chosen;
        }
        out.push(rem);
    }

    /// Visit every sigma with |sigma| = n in rank order.
    pub fn for_each_in_shell<F: FnMut(&[u32])>(&self, n: u32, mut f: F) {
        let mut sigma = vec![0u32; self.arity];
        self.recurse_shell(n, 0, &mut sigma, &mut f);
    }

    fn recurse_shell<F: FnMut(&[u32])>(&self, rem: u32, j: usize, sigma: &mut Vec<u32>, f: &mut F) {
        if j == self.arity - 1 {
            sigma[j] = rem;
            f(sigma);
            return;
        }
        for t in (0..=rem).rev() {
            sigma[j] = t;
            self.recurse_shell(rem - t, j + 1, sigma, f);
        }
    }
}
