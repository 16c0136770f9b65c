//! Shared numerical helpers: compensated summation, least-squares fits,
//! low-discrepancy sequences, and thread-pool initialization.

use num_complex::Complex64;
use serde::Serialize;
use std::sync::OnceLock;

/// Pairwise summation. Error grows like O(log n) rather than O(n), and the
/// result does not depend on thread count because callers sum ordered buffers.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Ordinary least-squares line fit y = intercept + slope * x.
#[derive(Debug, Clone, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub slope_stderr: f64,
    /// 95% confidence interval for the slope.
    pub slope_ci95: (f64, f64),
    pub r_squared: f64,
    pub n_points: usize,
}

/// Fit a straight line through (x, y) pairs. Panics on fewer than 3 points.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    assert!(n >= 3, "line fit needs at least 3 points");
    let nf = n as f64;
    let mx = pairwise_sum(xs) / nf;
    let my = pairwise_sum(ys) / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = (0..n)
        .map(|i| {
            let r = ys[i] - (intercept + slope * xs[i]);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let var = if n > 2 { ss_res / (nf - 2.0) } else { 0.0 };
    let slope_stderr = (var / sxx).sqrt();
    let half = 1.96 * slope_stderr;
    LineFit {
        slope,
        intercept,
        slope_stderr,
        slope_ci95: (slope - half, slope + half),
        r_squared,
        n_points: n,
    }
}

/// Element `index` of the van der Corput sequence in the given base.
pub fn van_der_corput(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut denom = 1.0;
    while index > 0 {
        denom *= base as f64;
        result += (index % base) as f64 / denom;
        index /= base;
    }
    result
}

const HALTON_BASES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Point `index` of the m-dimensional Halton sequence, components in (0, 1).
pub fn halton_point(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= HALTON_BASES.len(), "Halton dimension too large");
    (0..dim)
        .map(|j| van_der_corput(index + 1, HALTON_BASES[j]))
        .collect()
}

static THREAD_POOL: OnceLock<usize> = OnceLock::new();

/// Initialize the global rayon pool, capping threads at `cap` when given or at
/// the `DILATED_BASIS_THREADS` environment variable otherwise. Safe to call
/// more than once; only the first call takes effect. All parallel reductions
/// in this crate produce thread-count-independent results, so the cap is a
/// resource control, not a correctness knob.
pub fn init_threads(cap: Option<usize>) -> usize {
    *THREAD_POOL.get_or_init(|| {
        let from_env = std::env::var("DILATED_BASIS_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok());
        let threads = cap.or(from_env).filter(|&t| t > 0);
        if let Some(t) = threads {
            // Ignore the error: another component may have installed a pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            t
        } else {
            rayon::current_num_threads()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let xs: Vec<f64> = (1..=100).map(|i| 1.0 / i as f64).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = line_fit(&xs, &ys);
        assert!((fit.slope - 2.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn van_der_corput_base2_prefix() {
        assert_eq!(van_der_corput(1, 2), 0.5);
        assert_eq!(van_der_corput(2, 2), 0.25);
        assert_eq!(van_der_corput(3, 2), 0.75);
    }
}
