//! Shell sums of the reciprocal series and the H^2 membership verdict.
//!
//! s_n = sum_{|sigma| = n} |b(sigma)|^2 decides whether 1/A belongs to
//! H^2(D^m): membership is summability of the s_n. The verdict combines the
//! log-log slope of s_n (local-CLT decay is n^{-(m-1)/2} squared to
//! n^{-(m-1)} for the obstruction family), the Cauchy tail of the partial
//! sums, and a logarithmic-divergence fit of the partial sums against log n.

use crate::error::Result;
use crate::numerics::{line_fit, LineFit};
use crate::polydisk::table::{coefficient_series, CoefficientTable, StorageMode};
use crate::symbol::SparseSymbol;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ShellSums {
    pub cutoff: u32,
    /// s_n for n = 0..=cutoff.
    pub s: Vec<f64>,
    /// Partial sums S_n = sum_{k <= n} s_k.
    pub partial: Vec<f64>,
    /// Least-squares slope of log s_n vs log n over n in [cutoff/4, cutoff],
    /// absent when the tail is identically zero.
    pub slope_fit: Option<LineFit>,
    /// Max residual reported by the underlying series computation.
    pub series_residual: f64,
}

/// Compute shell sums through total degree `cutoff` using the streaming
/// recurrence.
pub fn shell_sums(a: &SparseSymbol, cutoff: u32) -> Result<ShellSums> {
    let table = coefficient_series(a, cutoff, StorageMode::Streaming)?;
    Ok(shell_sums_from_table(&table))
}

pub fn shell_sums_from_table(table: &CoefficientTable) -> ShellSums {
    let s = table.shell_sums().to_vec();
    let mut partial = Vec::with_capacity(s.len());
    let mut acc = 0.0;
    for &v in &s {
        acc += v;
        partial.push(acc);
    }
    let cutoff = table.cutoff();
    let slope_fit = fit_loglog_slope(&s, cutoff);
    ShellSums {
        cutoff,
        s,
        partial,
        slope_fit,
        series_residual: table.residual(),
    }
}

fn fit_loglog_slope(s: &[f64], cutoff: u32) -> Option<LineFit> {
    let lo = (cutoff as usize / 4).max(1);
    let pts: Vec<(f64, f64)> = (lo..=cutoff as usize)
        .filter(|&n| s[n] > 0.0)
        .map(|n| ((n as f64).ln(), s[n].ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Some(line_fit(&xs, &ys))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H2Membership {
    Member,
    NonMember,
    Inconclusive,
}

/// Evidence of logarithmic divergence: partial sums growing linearly in
/// log n with a near-perfect fit and a fat Cauchy tail.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceEvidence {
    pub r_squared: f64,
    pub log_slope: f64,
    pub tail_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct H2Verdict {
    pub membership: H2Membership,
    /// log-log slope of the shell sums, when defined.
    pub slope: Option<f64>,
    /// (S_N - S_{N/2}) / S_N.
    pub tail_fraction: f64,
    pub divergence: Option<DivergenceEvidence>,
    pub slope_margin: f64,
    pub tail_tolerance: f64,
}

pub const DEFAULT_SLOPE_MARGIN: f64 = 0.1;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 0.05;

/// Decide H^2 membership of 1/A from its shell sums.
///
/// Member: slope < -1 - margin and Cauchy tail below tolerance. Non-member:
/// slope >= -1 + margin, or log-linear divergence of the partial sums
/// (R^2 > 0.99 against log n, positive growth, fat tail). Otherwise
/// inconclusive.
pub fn h2_verdict(shells: &ShellSums) -> H2Verdict {
    h2_verdict_with(shells, DEFAULT_SLOPE_MARGIN, DEFAULT_TAIL_TOLERANCE)
}

pub fn h2_verdict_with(shells: &ShellSums, slope_margin: f64, tail_tolerance: f64) -> H2Verdict {
    let n = shells.cutoff as usize;
    let total = shells.partial[n];
    let half = shells.partial[n / 2];
    let tail_fraction = if total > 0.0 { (total - half) / total } else { 0.0 };

    // Degenerate tails (polynomial 1/A) are members outright.
    let Some(fit) = &shells.slope_fit else {
        return H2Verdict {
            membership: H2Membership::Member,
            slope: None,
            tail_fraction,
            divergence: None,
            slope_margin,
            tail_tolerance,
        };
    };
    let slope = fit.slope;

    // Log-divergence probe: S_n against log n over the upper window.
    let lo = (n / 4).max(1);
    let xs: Vec<f64> = (lo..=n).map(|k| (k as f64).ln()).collect();
    let ys: Vec<f64> = (lo..=n).map(|k| shells.partial[k]).collect();
    let log_fit = line_fit(&xs, &ys);
    let divergence = if log_fit.r_squared > 0.99
        && log_fit.slope > 0.0
        && tail_fraction >= tail_tolerance
    {
        Some(DivergenceEvidence {
            r_squared: log_fit.r_squared,
            log_slope: log_fit.slope,
            tail_fraction,
        })
    } else {
        None
    };

    let membership = if slope < -1.0 - slope_margin && tail_fraction < tail_tolerance {
        H2Membership::Member
    } else if slope >= -1.0 + slope_margin || divergence.is_some() {
        H2Membership::NonMember
    } else {
        H2Membership::Inconclusive
    };

    H2Verdict {
        membership,
        slope: Some(slope),
        tail_fraction,
        divergence,
        slope_margin,
        tail_tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydisk::estar::EStarSymbol;

    /// Central-binomial oracle for (E*) with m = 2, c = (1/2, 1/2):
    /// s_n = C(2n, n) / 4^n.
    fn central_binomial_ratio(n: u32) -> f64 {
        let mut v = 1.0f64;
        for k in 1..=n {
            v *= (n + k) as f64 / k as f64 / 4.0;
        }
        v
    }

    #[test]
    fn two_variable_shell_sums_match_central_binomials() {
        let a = EStarSymbol::uniform(2).unwrap().symbol();
        let shells = shell_sums(&a, 40).unwrap();
        assert!((shells.s[2] - 0.375).abs() < 1e-14);
        for n in 0..=40u32 {
            let want = central_binomial_ratio(n);
            assert!(
                (shells.s[n as usize] - want).abs() <= 1e-12 * want,
                "shell {n}"
            );
        }
        // Slope tends to -1/2.
        let slope = shells.slope_fit.as_ref().unwrap().slope;
        assert!((slope + 0.5).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn m2_is_non_member() {
        let a = EStarSymbol::uniform(2).unwrap().symbol();
        let shells = shell_sums(&a, 64).unwrap();
        let verdict = h2_verdict(&shells);
        assert_eq!(verdict.membership, H2Membership::NonMember);
    }

    #[test]
    fn m3_diverges_logarithmically() {
        let a = EStarSymbol::uniform(3).unwrap().symbol();
        let shells = shell_sums(&a, 128).unwrap();
        let verdict = h2_verdict(&shells);
        assert_eq!(verdict.membership, H2Membership::NonMember);
        let slope = verdict.slope.unwrap();
        assert!((slope + 1.0).abs() < 0.15, "slope {slope}");
        let ev = verdict.divergence.expect("log-divergence evidence");
        assert!(ev.r_squared > 0.99);
    }

    #[test]
    fn m4_is_member() {
        let a = EStarSymbol::uniform(4).unwrap().symbol();
        let shells = shell_sums(&a, 96).unwrap();
        let verdict = h2_verdict(&shells);
        assert_eq!(verdict.membership, H2Membership::Member);
        let slope = verdict.slope.unwrap();
        assert!((slope + 1.5).abs() < 0.2, "slope {slope}");
        assert!(verdict.tail_fraction < 0.05);
    }

    #[test]
    fn bounded_symbol_is_member_with_empty_tail() {
        // A = constant: all shells beyond 0 vanish.
        let a = crate::symbol::SparseSymbol::new(
            2,
            vec![(
                crate::symbol::MultiIndex(vec![0, 0]),
                num_complex::Complex64::new(2.0, 0.0),
            )],
        )
        .unwrap();
        let shells = shell_sums(&a, 16).unwrap();
        let verdict = h2_verdict(&shells);
        assert_eq!(verdict.membership, H2Membership::Member);
        assert!(verdict.slope.is_none());
    }
}
