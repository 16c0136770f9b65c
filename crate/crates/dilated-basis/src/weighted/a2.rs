//! Muckenhoupt A_2 rectangle scans.
//!
//! For each rectangle R the functional is avg_R(P) * avg_R(1/P). The first
//! average is exact (Fourier or moment integration of the weight); the second
//! comes from adaptive dyadic midpoint quadrature that keeps splitting the
//! cell with the largest contribution. If P vanishes inside R the 1/P
//! quadrature grows without settling; an estimate that keeps multiplying
//! across refinement generations is flagged as diverging, which is failure
//! evidence, never membership proof. The scan is a lower bound on the true
//! A_2 supremum: only weights bounded above and below can be certified
//! members (trivially).

use crate::error::Result;
use crate::weighted::weight::TorusWeight;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadStatus {
    Converged,
    CapReached,
    Diverging,
}

#[derive(Debug, Clone, Serialize)]
pub struct RectangleResult {
    pub center: Vec<f64>,
    pub half_width: f64,
    pub avg_p: f64,
    /// Last (largest) estimate of avg(1/P); a lower bound when diverging.
    pub avg_inv_p: f64,
    pub product: f64,
    pub status: QuadStatus,
    /// Per-generation estimates of avg(1/P).
    pub generations: Vec<f64>,
    /// Whether the generation estimates were nondecreasing.
    pub monotone: bool,
    pub cells_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleRow {
    pub scale: u32,
    pub half_width: f64,
    /// sup over the sampled rectangles of avg(P) avg(1/P).
    pub sup_product: f64,
    pub any_diverging: bool,
    pub rectangles: Vec<RectangleResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct A2Report {
    pub scales: Vec<ScaleRow>,
}

#[derive(Debug, Clone)]
pub struct A2Options {
    /// Per-generation relative change below which the estimate is converged.
    pub rel_tol: f64,
    /// Hard cap on quadrature cells per rectangle.
    pub max_cells: usize,
    /// Ratio across a generation that counts as a doubling step.
    pub divergence_ratio: f64,
}

impl Default for A2Options {
    fn default() -> Self {
        A2Options {
            rel_tol: 0.01,
            max_cells: 1_000_000,
            divergence_ratio: 1.7,
        }
    }
}

/// Scan rectangles centered at `centers` with half-widths 2^{-s} for each s
/// in the ladder.
pub fn a2_estimate(
    weight: &TorusWeight,
    centers: &[Vec<f64>],
    scale_ladder: &[u32],
    opts: &A2Options,
) -> Result<A2Report> {
    let mut scales = Vec::new();
    for &s in scale_ladder {
        let h = 0.5f64.powi(s as i32);
        let rectangles: Vec<RectangleResult> = centers
            .par_iter()
            .map(|center| scan_rectangle(weight, center, h, opts))
            .collect();
        let sup_product = rectangles
            .iter()
            .map(|r| r.product)
            .fold(0.0f64, f64::max);
        let any_diverging = rectangles.iter().any(|r| r.status == QuadStatus::Diverging);
        scales.push(ScaleRow {
            scale: s,
            half_width: h,
            sup_product,
            any_diverging,
            rectangles,
        });
    }
    Ok(A2Report { scales })
}

fn scan_rectangle(
    weight: &TorusWeight,
    center: &[f64],
    half_width: f64,
    opts: &A2Options,
) -> RectangleResult {
    let m = weight.arity();
    let half = vec![half_width; m];
    let avg_p = weight.avg_over_rectangle(center, &half);
    let quad = adaptive_inverse_average(weight, center, half_width, opts);
    let product = avg_p * quad.estimate;
    RectangleResult {
        center: center.to_vec(),
        half_width,
        avg_p,
        avg_inv_p: quad.estimate,
        product,
        status: quad.status,
        monotone: quad.monotone,
        generations: quad.generations,
        cells_used: quad.cells,
    }
}

struct QuadOutcome {
    estimate: f64,
    status: QuadStatus,
    generations: Vec<f64>,
    monotone: bool,
    cells: usize,
}

/// Heap cell: contribution value = vol_fraction / P(midpoint).
struct Cell {
    priority: f64,
    seq: u64,
    center: Vec<f64>,
    half: f64,
    value: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority && self.seq == other.seq
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on priority; older cells win ties for determinism.
        self.priority
            .total_cmp(&other.priority)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Adaptive midpoint estimate of avg over the cube of 1/P.
///
/// Cells carry their volume fraction; splitting the dominant cell into 2^m
/// children refines where 1/P is largest. A midpoint exactly on a zero of P
/// gets infinite priority and is split before anything else, which moves the
/// zero to cell corners.
fn adaptive_inverse_average(
    weight: &TorusWeight,
    center: &[f64],
    half_width: f64,
    opts: &A2Options,
) -> QuadOutcome {
    let m = weight.arity();
    let eval_cell = |c: &[f64], frac: f64| -> (f64, f64) {
        let p = weight.eval(c);
        if p <= 0.0 || !p.is_finite() {
            (f64::INFINITY, 0.0)
        } else {
            let v = frac / p;
            (v, v)
        }
    };

    let mut heap: BinaryHeap<Cell> = BinaryHeap::new();
    let mut seq = 0u64;
    let (priority, value) = eval_cell(center, 1.0);
    heap.push(Cell {
        priority,
        seq,
        center: center.to_vec(),
        half: half_width,
        value,
    });
    let mut total = value;
    let mut cells = 1usize;
    let mut generations = vec![total];
    let mut monotone = true;
    let mut ratios: Vec<f64> = Vec::new();

    loop {
        let target = cells * 2;
        while cells < target && cells < opts.max_cells {
            let Some(cell) = heap.pop() else { break };
            total -= cell.value;
            cells -= 1;
            let child_half = cell.half / 2.0;
            // Volume fraction of a child relative to the full cube.
            let child_frac = (child_half / half_width).powi(m as i32);
            for corner in 0..(1usize << m) {
                let child_center: Vec<f64> = (0..m)
                    .map(|j| {
                        let sign = if corner >> j & 1 == 1 { 1.0 } else { -1.0 };
                        cell.center[j] + sign * child_half
                    })
                    .collect();
                seq += 1;
                let (priority, value) = eval_cell(&child_center, child_frac);
                total += value;
                heap.push(Cell {
                    priority,
                    seq,
                    center: child_center,
                    half: child_half,
                    value,
                });
                cells += 1;
            }
        }

        let prev = *generations.last().unwrap();
        generations.push(total);
        if total < prev * (1.0 - 1e-12) {
            monotone = false;
        }
        if prev > 0.0 {
            ratios.push(total / prev);
        }

        // Divergence: two successive generations each multiplying the
        // estimate by at least the doubling-like ratio.
        let k = ratios.len();
        if k >= 2
            && ratios[k - 1] >= opts.divergence_ratio
            && ratios[k - 2] >= opts.divergence_ratio
        {
            return QuadOutcome {
                estimate: total,
                status: QuadStatus::Diverging,
                generations,
                monotone,
                cells,
            };
        }
        if prev > 0.0 && ((total - prev).abs() <= opts.rel_tol * total) {
            return QuadOutcome {
                estimate: total,
                status: QuadStatus::Converged,
                generations,
                monotone,
                cells,
            };
        }
        if cells >= opts.max_cells {
            return QuadOutcome {
                estimate: total,
                status: QuadStatus::CapReached,
                generations,
                monotone,
                cells,
            };
        }
    }
}
