//! Weights on the torus: P(t) = |A(e^{it})|^2 with exact Fourier
//! coefficients (the autocorrelation of A's coefficients), and the local
//! model weight P(t) = (sum t_j)^2 + (sum t_j^2)^2 on the fundamental domain
//! [-pi, pi)^m, whose Fourier coefficients also have closed forms (monomial
//! integrals against e^{-int}).

use crate::error::{Error, Result};
use crate::polydisk::EStarSymbol;
use crate::symbol::SparseSymbol;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub enum TorusWeight {
    /// P = |A|^2 with finitely supported Fourier coefficients
    /// p(gamma) = sum_alpha a(alpha + gamma) conj(a(alpha)), in the
    /// convention P(t) = sum_gamma p(gamma) e^{i (gamma, t)}.
    SymbolDerived {
        arity: usize,
        fourier: BTreeMap<Vec<i64>, Complex64>,
        /// Present when the weight came from an (E*) symbol; carries the
        /// weights c_k needed by the profile check.
        estar_weights: Option<Vec<f64>>,
        scale: f64,
    },
    /// The closed-form model weight, scaled by `scale`.
    Model { arity: usize, scale: f64 },
}

impl TorusWeight {
    pub fn arity(&self) -> usize {
        match self {
            TorusWeight::SymbolDerived { arity, .. } => *arity,
            TorusWeight::Model { arity, .. } => *arity,
        }
    }

    pub fn model(arity: usize) -> Self {
        TorusWeight::Model { arity, scale: 1.0 }
    }

    /// The same weight multiplied by c > 0.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0);
        match self {
            TorusWeight::SymbolDerived {
                arity,
                fourier,
                estar_weights,
                scale,
            } => TorusWeight::SymbolDerived {
                arity: *arity,
                fourier: fourier.iter().map(|(k, &v)| (k.clone(), v * c)).collect(),
                estar_weights: estar_weights.clone(),
                scale: scale * c,
            },
            TorusWeight::Model { arity, scale } => TorusWeight::Model {
                arity: *arity,
                scale: scale * c,
            },
        }
    }

    pub fn estar_weights(&self) -> Option<&[f64]> {
        match self {
            TorusWeight::SymbolDerived { estar_weights, .. } => estar_weights.as_deref(),
            TorusWeight::Model { .. } => None,
        }
    }

    /// Evaluate P(t).
    pub fn eval(&self, t: &[f64]) -> f64 {
        match self {
            TorusWeight::SymbolDerived { fourier, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (gamma, &c) in fourier {
                    let phase: f64 = gamma
                        .iter()
                        .zip(t)
                        .map(|(&g, &tj)| g as f64 * tj)
                        .sum();
                    acc += c * Complex64::from_polar(1.0, phase);
                }
                acc.re
            }
            TorusWeight::Model { scale, .. } => {
                let s1: f64 = t.iter().sum();
                let s2: f64 = t.iter().map(|x| x * x).sum();
                scale * (s1 * s1 + s2 * s2)
            }
        }
    }

    /// Exact Fourier coefficient p(gamma) in the convention
    /// P(t) = sum p(gamma) e^{i(gamma, t)}.
    pub fn fourier_coefficient(&self, gamma: &[i64]) -> Complex64 {
        match self {
            TorusWeight::SymbolDerived { fourier, .. } => fourier
                .get(gamma)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0)),
            TorusWeight::Model { scale, arity } => {
                Complex64::new(model_fourier(gamma, *arity) * scale, 0.0)
            }
        }
    }

    /// Exact average of P over the rectangle prod [c_j - h_j, c_j + h_j].
    pub fn avg_over_rectangle(&self, center: &[f64], half: &[f64]) -> f64 {
        match self {
            TorusWeight::SymbolDerived { fourier, .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (gamma, &c) in fourier {
                    let mut factor = Complex64::new(1.0, 0.0);
                    for ((&g, &cj), &hj) in gamma.iter().zip(center).zip(half) {
                        let x = g as f64 * hj;
                        let sinc = if x.abs() < 1e-12 { 1.0 } else { x.sin() / x };
                        factor *= Complex64::from_polar(1.0, g as f64 * cj) * sinc;
                    }
                    acc += c * factor;
                }
                acc.re
            }
            TorusWeight::Model { scale, .. } => {
                // Per-coordinate moments of t, t^2, t^4 over [c-h, c+h].
                let m1: Vec<f64> = center.to_vec();
                let m2: Vec<f64> = center
                    .iter()
                    .zip(half)
                    .map(|(&c, &h)| c * c + h * h / 3.0)
                    .collect();
                let m4: Vec<f64> = center
                    .iter()
                    .zip(half)
                    .map(|(&c, &h)| {
                        c.powi(4) + 2.0 * c * c * h * h + h.powi(4) / 5.0
                    })
                    .collect();
                let quad: f64 = m2.iter().sum();
                let mut cross1 = 0.0;
                let mut cross2 = 0.0;
                for j in 0..center.len() {
                    for k in j + 1..center.len() {
                        cross1 += m1[j] * m1[k];
                        cross2 += m2[j] * m2[k];
                    }
                }
                let quartic: f64 = m4.iter().sum();
                scale * ((quad + 2.0 * cross1) + (quartic + 2.0 * cross2))
            }
        }
    }
}

/// 1D monomial Fourier coefficients (1/2pi) \int t^k e^{-int} dt over
/// [-pi, pi] for k = 1, 2, 4.
fn sign(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn c1(n: i64) -> Complex64 {
    if n == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, sign(n) / n as f64)
    }
}

fn c2(n: i64) -> f64 {
    if n == 0 {
        PI * PI / 3.0
    } else {
        2.0 * sign(n) / (n * n) as f64
    }
}

fn c4(n: i64) -> f64 {
    if n == 0 {
        PI.powi(4) / 5.0
    } else {
        let n2 = (n * n) as f64;
        sign(n) * (4.0 * PI * PI / n2 - 24.0 / (n2 * n2))
    }
}

/// Fourier coefficient of the model weight at gamma: the expansions of
/// (sum t_j)^2 and (sum t_j^2)^2 only produce monomials touching at most two
/// coordinates, so gamma with three or more nonzero entries gives zero.
fn model_fourier(gamma: &[i64], arity: usize) -> f64 {
    assert_eq!(gamma.len(), arity);
    let nonzero: Vec<usize> = (0..arity).filter(|&j| gamma[j] != 0).collect();
    match nonzero.len() {
        0 => {
            let m = arity as f64;
            // sum t_j^2 and sum t_j^4 at gamma = 0, plus both cross families.
            let pairs = m * (m - 1.0) / 2.0;
            m * c2(0) + m * c4(0) + 2.0 * pairs * c2(0) * c2(0)
        }
        1 => {
            let n = gamma[nonzero[0]];
            // t_j^2 + t_j^4 + 2 sum_{k != j} t_j^2 t_k^2 with gamma_k = 0.
            c2(n) + c4(n) + 2.0 * (arity as f64 - 1.0) * c2(n) * c2(0)
        }
        2 => {
            let (nj, nk) = (gamma[nonzero[0]], gamma[nonzero[1]]);
            // 2 t_j t_k from the square of the sum; 2 t_j^2 t_k^2 from the
            // square of the quadratic sum.
            let v = 2.0 * (c1(nj) * c1(nk)) + Complex64::new(2.0 * c2(nj) * c2(nk), 0.0);
            debug_assert!(v.im.abs() < 1e-15);
            v.re
        }
        _ => 0.0,
    }
}

/// Exact Fourier coefficients of P = |A(e^{it})|^2 by coefficient
/// autocorrelation, with a dense-grid nonnegativity check.
pub fn weight_from_symbol(a: &SparseSymbol) -> Result<TorusWeight> {
    let arity = a.arity();
    let mut fourier: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for (alpha, &ca) in a.terms() {
        for (alpha2, &ca2) in a.terms() {
            // gamma = alpha2 - alpha contributes a(alpha2) conj(a(alpha))
            // = a(alpha + gamma) conj(a(alpha)).
            let gamma: Vec<i64> = alpha2
                .0
                .iter()
                .zip(&alpha.0)
                .map(|(&a2, &a1)| a2 as i64 - a1 as i64)
                .collect();
            *fourier.entry(gamma).or_insert(Complex64::new(0.0, 0.0)) += ca2 * ca.conj();
        }
    }

    let weight = TorusWeight::SymbolDerived {
        arity,
        fourier,
        estar_weights: None,
        scale: 1.0,
    };

    // Nonnegativity spot check on a dense grid.
    let per_axis = match arity {
        1 => 256,
        2 => 48,
        3 => 16,
        _ => 8,
    };
    let scale = a.max_coeff_norm().max(1e-300);
    let mut combo = vec![0usize; arity];
    loop {
        let t: Vec<f64> = combo
            .iter()
            .map(|&k| -PI + 2.0 * PI * k as f64 / per_axis as f64)
            .collect();
        let v = weight.eval(&t);
        if v < -1e-9 * scale * scale {
            return Err(Error::DegenerateInput(format!(
                "weight evaluates to {v} < 0 at {t:?}"
            )));
        }
        // Odometer.
        let mut j = 0;
        loop {
            if j == arity {
                return Ok(weight);
            }
            combo[j] += 1;
            if combo[j] < per_axis {
                break;
            }
            combo[j] = 0;
            j += 1;
        }
    }
}

/// Weight of an (E*) symbol, tagged with its weights for the profile check.
pub fn weight_from_estar(e: &EStarSymbol) -> Result<TorusWeight> {
    let w = weight_from_symbol(&e.symbol())?;
    match w {
        TorusWeight::SymbolDerived {
            arity, fourier, scale, ..
        } => Ok(TorusWeight::SymbolDerived {
            arity,
            fourier,
            estar_weights: Some(e.weights().to_vec()),
            scale,
        }),
        TorusWeight::Model { .. } => unreachable!(),
    }
}
