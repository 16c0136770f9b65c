//! Local profile of the (E*) weight near its zero.
//!
//! Near t = 0 the weight P = |A|^2 of A = 1 - sum c_k w_k is two-sided
//! comparable to r^4 + |l(t)|^2 with l(t) = sum c_k t_k and r = |t|_inf (the
//! max norm; any norm works up to constants, and the max norm keeps the
//! comparability spread smallest on the sampling cube).

use crate::error::{Error, Result};
use crate::numerics::halton_point;
use crate::weighted::weight::TorusWeight;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct WeightProfile {
    pub r_max: f64,
    pub samples: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_mean: f64,
    /// max/min comparability spread.
    pub spread: f64,
}

/// Ratio statistics of P(t) / (r^4 + l(t)^2) over quasi-random samples of the
/// cube {|t|_inf <= r_max}. The singular point t = 0 is excluded (ratio 1 by
/// convention there).
pub fn weight_profile_check(
    weight: &TorusWeight,
    r_max: f64,
    samples: usize,
) -> Result<WeightProfile> {
    let Some(c) = weight.estar_weights() else {
        return Err(Error::WrongWeightKind(
            "profile check needs a weight derived from an (E*) symbol".into(),
        ));
    };
    let c = c.to_vec();
    let m = weight.arity();
    if samples == 0 {
        return Err(Error::DegenerateInput("need at least one sample".into()));
    }

    let mut ratio_min = f64::INFINITY;
    let mut ratio_max = 0.0f64;
    let mut total = 0.0f64;
    let mut used = 0usize;
    for i in 0..samples as u64 {
        let h = halton_point(i, m);
        let t: Vec<f64> = h.iter().map(|&x| (2.0 * x - 1.0) * r_max).collect();
        let r = t.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if r < 1e-12 {
            continue;
        }
        let l: f64 = c.iter().zip(&t).map(|(&ck, &tk)| ck * tk).sum();
        let denom = r.powi(4) + l * l;
        let ratio = weight.eval(&t) / denom;
        ratio_min = ratio_min.min(ratio);
        ratio_max = ratio_max.max(ratio);
        total += ratio;
        used += 1;
    }
    Ok(WeightProfile {
        r_max,
        samples: used,
        ratio_min,
        ratio_max,
        ratio_mean: total / used as f64,
        spread: ratio_max / ratio_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydisk::EStarSymbol;
    use crate::weighted::weight::{weight_from_estar, weight_from_symbol};

    #[test]
    fn comparability_spread_at_desk_scale() {
        let e = EStarSymbol::uniform(4).unwrap();
        let w = weight_from_estar(&e).unwrap();
        let profile = weight_profile_check(&w, 0.1, 4096).unwrap();
        assert!(
            profile.spread <= 50.0,
            "spread {} over [{}, {}]",
            profile.spread,
            profile.ratio_min,
            profile.ratio_max
        );
        assert!(profile.ratio_min > 0.0);
    }

    #[test]
    fn alternating_direction_kills_linear_form() {
        // t = (s, -s, s, -s): l(t) = 0 and P(t)/r^4 stays bounded.
        let e = EStarSymbol::uniform(4).unwrap();
        let w = weight_from_estar(&e).unwrap();
        for &s in &[0.05f64, 0.01, 0.002] {
            let t = [s, -s, s, -s];
            let r4 = s.powi(4);
            let ratio = w.eval(&t) / r4;
            assert!(ratio > 0.1 && ratio < 1.0, "ratio {ratio} at s = {s}");
        }
    }

    #[test]
    fn diagonal_direction_is_dominated_by_linear_form() {
        // t = (s, s, s, s): P(t)/l(t)^2 -> 1 as s -> 0.
        let e = EStarSymbol::uniform(4).unwrap();
        let w = weight_from_estar(&e).unwrap();
        for &s in &[0.05f64, 0.01, 0.002] {
            let t = [s; 4];
            let l = s;
            let ratio = w.eval(&t) / (l * l);
            assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio} at s = {s}");
        }
    }

    #[test]
    fn non_estar_weight_is_rejected() {
        let a = crate::symbol::SparseSymbol::from_univariate(&[
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(-0.5, 0.0),
        ])
        .unwrap();
        let w = weight_from_symbol(&a).unwrap();
        assert!(matches!(
            weight_profile_check(&w, 0.1, 128),
            Err(Error::WrongWeightKind(_))
        ));
    }
}
