//! Univariate polynomial algebra over the complex numbers: evaluation,
//! root finding (Aberth-Ehrlich with a companion-matrix fallback), the
//! modulus partition of the zero set, factorization by modulus class, and
//! truncated power-series inversion of outer factors.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// a(z) = sum_{j=0}^m a_j z^j with a_m != 0.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Complex64>,
}

impl UnivariatePolynomial {
    /// Build from coefficients a_0..a_m. The leading coefficient must be
    /// nonzero (the degree is taken at face value, not trimmed).
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegenerateInput("empty coefficient list".into()));
        }
        if coeffs.last().unwrap().norm() == 0.0 {
            return Err(Error::DegenerateInput(
                "leading coefficient a_m is zero".into(),
            ));
        }
        Ok(UnivariatePolynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The constant polynomial c (degree 0).
    pub fn constant(c: Complex64) -> Self {
        UnivariatePolynomial { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> UnivariatePolynomial {
        if self.coeffs.len() == 1 {
            return UnivariatePolynomial::constant(Complex64::new(0.0, 0.0));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * j as f64)
            .collect();
        UnivariatePolynomial { coeffs }
    }

    /// k-th derivative evaluated at z.
    pub fn derivative_at(&self, z: Complex64, k: usize) -> Complex64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(z)
    }

    pub fn mul(&self, other: &UnivariatePolynomial) -> UnivariatePolynomial {
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UnivariatePolynomial { coeffs }
    }

    /// prod over roots of (alpha - z)^mu, times `scale`.
    pub fn from_roots_alpha_minus_z(roots: &[(Complex64, usize)], scale: Complex64) -> Self {
        let mut p = UnivariatePolynomial::constant(scale);
        for &(alpha, mu) in roots {
            let lin = UnivariatePolynomial {
                coeffs: vec![alpha, Complex64::new(-1.0, 0.0)],
            };
            for _ in 0..mu {
                p = p.mul(&lin);
            }
        }
        p
    }
}

/// One clustered root with its multiplicity and signed distance |alpha| - 1
/// from the unit circle.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifiedRoot {
    pub location: (f64, f64),
    pub multiplicity: usize,
    pub modulus_margin: f64,
}

impl ClassifiedRoot {
    pub fn location_complex(&self) -> Complex64 {
        Complex64::new(self.location.0, self.location.1)
    }

    pub fn modulus(&self) -> f64 {
        self.location_complex().norm()
    }
}

/// Which modulus class a root falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModulusClass {
    /// |alpha| < 1 - tol
    Inner,
    /// ||alpha| - 1| <= tol
    Circle,
    /// |alpha| > 1 + tol
    Outer,
}

/// The zero set of a(z) partitioned by modulus into F^- (inside the open
/// disk), F^0 (on the circle) and F^+ (outside the closed disk).
#[derive(Debug, Clone, Serialize)]
pub struct RootClassification {
    pub roots: Vec<(ClassifiedRoot, ModulusClass)>,
    /// max multiplicity - 1 over circle roots; present iff all roots lie on
    /// the circle (F^- and F^+ both empty) and there is at least one root.
    pub kappa_star: Option<usize>,
    /// Outer margin: 1 + 2*delta = min |alpha| over F^+; present iff F^+ is
    /// nonempty.
    pub delta: Option<f64>,
    pub tolerance_used: f64,
    /// Roots within 10x tolerance of a partition boundary.
    pub boundary_warnings: Vec<String>,
    pub source_degree: usize,
}

impl RootClassification {
    pub fn class_roots(&self, class: ModulusClass) -> Vec<&ClassifiedRoot> {
        self.roots
            .iter()
            .filter(|(_, c)| *c == class)
            .map(|(r, _)| r)
            .collect()
    }

    pub fn f_minus(&self) -> Vec<&ClassifiedRoot> {
        self.class_roots(ModulusClass::Inner)
    }

    pub fn f_zero(&self) -> Vec<&ClassifiedRoot> {
        self.class_roots(ModulusClass::Circle)
    }

    pub fn f_plus(&self) -> Vec<&ClassifiedRoot> {
        self.class_roots(ModulusClass::Outer)
    }

    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|(r, _)| r.multiplicity).sum()
    }

    /// Condition (star): every root lies on the unit circle.
    pub fn all_on_circle(&self) -> bool {
        self.f_minus().is_empty() && self.f_plus().is_empty() && !self.roots.is_empty()
    }
}

const MAX_SUPPORTED_DEGREE: usize = 64;
/// Escalation ladder for the cluster radius. Multiple roots of multiplicity
/// mu scatter like eps^(1/mu) under floating iteration (about 1e-5 at
/// mu = 3), so clustering starts tight and widens only while the derivative
/// magnitudes say the clusters are undermerged.
const CLUSTER_RADII: [f64; 3] = [1e-6, 1e-5, 1e-4];

/// Find all roots and partition them by modulus against the unit circle.
///
/// Roots come from Aberth-Ehrlich simultaneous iteration with perturbed
/// restarts, falling back to companion-matrix eigenvalues. Multiple roots are
/// recovered by clustering within an absolute radius of 1e-6 after
/// max-coefficient normalization; the reported location is the cluster mean.
pub fn classify_roots(poly: &UnivariatePolynomial, tol: f64) -> Result<RootClassification> {
    if poly.degree() == 0 {
        return Err(Error::DegenerateInput(
            "degree must be >= 1 for root classification".into(),
        ));
    }
    if poly.degree() > MAX_SUPPORTED_DEGREE {
        return Err(Error::SizeLimit {
            requested: poly.degree(),
            maximum: MAX_SUPPORTED_DEGREE,
        });
    }
    if poly.constant_term().norm() == 0.0 {
        return Err(Error::DegenerateInput("constant term a_0 is zero".into()));
    }
    if tol <= 0.0 {
        return Err(Error::DegenerateInput("tolerance must be positive".into()));
    }

    let scale = poly.max_coeff_norm();
    let normalized = UnivariatePolynomial {
        coeffs: poly.coeffs.iter().map(|&c| c / scale).collect(),
    };

    let raw = find_roots(&normalized)?;

    // Residual acceptance: |a(alpha)| <= 1e-8 * max|a_j| * (1 + |alpha|)^m.
    let m = poly.degree();
    for &r in &raw {
        let bound = 1e-8 * scale * (1.0 + r.norm()).powi(m as i32);
        let residual = poly.eval(r).norm();
        if residual > bound {
            return Err(Error::NonConvergence {
                degree: m,
                attempts: ABERTH_ATTEMPTS + 1,
            });
        }
    }

    let clusters = cluster_with_validation(&normalized, &raw);

    let mut roots = Vec::new();
    let mut warnings = Vec::new();
    for (center, mu) in clusters {
        let margin = center.norm() - 1.0;
        let class = if margin.abs() <= tol {
            ModulusClass::Circle
        } else if margin < 0.0 {
            ModulusClass::Inner
        } else {
            ModulusClass::Outer
        };
        if margin.abs() > tol && margin.abs() <= 10.0 * tol {
            warnings.push(format!(
                "root {center} sits {:.3e} from the unit circle, within 10x tolerance {:.1e}",
                margin.abs(),
                tol
            ));
        }
        roots.push((
            ClassifiedRoot {
                location: (center.re, center.im),
                multiplicity: mu,
                modulus_margin: margin,
            },
            class,
        ));
    }
    roots.sort_by(|a, b| {
        a.0.modulus()
            .total_cmp(&b.0.modulus())
            .then(a.0.location.0.total_cmp(&b.0.location.0))
            .then(a.0.location.1.total_cmp(&b.0.location.1))
    });

    let f_minus_empty = !roots.iter().any(|(_, c)| *c == ModulusClass::Inner);
    let f_plus: Vec<f64> = roots
        .iter()
        .filter(|(_, c)| *c == ModulusClass::Outer)
        .map(|(r, _)| r.modulus())
        .collect();
    let kappa_star = if f_minus_empty && f_plus.is_empty() {
        roots
            .iter()
            .filter(|(_, c)| *c == ModulusClass::Circle)
            .map(|(r, _)| r.multiplicity - 1)
            .max()
    } else {
        None
    };
    let delta = f_plus
        .iter()
        .cloned()
        .min_by(f64::total_cmp)
        .map(|min_mod| (min_mod - 1.0) / 2.0);

    Ok(RootClassification {
        roots,
        kappa_star,
        delta,
        tolerance_used: tol,
        boundary_warnings: warnings,
        source_degree: m,
    })
}

const ABERTH_ATTEMPTS: usize = 4;

fn find_roots(poly: &UnivariatePolynomial) -> Result<Vec<Complex64>> {
    for attempt in 0..ABERTH_ATTEMPTS {
        if let Some(roots) = aberth(poly, attempt) {
            return Ok(roots);
        }
    }
    companion_eigenvalues(poly).ok_or(Error::NonConvergence {
        degree: poly.degree(),
        attempts: ABERTH_ATTEMPTS + 1,
    })
}

/// Aberth-Ehrlich simultaneous iteration. Starts on a circle whose radius
/// comes from the Cauchy bound, rotated per attempt.
fn aberth(poly: &UnivariatePolynomial, attempt: usize) -> Option<Vec<Complex64>> {
    let n = poly.degree();
    let deriv = poly.derivative();
    let lead = poly.leading();
    let radius = 1.0
        + poly
            .coeffs
            .iter()
            .take(n)
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let radius = radius * (1.0 + 0.17 * attempt as f64);
    let phase = 0.4 + 1.37 * attempt as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + phase;
            Complex64::from_polar(radius * (0.9 + 0.05 * (k % 3) as f64), theta)
        })
        .collect();

    let max_iter = 400;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pk = poly.eval(z[k]);
            let dk = deriv.eval(z[k]);
            if !pk.is_finite() || !dk.is_finite() {
                return None;
            }
            if pk.norm() == 0.0 {
                continue;
            }
            let newton = if dk.norm() == 0.0 {
                // Flat derivative: nudge off the stationary point.
                Complex64::new(1e-8, 1e-8)
            } else {
                pk / dk
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() < 1e-300 {
                        return None;
                    }
                    repulsion += diff.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-14 {
                newton
            } else {
                newton / denom
            };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            return Some(z);
        }
    }
    // Accept if residuals are already tiny despite missing the step criterion
    // (clusters of multiple roots stall the per-root steps).
    let scale = poly.max_coeff_norm();
    let ok = z.iter().all(|&r| {
        poly.eval(r).norm() <= 1e-10 * scale * (1.0 + r.norm()).powi(poly.degree() as i32)
    });
    ok.then_some(z)
}

/// Companion-matrix eigenvalues via complex Schur decomposition.
fn companion_eigenvalues(poly: &UnivariatePolynomial) -> Option<Vec<Complex64>> {
    let n = poly.degree();
    let lead = poly.leading();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -poly.coeffs[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-14, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..n).map(|i| t[(i, i)]).collect())
}

/// Cluster at the tightest radius whose clusters pass the derivative
/// validation; fall back to the tightest radius if none does.
fn cluster_with_validation(
    normalized: &UnivariatePolynomial,
    raw: &[Complex64],
) -> Vec<(Complex64, usize)> {
    let mut first: Option<Vec<(Complex64, usize)>> = None;
    for &radius in &CLUSTER_RADII {
        let clusters = cluster_roots(raw, radius);
        let ok = clusters
            .iter()
            .all(|&(center, mu)| derivative_multiplicity_ok(normalized, center, mu));
        if first.is_none() {
            first = Some(clusters.clone());
        }
        if ok {
            return clusters;
        }
    }
    first.unwrap()
}

/// Derivative test for a cluster: |a^(k)(c)| must be negligible for k < mu
/// and solidly nonzero at k = mu, relative to the scale
/// k! (1 + |c|)^(m - k) of a max-normalized polynomial.
fn derivative_multiplicity_ok(poly: &UnivariatePolynomial, center: Complex64, mu: usize) -> bool {
    const THRESHOLD: f64 = 1e-4;
    let m = poly.degree();
    let mut p = poly.clone();
    let mut factorial = 1.0f64;
    for k in 0..=mu {
        if k > 0 {
            factorial *= k as f64;
        }
        let scale = factorial * (1.0 + center.norm()).powi((m - k.min(m)) as i32);
        let v = p.eval(center).norm() / scale;
        if k < mu {
            if v > THRESHOLD {
                return false;
            }
        } else if v <= THRESHOLD {
            return false;
        }
        p = p.derivative();
    }
    true
}

/// Single-linkage clustering within the given absolute radius.
fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(roots[i]);
    }
    groups
        .into_values()
        .map(|members| {
            let mu = members.len();
            let center = members.iter().sum::<Complex64>() / mu as f64;
            (center, mu)
        })
        .collect()
}

/// The three modulus-class factors of a(z). Unit factors are products of
/// (alpha - z)^mu; the global constant is carried on the outer factor, or on
/// the circle factor when F^+ is empty, or on the inner factor as a last
/// resort, chosen so that the product reconstructs a(z).
#[derive(Debug, Clone)]
pub struct ModulusFactors {
    pub a_minus: UnivariatePolynomial,
    pub a_zero: UnivariatePolynomial,
    pub a_plus: UnivariatePolynomial,
}

pub fn factor_by_modulus(
    poly: &UnivariatePolynomial,
    cls: &RootClassification,
) -> Result<ModulusFactors> {
    if cls.source_degree != poly.degree() || cls.multiplicity_sum() != poly.degree() {
        return Err(Error::InconsistentClassification(format!(
            "classification covers degree {} but polynomial has degree {}",
            cls.multiplicity_sum(),
            poly.degree()
        )));
    }
    let collect = |class: ModulusClass| -> Vec<(Complex64, usize)> {
        cls.roots
            .iter()
            .filter(|(_, c)| *c == class)
            .map(|(r, _)| (r.location_complex(), r.multiplicity))
            .collect()
    };
    let inner = collect(ModulusClass::Inner);
    let circle = collect(ModulusClass::Circle);
    let outer = collect(ModulusClass::Outer);

    // Π(alpha - z) has leading coefficient (-1)^m, so the carried constant is
    // a_m * (-1)^m.
    let m = poly.degree();
    let constant = poly.leading() * if m % 2 == 0 { 1.0 } else { -1.0 };
    let one = Complex64::new(1.0, 0.0);

    let (c_minus, c_zero, c_plus) = if !outer.is_empty() {
        (one, one, constant)
    } else if !circle.is_empty() {
        (one, constant, one)
    } else {
        (constant, one, one)
    };

    Ok(ModulusFactors {
        a_minus: UnivariatePolynomial::from_roots_alpha_minus_z(&inner, c_minus),
        a_zero: UnivariatePolynomial::from_roots_alpha_minus_z(&circle, c_zero),
        a_plus: UnivariatePolynomial::from_roots_alpha_minus_z(&outer, c_plus),
    })
}

/// Truncated coefficients of 1/a_plus together with the geometric decay rate
/// of the tail (the reciprocal of the smallest root modulus).
#[derive(Debug, Clone)]
pub struct NeumannSeries {
    pub coeffs: Vec<Complex64>,
    /// |b_j| decays like decay_rate^j; equals 1/(1 + 2*delta).
    pub decay_rate: f64,
    pub delta: f64,
}

/// Coefficients of 1/a_plus(z) through order n. All roots of `a_plus` must
/// lie strictly outside the closed unit disk; constants are allowed.
pub fn neumann_inverse(a_plus: &UnivariatePolynomial, n: usize) -> Result<NeumannSeries> {
    if a_plus.constant_term().norm() == 0.0 {
        return Err(Error::ZeroConstantTerm);
    }
    let mut min_modulus = f64::INFINITY;
    if a_plus.degree() >= 1 {
        let cls = classify_roots(a_plus, 1e-8)?;
        for (root, _) in &cls.roots {
            let modulus = root.modulus();
            if modulus <= 1.0 {
                return Err(Error::NotOuter {
                    root: format!("{}", root.location_complex()),
                    modulus,
                });
            }
            min_modulus = min_modulus.min(modulus);
        }
    }
    let c = a_plus.coeffs();
    let c0 = c[0];
    let mut b = Vec::with_capacity(n + 1);
    b.push(c0.inv());
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(a_plus.degree()) {
            acc += c[j] * b[k - j];
        }
        b.push(-acc / c0);
    }
    let (decay_rate, delta) = if min_modulus.is_finite() {
        (1.0 / min_modulus, (min_modulus - 1.0) / 2.0)
    } else {
        (0.0, f64::INFINITY)
    };
    Ok(NeumannSeries {
        coeffs: b,
        decay_rate,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn classify_single_outer_root() {
        // a(z) = 2 - z: root at 2, F^+ only, delta = 1/2.
        let p = UnivariatePolynomial::from_real(&[2.0, -1.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        assert_eq!(cls.f_plus().len(), 1);
        assert!(cls.f_minus().is_empty() && cls.f_zero().is_empty());
        let root = cls.f_plus()[0];
        assert!((root.location_complex() - re(2.0)).norm() < 1e-10);
        assert_eq!(root.multiplicity, 1);
        assert!((cls.delta.unwrap() - 0.5).abs() < 1e-10);
        assert!(cls.kappa_star.is_none());
    }

    #[test]
    fn classify_circle_root_sets_kappa() {
        let p = UnivariatePolynomial::from_real(&[1.0, -1.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        assert_eq!(cls.f_zero().len(), 1);
        assert_eq!(cls.kappa_star, Some(0));
        assert!(cls.delta.is_none());
    }

    #[test]
    fn classify_double_circle_root_with_outer() {
        // (1-z)^2 (2-z) = 2 - 5z + 4z^2 - z^3.
        let p = UnivariatePolynomial::from_real(&[2.0, -5.0, 4.0, -1.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        let zero = cls.f_zero();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].multiplicity, 2);
        assert!((zero[0].location_complex() - re(1.0)).norm() < 1e-6);
        let plus = cls.f_plus();
        assert_eq!(plus.len(), 1);
        assert!((plus[0].location_complex() - re(2.0)).norm() < 1e-8);
        // F^+ nonempty, so condition (star) fails and kappa* is absent.
        assert!(cls.kappa_star.is_none());
        assert_eq!(cls.multiplicity_sum(), 3);
    }

    #[test]
    fn derivative_magnitudes_confirm_cluster_multiplicity() {
        // (1-z)^3 (3-z): |a^(k)(1)| small for k < 3, |a^(3)(1)| far from zero.
        let cube = UnivariatePolynomial::from_real(&[1.0, -3.0, 3.0, -1.0]).unwrap();
        let p = cube.mul(&UnivariatePolynomial::from_real(&[3.0, -1.0]).unwrap());
        let cls = classify_roots(&p, 1e-8).unwrap();
        let root = cls
            .roots
            .iter()
            .find(|(r, _)| r.multiplicity == 3)
            .map(|(r, _)| r.location_complex())
            .expect("triple root found");
        let scale = p.max_coeff_norm();
        for k in 0..3 {
            assert!(p.derivative_at(root, k).norm() <= 1e-4 * scale);
        }
        assert!(p.derivative_at(root, 3).norm() > 1e-2 * scale);
    }

    #[test]
    fn boundary_warning_near_circle() {
        // Root at 1 + 5e-8 with tol 1e-8: outside the tolerance band but
        // within 10x of it.
        let alpha = 1.0 + 5e-8;
        let p = UnivariatePolynomial::from_real(&[alpha, -1.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        assert_eq!(cls.f_plus().len(), 1);
        assert_eq!(cls.boundary_warnings.len(), 1);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let p = UnivariatePolynomial::from_real(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            classify_roots(&p, 1e-8),
            Err(Error::DegenerateInput(_))
        ));
        assert!(UnivariatePolynomial::from_real(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn factorization_reconstructs_input() {
        let p = UnivariatePolynomial::from_real(&[2.0, -5.0, 4.0, -1.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        let f = factor_by_modulus(&p, &cls).unwrap();
        assert_eq!(f.a_minus.degree(), 0);
        assert_eq!(f.a_zero.degree(), 2);
        assert_eq!(f.a_plus.degree(), 1);
        let product = f.a_minus.mul(&f.a_zero).mul(&f.a_plus);
        let scale = p.max_coeff_norm();
        for (got, want) in product.coeffs().iter().zip(p.coeffs()) {
            assert!((got - want).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn factorization_inner_only_carries_constant() {
        // 1 - 2z has the single root 1/2 in F^-.
        let p = UnivariatePolynomial::from_real(&[1.0, -2.0]).unwrap();
        let cls = classify_roots(&p, 1e-8).unwrap();
        let f = factor_by_modulus(&p, &cls).unwrap();
        assert_eq!(f.a_zero.degree(), 0);
        assert_eq!(f.a_plus.degree(), 0);
        let product = f.a_minus.mul(&f.a_zero).mul(&f.a_plus);
        for (got, want) in product.coeffs().iter().zip(p.coeffs()) {
            assert!((got - want).norm() <= 1e-10);
        }
    }

    #[test]
    fn neumann_geometric_series() {
        let p = UnivariatePolynomial::from_real(&[2.0, -1.0]).unwrap();
        let series = neumann_inverse(&p, 3).unwrap();
        let expect = [0.5, 0.25, 0.125, 0.0625];
        for (b, e) in series.coeffs.iter().zip(expect) {
            assert!((b - re(e)).norm() < 1e-15);
        }
        assert!((series.decay_rate - 0.5).abs() < 1e-12);
        assert!((series.delta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn neumann_partial_fraction_oracle() {
        // 1/((2-z)(3-z)) = 1/(2-z) - 1/(3-z), so b_j = 2^-(j+1) - 3^-(j+1).
        let p = UnivariatePolynomial::from_real(&[6.0, -5.0, 1.0]).unwrap();
        let series = neumann_inverse(&p, 8).unwrap();
        for (j, b) in series.coeffs.iter().enumerate() {
            let oracle = 0.5f64.powi(j as i32 + 1) - (1.0 / 3.0f64).powi(j as i32 + 1);
            assert!((b - re(oracle)).norm() < 1e-14, "coefficient {j}");
        }
        assert!((series.coeffs[0] - re(1.0 / 6.0)).norm() < 1e-15);
        assert!((series.coeffs[1] - re(5.0 / 36.0)).norm() < 1e-15);
        assert!((series.coeffs[2] - re(19.0 / 216.0)).norm() < 1e-15);
    }

    #[test]
    fn neumann_constant_polynomial() {
        let p = UnivariatePolynomial::constant(re(4.0));
        let series = neumann_inverse(&p, 3).unwrap();
        assert!((series.coeffs[0] - re(0.25)).norm() < 1e-15);
        assert!(series.coeffs[1..].iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn neumann_rejects_inner_roots() {
        let p = UnivariatePolynomial::from_real(&[1.0, -2.0]).unwrap();
        assert!(matches!(neumann_inverse(&p, 4), Err(Error::NotOuter { .. })));
    }

    #[test]
    fn neumann_convolution_is_delta_sequence() {
        let p = UnivariatePolynomial::from_real(&[6.0, -5.0, 1.0]).unwrap();
        let series = neumann_inverse(&p, 20).unwrap();
        let c = p.coeffs();
        for k in 0..=20usize {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k.min(p.degree()) {
                acc += c[j] * series.coeffs[k - j];
            }
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert!((acc - re(expect)).norm() <= 1e-12, "order {k}");
        }
    }

    #[test]
    fn companion_fallback_agrees_with_aberth() {
        let p = UnivariatePolynomial::from_real(&[2.0, -5.0, 4.0, -1.0]).unwrap();
        let normalized = UnivariatePolynomial {
            coeffs: p.coeffs().iter().map(|&c| c / p.max_coeff_norm()).collect(),
        };
        let mut eigs = companion_eigenvalues(&normalized).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((eigs[0] - re(1.0)).norm() < 1e-6);
        assert!((eigs[1] - re(1.0)).norm() < 1e-6);
        assert!((eigs[2] - re(2.0)).norm() < 1e-8);
    }
}
