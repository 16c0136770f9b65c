//! Basis / completeness / minimality verdicts for the single-prime model.
//!
//! The rules are driven entirely by the modulus partition of the zeros of
//! a(z): the system is a basis iff no root lies inside the closed unit disk
//! boundary region (F^- and F^0 both empty); a root strictly inside the disk
//! destroys completeness; completeness holds whenever F^- is empty; and the
//! system is minimal for every admissible a.

use crate::dilation::DilationSystemSpec;
use crate::error::Result;
use crate::symbol::{classify_roots, RootClassification};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisVerdict {
    pub basis: bool,
    pub complete: Completeness,
    pub minimal: bool,
    pub reasons: Vec<String>,
    pub classification: RootClassification,
}

/// Decide basis/completeness/minimality from the root classification.
pub fn basis_verdict(spec: &DilationSystemSpec, tol: f64) -> Result<BasisVerdict> {
    let cls = classify_roots(&spec.symbol(), tol)?;
    let f_minus = cls.f_minus().len();
    let f_zero = cls.f_zero().len();
    let f_plus = cls.f_plus().len();

    let basis = f_minus == 0 && f_zero == 0;
    let complete = if f_minus > 0 {
        Completeness::No
    } else {
        Completeness::Yes
    };

    let mut reasons = Vec::new();
    reasons.push(format!(
        "zero set partition: |F^-| = {f_minus}, |F^0| = {f_zero}, |F^+| = {f_plus}"
    ));
    if basis {
        reasons.push("all roots lie outside the closed unit disk, so the system is a basis".into());
    } else if f_minus > 0 {
        reasons.push(
            "a root inside the open unit disk yields a reproducing-kernel annihilator; \
             the system is incomplete and not a basis"
                .into(),
        );
    } else {
        reasons.push(
            "roots on the unit circle keep the system complete and minimal but the \
             dual norms grow, so it is not a basis"
                .into(),
        );
    }
    if let Some(k) = cls.kappa_star {
        reasons.push(format!(
            "all roots on the circle: dual norms grow like (log k)^(kappa*+1/2) with kappa* = {k}"
        ));
    }
    reasons.push("a biorthogonal family exists for every admissible symbol (minimality)".into());

    Ok(BasisVerdict {
        basis,
        complete,
        minimal: true,
        reasons,
        classification: cls,
    })
}
