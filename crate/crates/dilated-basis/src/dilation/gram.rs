//! Finite Gram sections of the dilated system in the orthonormal sine model.
//!
//! G(n, n') = <u_n, u_{n'}> = sum over pairs (j, j') with p^j n = p^{j'} n'
//! of a_j conj(a_{j'}), an exact finite sum. Entries vanish unless n/n' is an
//! integer power of p, so the section splits into Toeplitz blocks along the
//! dilation chains; eigenvalue extremes therefore stay inside the range of
//! the symbol |a(e^{it})|^2 whenever that range is positive.

use crate::dilation::DilationSystemSpec;
use crate::error::{Error, Result};
use crate::linalg::GramSection;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub const MAX_GRAM_SIZE: usize = 4096;

/// Assemble the N x N Gram section over n, n' = 1..N and compute its
/// eigenvalue extremes.
pub fn gram_section(spec: &DilationSystemSpec, n: usize) -> Result<GramSection> {
    if n == 0 {
        return Err(Error::DegenerateInput("gram section needs N >= 1".into()));
    }
    if n > MAX_GRAM_SIZE {
        return Err(Error::SizeLimit {
            requested: n,
            maximum: MAX_GRAM_SIZE,
        });
    }
    let coeffs = spec.coeffs();
    let m = spec.degree();
    let p = spec.prime();
    let mut g = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));

    // Autocorrelation along a chain: row n, column n * p^d.
    for row in 1..=n as u64 {
        let mut col = row;
        for d in 0..=m {
            if d > 0 {
                col = match col.checked_mul(p) {
                    Some(c) if c <= n as u64 => c,
                    _ => break,
                };
            }
            let mut entry = Complex64::new(0.0, 0.0);
            for j in 0..=m - d {
                entry += coeffs[j + d] * coeffs[j].conj();
            }
            g[(row as usize - 1, col as usize - 1)] = entry;
            if d > 0 {
                g[(col as usize - 1, row as usize - 1)] = entry.conj();
            }
        }
    }

    GramSection::from_matrix(g)
}
