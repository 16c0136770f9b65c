use dilated_basis::symbol::SparseSymbol;
use dilated_basis::weighted::*;
use num_complex::Complex64;

fn re(x: f64) -> Complex64 { Complex64::new(x, 0.0) }

fn main() {
    // Riesz projection saturation probe
    let a = SparseSymbol::from_univariate(&[re(1.0), re(-0.5)]).unwrap();
    let w = weight_from_symbol(&a).unwrap();
    let form = LinearForm::Rational { coeffs: vec![1] };
    let report = qm_projection_norm(&w, &form, 48).unwrap();
    for row in report.rows.iter().skip(40) {
        println!("n={} norm={:.10} converged={} iters={}", row.index_label, row.norm, row.converged, row.iterations);
    }
    // Witness bound probe
    use dilated_basis::dilation::*;
    for &r in &[0.3f64, 0.5, 0.9] {
        let coeffs = [2.0 * r, -(r + 2.0), 1.0];
        let spec = DilationSystemSpec::from_real(&coeffs, 2, "t").unwrap();
        match incompleteness_witness(&spec, 0, 40, 128) {
            Ok(wit) => println!("r={} measured={:.3e} bound={:.3e}", r, wit.max_residual, wit.residual_bound),
            Err(e) => println!("r={} error {e}", r),
        }
    }
}
