//! Polynomial and multi-index algebra: root classification against the unit
//! circle, modulus factorization, power-series inversion of outer factors,
//! prime-power decomposition of integers, and omega-class grouping of
//! frequency spectra.

pub mod multiindex;
pub mod omega;
pub mod poly;
pub mod sparse;

pub use multiindex::{MultiIndex, ShellIndexer};
pub use omega::{omega_decompose, omega_parseval_check, ChainModel, OmegaDecomposition, PrimeSet};
pub use poly::{
    classify_roots, factor_by_modulus, neumann_inverse, ClassifiedRoot, ModulusClass,
    ModulusFactors, NeumannSeries, RootClassification, UnivariatePolynomial,
};
pub use sparse::{build_symbol, OmegaClass, SparseSymbol, SymbolPartition};
