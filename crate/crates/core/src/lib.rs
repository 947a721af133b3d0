//! Convergence analysis for positive infinite series: comparison tests, the
//! Kummer test family (ratio, Raabe, Bertrand, Gauss), and constructive
//! witness sequences certifying convergence or divergence.

pub mod catalog;
pub mod engine;
pub mod error;
pub mod expr;
pub mod precision;
pub mod scalar;
pub mod series;
pub mod witness;

pub use catalog::{catalog_entries, find_by_expr, find_entry, CatalogEntry};
pub use engine::{
    bertrand_test, compare_ratios, compare_terms, gauss_test, kummer_statistic, kummer_test,
    raabe_statistic, raabe_test, ratio_test, Certainty, Evidence, Outcome, ParamSequence, Verdict,
    Window,
};
pub use error::{EvalError, ParseError, ParseErrorKind, SeriesError, WitnessError};
pub use expr::{Rationality, TermExpr};
pub use precision::PrecisionConfig;
pub use scalar::{Fp, NumError, Scalar, Value};
pub use series::{
    KnownStatus, Provenance, SeriesHandle, Status, TailBound, TailCertainty, TailProvider,
};
pub use witness::{
    build_b_convergent, build_b_divergent, build_b_from_p, build_p_divergent,
    build_p_from_b_convergent, build_xi_convergent, build_xi_covering, verify_witness,
    weighted_partial_sum, BTarget, IndexSubsequence, PSource, WitnessB, WitnessBundle,
    WitnessKind, WitnessP, WitnessProvenance, WitnessReport,
};

/// Exact scalar type: arbitrary-precision rationals.
pub type Exact = num_rational::BigRational;
/// Floating scalar type: high-precision binary floats.
pub type Float = scalar::Fp;
