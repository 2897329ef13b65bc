//! Exact truncated power series and the quadratic rigidity computation.
//!
//! Coefficients are sparse polynomials over the rationals in a fixed alphabet
//! (`a, c, x, y, a1, c1, a2, c2, beta, gamma`). Nothing here touches floating point
//! except the explicit `evaluate_f64` helpers used for numeric cross-checks.

pub mod error;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rigidity;
pub mod series;

pub use error::SeriesError;
pub use parse::parse_poly;
pub use poly::{rat, MultiPoly, Monomial, Var};
pub use ratfunc::RatFunc;
pub use rigidity::{
    chart_series, check_partial_solution, locus_series, phi_series, rigidity_defect, sigma_series,
    verify_table_case, CaseReport, DEFECT_ORDER13_GOLDEN, ChartSeries, DefectSeries, Side, SymbolicPoly, TableCase,
};
pub use series::TruncSeries;
