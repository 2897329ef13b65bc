//! Numerics for complex Hénon maps `f(x, y) = (p(x) - a y, x)` with small Jacobian.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dual;
pub mod error;
pub mod escape;
pub mod exec;
pub mod grid;
pub mod holonomy;
pub mod locus;
pub mod manifolds;
pub mod map;
pub mod poly;
pub mod winding;

pub use dual::{Dual2, Scalar};
pub use error::{HenonError, Result};
pub use escape::{Dynamics, EscapeValue, GreenValue, Limits, Side};
pub use exec::Execution;
pub use map::{domain_params, in_v_minus, in_v_plus, DomainParams, HenonMap, Point};
pub use poly::Polynomial;
