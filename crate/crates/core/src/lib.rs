//! Derivative-corrected endpoint quadrature and a-priori error certificates
//! for functions whose `n`-th derivative is quasi-convex.
//!
//! The crate evaluates two exact quadrature identities (a two-endpoint rule
//! with a free evaluation point `x`, and a corrected trapezoid rule), checks
//! them numerically, and evaluates the family of error bounds that follow
//! from them when `|f^(n)|` (or `|f^(n)|^q`) is quasi-convex on `[a, b]`.
//!
//! ```
//! use qcbound::{bounds, expr, identity::ProblemSpec};
//!
//! let f = expr::parse("exp(t)").unwrap();
//! let spec = ProblemSpec::new(0.0, 1.0, 0.5, 1).unwrap();
//! let measured = bounds::measured_e1(&f, &spec).unwrap();
//! let bound = bounds::bound_t21(&f, &spec).unwrap();
//! assert!(measured <= bound);
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod compensated;
pub mod error;
pub mod expr;
pub mod identity;
pub mod jet;
pub mod quad;
pub mod quasi;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use identity::ProblemSpec;
