//! Gauss hypergeometric function ₂F₁, the Gauss quadratic transformation and
//! its two contiguous companions, and the Frobenius-method machinery that
//! re-derives them: indicial roots, three-term recurrences, closed-form
//! coefficients, ODE residuals and connection constants.
//!
//! Coefficient work is exact ([`Rational`]); point evaluation is `f64`.

// `!(v < bound)` is used on purpose so NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frobenius;
pub mod report;
pub mod scalar;
pub mod series;
pub mod transforms;

pub use error::{HypError, Result};
pub use frobenius::{
    closed_form_coeffs, indicial_roots, ode_from_case, ode_residual, recurrence_coeffs, series_eval,
    split_even_odd, Branch, ClosedFormCase, CoeffSeq, IndicialRoots, OdeSpec, Residual,
};
pub use scalar::{parse_rational, parse_real, Rational, Scalar};
pub use series::{gauss_2f1, pochhammer, HypParams, SeriesControl, SeriesResult};
pub use transforms::{
    check_identity, fit_connection_constants, lhs_eval, map_x_to_z, map_z_to_x, rhs_eval,
    ConnectionConstants, GridPoint, IdentityReport, TransformCase,
};
