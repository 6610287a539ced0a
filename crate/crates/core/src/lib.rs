//! Higher-order Schwarz-Pick estimates for holomorphic maps between unit
//! balls, checked numerically.
//!
//! The crate evaluates maps `f: B^n -> B^m`, computes their derivatives by
//! Cauchy quadrature, and compares the resulting quantities against closed-form
//! upper bounds. The `harness` module drives randomized suites and writes
//! machine-readable reports.

pub mod bounds;
pub mod cauchy;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod holomap;
pub mod linalg;
pub mod multiindex;

pub use cauchy::{
    frechet_derivative, partial_derivative, taylor_coefficient, DerivativeResult, Jet, LineJet, Method,
    QuadratureSpec, TorusJet,
};
pub use error::{Error, Result};
pub use geometry::{bergman_metric, moebius_apply, moebius_jacobian, Automorphism, BallPoint, Direction};
pub use holomap::{compose_ball_automorphism, restrict_to_line, ClosedForm, HoloMap, PolyMap};
pub use multiindex::MultiIndex;
