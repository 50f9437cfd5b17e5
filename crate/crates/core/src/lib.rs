//! Differential invariants of two-dimensional metrics and the degrees of
//! mobility of their geodesic flows.
//!
//! The pipeline: parse a metric ([`geometry::Metric2D`]), build its curvature
//! invariants ([`invariants::InvariantFrame`]), classify the number of linear
//! and quadratic integrals ([`mobility::classify`]), and cross-check with
//! Poisson brackets ([`symplectic`]) or a brute-force ansatz ([`oracle`]).

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod expr;
pub mod geometry;
pub mod invariants;
pub mod mobility;
pub mod oracle;
pub mod symplectic;

pub use expr::{Expr, GaussRational, Mode, ParseContext, Scalar, TriState, ZeroPolicy};
