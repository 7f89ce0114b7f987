//! Exact computation of Ollivier-Ricci idleness functions on finite graphs.
//!
//! For every edge `x ~ y` of a finite simple graph, the curvature
//! `kappa_p(x,y) = 1 - W1(mu_x^p, mu_y^p)` is a concave piecewise-linear
//! function of the idleness `p` on `[0,1]` with at most three linear parts.
//! This crate computes that function exactly — rational breakpoints, rational
//! slopes, no floating point anywhere — and cross-checks it against an
//! independent optimal-transport oracle built on an exact rational simplex
//! solver.
//!
//! All numeric code is generic over the [`Scalar`] trait, an exact ordered
//! field. Two instantiations are provided: [`Rat`] (arbitrary-precision,
//! the default) and [`Rat128`] (checked 128-bit, faster, aborts on overflow).

pub mod graph;
pub mod idleness;
pub mod lp;
pub mod pwl;
pub mod scalar;
pub mod transport;
pub mod verify;

pub use graph::{Edge, Graph};
pub use idleness::{EdgeReport, GraphScan, IdlenessFunction};
pub use pwl::{Line, Piece, PiecewiseLinear};
pub use scalar::{Rational128, Scalar};
pub use transport::{Potential, ProbMeasure, TransportPlan};

/// Default exact scalar: arbitrary-precision rational.
pub type Rat = num_rational::BigRational;

/// Fixed-width exact scalar: checked 128-bit rational, panics on overflow.
pub type Rat128 = scalar::Rational128;
