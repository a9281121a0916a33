//! Numerical laboratory for the semilinear heat equation with a gradient source,
//!
//! ```text
//! u_t - Δu = |u|^p + b |∇u|^q (+ h(x)),   x ∈ ℝⁿ,
//! ```
//!
//! restricted to radial profiles on a truncated ball. The crate covers four jobs:
//!
//! * exponent arithmetic and regime classification ([`params`]),
//! * radial grids, quadrature and data profiles ([`grid`]),
//! * discrete operators, the principal Dirichlet eigenpair and an IMEX solver
//!   with blow-up detection ([`operators`], [`solver`]),
//! * checkable certificates for blow-up (eigenfunction functional + comparison
//!   ODE) and for global existence (explicit supersolutions) ([`certificates`]).
//!
//! [`scan`] sweeps a `(p, q)` lattice and pairs every classifier verdict with a
//! numerical outcome. Independent scan points and certificate lattice rows run
//! on rayon when the `parallel` feature is enabled (the default).
//!
//! Truncation semantics: a Dirichlet ball solution with nonnegative data is a
//! subsolution of the whole-space problem, so blow-up observed on the ball
//! transfers to ℝⁿ. Reaching the horizon on the ball proves nothing about ℝⁿ;
//! only a verified supersolution certificate does.

pub mod certificates;
pub mod error;
pub mod exec;
pub mod grid;
pub mod operators;
pub mod params;
pub mod scan;
pub mod solver;
mod tridiag;

pub use error::{FujitaError, Result};
pub use grid::{Field, ProfileSpec, RadialGrid};
pub use params::{CriticalExponents, ProblemParams, RegimeVerdict, Verdict};
pub use solver::{SolveConfig, SolveOutcome, SolveStatus, TraceRecord};
