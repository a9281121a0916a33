//! Checkable certificates for blow-up and for global existence.
//!
//! * [`kaplan`]: the eigenfunction functional `y(t) = ∫u φ_R` and the
//!   Bernoulli comparison ODE `y' = y^p - λR⁻²y` it dominates.
//! * [`gaussian`]: the self-similar supersolution `ε(t+1)^k G(t, r)` for
//!   small-data global existence.
//! * [`stationary`]: the algebraic supersolution `ε(1+r²)^{-k}` together with
//!   the forcing that makes it stationary.
//! * [`rates`] and [`testfn`]: scaling exponents of the rescaled test-function
//!   argument and their numerical counterparts on stored trajectories.

pub mod gaussian;
pub mod kaplan;
pub mod rates;
pub mod stationary;
pub mod testfn;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use gaussian::{gaussian_certificate, supersolution_residual, GaussianCertificate};
pub use kaplan::{kaplan_functional, kaplan_radius, ode_comparison, OdeVerdict};
pub use rates::{rate_exponents, RateExponents};
pub use stationary::{stationary_certificate, stationary_certificate_with, StationaryCertificate};
pub use testfn::{forcing_scaling, testfunction_scaling, ScalingPoint, ScalingReport};

use crate::error::Result;
use crate::grid::{Field, RadialGrid};

/// Time-independent forcing `h(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSpec {
    None,
    /// The `h` built by [`stationary_certificate`] for the problem's `(n, p, q, b)`.
    #[serde(alias = "constructed_thm32")]
    ConstructedStationary,
    /// `amplitude · e^{-r²/4}`.
    Gaussian { amplitude: f64 },
}

impl ForcingSpec {
    /// Samples the forcing on `grid`; `None` means no forcing term.
    pub fn field(&self, n: u32, p: f64, q: f64, b: f64, grid: &Arc<RadialGrid>) -> Result<Option<Field>> {
        match *self {
            ForcingSpec::None => Ok(None),
            ForcingSpec::ConstructedStationary => {
                let cert = stationary_certificate_with(n, p, q, b, grid)?;
                Ok(Some(cert.h))
            }
            ForcingSpec::Gaussian { amplitude } => {
                if !amplitude.is_finite() {
                    return Err(crate::error::invalid("forcing amplitude must be finite"));
                }
                Ok(Some(Field::from_fn(grid.clone(), |r| amplitude * (-r * r / 4.0).exp())))
            }
        }
    }
}

/// Sampling lattice used by a certificate check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSpec {
    pub t_points: usize,
    pub r_points: usize,
    pub t_max: f64,
    pub r_max: f64,
}

impl LatticeSpec {
    pub fn times(&self) -> Vec<f64> {
        linspace(self.t_max, self.t_points)
    }

    pub fn radii(&self) -> Vec<f64> {
        linspace(self.r_max, self.r_points)
    }
}

fn linspace(max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| max * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Largest `x ∈ [0, hi]` with `f(x) ≤ target` for increasing `f`, assuming
/// `f(0) ≤ target`.
pub(crate) fn bisect_largest(f: impl Fn(f64) -> f64, target: f64, mut hi: f64) -> f64 {
    let mut lo = 0.0;
    while f(hi) <= target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
