//! Eigenfunction functional and the Bernoulli comparison ODE.
//!
//! For a solution on `B_L` and the principal Dirichlet eigenpair `(λ_R, φ_R)`
//! of a smaller ball with `∫φ_R = 1`, Jensen's inequality gives
//! `y' ≥ y^p - λ_R y` for `y = ∫u φ_R`. Once `y` exceeds the equilibrium
//! `λ_R^{1/(p-1)}` of the comparison ODE, `y` and hence `u` blow up.

use serde::Serialize;

use crate::error::{FujitaError, Result};
use crate::grid::{dot_weights, Field};
use crate::operators::Eigenpair;
use crate::solver::TraceRecord;

/// `∫_{B_R} u φ_R` for `u` sampled on a grid with the eigenpair's spacing.
pub fn kaplan_functional(u: &Field, pair: &Eigenpair) -> Result<f64> {
    let ug = u.grid();
    let pg = pair.phi.grid();
    let dh = (ug.spacing() - pg.spacing()).abs() / ug.spacing();
    if ug.dim() != pg.dim() || dh > 1e-9 || pg.len() > ug.len() {
        return Err(FujitaError::IncompatibleGrids(format!(
            "eigenpair on B_{} (n={}, h={}) does not nest in B_{} (n={}, h={})",
            pair.radius,
            pg.dim(),
            pg.spacing(),
            ug.radius(),
            ug.dim(),
            ug.spacing()
        )));
    }
    let prod: Vec<f64> = pair
        .phi
        .values()
        .iter()
        .zip(u.values())
        .map(|(phi, u)| phi * u)
        .collect();
    Ok(dot_weights(pg.weights(), &prod))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeVerdict {
    pub blows_up: bool,
    pub t_star: Option<f64>,
    /// Equilibrium `a^{1/(p-1)}` with `a = λR⁻²`.
    pub threshold: f64,
}

/// Closed-form behaviour of `y' = y^p - a y`, `a = λR⁻²`, from `y(0) = y0`.
///
/// With `z = y^{1-p}` the equation is linear:
/// `z(t) = 1/a + (z0 - 1/a) e^{(p-1)at}`, which hits zero at
/// `t* = ln(1/(1 - a z0)) / ((p-1)a)` when `a z0 < 1`.
pub fn ode_comparison(y0: f64, p: f64, lambda: f64, radius: f64) -> OdeVerdict {
    let a = lambda / (radius * radius);
    let threshold = a.powf(1.0 / (p - 1.0));
    let z0 = y0.powf(1.0 - p);
    if a == 0.0 {
        return OdeVerdict {
            blows_up: true,
            t_star: Some(z0 / (p - 1.0)),
            threshold,
        };
    }
    let az = a * z0;
    if az < 1.0 {
        OdeVerdict {
            blows_up: true,
            t_star: Some(-(-az).ln_1p() / ((p - 1.0) * a)),
            threshold,
        }
    } else {
        OdeVerdict {
            blows_up: false,
            t_star: None,
            threshold,
        }
    }
}

/// Radius with `(ℓ/2)^{p-1} > λ₁R⁻²` and 5% room, where `λ₁` is the unit-ball
/// eigenvalue and `ℓ` the plateau of the gradient-only flow.
pub fn kaplan_radius(p: f64, ell: f64, lambda1: f64) -> f64 {
    1.05 * lambda1.sqrt() * (ell / 2.0).powf((1.0 - p) / 2.0)
}

/// Outcome of checking `Δy/Δt ≥ y^p - a y - tol` between consecutive records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KaplanInequalityCheck {
    pub intervals: usize,
    pub satisfied: usize,
    pub worst_defect: f64,
}

impl KaplanInequalityCheck {
    pub fn fraction(&self) -> f64 {
        if self.intervals == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.intervals as f64
        }
    }
}

/// Minimum of the convex map `y ↦ y^p - a y` over `[lo, hi]`, `y ≥ 0`.
fn min_source(lo: f64, hi: f64, p: f64, a: f64) -> f64 {
    let f = |y: f64| y.max(0.0).powf(p) - a * y;
    let crit = (a / p).powf(1.0 / (p - 1.0));
    let mut m = f(lo).min(f(hi));
    if crit > lo && crit < hi {
        m = m.min(f(crit));
    }
    m
}

/// Checks the discrete Kaplan inequality along a trace. The right side is
/// bounded below by its minimum over each interval `[y_i, y_{i+1}]`, and the
/// tolerance is `tol · (1 + |Δy/Δt| + |min|)`.
pub fn kaplan_inequality(trace: &[TraceRecord], p: f64, a: f64, tol: f64) -> KaplanInequalityCheck {
    let mut check = KaplanInequalityCheck {
        intervals: 0,
        satisfied: 0,
        worst_defect: 0.0,
    };
    for w in trace.windows(2) {
        let (Some(y0), Some(y1)) = (w[0].kaplan_y, w[1].kaplan_y) else {
            continue;
        };
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) {
            continue;
        }
        let slope = (y1 - y0) / dt;
        let rhs = min_source(y0.min(y1), y0.max(y1), p, a);
        let defect = rhs - slope;
        check.intervals += 1;
        if defect <= tol * (1.0 + slope.abs() + rhs.abs()) {
            check.satisfied += 1;
        }
        check.worst_defect = check.worst_defect.max(defect);
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::operators::principal_eigenpair;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn constant_has_unit_weight() {
        let pair = principal_eigenpair(2, 3.0, 299).unwrap();
        let g = RadialGrid::new(2, 12.0, 1199).unwrap();
        let u = Field::from_fn(g, |_| 2.5);
        assert_relative_eq!(kaplan_functional(&u, &pair).unwrap(), 2.5, max_relative = 1e-12);
    }

    #[test]
    fn eigenfunction_squared() {
        let pair = principal_eigenpair(1, 1.0, 2000).unwrap();
        let y = kaplan_functional(&pair.phi, &pair).unwrap();
        assert_relative_eq!(y, PI * PI / 16.0, max_relative = 1e-5);
    }

    #[test]
    fn lower_bound_transfers() {
        let pair = principal_eigenpair(1, 2.0, 199).unwrap();
        let g = RadialGrid::new(1, 12.0, 1199).unwrap();
        let u = Field::from_fn(g, |r| if r <= 2.0 { 1.5 + r } else { 0.0 });
        assert!(kaplan_functional(&u, &pair).unwrap() >= 1.5);
    }

    #[test]
    fn rejects_mismatched_grid() {
        let pair = principal_eigenpair(1, 2.0, 200).unwrap();
        let g = RadialGrid::new(1, 12.0, 1000).unwrap();
        assert!(kaplan_functional(&Field::zeros(g.clone()), &pair).is_err());
        let pair3 = principal_eigenpair(3, 2.0, 199).unwrap();
        let g1 = RadialGrid::new(1, 12.0, 1199).unwrap();
        assert!(kaplan_functional(&Field::zeros(g1), &pair3).is_err());
    }

    #[test]
    fn ode_examples() {
        let v = ode_comparison(2.0, 2.0, 1.0, 1.0);
        assert!(v.blows_up);
        assert_relative_eq!(v.t_star.unwrap(), 2f64.ln(), max_relative = 1e-15);
        let v = ode_comparison(1.0, 2.0, 1.0, 1.0);
        assert!(!v.blows_up && v.t_star.is_none());
        assert_eq!(v.threshold, 1.0);
        let v = ode_comparison(1.0, 3.0, 0.0, 1.0);
        assert_eq!(v.t_star, Some(0.5));
        // a = λ/R² = 1 with λ = 4, R = 2
        let v = ode_comparison(2.0, 2.0, 4.0, 2.0);
        assert_relative_eq!(v.t_star.unwrap(), 2f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn radius_examples() {
        assert_relative_eq!(kaplan_radius(2.0, 2.0, PI * PI / 4.0), 1.05 * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(kaplan_radius(3.0, 2.0, PI * PI), 1.05 * PI, max_relative = 1e-15);
        assert!(kaplan_radius(3.0, 1e6, PI * PI) < 1e-5);
        // the chosen radius puts ℓ/2 above the comparison threshold
        for &(p, ell) in &[(2.0, 0.3), (4.0, 1.2), (1.5, 5.0)] {
            let r = kaplan_radius(p, ell, PI * PI / 4.0);
            assert!(ode_comparison(ell / 2.0, p, PI * PI / 4.0, r).blows_up);
        }
    }

    #[test]
    fn min_source_interior_minimum() {
        // y^2 - y has its minimum -1/4 at 1/2
        assert_relative_eq!(min_source(0.0, 1.0, 2.0, 1.0), -0.25);
        assert_relative_eq!(min_source(2.0, 3.0, 2.0, 1.0), 2.0);
    }
}
