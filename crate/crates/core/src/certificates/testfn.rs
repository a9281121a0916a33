//! Rescaled test-function integrals evaluated on stored trajectories.
//!
//! Cutoffs are C² quintic smoothsteps: `θ(σ) = 1` on `[0, 1]`, `0` on
//! `[2, ∞)`, and the spatial cutoff `ξ(|x|)` has the same shape.

use serde::Serialize;

use super::rates::rate_exponents;
use crate::error::{invalid, Result};
use crate::grid::{dot_weights, Field};
use crate::operators::gradient_magnitude;
use crate::params::ProblemParams;

/// `6x⁵ - 15x⁴ + 10x³` clamped to `[0, 1]`.
pub fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

/// Equal to 1 on `[0, 1]` and 0 on `[2, ∞)`.
pub fn cutoff(sigma: f64) -> f64 {
    1.0 - smoothstep(sigma - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub tau: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub space_exponent: f64,
    pub points: Vec<ScalingPoint>,
    /// Log–log slope of the values in `τ`, when at least two are positive.
    pub fitted_exponent: Option<f64>,
}

fn loglog_slope(points: &[ScalingPoint]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.value > 0.0 && p.tau > 0.0)
        .map(|p| (p.tau.ln(), p.value.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn spatial_weight(field: &Field, tau: f64, space_exponent: f64, power: f64) -> Vec<f64> {
    let scale = tau.powf(space_exponent);
    field
        .grid()
        .nodes()
        .iter()
        .map(|r| cutoff(r / scale).powf(power))
        .collect()
}

/// Left side of the rescaled test-function bound,
/// `½∫∫(|u|^p + b|∇u|^q) θ^{p/(p-1)}(t/τ) ξ^{q/(q-1)}(x/τ^r) + ∫u₀ ξ^{q/(q-1)}(x/τ^r)`,
/// for each `τ`. Time integrals use the trapezoid rule over the trajectory's
/// record times, and every `τ` needs `2τ` within the trajectory.
pub fn testfunction_scaling(
    initial: &Field,
    trajectory: &[(f64, Field)],
    params: &ProblemParams,
    taus: &[f64],
    space_exponent: f64,
) -> Result<ScalingReport> {
    let horizon = trajectory.last().map_or(0.0, |(t, _)| *t);
    let (p, q, b) = (params.p, params.q, params.b);
    let pw_t = p / (p - 1.0);
    let pw_x = q / (q - 1.0);
    let w = initial.grid().weights();
    for (_, u) in trajectory {
        initial.check_same_grid(u)?;
    }
    let integrands: Vec<Vec<f64>> = trajectory
        .iter()
        .map(|(_, u)| {
            let g = gradient_magnitude(u);
            u.values()
                .iter()
                .zip(g.values())
                .map(|(&ui, &gi)| {
                    let src = if params.use_source { ui.abs().powf(p) } else { 0.0 };
                    let grd = if params.use_gradient { b * gi.powf(q) } else { 0.0 };
                    src + grd
                })
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(taus.len());
    for &tau in taus {
        if !(tau > 0.0) || 2.0 * tau > horizon * (1.0 + 1e-12) {
            return Err(invalid(format!(
                "tau = {tau} needs a trajectory up to t = {} but it ends at {horizon}",
                2.0 * tau
            )));
        }
        let xi = spatial_weight(initial, tau, space_exponent, pw_x);
        let spatial: Vec<f64> = integrands
            .iter()
            .map(|f| {
                let prod: Vec<f64> = f.iter().zip(&xi).map(|(a, b)| a * b).collect();
                dot_weights(w, &prod)
            })
            .collect();
        let mut time_integral = 0.0;
        for i in 1..trajectory.len() {
            let (t0, t1) = (trajectory[i - 1].0, trajectory[i].0);
            let f0 = cutoff(t0 / tau).powf(pw_t) * spatial[i - 1];
            let f1 = cutoff(t1 / tau).powf(pw_t) * spatial[i];
            time_integral += 0.5 * (t1 - t0) * (f0 + f1);
        }
        let init: Vec<f64> = initial.values().iter().zip(&xi).map(|(a, b)| a * b).collect();
        points.push(ScalingPoint {
            tau,
            value: 0.5 * time_integral + dot_weights(w, &init),
        });
    }
    Ok(ScalingReport {
        space_exponent,
        fitted_exponent: loglog_slope(&points),
        points,
    })
}

/// `∫h ξ^{q/(q-1)}(x/τ^r)` with the balancing `r = p(q-1)/(q(p-1))`.
/// For integrable `h` with positive mass this tends to `∫h`, while the
/// bound it must satisfy decays like `τ^{inhom}` when `q < n/(n-1)`.
pub fn forcing_scaling(h: &Field, params: &ProblemParams, taus: &[f64]) -> Result<ScalingReport> {
    let r = rate_exponents(params.n, params.p, params.q)?.r;
    let pw_x = params.q / (params.q - 1.0);
    let w = h.grid().weights();
    let points = taus
        .iter()
        .map(|&tau| {
            if !(tau > 0.0) {
                return Err(invalid("tau must be positive"));
            }
            let xi = spatial_weight(h, tau, r, pw_x);
            let prod: Vec<f64> = h.values().iter().zip(&xi).map(|(a, b)| a * b).collect();
            Ok(ScalingPoint {
                tau,
                value: dot_weights(w, &prod),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingReport {
        space_exponent: r,
        fitted_exponent: loglog_slope(&points),
        points,
    })
}
