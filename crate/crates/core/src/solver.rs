//! IMEX time integration with adaptive steps and blow-up detection.
//!
//! Diffusion is treated with a θ-scheme (θ = 1 is backward Euler) and the
//! reaction `N(u)` explicitly, so each step is one tridiagonal solve:
//!
//! ```text
//! (I - θ·dt·Δ_h) u_new = u + dt·[(1-θ)·Δ_h u + N(u)]
//! ```
//!
//! The step size halves when the sup norm grows by more than `growth_cap`
//! (relative to `max(‖u‖∞, 1)`) or a step produces non-finite values, and
//! grows by 1.2 after a step that needed no halving.

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certificates::kaplan_functional;
use crate::error::{invalid, Result};
use crate::grid::{dot_weights, Field, RadialGrid};
use crate::operators::{eigenpair_on, reaction_into, Eigenpair, LaplacianStencil};
use crate::params::ProblemParams;
use crate::tridiag;

/// What happens at the outer node `r = L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Homogeneous Dirichlet, `u(L) = 0`.
    #[default]
    Zero,
    /// Dirichlet with the initial boundary value held fixed.
    HoldInitial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub t_end: f64,
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Sup-norm level that counts as blow-up.
    pub blowup_threshold: f64,
    /// Largest accepted relative sup-norm growth per step.
    pub growth_cap: f64,
    /// Implicitness weight of the diffusion term.
    pub theta: f64,
    /// Accepted steps between regular trace records.
    pub trace_stride: usize,
    /// Radius of the eigenfunction functional monitor, if any.
    pub kaplan_radius: Option<f64>,
    pub boundary: BoundaryMode,
    pub max_steps: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            dt_init: 1e-3,
            dt_min: 1e-9,
            dt_max: 0.05,
            blowup_threshold: 1e8,
            growth_cap: 0.1,
            theta: 1.0,
            trace_stride: 10,
            kaplan_radius: None,
            boundary: BoundaryMode::Zero,
            max_steps: 20_000_000,
        }
    }
}

impl SolveConfig {
    /// Fixed step `dt` all the way to `t_end`.
    pub fn fixed_step(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt_init: dt,
            dt_min: dt,
            dt_max: dt,
            growth_cap: f64::INFINITY,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_init && self.dt_init <= self.dt_max) {
            return Err(invalid("step controls need 0 < dt_min <= dt_init <= dt_max"));
        }
        if !(self.blowup_threshold > 1.0) {
            return Err(invalid("blowup_threshold must exceed 1"));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(invalid("t_end must be finite and nonnegative"));
        }
        if !(self.growth_cap > 0.0) {
            return Err(invalid("growth_cap must be positive"));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(invalid("theta must lie in [0, 1]"));
        }
        if self.trace_stride == 0 {
            return Err(invalid("trace_stride must be at least 1"));
        }
        if let Some(r) = self.kaplan_radius {
            if !(r > 0.0) {
                return Err(invalid("kaplan radius must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: f64,
    pub dt: f64,
    pub sup_u: f64,
    pub inf_u: f64,
    pub l1_u: f64,
    pub mean_u: f64,
    pub sup_grad_u: f64,
    pub kaplan_y: Option<f64>,
}

pub const TRACE_HEADER: &str = "t,dt,sup_u,inf_u,l1_u,mean_u,sup_grad_u,kaplan_y";

pub fn write_trace_csv<W: Write>(trace: &[TraceRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in trace {
        let ky = r.kaplan_y.map(|y| format!("{y:e}")).unwrap_or_default();
        writeln!(
            w,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.t, r.dt, r.sup_u, r.inf_u, r.l1_u, r.mean_u, r.sup_grad_u, ky
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum SolveStatus {
    ReachedHorizon,
    BlowUp {
        /// Extrapolated blow-up time (heuristic self-similar fit).
        t_star_estimate: f64,
        t_last_finite: f64,
        fit_quality: Option<f64>,
    },
    StepFloorStall { t: f64 },
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::ReachedHorizon => "ReachedHorizon",
            SolveStatus::BlowUp { .. } => "BlowUp",
            SolveStatus::StepFloorStall { .. } => "StepFloorStall",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, SolveStatus::BlowUp { .. })
    }
}

/// Radius actually used by the eigenfunction monitor (snapped up to a grid
/// node) and its eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KaplanMonitor {
    pub radius: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub trace: Vec<TraceRecord>,
    pub final_field: Field,
    pub kaplan: Option<KaplanMonitor>,
    pub steps: usize,
}

/// Reusable stepping workspace for one grid and one problem.
pub struct Stepper<'a> {
    grid: Arc<RadialGrid>,
    params: &'a ProblemParams,
    forcing: Option<&'a [f64]>,
    theta: f64,
    stencil: LaplacianStencil,
    reaction: Vec<f64>,
    grad: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(grid: Arc<RadialGrid>, params: &'a ProblemParams, forcing: Option<&'a Field>, theta: f64) -> Self {
        let m = grid.interior();
        let len = grid.len();
        Self {
            stencil: LaplacianStencil::new(&grid),
            grid,
            params,
            forcing: forcing.map(|f| f.values()),
            theta,
            reaction: vec![0.0; len],
            grad: vec![0.0; len],
            lower: vec![0.0; m + 1],
            diag: vec![0.0; m + 1],
            upper: vec![0.0; m + 1],
            scratch: Vec::with_capacity(m + 1),
        }
    }

    /// One IMEX step from `u` into `out`. The boundary node of `out` is set
    /// to `u`'s boundary value. Returns `false` on non-finite output.
    pub fn advance(&mut self, u: &[f64], dt: f64, out: &mut [f64]) -> bool {
        let m = self.grid.interior();
        let nb = m + 1;
        reaction_into(&self.grid, u, self.params, self.forcing, &mut self.grad, &mut self.reaction);
        let th = self.theta;
        for i in 0..=m {
            let explicit_lap = if th < 1.0 { self.stencil.apply_row(u, i) } else { 0.0 };
            out[i] = u[i] + dt * ((1.0 - th) * explicit_lap + self.reaction[i]);
            self.lower[i] = -th * dt * self.stencil.lower[i];
            self.diag[i] = 1.0 - th * dt * self.stencil.diag[i];
            self.upper[i] = -th * dt * self.stencil.upper[i];
        }
        out[m] += th * dt * self.stencil.upper[m] * u[nb];
        tridiag::solve_in_place(&self.lower, &self.diag, &self.upper, &mut out[..=m], &mut self.scratch);
        out[nb] = u[nb];
        out.iter().all(|v| v.is_finite())
    }
}

/// Single IMEX step. Errors when the result is not finite; the adaptive
/// driver reacts to that by halving the step.
pub fn step(u: &Field, dt: f64, params: &ProblemParams, forcing: Option<&Field>, theta: f64) -> Result<Field> {
    u.check_finite()?;
    if let Some(h) = forcing {
        u.check_same_grid(h)?;
    }
    let mut stepper = Stepper::new(u.grid().clone(), params, forcing, theta);
    let mut out = vec![0.0; u.grid().len()];
    let finite = stepper.advance(u.values(), dt, &mut out);
    let field = Field::new(u.grid().clone(), out)?;
    if !finite {
        field.check_finite()?;
    }
    Ok(field)
}

/// Analytic heat flow of the unit Gaussian,
/// `(t+1)^{-n/2} exp(-r²/(4(t+1)))`.
pub fn heat_reference(t: f64, grid: &Arc<RadialGrid>) -> Field {
    let s = t + 1.0;
    let amp = s.powf(-(grid.dim() as f64) / 2.0);
    Field::from_fn(grid.clone(), |r| amp * (-r * r / (4.0 * s)).exp())
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

struct Monitor {
    pair: Eigenpair,
}

fn make_record(grid: &RadialGrid, u: &Field, t: f64, dt: f64, grad: &mut [f64], monitor: Option<&Monitor>) -> TraceRecord {
    let v = u.values();
    crate::operators::gradient_magnitude_into(grid, v, grad);
    let w = grid.weights();
    let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    TraceRecord {
        t,
        dt,
        sup_u: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        inf_u: v.iter().copied().fold(f64::INFINITY, f64::min),
        l1_u: dot_weights(w, &abs),
        mean_u: dot_weights(w, v),
        sup_grad_u: grad.iter().copied().fold(0.0, f64::max),
        kaplan_y: monitor.and_then(|m| kaplan_functional(u, &m.pair).ok()),
    }
}

fn kaplan_monitor(grid: &Arc<RadialGrid>, radius: f64) -> Result<Monitor> {
    let h = grid.spacing();
    let cells = (radius / h - 1e-9).ceil().max(3.0) as usize;
    if cells > grid.interior() + 1 {
        return Err(invalid(format!(
            "kaplan radius {radius} exceeds the domain radius {}",
            grid.radius()
        )));
    }
    let sub = RadialGrid::new(grid.dim(), grid.nodes()[cells], cells - 1)?;
    Ok(Monitor {
        pair: eigenpair_on(&sub)?,
    })
}

/// Adaptive run from `u0` to `config.t_end`.
pub fn run(params: &ProblemParams, u0: &Field, forcing: Option<&Field>, config: &SolveConfig) -> Result<SolveOutcome> {
    run_observed(params, u0, forcing, config, |_, _| {})
}

/// As [`run`], calling `observe(t, u)` at every trace record.
pub fn run_observed(
    params: &ProblemParams,
    u0: &Field,
    forcing: Option<&Field>,
    config: &SolveConfig,
    mut observe: impl FnMut(f64, &Field),
) -> Result<SolveOutcome> {
    params.validate()?;
    config.validate()?;
    u0.check_finite()?;
    if let Some(h) = forcing {
        u0.check_same_grid(h)?;
        h.check_finite()?;
    }
    let grid = u0.grid().clone();
    let monitor = config
        .kaplan_radius
        .map(|r| kaplan_monitor(&grid, r))
        .transpose()?;
    let kaplan = monitor.as_ref().map(|m| KaplanMonitor {
        radius: m.pair.radius,
        lambda: m.pair.lambda,
    });

    let mut u = match config.boundary {
        BoundaryMode::Zero => u0.clone().zero_boundary(),
        BoundaryMode::HoldInitial => u0.clone(),
    };
    let mut next = vec![0.0; grid.len()];
    let mut grad = vec![0.0; grid.len()];
    let mut stepper = Stepper::new(grid.clone(), params, forcing, config.theta);

    let mut trace = Vec::new();
    let push = |trace: &mut Vec<TraceRecord>, u: &Field, t: f64, dt: f64, grad: &mut [f64], obs: &mut dyn FnMut(f64, &Field)| {
        trace.push(make_record(&grid, u, t, dt, grad, monitor.as_ref()));
        obs(t, u);
    };

    let mut t = 0.0;
    let mut dt = config.dt_init;
    let mut steps = 0usize;
    let mut since_record = 0usize;
    let mut pending_halvings = 0usize;
    let mut terminal_halvings = 0usize;
    let mut norm = sup_abs(u.values());
    let mut recorded_norm = norm;
    push(&mut trace, &u, t, 0.0, &mut grad, &mut observe);

    let horizon_eps = 1e-12 * config.t_end.max(1.0);
    let status = loop {
        if t >= config.t_end - horizon_eps {
            break SolveStatus::ReachedHorizon;
        }
        if steps >= config.max_steps {
            break SolveStatus::StepFloorStall { t };
        }
        let dt_try = dt.min(config.t_end - t);
        let finite = stepper.advance(u.values(), dt_try, &mut next);
        let new_norm = if finite { sup_abs(&next) } else { f64::INFINITY };
        let growth = (new_norm - norm) / norm.max(1.0);
        if !finite || growth > config.growth_cap {
            pending_halvings += 1;
            dt = dt_try / 2.0;
            if dt < config.dt_min {
                if since_record != 0 {
                    push(&mut trace, &u, t, dt_try, &mut grad, &mut observe);
                }
                let halvings = terminal_halvings + pending_halvings;
                let fit = detect_blowup(&trace, params.p);
                break match fit {
                    Some(f) if halvings >= 3 && f.r_squared >= STALL_FIT_QUALITY => SolveStatus::BlowUp {
                        t_star_estimate: f.t_star.max(t),
                        t_last_finite: t,
                        fit_quality: Some(f.r_squared),
                    },
                    _ => SolveStatus::StepFloorStall { t },
                };
            }
            continue;
        }

        // accept
        t += dt_try;
        steps += 1;
        since_record += 1;
        u.values_mut().copy_from_slice(&next);
        if new_norm > norm {
            terminal_halvings += pending_halvings;
        } else {
            terminal_halvings = 0;
        }
        norm = new_norm;
        if pending_halvings == 0 {
            dt = (dt * 1.2).min(config.dt_max);
        } else {
            dt = dt_try;
        }
        pending_halvings = 0;

        let sup_u = u.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let at_end = t >= config.t_end - horizon_eps;
        if since_record >= config.trace_stride || norm >= RECORD_GROWTH * recorded_norm || at_end {
            push(&mut trace, &u, t, dt_try, &mut grad, &mut observe);
            since_record = 0;
            recorded_norm = norm;
        }
        if sup_u >= config.blowup_threshold && terminal_halvings >= 3 {
            if since_record != 0 {
                push(&mut trace, &u, t, dt_try, &mut grad, &mut observe);
            }
            let fit = detect_blowup(&trace, params.p);
            break SolveStatus::BlowUp {
                t_star_estimate: fit.map_or(t, |f| f.t_star.max(t)),
                t_last_finite: t,
                fit_quality: fit.map(|f| f.r_squared),
            };
        }
    };

    Ok(SolveOutcome {
        status,
        trace,
        final_field: u,
        kaplan,
        steps,
    })
}

/// A record is also written whenever the sup norm has grown by this factor
/// since the last record, so blow-up phases are densely sampled.
const RECORD_GROWTH: f64 = 1.05;
const STALL_FIT_QUALITY: f64 = 0.99;
const FIT_WINDOW: usize = 12;
const FIT_MIN_RECORDS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupFit {
    pub t_star: f64,
    /// Coefficient of determination of the linearised fit.
    pub r_squared: f64,
}

/// Fits `sup_u ≈ C (T - t)^{-1/(p-1)}` on the trailing growing records.
///
/// The fit is linear after the change of variable `y = sup_u^{-(p-1)}`,
/// which turns the ansatz into `y = C^{-(p-1)}·(T - t)`. Returns `None`
/// unless at least 8 trailing records grow strictly, the window grows by at
/// least 1.5×, and the fitted slope is negative. The ansatz is an
/// extrapolation device borrowed from the pure power nonlinearity.
pub fn detect_blowup(trace: &[TraceRecord], p: f64) -> Option<BlowupFit> {
    if trace.len() < FIT_MIN_RECORDS || !(p > 1.0) {
        return None;
    }
    let mut start = trace.len() - 1;
    while start > 0
        && trace.len() - start < FIT_WINDOW
        && trace[start - 1].sup_u < trace[start].sup_u
        && trace[start - 1].t < trace[start].t
        && trace[start - 1].sup_u > 0.0
    {
        start -= 1;
    }
    let window = &trace[start..];
    if window.len() < FIT_MIN_RECORDS {
        return None;
    }
    let first = window[0].sup_u;
    let last = window[window.len() - 1].sup_u;
    if !(first > 0.0) || last < 1.5 * first {
        return None;
    }
    let t0 = window[0].t;
    let xs: Vec<f64> = window.iter().map(|r| r.t - t0).collect();
    let ys: Vec<f64> = window.iter().map(|r| r.sup_u.powf(-(p - 1.0))).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) || !(syy > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return None;
    }
    let intercept = my - slope * mx;
    let t_star = t0 - intercept / slope;
    let r_squared = (sxy * sxy) / (sxx * syy);
    if !t_star.is_finite() {
        return None;
    }
    Some(BlowupFit { t_star, r_squared })
}
