//! `(p, q)` phase scans pairing the classifier with numerical evidence.
//!
//! Each lattice point is classified for positive data. Points where every
//! positive solution blows up get a bounded-budget run from a Gaussian probe;
//! points with small-data global existence get a Gaussian supersolution
//! certificate and a run from the certified amplitude that must stay below
//! it. Points are independent and run through [`Execution`]; results come
//! back in `(p, q)` order whatever the thread count.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::certificates::gaussian::{gaussian_certificate_with, GaussianCertificate};
use crate::certificates::LatticeSpec;
use crate::error::{invalid, FujitaError, Result};
use crate::exec::Execution;
use crate::grid::{sample_profile, ProfileSpec, RadialGrid};
use crate::params::{classify_positive, ProblemParams, RegimeRule, Verdict};
use crate::solver::{run_observed, SolveConfig, SolveStatus};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanBudget {
    pub t_end: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub max_steps: usize,
    /// Amplitude of the Gaussian datum used to confirm blow-up.
    pub probe_amplitude: f64,
    pub radius: f64,
    pub interior: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        Self {
            t_end: 50.0,
            dt_min: 1e-9,
            dt_max: 0.05,
            max_steps: 2_000_000,
            probe_amplitude: 2.5,
            radius: 12.0,
            interior: 1200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSpec {
    pub n: u32,
    pub b: f64,
    pub p_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub budget: ScanBudget,
}

/// `steps` evenly spaced values from `lo` to `hi`; empty when `steps = 0`
/// or `lo > hi`. Values are snapped to 12 decimals so that decimal lattice
/// points such as `q = 1.5` are the exact nearest doubles.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 0 || !(lo <= hi) {
        return Vec::new();
    }
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| if i == steps - 1 { hi } else { snap(lo + (hi - lo) * i as f64 / (steps - 1) as f64) })
        .collect()
}

fn snap(x: f64) -> f64 {
    let y = (x * 1e12).round() / 1e12;
    if (y - x).abs() <= 1e-9 * x.abs().max(1.0) {
        y
    } else {
        x
    }
}

impl ScanSpec {
    pub fn lattice(n: u32, b: f64, p_range: (f64, f64), q_range: (f64, f64), steps: usize) -> Self {
        Self {
            n,
            b,
            p_values: linspace(p_range.0, p_range.1, steps),
            q_values: linspace(q_range.0, q_range.1, steps),
            budget: ScanBudget::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("dimension n must be at least 1"));
        }
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(invalid("scan needs b > 0"));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(**p > 1.0) || !p.is_finite()) {
            return Err(invalid(format!("p = {p} outside p > 1")));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(**q > 1.0) || !q.is_finite()) {
            return Err(invalid(format!("q = {q} outside q > 1")));
        }
        let b = &self.budget;
        if !(b.t_end > 0.0 && b.dt_min > 0.0 && b.dt_max >= b.dt_min && b.probe_amplitude > 0.0) {
            return Err(invalid("scan budget needs positive t_end, dt_min <= dt_max and probe amplitude"));
        }
        Ok(())
    }
}

/// Numerical side of a scan point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NumericVerdict {
    /// The probe run blew up.
    BlowUp,
    /// The run from the certified amplitude stayed below the supersolution.
    Dominated,
    /// The probe reached the horizon although theory predicts blow-up.
    HorizonReached,
    /// The dominated run exceeded the supersolution beyond tolerance.
    DominationViolated,
    /// Budget exhausted or certificate unavailable; no verdict claimed.
    Unresolved,
    /// No numerical experiment is attached to this theory verdict.
    Skipped,
}

impl NumericVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            NumericVerdict::BlowUp => "BlowUp",
            NumericVerdict::Dominated => "Dominated",
            NumericVerdict::HorizonReached => "HorizonReached",
            NumericVerdict::DominationViolated => "DominationViolated",
            NumericVerdict::Unresolved => "unresolved",
            NumericVerdict::Skipped => "skipped",
        }
    }

    pub fn is_anomaly(self) -> bool {
        matches!(self, NumericVerdict::HorizonReached | NumericVerdict::DominationViolated)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub k: f64,
    pub eps: f64,
    pub residual_min: f64,
    /// Largest `u - z` seen at any trace record of the dominated run.
    pub max_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub p: f64,
    pub q: f64,
    pub verdict_theory: Verdict,
    pub rule: RegimeRule,
    pub triggered_condition: String,
    pub verdict_numeric: NumericVerdict,
    pub t_star: Option<f64>,
    pub certificate: Option<CertificateSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    pub points: Vec<ScanPoint>,
}

fn base_config(budget: &ScanBudget) -> SolveConfig {
    SolveConfig {
        t_end: budget.t_end,
        dt_init: 1e-3_f64.clamp(budget.dt_min, budget.dt_max),
        dt_min: budget.dt_min,
        dt_max: budget.dt_max,
        max_steps: budget.max_steps,
        trace_stride: 20,
        ..SolveConfig::default()
    }
}

fn run_point(spec: &ScanSpec, grid: &Arc<RadialGrid>, p: f64, q: f64) -> Result<ScanPoint> {
    let params = ProblemParams::new(spec.n, p, q, spec.b)?;
    let theory = classify_positive(&params)?;
    let budget = &spec.budget;
    let mut point = ScanPoint {
        p,
        q,
        verdict_theory: theory.verdict,
        rule: theory.theorem_tag,
        triggered_condition: theory.triggered_condition.clone(),
        verdict_numeric: NumericVerdict::Skipped,
        t_star: None,
        certificate: None,
    };
    match theory.verdict {
        Verdict::BlowUpAll => {
            let u0 = sample_profile(&ProfileSpec::gaussian(budget.probe_amplitude), grid)?;
            let out = run_observed(&params, &u0, None, &base_config(budget), |_, _| {})?;
            match out.status {
                SolveStatus::BlowUp { t_star_estimate, .. } => {
                    point.verdict_numeric = NumericVerdict::BlowUp;
                    point.t_star = Some(t_star_estimate);
                }
                SolveStatus::ReachedHorizon => point.verdict_numeric = NumericVerdict::HorizonReached,
                SolveStatus::StepFloorStall { .. } => point.verdict_numeric = NumericVerdict::Unresolved,
            }
        }
        Verdict::GlobalForSmallData => {
            let lattice = LatticeSpec {
                r_max: budget.radius,
                ..crate::certificates::gaussian::DEFAULT_LATTICE
            };
            let cert = match gaussian_certificate_with(spec.n, p, q, spec.b, lattice, Execution::Sequential) {
                Ok(c) => c,
                Err(FujitaError::CertificateFailed(_)) => {
                    point.verdict_numeric = NumericVerdict::Unresolved;
                    return Ok(point);
                }
                Err(e) => return Err(e),
            };
            let (numeric, max_excess) = dominated_run(&params, &cert, grid, budget)?;
            point.verdict_numeric = numeric;
            point.certificate = Some(CertificateSummary {
                k: cert.k,
                eps: cert.eps,
                residual_min: cert.residual_min,
                max_excess,
            });
        }
        Verdict::Inconclusive => {}
    }
    Ok(point)
}

/// Runs from `z(0, ·)` and compares with `z(t, ·)` at every record, with
/// tolerance `10·(h² + dt_max)`. A blow-up here contradicts the certificate
/// and is returned as an error.
pub fn dominated_run(
    params: &ProblemParams,
    cert: &GaussianCertificate,
    grid: &Arc<RadialGrid>,
    budget: &ScanBudget,
) -> Result<(NumericVerdict, f64)> {
    let u0 = sample_profile(&cert.initial_profile(), grid)?;
    let tol = 10.0 * (grid.spacing().powi(2) + budget.dt_max);
    let nodes = grid.nodes().to_vec();
    let mut max_excess = f64::NEG_INFINITY;
    let out = run_observed(params, &u0, None, &base_config(budget), |t, u| {
        for (r, v) in nodes.iter().zip(u.values()) {
            max_excess = max_excess.max(v - cert.z(t, *r));
        }
    })?;
    let verdict = match out.status {
        SolveStatus::BlowUp { .. } => {
            return Err(FujitaError::ScanSoundness {
                p: params.p,
                q: params.q,
                reason: "run from a certified small datum reported blow-up".into(),
            })
        }
        SolveStatus::StepFloorStall { .. } => NumericVerdict::Unresolved,
        SolveStatus::ReachedHorizon if max_excess > tol => NumericVerdict::DominationViolated,
        SolveStatus::ReachedHorizon => NumericVerdict::Dominated,
    };
    Ok((verdict, max_excess))
}

pub fn run_scan(spec: &ScanSpec, exec: Execution) -> Result<ScanResult> {
    spec.validate()?;
    let pairs: Vec<(f64, f64)> = spec
        .p_values
        .iter()
        .flat_map(|&p| spec.q_values.iter().map(move |&q| (p, q)))
        .collect();
    if pairs.is_empty() {
        return Ok(ScanResult {
            spec: spec.clone(),
            points: Vec::new(),
        });
    }
    let grid = RadialGrid::new(spec.n, spec.budget.radius, spec.budget.interior)?;
    let mut points = exec
        .map(&pairs, |&(p, q)| run_point(spec, &grid, p, q))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.q.total_cmp(&b.q)));
    Ok(ScanResult {
        spec: spec.clone(),
        points,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const SCAN_HEADER: &str =
    "n,p,q,verdict_theory,rule,verdict_numeric,t_star,cert_k,cert_eps,cert_residual_min,max_excess,anomaly";

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(SCAN_HEADER);
        s.push('\n');
        for pt in &self.points {
            let c = pt.certificate;
            let _ = writeln!(
                s,
                "{},{},{},{},{:?},{},{},{},{},{},{},{}",
                self.spec.n,
                pt.p,
                pt.q,
                pt.verdict_theory.as_str(),
                pt.rule,
                pt.verdict_numeric.as_str(),
                opt(pt.t_star),
                opt(c.map(|c| c.k)),
                opt(c.map(|c| c.eps)),
                opt(c.map(|c| c.residual_min)),
                opt(c.map(|c| c.max_excess)),
                pt.verdict_numeric.is_anomaly()
            );
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "n": self.spec.n,
            "b": self.spec.b,
            "grid": {"radius": self.spec.budget.radius, "interior": self.spec.budget.interior},
            "budget": self.spec.budget,
            "points": self.points.iter().map(|pt| json!({
                "p": pt.p,
                "q": pt.q,
                "verdict_theory": pt.verdict_theory.as_str(),
                "rule": pt.rule,
                "triggered_condition": pt.triggered_condition,
                "verdict_numeric": pt.verdict_numeric.as_str(),
                "anomaly": pt.verdict_numeric.is_anomaly(),
                "t_star": pt.t_star,
                "certificate": pt.certificate,
            })).collect::<Vec<_>>(),
        })
    }
}
