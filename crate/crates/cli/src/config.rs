//! JSON scenario files for `fujita run`.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use fujita_core::certificates::ForcingSpec;
use fujita_core::grid::{sample_profile, Field, ProfileSpec, RadialGrid};
use fujita_core::solver::{BoundaryMode, SolveConfig};
use fujita_core::ProblemParams;
use serde::Deserialize;

/// A plain number or an exact `[num, den]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Value(f64),
    Ratio(i64, i64),
}

impl Exponent {
    pub fn value(self) -> Result<f64> {
        match self {
            Exponent::Value(v) => Ok(v),
            Exponent::Ratio(_, 0) => bail!("exponent ratio has zero denominator"),
            Exponent::Ratio(a, b) => Ok(a as f64 / b as f64),
        }
    }
}

/// Parses `"4/3"`, `"1.5"` or `"2"`.
pub fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if b == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|e| format!("bad number {s:?}: {e}")),
    }
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub n: u32,
    pub p: Exponent,
    pub q: Exponent,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default = "yes")]
    pub use_source: bool,
    #[serde(default = "yes")]
    pub use_gradient: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    #[serde(rename = "L")]
    pub radius: f64,
    #[serde(rename = "M")]
    pub interior: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            radius: 12.0,
            interior: 1200,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    pub t_end: Option<f64>,
    pub dt_init: Option<f64>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    pub blowup_threshold: Option<f64>,
    pub growth_cap: Option<f64>,
    pub theta: Option<f64>,
    #[serde(rename = "kaplan_R")]
    pub kaplan_radius: Option<f64>,
    pub boundary: Option<BoundaryMode>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub stride: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            stride: 10,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub profile: Option<ProfileSpec>,
    #[serde(default)]
    pub forcing: Option<ForcingSpec>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Everything a run needs, built and checked before anything is written.
pub struct Scenario {
    pub params: ProblemParams,
    pub profile: ProfileSpec,
    pub grid: Arc<RadialGrid>,
    pub initial: Field,
    pub forcing: Option<Field>,
    pub solve: SolveConfig,
    pub out_dir: PathBuf,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid scenario config")
    }

    pub fn build(&self) -> Result<Scenario> {
        let pr = &self.problem;
        let mut params = ProblemParams::new(pr.n, pr.p.value()?, pr.q.value()?, pr.b)?
            .with_source(pr.use_source)
            .with_gradient(pr.use_gradient);
        let forcing_spec = self.forcing.clone().unwrap_or(ForcingSpec::None);
        if forcing_spec != ForcingSpec::None {
            params = params.with_forcing(forcing_spec.clone());
        }
        let grid = RadialGrid::new(pr.n, self.grid.radius, self.grid.interior)?;
        let profile = self.profile.clone().unwrap_or_else(|| ProfileSpec::gaussian(1.0));
        let initial = sample_profile(&profile, &grid)?;
        let forcing = forcing_spec.field(pr.n, params.p, params.q, params.b, &grid)?;

        let d = SolveConfig::default();
        let s = &self.solve;
        let solve = SolveConfig {
            t_end: s.t_end.unwrap_or(d.t_end),
            dt_init: s.dt_init.unwrap_or(d.dt_init),
            dt_min: s.dt_min.unwrap_or(d.dt_min),
            dt_max: s.dt_max.unwrap_or(d.dt_max),
            blowup_threshold: s.blowup_threshold.unwrap_or(d.blowup_threshold),
            growth_cap: s.growth_cap.unwrap_or(d.growth_cap),
            theta: s.theta.unwrap_or(d.theta),
            trace_stride: self.output.stride,
            kaplan_radius: s.kaplan_radius,
            boundary: s.boundary.unwrap_or(d.boundary),
            max_steps: s.max_steps.unwrap_or(d.max_steps),
        };
        solve.validate()?;
        if let Some(r) = solve.kaplan_radius {
            if r > self.grid.radius {
                bail!("solve.kaplan_R = {r} exceeds grid.L = {}", self.grid.radius);
            }
        }
        Ok(Scenario {
            params,
            profile,
            grid,
            initial,
            forcing,
            solve,
            out_dir: self.output.dir.clone(),
        })
    }
}
