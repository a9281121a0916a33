//! Uniform radial grids on the ball `B_L ⊂ ℝⁿ`, quadrature against the
//! n-dimensional volume element, and the initial-data profile family.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, FujitaError, Result};

/// Nodes `r_i = i·h` for `i = 0..=M+1`; `r_0 = 0` is the centre and
/// `r_{M+1} = L` the Dirichlet boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n: u32,
    radius: f64,
    interior: usize,
    spacing: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: u32, radius: f64, interior: usize) -> Result<Arc<Self>> {
        if n < 1 {
            return Err(invalid("grid dimension must be at least 1"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid(format!("grid radius must be positive, got {radius}")));
        }
        if interior < 2 {
            return Err(invalid("grid needs at least 2 interior nodes"));
        }
        let spacing = radius / (interior + 1) as f64;
        let mut nodes: Vec<f64> = (0..=interior + 1).map(|i| i as f64 * spacing).collect();
        nodes[interior + 1] = radius;
        let weights = quadrature_weights(n, &nodes);
        Ok(Arc::new(Self {
            n,
            radius,
            interior,
            spacing,
            nodes,
            weights,
        }))
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of interior nodes `M`.
    pub fn interior(&self) -> usize {
        self.interior
    }

    /// Total node count `M + 2`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights including the sphere area `ω_{n-1}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn boundary_index(&self) -> usize {
        self.interior + 1
    }
}

/// Area of the unit sphere `S^{n-1}`, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: u32) -> f64 {
    // Γ(n/2) by recursion from Γ(1) = 1 or Γ(1/2) = √π
    let mut gamma = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    let target = n as f64 / 2.0;
    while x < target {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

// Piecewise-linear interpolation of f integrated exactly against r^{n-1}.
// For n = 1 this is the composite trapezoid rule.
fn quadrature_weights(n: u32, nodes: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; nodes.len()];
    for i in 0..nodes.len() - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let h = b - a;
        let m_n = (b.powi(n as i32) - a.powi(n as i32)) / nf;
        let m_n1 = (b.powi(n as i32 + 1) - a.powi(n as i32 + 1)) / (nf + 1.0);
        w[i] += (b * m_n - m_n1) / h;
        w[i + 1] += (m_n1 - a * m_n) / h;
    }
    let omega = sphere_area(n);
    w.iter_mut().for_each(|x| *x *= omega);
    w
}

/// Radial profile sampled on a grid. Value `i` approximates `u(r_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FujitaError::IncompatibleGrids(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn boundary_value(&self) -> f64 {
        self.values[self.grid.boundary_index()]
    }

    /// Sets the boundary node to zero (homogeneous Dirichlet).
    pub fn zero_boundary(mut self) -> Self {
        let b = self.grid.boundary_index();
        self.values[b] = 0.0;
        self
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(node) => Err(FujitaError::NonFinite { node }),
            None => Ok(()),
        }
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(FujitaError::IncompatibleGrids(
                "fields live on different grids".into(),
            ))
        }
    }

    /// CSV with header `r,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,value")?;
        for (r, v) in self.grid.nodes().iter().zip(&self.values) {
            writeln!(w, "{r:e},{v:e}")?;
        }
        Ok(())
    }
}

/// `ω_{n-1} ∫_0^L f(r) r^{n-1} dr`.
pub fn integrate(f: &Field) -> Result<f64> {
    f.check_finite()?;
    Ok(dot_weights(f.grid.weights(), &f.values))
}

pub(crate) fn dot_weights(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn sup_norm(f: &Field) -> f64 {
    f.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

pub fn l1_norm(f: &Field) -> Result<f64> {
    integrate(&f.map(f64::abs))
}

pub fn mean(f: &Field) -> Result<f64> {
    integrate(f)
}

/// Symmetrised bump `e^{-((r-c)/w)²} + e^{-((r+c)/w)²}`, even in r so the
/// radial function is smooth at the origin.
fn mirrored_bump(r: f64, center: f64, width: f64) -> f64 {
    let a = (r - center) / width;
    let b = (r + center) / width;
    (-a * a).exp() + (-b * b).exp()
}

/// Building blocks for initial data, forcings and supersolutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Primitive {
    /// `amplitude · e^{-r²/4}`
    Gaussian { amplitude: f64 },
    /// `eps · (1 + r²)^{-k}`
    Algebraic { eps: f64, k: f64 },
    /// `amplitude · [e^{-((r-c)/w)²} + e^{-((r+c)/w)²}]`
    AnnularBump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Positive mirrored bump minus a negative one.
    SignedDipole {
        pos_amplitude: f64,
        neg_amplitude: f64,
        pos_center: f64,
        neg_center: f64,
        pos_width: f64,
        neg_width: f64,
    },
    Zero,
}

impl Primitive {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Primitive::Gaussian { amplitude } => amplitude * (-r * r / 4.0).exp(),
            Primitive::Algebraic { eps, k } => eps * (1.0 + r * r).powf(-k),
            Primitive::AnnularBump {
                amplitude,
                center,
                width,
            } => amplitude * mirrored_bump(r, center, width),
            Primitive::SignedDipole {
                pos_amplitude,
                neg_amplitude,
                pos_center,
                neg_center,
                pos_width,
                neg_width,
            } => {
                pos_amplitude * mirrored_bump(r, pos_center, pos_width)
                    - neg_amplitude * mirrored_bump(r, neg_center, neg_width)
            }
            Primitive::Zero => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Primitive::Gaussian { amplitude } => amplitude.is_finite(),
            Primitive::Algebraic { eps, k } => eps.is_finite() && k.is_finite() && k >= 0.0,
            Primitive::AnnularBump {
                amplitude,
                center,
                width,
            } => amplitude.is_finite() && center >= 0.0 && width > 0.0,
            Primitive::SignedDipole {
                pos_amplitude,
                neg_amplitude,
                pos_center,
                neg_center,
                pos_width,
                neg_width,
            } => {
                pos_amplitude.is_finite()
                    && neg_amplitude.is_finite()
                    && pos_center >= 0.0
                    && neg_center >= 0.0
                    && pos_width > 0.0
                    && neg_width > 0.0
            }
            Primitive::Zero => true,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("invalid profile primitive {self:?}")))
        }
    }
}

/// A primitive or a sum of at most four primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Single(Primitive),
    Sum { sum: Vec<Primitive> },
}

pub const MAX_PROFILE_TERMS: usize = 4;

impl ProfileSpec {
    pub fn gaussian(amplitude: f64) -> Self {
        ProfileSpec::Single(Primitive::Gaussian { amplitude })
    }

    pub fn algebraic(eps: f64, k: f64) -> Self {
        ProfileSpec::Single(Primitive::Algebraic { eps, k })
    }

    pub fn zero() -> Self {
        ProfileSpec::Single(Primitive::Zero)
    }

    pub fn terms(&self) -> &[Primitive] {
        match self {
            ProfileSpec::Single(p) => std::slice::from_ref(p),
            ProfileSpec::Sum { sum } => sum,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let terms = self.terms();
        if terms.is_empty() || terms.len() > MAX_PROFILE_TERMS {
            return Err(invalid(format!(
                "profile sums take 1..={MAX_PROFILE_TERMS} primitives, got {}",
                terms.len()
            )));
        }
        terms.iter().try_for_each(Primitive::validate)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms().iter().map(|t| t.eval(r)).sum()
    }
}

/// Pointwise evaluation at every node, boundary included. Callers that want
/// homogeneous Dirichlet data apply [`Field::zero_boundary`].
pub fn sample_profile(spec: &ProfileSpec, grid: &Arc<RadialGrid>) -> Result<Field> {
    spec.validate()?;
    Ok(Field::from_fn(grid.clone(), |r| spec.eval(r)))
}

/// Returns a copy of `dipole` whose negative amplitude is chosen so that the
/// sampled profile has the requested mean on `grid`. The mean is affine in
/// the negative amplitude, so one secant step is exact.
pub fn tune_dipole_mean(dipole: &Primitive, grid: &Arc<RadialGrid>, target: f64) -> Result<Primitive> {
    let Primitive::SignedDipole {
        pos_amplitude,
        pos_center,
        neg_center,
        pos_width,
        neg_width,
        ..
    } = *dipole
    else {
        return Err(invalid("mean tuning needs a signed dipole"));
    };
    let with = |neg: f64| Primitive::SignedDipole {
        pos_amplitude,
        neg_amplitude: neg,
        pos_center,
        neg_center,
        pos_width,
        neg_width,
    };
    let mean_at = |neg: f64| -> Result<f64> {
        integrate(&Field::from_fn(grid.clone(), |r| with(neg).eval(r)))
    };
    let m0 = mean_at(0.0)?;
    let m1 = mean_at(1.0)?;
    let slope = m1 - m0;
    if slope == 0.0 {
        return Err(invalid("negative lobe has zero mass on this grid"));
    }
    Ok(with((target - m0) / slope))
}
