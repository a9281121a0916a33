//! Discrete radial operators and the principal Dirichlet eigenpair of the ball.
//!
//! The radial Laplacian `u_rr + (n-1)/r·u_r` uses second-order central
//! differences. At `r = 0` the removable singularity is replaced by its
//! symmetric limit `Δu(0) = n·u_rr(0)` with the ghost value `u_{-1} = u_1`.

use std::sync::Arc;

use crate::error::{invalid, FujitaError, Result};
use crate::grid::{integrate, sup_norm, Field, RadialGrid};
use crate::params::ProblemParams;
use crate::tridiag;

/// Tridiagonal coefficients of `Δ_h` on rows `0..=M`. Row `M` couples to the
/// boundary value through `upper[M]`.
#[derive(Debug, Clone)]
pub struct LaplacianStencil {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LaplacianStencil {
    pub fn new(grid: &RadialGrid) -> Self {
        let m = grid.interior();
        let h = grid.spacing();
        let h2 = h * h;
        let n = grid.dim() as f64;
        let mut lower = vec![0.0; m + 1];
        let mut diag = vec![0.0; m + 1];
        let mut upper = vec![0.0; m + 1];
        diag[0] = -2.0 * n / h2;
        upper[0] = 2.0 * n / h2;
        for i in 1..=m {
            let r = grid.nodes()[i];
            let drift = (n - 1.0) / (2.0 * r * h);
            lower[i] = 1.0 / h2 - drift;
            diag[i] = -2.0 / h2;
            upper[i] = 1.0 / h2 + drift;
        }
        Self { lower, diag, upper }
    }

    /// `(Δ_h u)_i` for rows `0..=M`, using `u[M+1]` as the boundary value.
    pub fn apply_row(&self, u: &[f64], i: usize) -> f64 {
        let mut acc = self.diag[i] * u[i] + self.upper[i] * u[i + 1];
        if i > 0 {
            acc += self.lower[i] * u[i - 1];
        }
        acc
    }
}

/// Discrete Laplacian at every node. The boundary node uses one-sided
/// second-order formulas, so quadratics are reproduced exactly everywhere.
pub fn laplacian(f: &Field) -> Field {
    let grid = f.grid();
    let st = LaplacianStencil::new(grid);
    let u = f.values();
    let m = grid.interior();
    let mut out = vec![0.0; grid.len()];
    for (i, o) in out.iter_mut().enumerate().take(m + 1) {
        *o = st.apply_row(u, i);
    }
    let nb = m + 1;
    let h = grid.spacing();
    let urr = (2.0 * u[nb] - 5.0 * u[nb - 1] + 4.0 * u[nb - 2] - u[nb - 3]) / (h * h);
    let ur = (3.0 * u[nb] - 4.0 * u[nb - 1] + u[nb - 2]) / (2.0 * h);
    out[nb] = urr + (grid.dim() as f64 - 1.0) / grid.radius() * ur;
    Field::new(grid.clone(), out).expect("same grid")
}

/// `|∂_r u|`: central differences inside, zero at the centre by symmetry,
/// one-sided second order at the boundary.
pub fn gradient_magnitude(f: &Field) -> Field {
    let grid = f.grid();
    let mut out = vec![0.0; grid.len()];
    gradient_magnitude_into(grid, f.values(), &mut out);
    Field::new(grid.clone(), out).expect("same grid")
}

pub(crate) fn gradient_magnitude_into(grid: &RadialGrid, u: &[f64], out: &mut [f64]) {
    let h = grid.spacing();
    let nb = grid.boundary_index();
    out[0] = 0.0;
    for i in 1..nb {
        out[i] = ((u[i + 1] - u[i - 1]) / (2.0 * h)).abs();
    }
    out[nb] = ((3.0 * u[nb] - 4.0 * u[nb - 1] + u[nb - 2]) / (2.0 * h)).abs();
}

/// Reaction part `N(u) = [source]·|u|^p + [gradient]·b|∂_r u|^q + h`, pointwise.
/// Diffusion is handled by the time stepper.
pub fn rhs(u: &Field, params: &ProblemParams, forcing: Option<&Field>) -> Result<Field> {
    u.check_finite()?;
    if let Some(h) = forcing {
        u.check_same_grid(h)?;
    }
    let mut out = vec![0.0; u.grid().len()];
    let mut grad = vec![0.0; u.grid().len()];
    reaction_into(
        u.grid(),
        u.values(),
        params,
        forcing.map(|h| h.values()),
        &mut grad,
        &mut out,
    );
    Field::new(u.grid().clone(), out)
}

pub(crate) fn reaction_into(
    grid: &RadialGrid,
    u: &[f64],
    params: &ProblemParams,
    forcing: Option<&[f64]>,
    grad: &mut [f64],
    out: &mut [f64],
) {
    out.iter_mut().for_each(|o| *o = 0.0);
    if params.use_source {
        for (o, &v) in out.iter_mut().zip(u) {
            *o += v.abs().powf(params.p);
        }
    }
    if params.use_gradient && params.b != 0.0 {
        gradient_magnitude_into(grid, u, grad);
        for (o, &g) in out.iter_mut().zip(grad.iter()) {
            // |0|^q = 0, no regularisation
            if g > 0.0 {
                *o += params.b * g.powf(params.q);
            }
        }
    }
    if let Some(h) = forcing {
        for (o, &hv) in out.iter_mut().zip(h) {
            *o += hv;
        }
    }
}

/// Principal Dirichlet eigenpair of `-Δ` on `B_R`, with `∫φ = 1`.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub lambda: f64,
    pub phi: Field,
    pub radius: f64,
    /// `‖Δ_hφ + λφ‖∞ / ‖φ‖∞` at convergence.
    pub residual: f64,
    pub iterations: usize,
}

const EIGEN_MAX_ITERS: usize = 2000;

/// Inverse power iteration on the discrete radial Laplacian of `B_R` with
/// `M` interior nodes.
pub fn principal_eigenpair(n: u32, radius: f64, interior: usize) -> Result<Eigenpair> {
    if interior < 100 {
        return Err(invalid("eigenpair needs at least 100 interior nodes"));
    }
    let grid = RadialGrid::new(n, radius, interior)?;
    eigenpair_on(&grid)
}

pub(crate) fn eigenpair_on(grid: &Arc<RadialGrid>) -> Result<Eigenpair> {
    let m = grid.interior();
    let st = LaplacianStencil::new(grid);
    // A = -Δ_h on the unknowns 0..=M, boundary value zero
    let lower: Vec<f64> = st.lower.iter().map(|v| -v).collect();
    let diag: Vec<f64> = st.diag.iter().map(|v| -v).collect();
    let upper: Vec<f64> = st.upper.iter().map(|v| -v).collect();

    let radius = grid.radius();
    let mut v: Vec<f64> = grid.nodes()[..=m]
        .iter()
        .map(|r| 1.0 - (r / radius).powi(2))
        .collect();
    let mut x = vec![0.0; m + 1];
    let mut scratch = Vec::new();
    let mut lambda = f64::NAN;
    let mut change = f64::INFINITY;

    for iter in 1..=EIGEN_MAX_ITERS {
        x.copy_from_slice(&v);
        tridiag::solve_in_place(&lower, &diag, &upper, &mut x, &mut scratch);
        let new_lambda = v.iter().sum::<f64>() / x.iter().sum::<f64>();
        let scale = x.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        x.iter_mut().for_each(|xi| *xi /= scale);
        change = x
            .iter()
            .zip(&v)
            .fold(0.0f64, |a, (xi, vi)| a.max((xi - vi).abs()));
        let lambda_change = (new_lambda - lambda).abs() / new_lambda.abs();
        std::mem::swap(&mut v, &mut x);
        lambda = new_lambda;
        if change < 1e-13 && lambda_change < 1e-14 {
            return finish(grid, &st, v, iter);
        }
    }
    Err(FujitaError::EigenNoConvergence {
        iterations: EIGEN_MAX_ITERS,
        change,
    })
}

fn finish(grid: &Arc<RadialGrid>, st: &LaplacianStencil, v: Vec<f64>, iterations: usize) -> Result<Eigenpair> {
    let m = grid.interior();
    let mut values = v;
    values.push(0.0);
    // Rayleigh quotient of the converged vector
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..=m {
        num -= values[i] * st.apply_row(&values, i);
        den += values[i] * values[i];
    }
    let lambda = num / den;
    let phi = Field::new(grid.clone(), values)?;
    let mass = integrate(&phi)?;
    let phi = phi.map(|x| x / mass);
    let u = phi.values();
    let resid = (0..=m)
        .map(|i| (st.apply_row(u, i) + lambda * u[i]).abs())
        .fold(0.0, f64::max);
    let residual = resid / sup_norm(&phi);
    Ok(Eigenpair {
        lambda,
        phi,
        radius: grid.radius(),
        residual,
        iterations,
    })
}
