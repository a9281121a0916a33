//! Stationary algebraic supersolution with a constructed forcing.
//!
//! `v(r) = ε(1+r²)^{-k}` has
//!
//! ```text
//! Δv    = 2kε (1+r²)^{-k-2} [(2(k+1)-n) r² - n]
//! |∇v|  = 2kε r (1+r²)^{-k-1}
//! ```
//!
//! and `h = -Δv - v^p - b|∇v|^q` is positive everywhere once
//! `2k(2(k+1)-n) + ε^{p-1} + 2^q b ε^{q-1} < 0`, which needs
//! `k` in the window `(max{1/(p-1), (2-q)/(2(q-1))}, (n-2)/2)`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::bisect_largest;
use crate::error::{invalid, FujitaError, Result};
use crate::grid::{Field, RadialGrid};

#[derive(Debug, Clone, Serialize)]
pub struct StationaryCertificate {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub window: (f64, f64),
    pub k: f64,
    /// Root of the margin in `ε`; the certified `eps` sits below it.
    pub eps_root: f64,
    pub eps: f64,
    pub margin: f64,
    pub h_min: f64,
    pub verified: bool,
    #[serde(skip)]
    pub v: Field,
    #[serde(skip)]
    pub h: Field,
}

impl StationaryCertificate {
    pub fn v_at(&self, r: f64) -> f64 {
        self.eps * (1.0 + r * r).powf(-self.k)
    }

    pub fn h_at(&self, r: f64) -> f64 {
        forcing_at(self.n, self.p, self.q, self.b, self.k, self.eps, r)
    }

    pub fn to_json(&self) -> Value {
        let g = self.v.grid();
        json!({
            "type": "stationary",
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "b": self.b,
            "k": self.k,
            "k_window": [self.window.0, self.window.1],
            "eps": self.eps,
            "eps_root": self.eps_root,
            "margin": self.margin,
            "h_min": self.h_min,
            "verified": self.verified,
            "lattice": {"radius": g.radius(), "interior": g.interior(), "nodes": g.len()},
        })
    }
}

fn forcing_at(n: u32, p: f64, q: f64, b: f64, k: f64, eps: f64, r: f64) -> f64 {
    let nf = n as f64;
    let w = 1.0 + r * r;
    let v = eps * w.powf(-k);
    let lap = 2.0 * k * eps * w.powf(-k - 2.0) * ((2.0 * (k + 1.0) - nf) * r * r - nf);
    let grad = 2.0 * k * eps * r * w.powf(-k - 1.0);
    let grad_term = if b == 0.0 || r == 0.0 { 0.0 } else { b * grad.powf(q) };
    -lap - v.powf(p) - grad_term
}

/// Largest one-significant-digit value not above `x`.
fn floor_one_digit(x: f64) -> f64 {
    let e = x.log10().floor() as i32;
    if e < 0 {
        let scale = 10f64.powi(-e);
        (x * scale).floor() / scale
    } else {
        let scale = 10f64.powi(e);
        (x / scale).floor() * scale
    }
}

/// Certificate sampled on `B_12` with 1200 interior nodes.
pub fn stationary_certificate(n: u32, p: f64, q: f64, b: f64) -> Result<StationaryCertificate> {
    stationary_certificate_with(n, p, q, b, &RadialGrid::new(n, 12.0, 1200)?)
}

pub fn stationary_certificate_with(n: u32, p: f64, q: f64, b: f64, grid: &Arc<RadialGrid>) -> Result<StationaryCertificate> {
    if grid.dim() != n {
        return Err(invalid(format!("grid dimension {} does not match n = {n}", grid.dim())));
    }
    if !(b >= 0.0) || !b.is_finite() || !(p > 1.0) || !(q > 1.0) {
        return Err(invalid("stationary certificate needs p > 1, q > 1, b >= 0"));
    }
    if n < 3 {
        return Err(FujitaError::Hypothesis(format!(
            "n = {n} < 3: the k-window (max{{1/(p-1), (2-q)/(2(q-1))}}, (n-2)/2) is empty"
        )));
    }
    let nf = n as f64;
    let p_star = nf / (nf - 2.0);
    let q_star = nf / (nf - 1.0);
    if !(p > p_star) {
        return Err(FujitaError::Hypothesis(format!(
            "p ≤ n/(n-2): p = {p} does not exceed {p_star}, empty k-window"
        )));
    }
    if !(q > q_star) {
        return Err(FujitaError::Hypothesis(format!(
            "q ≤ n/(n-1): q = {q} does not exceed {q_star}, empty k-window"
        )));
    }
    let lo = (1.0 / (p - 1.0)).max((2.0 - q) / (2.0 * (q - 1.0)));
    let hi = (nf - 2.0) / 2.0;
    if !(lo < hi) {
        return Err(FujitaError::Hypothesis(format!("empty k-window ({lo}, {hi})")));
    }
    let k = 0.5 * (lo + hi);
    let base = 2.0 * k * (2.0 * (k + 1.0) - nf);
    let growth = |e: f64| e.powf(p - 1.0) + 2f64.powf(q) * b * e.powf(q - 1.0);
    let eps_root = bisect_largest(growth, -base, 1.0);
    let eps = floor_one_digit(0.9 * eps_root);
    let margin = base + growth(eps);

    let v = Field::from_fn(grid.clone(), |r| eps * (1.0 + r * r).powf(-k));
    let h = Field::from_fn(grid.clone(), |r| forcing_at(n, p, q, b, k, eps, r));
    let h_min = h.values().iter().copied().fold(f64::INFINITY, f64::min);
    let verified = margin < 0.0 && h_min > 0.0;
    let cert = StationaryCertificate {
        n,
        p,
        q,
        b,
        window: (lo, hi),
        k,
        eps_root,
        eps,
        margin,
        h_min,
        verified,
        v,
        h,
    };
    if !verified {
        return Err(FujitaError::CertificateFailed(format!(
            "stationary supersolution check failed: margin = {margin:e}, min h = {h_min:e}"
        )));
    }
    Ok(cert)
}
