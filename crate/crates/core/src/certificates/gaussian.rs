//! Self-similar Gaussian supersolution for small-data global existence.
//!
//! `z(t, r) = ε (t+1)^k G(t, r)` with the heat kernel
//! `G = (t+1)^{-n/2} e^{-r²/(4(t+1))}`. Since `G_t = ΔG` and
//! `|∇z| = z·r/(2(t+1))`, the residual factors as
//!
//! ```text
//! 𝒫z = z_t - Δz - z^p - b|∇z|^q
//!    = z · [k/s - z^{p-1} - b z^{q-1} (r/(2s))^q],    s = t+1.
//! ```
//!
//! With `ρ = r/√s` the bracket times `s` is
//! `k - ε^{p-1} s^{1+(k-n/2)(p-1)} e^{-(p-1)ρ²/4}
//!    - b ε^{q-1} 2^{-q} s^{1+(k-n/2)(q-1)-q/2} ρ^q e^{-(q-1)ρ²/4}`,
//! and both powers of `s` are nonpositive under the two bounds on `k`, so
//! `k ≥ ε^{p-1} + C ε^{q-1}` makes it nonnegative everywhere.

use serde::Serialize;
use serde_json::{json, Value};

use super::{bisect_largest, LatticeSpec};
use crate::error::{invalid, FujitaError, Result};
use crate::exec::Execution;
use crate::grid::ProfileSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianCertificate {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub k: f64,
    pub eps: f64,
    pub c_grad: f64,
    /// `k - ε^{p-1} - C ε^{q-1}`.
    pub scalar_margin: f64,
    pub residual_min: f64,
    /// Both powers of `s` in the bracket are nonpositive, so the bracket is
    /// monotone in `t` beyond the lattice.
    pub tail_monotone: bool,
    pub verified: bool,
    pub lattice: LatticeSpec,
}

pub const DEFAULT_LATTICE: LatticeSpec = LatticeSpec {
    t_points: 400,
    r_points: 400,
    t_max: 100.0,
    r_max: 12.0,
};

impl GaussianCertificate {
    /// The supersolution at `(t, r)`.
    pub fn z(&self, t: f64, r: f64) -> f64 {
        let s = t + 1.0;
        self.eps * s.powf(self.k - self.n as f64 / 2.0) * (-r * r / (4.0 * s)).exp()
    }

    /// `z(0, ·) = ε e^{-r²/4}`.
    pub fn initial_profile(&self) -> ProfileSpec {
        ProfileSpec::gaussian(self.eps)
    }

    /// `𝒫z` at `(t, r)` from the closed-form derivatives.
    pub fn residual_at(&self, t: f64, r: f64) -> f64 {
        let s = t + 1.0;
        let z = self.z(t, r);
        if z == 0.0 {
            return 0.0;
        }
        let grad_ratio = r / (2.0 * s);
        let grad_term = if self.b == 0.0 || r == 0.0 {
            0.0
        } else {
            self.b * z.powf(self.q - 1.0) * grad_ratio.powf(self.q)
        };
        z * (self.k / s - z.powf(self.p - 1.0) - grad_term)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": "gaussian",
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "b": self.b,
            "k": self.k,
            "eps": self.eps,
            "c_grad": self.c_grad,
            "scalar_margin": self.scalar_margin,
            "residual_min": self.residual_min,
            "tail_monotone": self.tail_monotone,
            "verified": self.verified,
            "lattice": self.lattice,
        })
    }
}

/// Maximiser and maximum of `s^q e^{-(q-1)s²/4}` on `s ≥ 0`.
pub fn gradient_profile_max(q: f64) -> (f64, f64) {
    let g = |s: f64| s.powf(q) * (-(q - 1.0) * s * s / 4.0).exp();
    let centre = (2.0 * q / (q - 1.0)).sqrt();
    let (mut a, mut b) = (0.0, 3.0 * centre);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a) <= 1e-15 * centre {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let s = 0.5 * (a + b);
    (s, g(s))
}

/// Certificate on the default 400×400 lattice over `t ∈ [0, 100]`, `r ∈ [0, 12]`.
pub fn gaussian_certificate(n: u32, p: f64, q: f64, b: f64) -> Result<GaussianCertificate> {
    gaussian_certificate_with(n, p, q, b, DEFAULT_LATTICE, Execution::default())
}

pub fn gaussian_certificate_with(
    n: u32,
    p: f64,
    q: f64,
    b: f64,
    lattice: LatticeSpec,
    exec: Execution,
) -> Result<GaussianCertificate> {
    if n < 1 {
        return Err(invalid("dimension n must be at least 1"));
    }
    if !(b >= 0.0) || !b.is_finite() {
        return Err(invalid("gradient coefficient b must be >= 0"));
    }
    let nf = n as f64;
    let p_f = 1.0 + 2.0 / nf;
    let q_f = 1.0 + 1.0 / (nf + 1.0);
    if !(p > p_f) {
        return Err(FujitaError::Hypothesis(format!(
            "p ≤ p_F: p = {p} does not exceed p_F = 1+2/n = {p_f}; every positive solution blows up"
        )));
    }
    if !(q > q_f) {
        return Err(FujitaError::Hypothesis(format!(
            "q ≤ 1+1/(n+1): q = {q} does not exceed {q_f}; every positive solution blows up"
        )));
    }
    let k = 0.5 * (nf / 2.0 - 1.0 / (p - 1.0)).min(nf / 2.0 + (q - 2.0) / (2.0 * (q - 1.0)));
    let c_grad = b * 2f64.powf(-q) * gradient_profile_max(q).1;
    let lhs = |e: f64| e.powf(p - 1.0) + c_grad * e.powf(q - 1.0);
    let eps = bisect_largest(lhs, k, k.powf(1.0 / (p - 1.0)).max(1e-3));
    let mut cert = GaussianCertificate {
        n,
        p,
        q,
        b,
        k,
        eps,
        c_grad,
        scalar_margin: k - lhs(eps),
        residual_min: f64::NAN,
        tail_monotone: false,
        verified: false,
        lattice,
    };
    verify(&mut cert, exec);
    if !cert.verified {
        return Err(FujitaError::CertificateFailed(format!(
            "gaussian supersolution check failed: residual_min = {:e}, scalar margin = {:e}",
            cert.residual_min, cert.scalar_margin
        )));
    }
    Ok(cert)
}

/// Recomputes `residual_min`, `tail_monotone` and `verified` for the
/// certificate's current `(k, ε)` and lattice.
pub fn verify(cert: &mut GaussianCertificate, exec: Execution) {
    let nf = cert.n as f64;
    let times = cert.lattice.times();
    let radii = cert.lattice.radii();
    cert.residual_min = supersolution_residual(cert, &times, &radii, exec);
    let e_source = 1.0 + (cert.k - nf / 2.0) * (cert.p - 1.0);
    let e_grad = 1.0 + (cert.k - nf / 2.0) * (cert.q - 1.0) - cert.q / 2.0;
    cert.tail_monotone = e_source <= 1e-12 && (cert.b == 0.0 || e_grad <= 1e-12);
    cert.verified = cert.residual_min >= 0.0 && cert.tail_monotone && cert.scalar_margin >= 0.0;
}

/// Minimum of `𝒫z` over `times × radii`, one lattice row per time.
pub fn supersolution_residual(cert: &GaussianCertificate, times: &[f64], radii: &[f64], exec: Execution) -> f64 {
    exec.min_by_key(times, |&t| {
        radii
            .iter()
            .map(|&r| cert.residual_at(t, r))
            .fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) })
    })
}
