//! Scaling exponents of the rescaled test-function argument.
//!
//! With cutoffs scaled by `τ` in time and `τ^r` in space the two error
//! integrals grow like `τ^{e1}` and `τ^{e2}`. The choice
//! `r = p(q-1)/(q(p-1))` balances them at
//! `((q-1)(np-1) - 1)/(q(p-1))`, which is `≤ 0` exactly in the blow-up range
//! `(q-1)(np-1) ≤ 1`.

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateExponents {
    pub r: f64,
    pub e1: f64,
    pub e2: f64,
    pub combined: f64,
    /// Exponent of the forced problem, `(p/(p-1))·(n(q-1) - q)/q`.
    pub inhom: f64,
    /// Largest relative mismatch among the balanced exponents.
    pub identity_defect: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() / scale
}

pub fn rate_exponents(n: u32, p: f64, q: f64) -> Result<RateExponents> {
    if !(p > 1.0 && q > 1.0) || !p.is_finite() || !q.is_finite() {
        return Err(invalid("rate exponents need p > 1 and q > 1"));
    }
    if n < 1 {
        return Err(invalid("dimension n must be at least 1"));
    }
    let nf = n as f64;
    let r = p * (q - 1.0) / (q * (p - 1.0));
    let e1 = nf * r - 1.0 / (p - 1.0);
    let e2 = 1.0 + nf * r - r * q / (q - 1.0);
    let combined = ((q - 1.0) * (nf * p - 1.0) - 1.0) / (q * (p - 1.0));
    let inhom = (p / (p - 1.0)) * (nf * (q - 1.0) - q) / q;
    let forced_a = nf * r - 1.0 / (p - 1.0) - 1.0;
    let forced_b = nf * r - r * q / (q - 1.0);
    let identity_defect = [
        rel(e1, e2),
        rel(e1, combined),
        rel(forced_a, forced_b),
        rel(forced_a, inhom),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(RateExponents {
        r,
        e1,
        e2,
        combined,
        inhom,
        identity_defect,
    })
}
