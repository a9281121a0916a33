//! Problem parameters, critical exponents and regime classification.
//!
//! All comparisons are plain `f64` comparisons with no epsilon. Boundary
//! probes should pass exponents built from exact ratios so the closed/open
//! nature of every condition is honoured.

use serde::{Serialize, Serializer};

use crate::certificates::ForcingSpec;
use crate::error::{invalid, Result};

/// One instance of `u_t - Δu = |u|^p + b|∇u|^q (+ h)`.
///
/// `use_source = false` gives the viscous Hamilton–Jacobi equation,
/// `use_gradient = false` the classical Fujita problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemParams {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub use_source: bool,
    pub use_gradient: bool,
    pub forcing: Option<ForcingSpec>,
}

impl ProblemParams {
    /// Full problem with both nonlinear terms switched on and no forcing.
    pub fn new(n: u32, p: f64, q: f64, b: f64) -> Result<Self> {
        let params = Self {
            n,
            p,
            q,
            b,
            use_source: true,
            use_gradient: true,
            forcing: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_source(mut self, on: bool) -> Self {
        self.use_source = on;
        self
    }

    pub fn with_gradient(mut self, on: bool) -> Self {
        self.use_gradient = on;
        self
    }

    pub fn with_forcing(mut self, forcing: ForcingSpec) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("dimension n must be at least 1"));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(invalid(format!("source exponent p must be > 1, got {}", self.p)));
        }
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return Err(invalid(format!("gradient exponent q must be >= 1, got {}", self.q)));
        }
        if !(self.b >= 0.0) || !self.b.is_finite() {
            return Err(invalid(format!("gradient coefficient b must be >= 0, got {}", self.b)));
        }
        Ok(())
    }

    fn require_standing_range(&self) -> Result<()> {
        self.validate()?;
        if !(self.b > 0.0) {
            return Err(invalid("regime queries require b > 0"));
        }
        Ok(())
    }
}

/// A real number or +∞, ordered so that +∞ exceeds every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    /// `x < self`
    pub fn exceeds(self, x: f64) -> bool {
        match self {
            ExtendedReal::Finite(v) => x < v,
            ExtendedReal::Infinity => true,
        }
    }

    /// `x > self`
    pub fn is_exceeded_by(self, x: f64) -> bool {
        match self {
            ExtendedReal::Finite(v) => x > v,
            ExtendedReal::Infinity => false,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Every threshold exponent that depends on the dimension alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalExponents {
    pub n: u32,
    /// `1 + 2/n`
    pub p_fujita: f64,
    /// `1 + 1/(n+1)`
    pub q_fujita: f64,
    /// `n/(n-2)` for the forced problem; +∞ for `n = 2`, undefined for `n = 1`.
    pub p_star: Option<ExtendedReal>,
    /// `n/(n-1)`, undefined for `n = 1`.
    pub q_star: Option<f64>,
}

impl CriticalExponents {
    /// Sign-changing threshold `1 + 1/(np - 1)`.
    pub fn q_one_of_p(&self, p: f64) -> f64 {
        q_one(self.n, p)
    }
}

pub fn q_one(n: u32, p: f64) -> f64 {
    1.0 + 1.0 / (n as f64 * p - 1.0)
}

pub fn critical_exponents(n: u32) -> Result<CriticalExponents> {
    if n < 1 {
        return Err(invalid("dimension n must be at least 1"));
    }
    let nf = n as f64;
    let p_star = match n {
        1 => None,
        2 => Some(ExtendedReal::Infinity),
        _ => Some(ExtendedReal::Finite(nf / (nf - 2.0))),
    };
    let q_star = (n >= 2).then(|| nf / (nf - 1.0));
    Ok(CriticalExponents {
        n,
        p_fujita: 1.0 + 2.0 / nf,
        q_fujita: 1.0 + 1.0 / (nf + 1.0),
        p_star,
        q_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BlowUpAll,
    GlobalForSmallData,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::BlowUpAll => "BlowUpAll",
            Verdict::GlobalForSmallData => "GlobalForSmallData",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Which known result decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeRule {
    /// Every nonnegative nontrivial solution blows up.
    PositiveBlowUp,
    /// Gaussian-dominated small positive data are global.
    PositiveSmallDataGlobal,
    /// Every solution with nonnegative mean blows up.
    MeanNonnegativeBlowUp,
    /// Every solution of the forced problem with positive forcing mass blows up.
    ForcedBlowUp,
    /// Some positive forcing admits global small solutions.
    ForcedSmallDataGlobal,
    /// No known result covers the point.
    Uncovered,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeVerdict {
    pub verdict: Verdict,
    pub triggered_condition: String,
    pub theorem_tag: RegimeRule,
}

impl RegimeVerdict {
    fn new(verdict: Verdict, cond: impl Into<String>, tag: RegimeRule) -> Self {
        Self {
            verdict,
            triggered_condition: cond.into(),
            theorem_tag: tag,
        }
    }
}

/// Nonnegative, nontrivial initial data.
///
/// Blow-up is closed at both boundaries: `p ≤ 1+2/n` or `q ≤ 1+1/(n+1)`.
pub fn classify_positive(params: &ProblemParams) -> Result<RegimeVerdict> {
    params.require_standing_range()?;
    let ce = critical_exponents(params.n)?;
    let v = if params.p <= ce.p_fujita {
        RegimeVerdict::new(Verdict::BlowUpAll, "p ≤ p_F", RegimeRule::PositiveBlowUp)
    } else if params.q <= ce.q_fujita {
        RegimeVerdict::new(
            Verdict::BlowUpAll,
            "q ≤ 1+1/(n+1)",
            RegimeRule::PositiveBlowUp,
        )
    } else {
        RegimeVerdict::new(
            Verdict::GlobalForSmallData,
            "p > p_F and q > 1+1/(n+1)",
            RegimeRule::PositiveSmallDataGlobal,
        )
    };
    Ok(v)
}

/// Possibly sign-changing data with nonnegative mean.
///
/// `nonnegative_data` lets the caller claim the data are also pointwise
/// nonnegative, in which case the small-data global result for positive
/// solutions is reported instead of `Inconclusive`.
pub fn classify_mean_nonneg(params: &ProblemParams, nonnegative_data: bool) -> Result<RegimeVerdict> {
    params.require_standing_range()?;
    if !(params.q > 1.0) {
        return Err(invalid("mean-nonnegative classification requires q > 1"));
    }
    let ce = critical_exponents(params.n)?;
    let n = params.n as f64;
    let product = (params.q - 1.0) * (n * params.p - 1.0);
    if params.p <= ce.p_fujita {
        return Ok(RegimeVerdict::new(
            Verdict::BlowUpAll,
            "p ≤ p_F",
            RegimeRule::MeanNonnegativeBlowUp,
        ));
    }
    if product <= 1.0 {
        return Ok(RegimeVerdict::new(
            Verdict::BlowUpAll,
            "(q-1)(np-1) ≤ 1",
            RegimeRule::MeanNonnegativeBlowUp,
        ));
    }
    if nonnegative_data && params.q > ce.q_fujita {
        return Ok(RegimeVerdict::new(
            Verdict::GlobalForSmallData,
            "p > p_F and q > 1+1/(n+1), nonnegative data only",
            RegimeRule::PositiveSmallDataGlobal,
        ));
    }
    let cond = if params.q <= ce.q_fujita {
        format!(
            "open gap: q ∈ (1+1/(np-1), 1+1/(n+1)] = ({}, {}] for sign-changing data with nonnegative mean",
            ce.q_one_of_p(params.p),
            ce.q_fujita
        )
    } else {
        "p > p_F and (q-1)(np-1) > 1: no result for sign-changing data".to_string()
    };
    Ok(RegimeVerdict::new(Verdict::Inconclusive, cond, RegimeRule::Uncovered))
}

/// Forced problem with `h ≥ 0`. Blow-up is open at the boundaries:
/// `p < n/(n-2)` or `q < n/(n-1)`, and needs `∫h > 0` (`forcing_mass_positive`).
pub fn classify_inhomogeneous(params: &ProblemParams, forcing_mass_positive: bool) -> Result<RegimeVerdict> {
    params.require_standing_range()?;
    if params.n < 2 {
        return Err(invalid("forced classification requires n >= 2"));
    }
    let ce = critical_exponents(params.n)?;
    let p_star = ce.p_star.expect("defined for n >= 2");
    let q_star = ce.q_star.expect("defined for n >= 2");

    let blow_cond = if p_star.exceeds(params.p) {
        Some("p < n/(n-2)")
    } else if params.q < q_star {
        Some("q < n/(n-1)")
    } else {
        None
    };
    if let Some(cond) = blow_cond {
        if forcing_mass_positive {
            return Ok(RegimeVerdict::new(Verdict::BlowUpAll, cond, RegimeRule::ForcedBlowUp));
        }
        return Ok(RegimeVerdict::new(
            Verdict::Inconclusive,
            format!("{cond} but ∫h > 0 not asserted"),
            RegimeRule::Uncovered,
        ));
    }
    if params.n >= 3 && p_star.is_exceeded_by(params.p) && params.q > q_star {
        return Ok(RegimeVerdict::new(
            Verdict::GlobalForSmallData,
            "n ≥ 3, p > n/(n-2) and q > n/(n-1)",
            RegimeRule::ForcedSmallDataGlobal,
        ));
    }
    Ok(RegimeVerdict::new(
        Verdict::Inconclusive,
        format!(
            "boundary case p = n/(n-2) = {p_star} or q = n/(n-1) = {q_star} is not covered with the gradient term"
        ),
        RegimeRule::Uncovered,
    ))
}
