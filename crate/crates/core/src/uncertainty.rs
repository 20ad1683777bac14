//! Gaussian uncertainty in the initial distance to the barrier.
//!
//! A Gaussian start of width `δ` looks, to leading order, like a point start
//! at `x0 − a·τ` that has already diffused for `τ = δ²/2D`. Conditioning on
//! survival over that fictitious interval gives a PoD that is exactly zero
//! at `t = 0` while the hazard there is strictly positive.

use std::f64::consts::PI;

use crate::absorbing::SURVIVAL_FLOOR;
use crate::error::{ModelError, Result};
use crate::params::ModelParams;
use crate::quad::integrate;
use crate::radiation::Kinetics;
use crate::specfun::{std_normal_cdf, std_normal_pdf};

/// Default ratio `x0/√(D(t+τ))` above which the shifted-start formulas are
/// trusted.
pub const DEFAULT_VALIDITY_RATIO: f64 = 3.0;

/// Absolute tolerance of [`pod_uncertain_quadrature`].
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Model parameters with `delta > 0`, plus the derived shift time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertainParams {
    base: ModelParams,
    tau: f64,
    validity_ratio: f64,
}

impl UncertainParams {
    pub fn new(base: ModelParams) -> Result<Self> {
        base.validate()?;
        if !(base.delta > 0.0) {
            return Err(ModelError::Precondition(format!(
                "uncertain start needs delta > 0, got {}",
                base.delta
            )));
        }
        let tau = base.delta * base.delta / (2.0 * base.diffusion());
        Ok(Self {
            base,
            tau,
            validity_ratio: DEFAULT_VALIDITY_RATIO,
        })
    }

    pub fn with_validity_ratio(mut self, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(ModelError::Domain {
                name: "validity_ratio",
                value: ratio,
                expected: "finite and > 0",
            });
        }
        self.validity_ratio = ratio;
        Ok(self)
    }

    pub fn base(&self) -> &ModelParams {
        &self.base
    }

    /// `τ = δ²/2D`, in years.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `x0 − a·τ`; may be negative when the drift is large.
    pub fn shifted_start(&self) -> f64 {
        self.base.x0 - self.base.a * self.tau
    }

    /// Whether `√(D(t+τ)) < x0/ratio`, the regime the shifted-start
    /// formulas are built for.
    pub fn short_term_valid(&self, t: f64) -> bool {
        (self.base.diffusion() * (t + self.tau)).sqrt() < self.base.x0 / self.validity_ratio
    }

    fn shifted(&self) -> Kinetics {
        Kinetics {
            a: self.base.a,
            d: self.base.diffusion(),
            x0: self.shifted_start(),
            kc: self.base.kc,
        }
    }
}

/// Which expression for the hazard at `t = 0` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroHazardForm {
    /// Default rate of the shifted start at `τ`, over its survival.
    Exact,
    /// `√(2/π)·(kc/δ)·exp(−x0²/2δ²)`, valid for `δ ≪ x0` and `kc·τ ≪ δ`.
    GaussianApprox,
}

fn require_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name: "t",
            value: t,
            expected: "finite and >= 0",
        })
    }
}

/// Survival of the shifted start over the fictitious interval `τ`.
pub fn survival_shift_base(p: &UncertainParams) -> f64 {
    p.shifted().pod_and_survival(p.tau).1
}

/// Cumulative PoD with an uncertain start; exactly 0 at `t = 0`.
///
/// Evaluation outside [`UncertainParams::short_term_valid`] is allowed; the
/// caller is expected to check the flag.
pub fn pod_uncertain(t: f64, p: &UncertainParams) -> Result<f64> {
    require_time(t)?;
    if t == 0.0 || p.base.kc == 0.0 {
        return Ok(0.0);
    }
    let k = p.shifted();
    let (pod_tau, surv_tau) = k.pod_and_survival(p.tau);
    if surv_tau < SURVIVAL_FLOOR {
        return Err(ModelError::SingularState {
            t: 0.0,
            survival: surv_tau,
        });
    }
    let (pod_t, _) = k.pod_and_survival(t + p.tau);
    Ok(((pod_t - pod_tau) / surv_tau).clamp(0.0, 1.0))
}

/// Hazard rate with an uncertain start. Continuous at `t = 0` and positive
/// there whenever `kc > 0`.
pub fn hazard_uncertain(t: f64, p: &UncertainParams) -> Result<f64> {
    require_time(t)?;
    if p.base.kc == 0.0 {
        return Ok(0.0);
    }
    let k = p.shifted();
    let s = t + p.tau;
    let (_, survival) = k.pod_and_survival(s);
    if survival < SURVIVAL_FLOOR {
        return Err(ModelError::SingularState { t, survival });
    }
    Ok(k.default_rate(s) / survival)
}

pub fn hazard_uncertain_at_zero(p: &UncertainParams, form: ZeroHazardForm) -> Result<f64> {
    let b = &p.base;
    match form {
        ZeroHazardForm::Exact => hazard_uncertain(0.0, p),
        ZeroHazardForm::GaussianApprox => {
            let ratio = b.x0 / b.delta;
            Ok((2.0 / PI).sqrt() * b.kc / b.delta * (-0.5 * ratio * ratio).exp())
        }
    }
}

/// Cumulative PoD by direct averaging of the point-start PoD over the
/// initial Gaussian, truncated to the solvent side and renormalized.
pub fn pod_uncertain_quadrature(t: f64, p: &UncertainParams) -> Result<f64> {
    crate::error::require_positive_time(t)?;
    let b = &p.base;
    if b.kc == 0.0 {
        return Ok(0.0);
    }
    let norm = std_normal_cdf(b.x0 / b.delta);
    let lo = (b.x0 - 10.0 * b.delta).max(0.0);
    let hi = b.x0 + 10.0 * b.delta;
    let d = b.diffusion();
    let (mass, _) = integrate(
        |y| {
            let k = Kinetics {
                a: b.a,
                d,
                x0: y,
                kc: b.kc,
            };
            k.pod_and_survival(t).0 * std_normal_pdf((y - b.x0) / b.delta) / b.delta
        },
        lo,
        hi,
        QUADRATURE_TOL * norm,
    )?;
    Ok((mass / norm).clamp(0.0, 1.0))
}

/// First-passage survival of the CreditGrades construction, which skips the
/// normalization by the survival over `τ`:
///
/// ```text
/// Φ(−A/2 + X/A) − exp(X)·Φ(−A/2 − X/A),  X = x0 + δ²/2,  A = √(2D(t+τ)).
/// ```
///
/// It is below one already at `t = 0`.
pub fn survival_creditgrades(t: f64, p: &UncertainParams) -> Result<f64> {
    require_time(t)?;
    let b = &p.base;
    let x = b.x0 + 0.5 * b.delta * b.delta;
    let big_a = (2.0 * b.diffusion() * (t + p.tau)).sqrt();
    let near = std_normal_cdf(-0.5 * big_a + x / big_a);
    // exp(X)·Φ(−A/2 − X/A) = exp(−(A/2 − X/A)²/2)·½·erfcx((A/2 + X/A)/√2)
    let u = 0.5 * big_a + x / big_a;
    let image = (-0.5 * (0.5 * big_a - x / big_a).powi(2)).exp() * crate::specfun::scaled_normal_tail(u);
    Ok((near - image).clamp(0.0, 1.0))
}
