//! Radiation (partially absorbing) barrier: contact with the barrier leads to
//! default at the finite rate `kc`, so the boundary flux is `J(0) = −kc·p(0)`.
//!
//! Every formula here is evaluated in a factored form. Each of the three
//! Gaussian-tail products that appear in the cumulative PoD shares the same
//! exponent after simplification,
//!
//! ```text
//! exp(β)·Φ(−u) = exp(−(x0 + a·t)²/4Dt) · ½·erfcx(u/√2),
//! ```
//!
//! so nothing overflows even when `kc·t` is large.
//!
//! The coefficient `1/(kc + a)` is singular on the line `a = −kc`; the
//! cumulative PoD is analytic across it and the limit is evaluated in closed
//! form there (see [`tail_combination`]).

use std::f64::consts::PI;

use crate::absorbing::{first_hitting_raw, SURVIVAL_FLOOR};
use crate::error::{require_positive_time, ModelError, Result};
use crate::params::ModelParams;
use crate::specfun::{erfc, erfc_scaled, erfcx_deficit, exp_times_half_erfc};

/// Probability flux `J = a·p − D·∂p/∂x`, per year. Positive values point away
/// from the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxValue {
    pub j: f64,
}

/// Which simplification of the default rate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// Long times or large boundary rates, `t ≫ D/kc²`.
    LongTime,
    /// `kc → ∞`: the first-passage hitting density.
    FirstPassage,
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name: "x",
            value: x,
            expected: "finite and >= 0",
        })
    }
}

/// Raw inputs shared by the closed forms. `x0` may be negative here: the
/// uncertain-start model evaluates the same expressions at a shifted origin.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kinetics {
    pub a: f64,
    pub d: f64,
    pub x0: f64,
    pub kc: f64,
}

impl From<&ModelParams> for Kinetics {
    fn from(p: &ModelParams) -> Self {
        Self {
            a: p.a,
            d: p.diffusion(),
            x0: p.x0,
            kc: p.kc,
        }
    }
}

impl Kinetics {
    /// `[kc·T2 − (2kc + a)·T3] / (kc + a)` from the cumulative PoD, where
    /// `T2 = exp(−a·x0/D)·Φ(−(x0 − at)/√2Dt)` and
    /// `T3 = exp((x0 + (kc + a)t)·kc/D)·Φ(−(x0 + (a + 2kc)t)/√2Dt)`.
    fn tail_combination(&self, t: f64) -> f64 {
        let kc = self.kc;
        let eps = kc + self.a;
        let mut scale = kc.min((self.d / t).sqrt());
        if self.x0 > 0.0 {
            scale = scale.min(self.d / self.x0);
        }
        let band = 1e-4 * scale;
        if eps == 0.0 {
            return self.singular_combination(t);
        }
        if eps.abs() < band {
            // Interpolate between the analytic limit and a regular point one
            // band away; the regular formula loses digits as eps → 0.
            let limit = self.singular_combination(t);
            let anchor = Kinetics {
                a: -kc + band.copysign(eps),
                ..*self
            };
            let at_anchor = anchor.regular_combination(t);
            return limit + (at_anchor - limit) * (eps.abs() / band);
        }
        self.regular_combination(t)
    }

    fn regular_combination(&self, t: f64) -> f64 {
        let Kinetics { a, d, x0, kc } = *self;
        let root = (d * t).sqrt();
        let gauss = -(x0 + a * t).powi(2) / (4.0 * d * t);
        let w2 = (x0 - a * t) / (2.0 * root);
        let w3 = (x0 + (a + 2.0 * kc) * t) / (2.0 * root);
        let t2 = exp_times_half_erfc(-a * x0 / d, gauss, w2);
        let t3 = exp_times_half_erfc((x0 + (kc + a) * t) * kc / d, gauss, w3);
        (kc * t2 - (2.0 * kc + a) * t3) / (kc + a)
    }

    /// Value of [`Self::tail_combination`] on `a = −kc`, from L'Hôpital's
    /// rule in `a`:
    ///
    /// ```text
    /// ½·G·[ 2·kc·√(t/D)·(1/√π − w·erfcx(w)) − erfcx(w) ],
    /// G = exp(−(x0 − kc·t)²/4Dt),  w = (x0 + kc·t)/(2√Dt).
    /// ```
    fn singular_combination(&self, t: f64) -> f64 {
        let Kinetics { d, x0, kc, .. } = *self;
        let root = (d * t).sqrt();
        let w = (x0 + kc * t) / (2.0 * root);
        let gauss = (-(x0 - kc * t).powi(2) / (4.0 * d * t)).exp();
        0.5 * gauss * (2.0 * kc * (t / d).sqrt() * erfcx_deficit(w) - erfc_scaled(w))
    }

    /// Cumulative PoD and survival, each without subtracting from one.
    pub(crate) fn pod_and_survival(&self, t: f64) -> (f64, f64) {
        if self.kc == 0.0 {
            return (0.0, 1.0);
        }
        let w1 = (self.x0 + self.a * t) / (2.0 * (self.d * t).sqrt());
        let combo = self.tail_combination(t);
        let pod = 0.5 * erfc(w1) + combo;
        let survival = 0.5 * erfc(-w1) - combo;
        (pod.clamp(0.0, 1.0), survival.clamp(0.0, 1.0))
    }

    /// `dP/dt`, written as
    /// `kc·G·[(1/√π − w3·erfcx(w3))/√Dt + x0·erfcx(w3)/2Dt]`
    /// when `w3 ≥ 0`, where both bracketed terms are non-negative for `x0 ≥ 0`.
    pub(crate) fn default_rate(&self, t: f64) -> f64 {
        let Kinetics { a, d, x0, kc } = *self;
        if kc == 0.0 {
            return 0.0;
        }
        let dt = d * t;
        let root = dt.sqrt();
        let gauss = -(x0 + a * t).powi(2) / (4.0 * dt);
        let w3 = (x0 + (a + 2.0 * kc) * t) / (2.0 * root);
        let rate = if w3 >= 0.0 {
            kc * gauss.exp() * (erfcx_deficit(w3) / root + x0 * erfc_scaled(w3) / (2.0 * dt))
        } else {
            let t3 = exp_times_half_erfc((x0 + (kc + a) * t) * kc / d, gauss, w3);
            kc * (gauss.exp() / (PI * dt).sqrt() - (2.0 * kc + a) / d * t3)
        };
        rate.max(0.0)
    }

    /// Density and its spatial derivative at `x`.
    fn density_and_gradient(&self, x: f64, t: f64) -> (f64, f64) {
        let Kinetics { a, d, x0, kc } = *self;
        let dt = d * t;
        let norm = 1.0 / (2.0 * (PI * dt).sqrt());
        let e1 = -(x - x0 - a * t).powi(2) / (4.0 * dt);
        let e2 = -(x + x0 - a * t).powi(2) / (4.0 * dt) - a * x0 / d;
        let g1 = norm * e1.exp();
        let g2 = norm * e2.exp();
        let beta = ((a + kc) * (x + kc * t) + kc * x0) / d;
        let w = ((a + 2.0 * kc) * t + x + x0) / (2.0 * dt.sqrt());
        // exp(β)·Φ(−√2·w); its reduced exponent is e2
        let tail = exp_times_half_erfc(beta, e2, w);
        let c = (a + 2.0 * kc) / d;
        let density = g1 + g2 - c * tail;
        let grad = -g1 * (x - x0 - a * t) / (2.0 * dt) - g2 * (x + x0 - a * t) / (2.0 * dt)
            - c * ((a + kc) / d * tail - g2);
        (density, grad)
    }
}

/// Transition density `p(x, t | x0)` with the radiation boundary.
pub fn density_radiation(x: f64, t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    check_x(x)?;
    Ok(Kinetics::from(p).density_and_gradient(x, t).0.max(0.0))
}

/// Flux `J = a·p − D·∂p/∂x` with the gradient taken analytically.
pub fn flux_radiation(x: f64, t: f64, p: &ModelParams) -> Result<FluxValue> {
    require_positive_time(t)?;
    check_x(x)?;
    let (density, grad) = Kinetics::from(p).density_and_gradient(x, t);
    Ok(FluxValue {
        j: p.a * density - p.diffusion() * grad,
    })
}

/// Cumulative probability of default by `t`.
pub fn pod_radiation(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(Kinetics::from(p).pod_and_survival(t).0)
}

pub fn survival_radiation(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(Kinetics::from(p).pod_and_survival(t).1)
}

/// `dP/dt`; equals `kc·p(0, t)`.
pub fn pod_radiation_dot(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(Kinetics::from(p).default_rate(t))
}

/// Hazard rate `(dP/dt)/(1 − P)`. With zero recovery and the expected asset
/// return set to the risk-free rate this is also the zero-coupon credit
/// spread.
pub fn hazard_radiation(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    let k = Kinetics::from(p);
    if p.kc == 0.0 {
        return Ok(0.0);
    }
    let (_, survival) = k.pod_and_survival(t);
    if survival < SURVIVAL_FLOOR {
        return Err(ModelError::SingularState { t, survival });
    }
    Ok(k.default_rate(t) / survival)
}

/// `lim P(t)` as `t → ∞`: `kc/(kc + a)·exp(−a·x0/D)` when the drift points
/// away from the barrier, otherwise 1. With `kc = 0` no default can happen
/// and the limit is 0 for every drift.
pub fn pod_longtime_limit(p: &ModelParams) -> f64 {
    if p.kc == 0.0 {
        0.0
    } else if p.a <= 0.0 {
        1.0
    } else {
        p.kc / (p.kc + p.a) * (-p.a * p.x0 / p.diffusion()).exp()
    }
}

/// Driftless firm starting on the barrier: `P = 1 − exp(t/t0)·erfc(√(t/t0))`
/// with `t0 = D/kc²`.
pub fn pod_boundary_start(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    if p.x0 != 0.0 || p.a != 0.0 || !(p.kc > 0.0) {
        return Err(ModelError::Precondition(format!(
            "boundary-start formula needs x0 = 0, a = 0, kc > 0 (got x0 = {}, a = {}, kc = {})",
            p.x0, p.a, p.kc
        )));
    }
    let t0 = characteristic_time(p);
    Ok(1.0 - erfc_scaled((t / t0).sqrt()))
}

/// `t0 = D/kc²`, separating the `√t` short-time regime from the long-time one.
pub fn characteristic_time(p: &ModelParams) -> f64 {
    p.diffusion() / (p.kc * p.kc)
}

/// Simplified default rates, for comparison against [`pod_radiation_dot`].
pub fn pod_dot_asymptotic(t: f64, p: &ModelParams, regime: AsymptoticRegime) -> Result<f64> {
    require_positive_time(t)?;
    let d = p.diffusion();
    match regime {
        AsymptoticRegime::LongTime => {
            let dt = d * t;
            let gauss = (-(p.x0 + p.a * t).powi(2) / (4.0 * dt)).exp();
            let denom = (p.a * t + 2.0 * p.kc * t + p.x0) * (PI * dt).sqrt();
            Ok(p.kc * p.x0 / denom * gauss)
        }
        AsymptoticRegime::FirstPassage => Ok(first_hitting_raw(t, p.a, d, p.x0)),
    }
}
