//! Classical first-passage model: the barrier absorbs on first contact.

use std::f64::consts::PI;

use crate::error::{require_positive_time, ModelError, Result};
use crate::params::ModelParams;
use crate::specfun::{erfc, exp_times_half_erfc};

/// Survival below this level is treated as exhausted when forming a hazard.
pub const SURVIVAL_FLOOR: f64 = 1e-14;

/// Transition density `p(x, t | x0)` with a vanishing-density barrier.
pub fn density_absorbing(x: f64, t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    if !(x >= 0.0) {
        return Err(ModelError::Domain {
            name: "x",
            value: x,
            expected: ">= 0",
        });
    }
    let d = p.diffusion();
    let dt = d * t;
    let free = (x - p.x0 - p.a * t).powi(2) / (4.0 * dt);
    // image term differs from the free one by the factor exp(−x·x0/Dt)
    let image_gap = -(-x * p.x0 / dt).exp_m1();
    Ok((-free).exp() * image_gap / (2.0 * (PI * dt).sqrt()))
}

/// Returns `(P, 1 − P)` each computed without subtracting from one.
pub(crate) fn pod_and_survival(t: f64, a: f64, d: f64, x0: f64) -> (f64, f64) {
    if x0 <= 0.0 {
        return (1.0, 0.0);
    }
    let root = (d * t).sqrt();
    let w1 = (x0 + a * t) / (2.0 * root);
    let w2 = (x0 - a * t) / (2.0 * root);
    let gauss = -(x0 + a * t).powi(2) / (4.0 * d * t);
    let mirror = exp_times_half_erfc(-a * x0 / d, gauss, w2);
    let pod = 0.5 * erfc(w1) + mirror;
    let survival = 0.5 * erfc(-w1) - mirror;
    (pod.clamp(0.0, 1.0), survival.clamp(0.0, 1.0))
}

/// Cumulative probability of default by `t`.
///
/// `x0 = 0` returns exactly 1 for every `t > 0`; the formula is discontinuous
/// there because any `x0 > 0` gives `P → 0` as `t → 0`.
pub fn pod_absorbing(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(pod_and_survival(t, p.a, p.diffusion(), p.x0).0)
}

pub fn survival_absorbing(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(pod_and_survival(t, p.a, p.diffusion(), p.x0).1)
}

/// Density of the first hitting time of the barrier, `dP/dt`.
pub fn first_hitting_density(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    Ok(first_hitting_raw(t, p.a, p.diffusion(), p.x0))
}

pub(crate) fn first_hitting_raw(t: f64, a: f64, d: f64, x0: f64) -> f64 {
    if x0 <= 0.0 {
        return 0.0;
    }
    let dt = d * t;
    x0 / (4.0 * PI * dt * t * t).sqrt() * (-(x0 + a * t).powi(2) / (4.0 * dt)).exp()
}

/// Hazard rate `h = (dP/dt)/(1 − P)`.
pub fn hazard_absorbing(t: f64, p: &ModelParams) -> Result<f64> {
    require_positive_time(t)?;
    let d = p.diffusion();
    let (_, survival) = pod_and_survival(t, p.a, d, p.x0);
    if survival < SURVIVAL_FLOOR {
        return Err(ModelError::SingularState { t, survival });
    }
    Ok(first_hitting_raw(t, p.a, d, p.x0) / survival)
}
