//! Monte Carlo simulation of `dx = a·dt + σ·dW` with a killing barrier.
//!
//! Steps use exact Gaussian increments. Between grid points a Brownian
//! bridge decides whether the path touched the barrier unseen; the crossing
//! probability of a bridge from `x` to `x'` over `h` is
//! `exp(−2·x·x'/(σ²h))`, independent of the drift.
//!
//! In radiation mode a path that ends below the barrier is reflected, and
//! each contact kills with probability `c·kc·√h/σ`. Contacts occur at the
//! rate `2σ·p(0)/√(2πh)` per unit time, so `c = √(π/2)` reproduces the
//! boundary loss `kc·p(0)` as `h → 0`.
//!
//! Far from the barrier, where a bridge contact within a step is
//! astronomically unlikely, the step grows to `(x/6σ)²`.
//!
//! Each path draws from its own ChaCha8 stream, and per-horizon default
//! counts are summed as integers, so results do not depend on thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ModelError, Result};
use crate::params::ModelParams;

use super::{validate_times, OracleCurve, OraclePoint};

/// Per-contact kill constant of the reflect-and-kill scheme.
pub const CONTACT_CONSTANT: f64 = 1.253_314_137_315_500_3; // √(π/2)
pub const MIN_PATHS: u64 = 10_000;
pub const MAX_DT: f64 = 1e-2;

/// Bridge probabilities below `exp(−27.6) ≈ 1e−12` are treated as zero.
const BRIDGE_EXPONENT_CUTOFF: f64 = 27.6;
/// Far-field step is `(x / (FAR_FIELD_WIDTHS·σ))²`.
const FAR_FIELD_WIDTHS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McBoundary {
    /// Every contact defaults.
    Absorbing,
    /// Contacts default with a probability set by `kc`.
    Radiation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSpec {
    pub n_paths: u64,
    pub dt: f64,
    pub seed: u64,
    pub boundary: McBoundary,
    pub times: Vec<f64>,
    /// The constant `c` of the kill probability `c·kc·√h/σ`.
    pub contact_constant: f64,
    /// Detect crossings between grid points with the Brownian bridge.
    pub bridge: bool,
}

impl McSpec {
    pub fn new(n_paths: u64, dt: f64, seed: u64, boundary: McBoundary, times: Vec<f64>) -> Self {
        Self {
            n_paths,
            dt,
            seed,
            boundary,
            times,
            contact_constant: CONTACT_CONSTANT,
            bridge: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths < MIN_PATHS {
            return Err(ModelError::Config(format!(
                "n_paths must be at least {MIN_PATHS}, got {}",
                self.n_paths
            )));
        }
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(ModelError::Config(format!(
                "dt must lie in (0, {MAX_DT}], got {}",
                self.dt
            )));
        }
        if !(self.contact_constant >= 0.0 && self.contact_constant.is_finite()) {
            return Err(ModelError::Config(format!(
                "contact constant must be finite and >= 0, got {}",
                self.contact_constant
            )));
        }
        validate_times(&self.times)
    }
}

pub fn mc_simulate(p: &ModelParams, m: &McSpec) -> Result<OracleCurve> {
    p.validate()?;
    m.validate()?;
    let nt = m.times.len();
    let counts = (0..m.n_paths)
        .into_par_iter()
        .fold(
            || vec![0u64; nt],
            |mut acc, path| {
                if let Some(k) = default_horizon(p, m, path) {
                    acc[k] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; nt],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let n = m.n_paths as f64;
    let mut defaulted = 0u64;
    let points = m
        .times
        .iter()
        .zip(counts)
        .map(|(&t, c)| {
            defaulted += c;
            let pod = defaulted as f64 / n;
            OraclePoint {
                t,
                pod,
                error: (pod * (1.0 - pod) / n).sqrt(),
            }
        })
        .collect();
    Ok(OracleCurve { points })
}

/// Index of the first horizon by which the path has defaulted.
fn default_horizon(p: &ModelParams, m: &McSpec, path: u64) -> Option<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(m.seed);
    rng.set_stream(path);
    let sigma = p.sigma;
    let var_scale = sigma * sigma;
    let far_scale = 1.0 / (FAR_FIELD_WIDTHS * sigma);
    let near = Step::new(m.dt, var_scale);
    let mut x = p.x0;
    let mut t = 0.0;
    for (k, &horizon) in m.times.iter().enumerate() {
        while t < horizon {
            let remaining = horizon - t;
            let far = (x * far_scale).powi(2);
            let step = if far > m.dt || m.dt > remaining {
                Step::new(far.max(m.dt).min(remaining), var_scale)
            } else {
                near
            };
            let z: f64 = rng.sample(StandardNormal);
            let mut next = x + p.a * step.h + sigma * step.root * z;
            let mut contact = false;
            if next <= 0.0 {
                contact = true;
                next = -next;
            } else {
                let exponent = 2.0 * x * next * step.inv_var;
                if exponent < BRIDGE_EXPONENT_CUTOFF {
                    // drawn in both modes so that paths coincide
                    let u: f64 = rng.gen();
                    contact = m.bridge && u < (-exponent).exp();
                }
            }
            if contact {
                let killed = match m.boundary {
                    McBoundary::Absorbing => true,
                    McBoundary::Radiation => {
                        let q = m.contact_constant * p.kc * step.root / sigma;
                        q >= 1.0 || (q > 0.0 && rng.gen::<f64>() < q)
                    }
                };
                if killed {
                    return Some(k);
                }
            }
            x = next;
            t = if step.h == remaining { horizon } else { t + step.h };
        }
    }
    None
}

#[derive(Clone, Copy)]
struct Step {
    h: f64,
    root: f64,
    inv_var: f64,
}

impl Step {
    fn new(h: f64, var_scale: f64) -> Self {
        Self {
            h,
            root: h.sqrt(),
            inv_var: 1.0 / (var_scale * h),
        }
    }
}

/// Runs at each step size in `dts` (coarse to fine, independent seeds) and
/// extrapolates the two finest levels assuming an error proportional to
/// `√dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct McExtrapolation {
    pub levels: Vec<(f64, OracleCurve)>,
    pub extrapolated: OracleCurve,
}

pub fn mc_extrapolated(p: &ModelParams, base: &McSpec, dts: &[f64]) -> Result<McExtrapolation> {
    if dts.len() < 2 || dts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ModelError::Config(
            "extrapolation needs at least two strictly decreasing step sizes".into(),
        ));
    }
    let levels = dts
        .iter()
        .enumerate()
        .map(|(i, &dt)| {
            let spec = McSpec {
                dt,
                seed: base.seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                ..base.clone()
            };
            mc_simulate(p, &spec).map(|c| (dt, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let (dt_c, coarse) = &levels[levels.len() - 2];
    let (dt_f, fine) = &levels[levels.len() - 1];
    let r = (dt_c / dt_f).sqrt();
    let points = coarse
        .points
        .iter()
        .zip(&fine.points)
        .map(|(c, f)| OraclePoint {
            t: f.t,
            pod: (r * f.pod - c.pod) / (r - 1.0),
            error: (r * r * f.error * f.error + c.error * c.error).sqrt() / (r - 1.0),
        })
        .collect();
    Ok(McExtrapolation {
        levels,
        extrapolated: OracleCurve { points },
    })
}
