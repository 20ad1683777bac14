//! Fitting normalized parameters to observed cumulative PoD curves by
//! multiplicative random search on the weighted RMSD.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::absorbing::pod_absorbing;
use crate::error::{ModelError, Result};
use crate::params::{NormalizedParams, TermStructure};
use crate::radiation::pod_radiation;

pub const DEFAULT_Q: f64 = 0.8;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1981;
pub const PARAMETER_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelVariant {
    /// First passage; fits `(ã, x̃0)`.
    Absorbing,
    /// Finite default rate at the barrier; fits `(ã, x̃0, k̃c)`.
    Radiation,
}

impl ModelVariant {
    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Absorbing => "absorbing",
            ModelVariant::Radiation => "radiation",
        }
    }
}

/// Cumulative PoD of the normalized model (unit volatility), as a fraction.
pub fn model_pod(params: &NormalizedParams, variant: ModelVariant, t: f64) -> Result<f64> {
    match variant {
        ModelVariant::Absorbing => {
            let p = NormalizedParams { kc_tilde: 0.0, ..*params }.to_unit_model()?;
            pod_absorbing(t, &p)
        }
        ModelVariant::Radiation => pod_radiation(t, &params.to_unit_model()?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataPoint {
    /// Horizon, years.
    pub t: f64,
    /// Observed cumulative PoD, fraction.
    pub p_obs: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoricalDataset {
    pub label: String,
    pub points: Vec<DataPoint>,
}

impl HistoricalDataset {
    pub fn new(label: impl Into<String>, points: Vec<DataPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(ModelError::Precondition(format!(
                "a dataset needs at least 2 points, got {}",
                points.len()
            )));
        }
        for (i, pt) in points.iter().enumerate() {
            if !(pt.t > 0.0 && pt.t.is_finite()) || (i > 0 && pt.t <= points[i - 1].t) {
                return Err(ModelError::Precondition(format!(
                    "horizons must be positive and strictly increasing (point {i}, t = {})",
                    pt.t
                )));
            }
            if !(0.0..=1.0).contains(&pt.p_obs) {
                return Err(ModelError::Domain {
                    name: "p_obs",
                    value: pt.p_obs,
                    expected: "in [0, 1]",
                });
            }
            if !(pt.weight >= 0.0 && pt.weight.is_finite()) {
                return Err(ModelError::Domain {
                    name: "weight",
                    value: pt.weight,
                    expected: "finite and >= 0",
                });
            }
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    /// Non-fatal findings, such as a decreasing observed PoD.
    pub fn warnings(&self) -> Vec<String> {
        self.points
            .windows(2)
            .filter(|w| w[1].p_obs < w[0].p_obs)
            .map(|w| {
                format!(
                    "observed PoD decreases between t = {} and t = {} ({} -> {})",
                    w[0].t, w[1].t, w[0].p_obs, w[1].p_obs
                )
            })
            .collect()
    }

    pub fn horizons(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }
}

/// Weighted RMSD between model and observation, in percentage points.
pub fn rmsd(params: &NormalizedParams, d: &HistoricalDataset, variant: ModelVariant) -> Result<f64> {
    let total: f64 = d.points.iter().map(|p| p.weight).sum();
    if !(total > 0.0) {
        return Err(ModelError::DegenerateWeights);
    }
    let mut acc = 0.0;
    for pt in &d.points {
        let diff = model_pod(params, variant, pt.t)? - pt.p_obs;
        acc += pt.weight * diff * diff;
    }
    Ok(100.0 * (acc / total).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConfig {
    pub variant: ModelVariant,
    /// Proposals are drawn from `[z·q, z/q]` around each incumbent value.
    pub q: f64,
    pub trials: usize,
    pub seed: u64,
    pub initial: NormalizedParams,
    /// Lower bound applied to every proposal.
    pub floor: f64,
}

impl CalibrationConfig {
    pub fn new(variant: ModelVariant) -> Self {
        Self {
            variant,
            q: DEFAULT_Q,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            initial: NormalizedParams::new(0.2, 2.0, 0.2, 0.0),
            floor: PARAMETER_FLOOR,
        }
    }

    /// `q = 1` is accepted as the degenerate zero-width search.
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(ModelError::Config(format!("q must lie in (0, 1], got {}", self.q)));
        }
        if self.trials == 0 {
            return Err(ModelError::Config("trials must be at least 1".into()));
        }
        if !(self.floor > 0.0) {
            return Err(ModelError::Config(format!("floor must be > 0, got {}", self.floor)));
        }
        let free = free_values(&self.initial, self.variant);
        if free.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(ModelError::Config(format!(
                "initial parameters must be positive, got {:?}",
                self.initial
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub params: NormalizedParams,
    /// RMSD at `params`, percentage points.
    pub rho: f64,
    pub trials_run: usize,
    pub improvements: usize,
    pub seed: u64,
    pub variant: ModelVariant,
}

fn free_values(p: &NormalizedParams, variant: ModelVariant) -> Vec<f64> {
    match variant {
        ModelVariant::Absorbing => vec![p.a_tilde, p.x0_tilde],
        ModelVariant::Radiation => vec![p.a_tilde, p.x0_tilde, p.kc_tilde],
    }
}

fn with_free_values(base: &NormalizedParams, v: &[f64]) -> NormalizedParams {
    NormalizedParams {
        a_tilde: v[0],
        x0_tilde: v[1],
        kc_tilde: v.get(2).copied().unwrap_or(base.kc_tilde),
        delta_tilde: base.delta_tilde,
    }
}

/// Incumbent random search. Every trial perturbs all free parameters
/// jointly and is accepted only if it strictly lowers the RMSD.
///
/// For the absorbing variant `kc_tilde` is carried through unchanged.
pub fn calibrate(d: &HistoricalDataset, c: &CalibrationConfig) -> Result<CalibrationResult> {
    c.validate()?;
    let objective = |p: &NormalizedParams, trial: usize| {
        rmsd(p, d, c.variant).map_err(|e| ModelError::Objective {
            trial,
            source: Box::new(e),
        })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut best = c.initial;
    let mut best_rho = objective(&best, 0)?;
    let mut incumbent = free_values(&best, c.variant);
    let mut improvements = 0;
    let mut proposal = incumbent.clone();
    for trial in 1..=c.trials {
        for (z, slot) in incumbent.iter().zip(proposal.iter_mut()) {
            let lo = z * c.q;
            let hi = z / c.q;
            *slot = (lo + (hi - lo) * rng.gen::<f64>()).max(c.floor);
        }
        let candidate = with_free_values(&best, &proposal);
        let rho = objective(&candidate, trial)?;
        if rho < best_rho {
            best_rho = rho;
            best = candidate;
            incumbent.copy_from_slice(&proposal);
            improvements += 1;
        }
    }
    Ok(CalibrationResult {
        params: best,
        rho: best_rho,
        trials_run: c.trials,
        improvements,
        seed: c.seed,
        variant: c.variant,
    })
}

/// Model PoD in percent at each horizon.
pub fn fitted_table(params: &NormalizedParams, horizons: &[f64], variant: ModelVariant) -> Result<TermStructure> {
    if horizons.is_empty() {
        return Err(ModelError::Precondition("no horizons given".into()));
    }
    TermStructure::from_fn(horizons, |t| model_pod(params, variant, t).map(|p| 100.0 * p))
}
