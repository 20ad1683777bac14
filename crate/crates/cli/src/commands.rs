//! Curve, density and calibration commands.

use extbc::absorbing::{density_absorbing, hazard_absorbing, pod_absorbing};
use extbc::calibration::{DEFAULT_Q, DEFAULT_SEED, DEFAULT_TRIALS};
use extbc::params::{geometric_grid, DEFAULT_GRID_POINTS, DEFAULT_GRID_T_MAX, DEFAULT_GRID_T_MIN};
use extbc::radiation::{density_radiation, hazard_radiation, pod_radiation};
use extbc::uncertainty::{hazard_uncertain, pod_uncertain, UncertainParams};
use extbc::{calibrate, CalibrationConfig, HistoricalDataset, ModelParams, ModelVariant, NormalizedParams, Preset};

use crate::args::Options;
use crate::dataset::{apply_weights, default_label, parse_dataset};
use crate::error::{CliError, Result};
use crate::output::{format_value, Table};

pub const BP_PER_UNIT: f64 = 1e4;

/// Density grid spans `x0 + |a|t + DENSITY_WIDTHS·√(2Dt)`.
const DENSITY_WIDTHS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelChoice {
    pub params: NormalizedParams,
    pub variant: ModelVariant,
    pub sigma: f64,
}

impl ModelChoice {
    /// Preset values first, then explicit flags.
    pub fn resolve(o: &Options) -> Result<Self> {
        let preset = o.preset.map(Preset::from);
        let base = preset.map(|p| p.params());
        let variant = o
            .variant
            .map(ModelVariant::from)
            .or(preset.map(|p| p.variant()))
            .unwrap_or(ModelVariant::Radiation);
        let need = |flag: Option<f64>, fallback: Option<f64>, name: &str| {
            flag.or(fallback)
                .ok_or_else(|| CliError::Usage(format!("--{name} is required (or use --preset)")))
        };
        let a_tilde = need(o.a_tilde, base.map(|b| b.a_tilde), "a-tilde")?;
        let x0_tilde = need(o.x0_tilde, base.map(|b| b.x0_tilde), "x0-tilde")?;
        let kc_tilde = match variant {
            ModelVariant::Radiation => need(o.kc_tilde, base.map(|b| b.kc_tilde), "kc-tilde")?,
            ModelVariant::Absorbing => o.kc_tilde.unwrap_or(0.0),
        };
        let delta_tilde = o.delta_tilde.unwrap_or(0.0);
        if delta_tilde != 0.0 && variant == ModelVariant::Absorbing {
            return Err(CliError::Usage(
                "--delta-tilde requires the radiation variant".into(),
            ));
        }
        let choice = Self {
            params: NormalizedParams::new(a_tilde, x0_tilde, kc_tilde, delta_tilde),
            variant,
            sigma: o.sigma.unwrap_or(1.0),
        };
        choice
            .model()
            .map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))?;
        Ok(choice)
    }

    pub fn model(&self) -> extbc::Result<ModelParams> {
        self.params.to_model(self.sigma)
    }

    fn uncertain(&self) -> extbc::Result<Option<UncertainParams>> {
        if self.params.delta_tilde > 0.0 {
            UncertainParams::new(self.model()?).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn pod(&self, t: f64) -> extbc::Result<f64> {
        let p = self.model()?;
        match (self.variant, self.uncertain()?) {
            (_, Some(u)) => pod_uncertain(t, &u),
            (ModelVariant::Absorbing, None) => pod_absorbing(t, &p),
            (ModelVariant::Radiation, None) => pod_radiation(t, &p),
        }
    }

    pub fn hazard(&self, t: f64) -> extbc::Result<f64> {
        let p = self.model()?;
        match (self.variant, self.uncertain()?) {
            (_, Some(u)) => hazard_uncertain(t, &u),
            (ModelVariant::Absorbing, None) => hazard_absorbing(t, &p),
            (ModelVariant::Radiation, None) => hazard_radiation(t, &p),
        }
    }
}

pub fn time_grid(o: &Options) -> Result<Vec<f64>> {
    geometric_grid(
        o.t_min.unwrap_or(DEFAULT_GRID_T_MIN),
        o.t_max.unwrap_or(DEFAULT_GRID_T_MAX),
        o.t_points.unwrap_or(DEFAULT_GRID_POINTS),
    )
    .map_err(|e| CliError::Usage(e.to_string()))
}

/// Evenly spaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) || n < 2 {
        return Err(CliError::Usage(format!(
            "grid needs 0 <= t_min < t_max and at least 2 points, got [{lo}, {hi}] with {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Pod,
    Hazard,
    Spread,
}

pub fn curve_table(o: &Options, curve: Curve) -> Result<Table> {
    let m = ModelChoice::resolve(o)?;
    let times = time_grid(o)?;
    let column = match curve {
        Curve::Pod => "pod_pct",
        Curve::Hazard => "hazard_per_yr",
        Curve::Spread => "spread_bp",
    };
    let mut table = Table::new(["t_yr", column]);
    for t in times {
        let v = match curve {
            Curve::Pod => 100.0 * m.pod(t)?,
            Curve::Hazard => m.hazard(t)?,
            Curve::Spread => BP_PER_UNIT * m.hazard(t)?,
        };
        table.push_values(&[t, v]);
    }
    Ok(table)
}

/// Density of the log-distance at `t = --t-max` on `--t-points` abscissae.
pub fn density_table(o: &Options) -> Result<Table> {
    let m = ModelChoice::resolve(o)?;
    if m.params.delta_tilde != 0.0 {
        return Err(CliError::Usage("density is not available with --delta-tilde".into()));
    }
    let p = m.model()?;
    let t = o.t_max.unwrap_or(1.0);
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("--t-max must be > 0, got {t}")));
    }
    let n = o.t_points.unwrap_or(DEFAULT_GRID_POINTS);
    let width = p.x0 + p.a.abs() * t + DENSITY_WIDTHS * (2.0 * p.diffusion() * t).sqrt();
    let xs = linear_grid(0.0, width, n)?;
    let mut table = Table::new(["x", "density"]);
    for x in xs {
        let v = match m.variant {
            ModelVariant::Absorbing => density_absorbing(x, t, &p)?,
            ModelVariant::Radiation => density_radiation(x, t, &p)?,
        };
        table.push_values(&[x, v]);
    }
    Ok(table)
}

/// Dataset from `--dataset`, or the reference data of `--preset`'s rating.
pub fn load_dataset(o: &Options) -> Result<HistoricalDataset> {
    let d = match (&o.dataset, o.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let label = o.label.clone().unwrap_or_else(|| default_label(path));
            parse_dataset(&text, &label)?
        }
        (None, Some(p)) => {
            let mut d = Preset::from(p).rating().observed_dataset();
            if let Some(label) = &o.label {
                d.label = label.clone();
            }
            d
        }
        (None, None) => return Err(CliError::Usage("calibrate needs --dataset or --preset".into())),
    };
    Ok(match &o.weights {
        Some(list) => apply_weights(d, list)?,
        None => d,
    })
}

pub fn calibration_config(o: &Options, variant: ModelVariant) -> CalibrationConfig {
    let mut c = CalibrationConfig::new(variant);
    c.q = o.q.unwrap_or(DEFAULT_Q);
    c.trials = o.trials.unwrap_or(DEFAULT_TRIALS);
    c.seed = o.seed.unwrap_or(DEFAULT_SEED);
    if let Some(a) = o.a_tilde {
        c.initial.a_tilde = a;
    }
    if let Some(x0) = o.x0_tilde {
        c.initial.x0_tilde = x0;
    }
    if let Some(kc) = o.kc_tilde {
        c.initial.kc_tilde = kc;
    }
    c
}

pub fn calibrate_table(o: &Options) -> Result<Table> {
    let d = load_dataset(o)?;
    for w in d.warnings() {
        eprintln!("warning: {}: {w}", d.label);
    }
    let variant = o
        .variant
        .map(ModelVariant::from)
        .or(o.preset.map(|p| Preset::from(p).variant()))
        .unwrap_or(ModelVariant::Radiation);
    let config = calibration_config(o, variant);
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let r = calibrate(&d, &config)?;
    let mut table = Table::new([
        "label",
        "variant",
        "a_tilde",
        "x0_tilde",
        "kc_tilde",
        "rho_pp",
        "trials",
        "improvements",
        "seed",
    ]);
    table.push_row(vec![
        d.label.clone(),
        variant.name().to_string(),
        format_value(r.params.a_tilde),
        format_value(r.params.x0_tilde),
        format_value(r.params.kc_tilde),
        format_value(r.rho),
        r.trials_run.to_string(),
        r.improvements.to_string(),
        r.seed.to_string(),
    ]);
    Ok(table)
}
