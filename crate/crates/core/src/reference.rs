//! Reference data: global cumulative corporate PoDs for the 'BB' and 'B'
//! rating categories (S&P, 1981–2008) together with the published model
//! fits, and the published parameter sets.

use crate::calibration::{DataPoint, HistoricalDataset, ModelVariant};
use crate::params::NormalizedParams;

/// Horizons of the reference table, in years.
pub const YEARS: [f64; 20] = [
    1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0,
    18.0, 19.0, 20.0,
];

/// Observed cumulative PoD, percent.
pub const OBSERVED_BB: [f64; 20] = [
    0.99, 2.88, 5.07, 7.18, 9.07, 10.90, 12.41, 13.74, 15.00, 16.02, 16.89, 17.64, 18.28, 18.77,
    19.33, 19.87, 20.40, 20.98, 21.81, 22.96,
];
pub const FITTED_BB_ABSORBING: [f64; 20] = [
    0.21, 2.10, 4.71, 7.17, 9.31, 11.12, 12.65, 13.96, 15.08, 16.05, 16.90, 17.64, 18.29, 18.87,
    19.39, 19.85, 20.26, 20.64, 20.98, 21.28,
];
pub const FITTED_BB_RADIATION: [f64; 20] = [
    0.77, 3.07, 5.42, 7.51, 9.34, 10.94, 12.34, 13.59, 14.70, 15.70, 16.61, 17.43, 18.18, 18.87,
    19.50, 20.08, 20.63, 21.13, 21.608, 22.04,
];
pub const OBSERVED_B: [f64; 20] = [
    4.51, 9.87, 14.43, 17.97, 20.58, 22.67, 24.46, 25.93, 27.17, 28.41, 29.54, 30.50, 31.45, 32.32,
    33.15, 33.78, 34.28, 34.79, 35.25, 35.57,
];
pub const FITTED_B_ABSORBING: [f64; 20] = [
    2.37, 8.71, 13.94, 17.88, 20.90, 23.27, 25.18, 26.75, 28.06, 29.17, 30.13, 30.95, 31.67, 32.30,
    32.86, 33.36, 33.81, 34.21, 34.57, 34.90,
];
pub const FITTED_B_RADIATION: [f64; 20] = [
    4.50, 10.14, 14.40, 17.69, 20.34, 22.53, 24.38, 25.96, 27.34, 28.55, 29.62, 30.58, 31.45,
    32.23, 32.95, 33.60, 34.20, 34.76, 35.27, 35.75,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rating {
    BB,
    B,
}

impl Rating {
    pub fn label(self) -> &'static str {
        match self {
            Rating::BB => "BB",
            Rating::B => "B",
        }
    }

    pub fn observed_percent(self) -> &'static [f64; 20] {
        match self {
            Rating::BB => &OBSERVED_BB,
            Rating::B => &OBSERVED_B,
        }
    }

    pub fn fitted_percent(self, variant: ModelVariant) -> &'static [f64; 20] {
        match (self, variant) {
            (Rating::BB, ModelVariant::Absorbing) => &FITTED_BB_ABSORBING,
            (Rating::BB, ModelVariant::Radiation) => &FITTED_BB_RADIATION,
            (Rating::B, ModelVariant::Absorbing) => &FITTED_B_ABSORBING,
            (Rating::B, ModelVariant::Radiation) => &FITTED_B_RADIATION,
        }
    }

    /// Observed curve as a dataset with unit weights.
    pub fn observed_dataset(self) -> HistoricalDataset {
        let points = YEARS
            .iter()
            .zip(self.observed_percent())
            .map(|(&t, &pct)| DataPoint {
                t,
                p_obs: pct / 100.0,
                weight: 1.0,
            })
            .collect();
        HistoricalDataset::new(self.label(), points).expect("reference data is valid")
    }
}

/// Published fits: one per rating and model variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    BAbsorbing,
    BRadiation,
    BbAbsorbing,
    BbRadiation,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::BAbsorbing,
        Preset::BRadiation,
        Preset::BbAbsorbing,
        Preset::BbRadiation,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Preset::BAbsorbing => "b_bc",
            Preset::BRadiation => "b_ebc",
            Preset::BbAbsorbing => "bb_bc",
            Preset::BbRadiation => "bb_ebc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn rating(self) -> Rating {
        match self {
            Preset::BAbsorbing | Preset::BRadiation => Rating::B,
            Preset::BbAbsorbing | Preset::BbRadiation => Rating::BB,
        }
    }

    pub fn variant(self) -> ModelVariant {
        match self {
            Preset::BAbsorbing | Preset::BbAbsorbing => ModelVariant::Absorbing,
            Preset::BRadiation | Preset::BbRadiation => ModelVariant::Radiation,
        }
    }

    /// Fitted parameters. The absorbing fits carry `kc_tilde = 0`, which the
    /// absorbing variant ignores.
    pub fn params(self) -> NormalizedParams {
        match self {
            Preset::BAbsorbing => NormalizedParams::new(0.23, 2.07, 0.0, 0.0),
            Preset::BRadiation => NormalizedParams::new(0.14, 1.09, 0.25, 0.0),
            Preset::BbAbsorbing => NormalizedParams::new(0.24, 2.86, 0.0, 0.0),
            Preset::BbRadiation => NormalizedParams::new(0.15, 1.72, 0.18, 0.0),
        }
    }

    /// Published RMSD, percentage points.
    pub fn published_rho(self) -> f64 {
        match self {
            Preset::BAbsorbing => 0.75,
            Preset::BRadiation => 0.14,
            Preset::BbAbsorbing => 0.31,
            Preset::BbRadiation => 0.22,
        }
    }

    pub fn fitted_percent(self) -> &'static [f64; 20] {
        self.rating().fitted_percent(self.variant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_monotone() {
        for col in [
            &OBSERVED_BB,
            &FITTED_BB_ABSORBING,
            &FITTED_BB_RADIATION,
            &OBSERVED_B,
            &FITTED_B_ABSORBING,
            &FITTED_B_RADIATION,
        ] {
            assert!(col.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("aaa"), None);
    }

    #[test]
    fn observed_dataset_shape() {
        let d = Rating::B.observed_dataset();
        assert_eq!(d.label, "B");
        assert_eq!(d.points.len(), 20);
        assert!((d.points[0].p_obs - 0.0451).abs() < 1e-15);
        assert!(d.points.iter().all(|p| p.weight == 1.0));
    }
}
