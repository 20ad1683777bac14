//! Structural credit-default models with absorbing and radiation barriers.
//!
//! The log distance to the default barrier follows `dx = a·dt + σ·dW`. The
//! absorbing model defaults on first contact; the radiation model defaults
//! at a finite rate `kc` while in contact. An optional Gaussian uncertainty
//! in the starting distance yields nonzero short-maturity spreads.

pub mod absorbing;
pub mod calibration;
pub mod error;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod radiation;
pub mod reference;
pub mod specfun;
pub mod uncertainty;

pub use calibration::{
    calibrate, fitted_table, rmsd, CalibrationConfig, CalibrationResult, DataPoint, HistoricalDataset,
    ModelVariant,
};
pub use error::{ModelError, Result};
pub use params::{ModelParams, NormalizedParams, TermStructure};
pub use reference::{Preset, Rating};
pub use uncertainty::UncertainParams;
