//! Independent numerical references for the closed forms: a finite-volume
//! Fokker-Planck solver and a Monte Carlo path simulator.

pub mod mc;
pub mod pde;
pub mod validation;

pub use mc::{mc_extrapolated, mc_simulate, McBoundary, McExtrapolation, McSpec};
pub use pde::{fpe_solve, BoundaryKind, FpeSolution, GridSpec};
pub use validation::{run_validation, CheckKind, ValidationPlan, ValidationReport, ValidationRow};

/// One horizon of an oracle term structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub t: f64,
    pub pod: f64,
    /// Standard error for Monte Carlo, discretization-error estimate for
    /// the PDE solver.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCurve {
    pub points: Vec<OraclePoint>,
}

impl OracleCurve {
    pub fn at(&self, t: f64) -> Option<&OraclePoint> {
        self.points.iter().find(|p| (p.t - t).abs() <= 1e-12 * t.max(1.0))
    }
}

/// Checks observation horizons: positive, finite, strictly increasing.
pub(crate) fn validate_times(times: &[f64]) -> crate::Result<()> {
    if times.is_empty() {
        return Err(crate::ModelError::Config("no observation times".into()));
    }
    for (i, &t) in times.iter().enumerate() {
        if !(t > 0.0 && t.is_finite()) || (i > 0 && t <= times[i - 1]) {
            return Err(crate::ModelError::Config(format!(
                "observation times must be positive and strictly increasing (entry {i} = {t})"
            )));
        }
    }
    Ok(())
}
