use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("survival probability {survival:e} at t = {t} is too small to define a hazard rate")]
    SingularState { t: f64, survival: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("adaptive quadrature did not reach tolerance {tol:e} (error estimate {estimate:e})")]
    QuadratureNonconvergence { tol: f64, estimate: f64 },
    #[error("numerical instability at t = {t}: {detail}")]
    Instability { t: f64, detail: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dataset weights sum to zero")]
    DegenerateWeights,
    #[error("objective evaluation failed at trial {trial}: {source}")]
    Objective {
        trial: usize,
        #[source]
        source: Box<ModelError>,
    },
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn require_positive_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name: "t",
            value: t,
            expected: "finite and > 0",
        })
    }
}
