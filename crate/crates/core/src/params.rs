//! Parameter sets and term-structure containers shared by every model.

use crate::error::{ModelError, Result};

/// Parameters of the log-distance-to-barrier diffusion `dx = a·dt + σ·dW`.
///
/// `x` is `ln(V/L)`; the barrier sits at `x = 0`. Time is in years, so `a`
/// is per year and `sigma` per √year. `kc` is only read by the
/// radiation-boundary model and `delta` only by the uncertain-start model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub sigma: f64,
    pub x0: f64,
    pub kc: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(a: f64, sigma: f64, x0: f64, kc: f64, delta: f64) -> Result<Self> {
        let p = Self {
            a,
            sigma,
            x0,
            kc,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from the asset growth rate `μ`; the log drift is
    /// `a = μ − σ²/2`.
    pub fn from_growth_rate(mu: f64, sigma: f64, x0: f64, kc: f64, delta: f64) -> Result<Self> {
        Self::new(mu - 0.5 * sigma * sigma, sigma, x0, kc, delta)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.a.is_finite(), "a", self.a, "finite")?;
        check(
            self.sigma.is_finite() && self.sigma > 0.0,
            "sigma",
            self.sigma,
            "finite and > 0",
        )?;
        check(
            self.x0.is_finite() && self.x0 >= 0.0,
            "x0",
            self.x0,
            "finite and >= 0",
        )?;
        check(
            self.kc.is_finite() && self.kc >= 0.0,
            "kc",
            self.kc,
            "finite and >= 0",
        )?;
        check(
            self.delta.is_finite() && self.delta >= 0.0,
            "delta",
            self.delta,
            "finite and >= 0",
        )
    }

    /// Diffusion coefficient `D = σ²/2`.
    #[inline]
    pub fn diffusion(&self) -> f64 {
        0.5 * self.sigma * self.sigma
    }

    pub fn normalized(&self) -> NormalizedParams {
        NormalizedParams {
            a_tilde: self.a / self.sigma,
            x0_tilde: self.x0 / self.sigma,
            kc_tilde: self.kc / self.sigma,
            delta_tilde: self.delta / self.sigma,
        }
    }

    pub fn with_kc(self, kc: f64) -> Self {
        Self { kc, ..self }
    }

    pub fn with_x0(self, x0: f64) -> Self {
        Self { x0, ..self }
    }

    pub fn with_a(self, a: f64) -> Self {
        Self { a, ..self }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    /// Multiplies every rate-like parameter and the volatility by `lambda`.
    /// All model outputs are invariant under this map.
    pub fn rescaled(self, lambda: f64) -> Self {
        Self {
            a: self.a * lambda,
            sigma: self.sigma * lambda,
            x0: self.x0 * lambda,
            kc: self.kc * lambda,
            delta: self.delta * lambda,
        }
    }
}

fn check(ok: bool, name: &'static str, value: f64, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name,
            value,
            expected,
        })
    }
}

/// Scale-free parameters: everything divided by `σ`, with time in years.
///
/// `kc_tilde` carries units of year^(-1/2). Every model output depends on
/// [`ModelParams`] only through this quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedParams {
    pub a_tilde: f64,
    pub x0_tilde: f64,
    pub kc_tilde: f64,
    pub delta_tilde: f64,
}

impl NormalizedParams {
    pub fn new(a_tilde: f64, x0_tilde: f64, kc_tilde: f64, delta_tilde: f64) -> Self {
        Self {
            a_tilde,
            x0_tilde,
            kc_tilde,
            delta_tilde,
        }
    }

    /// Model parameters at volatility `sigma`.
    pub fn to_model(&self, sigma: f64) -> Result<ModelParams> {
        ModelParams::new(
            self.a_tilde * sigma,
            sigma,
            self.x0_tilde * sigma,
            self.kc_tilde * sigma,
            self.delta_tilde * sigma,
        )
    }

    /// Model parameters at unit volatility.
    pub fn to_unit_model(&self) -> Result<ModelParams> {
        self.to_model(1.0)
    }
}

/// Ordered `(t, value)` series: a PoD, hazard or spread curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TermStructure {
    points: Vec<(f64, f64)>,
}

impl TermStructure {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(t, v)) in points.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ModelError::Domain {
                    name: "t",
                    value: t,
                    expected: "finite and > 0",
                });
            }
            if !v.is_finite() {
                return Err(ModelError::Domain {
                    name: "value",
                    value: v,
                    expected: "finite",
                });
            }
            if i > 0 && t <= points[i - 1].0 {
                return Err(ModelError::Precondition(format!(
                    "term-structure times must be strictly increasing (t[{}] = {} after {})",
                    i,
                    t,
                    points[i - 1].0
                )));
            }
        }
        Ok(Self { points })
    }

    /// Evaluates `f` at each time in `times`.
    pub fn from_fn<F>(times: &[f64], mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let points = times
            .iter()
            .map(|&t| f(t).map(|v| (t, v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            points: self.points.iter().map(|&(t, v)| (t, f(v))).collect(),
        }
    }
}

pub const DEFAULT_GRID_T_MIN: f64 = 0.01;
pub const DEFAULT_GRID_T_MAX: f64 = 30.0;
pub const DEFAULT_GRID_POINTS: usize = 256;

/// `n` geometrically spaced times from `t_min` to `t_max` inclusive.
pub fn geometric_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(ModelError::Config(format!(
            "time grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    match n {
        0 => Err(ModelError::Config("time grid needs at least one point".into())),
        1 => Ok(vec![t_max]),
        _ => {
            let ratio = (t_max / t_min).ln() / (n - 1) as f64;
            let mut grid: Vec<f64> = (0..n).map(|i| t_min * (ratio * i as f64).exp()).collect();
            grid[n - 1] = t_max;
            Ok(grid)
        }
    }
}

pub fn default_grid() -> Vec<f64> {
    geometric_grid(DEFAULT_GRID_T_MIN, DEFAULT_GRID_T_MAX, DEFAULT_GRID_POINTS)
        .expect("default grid is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.1, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.1, 1.0, -1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.1, 1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ModelParams::new(0.1, 1.0, 1.0, 0.1, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn growth_rate_sets_log_drift() {
        let p = ModelParams::from_growth_rate(0.05, 0.2, 1.0, 0.0, 0.0).unwrap();
        assert!((p.a - 0.03).abs() < 1e-15);
        assert!((p.diffusion() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn normalized_round_trip() {
        let n = NormalizedParams::new(0.14, 1.09, 0.25, 0.1);
        let p = n.to_model(0.3).unwrap();
        let back = p.normalized();
        assert!((back.a_tilde - 0.14).abs() < 1e-15);
        assert!((back.x0_tilde - 1.09).abs() < 1e-15);
        assert!((back.kc_tilde - 0.25).abs() < 1e-15);
        assert!((back.delta_tilde - 0.1).abs() < 1e-15);
    }

    #[test]
    fn term_structure_requires_increasing_times() {
        assert!(TermStructure::new(vec![(1.0, 0.1), (1.0, 0.2)]).is_err());
        assert!(TermStructure::new(vec![(0.0, 0.1)]).is_err());
        assert!(TermStructure::new(vec![(1.0, f64::NAN)]).is_err());
        assert_eq!(TermStructure::new(vec![(0.5, 0.1), (1.0, 0.2)]).unwrap().len(), 2);
    }

    #[test]
    fn default_grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 256);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert_eq!(g[255], 30.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
