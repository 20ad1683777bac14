//! Oracle-versus-closed-form comparisons on a fixed parameter lattice.

use std::time::Instant;

use crate::absorbing::pod_absorbing;
use crate::error::Result;
use crate::params::{ModelParams, NormalizedParams};
use crate::radiation::pod_radiation;
use crate::reference::Preset;

use super::mc::{mc_extrapolated, mc_simulate, McBoundary, McSpec, CONTACT_CONSTANT};
use super::pde::{fpe_solve, BoundaryKind, GridSpec};
use super::OracleCurve;

/// A named parameter set of the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub name: String,
    pub params: NormalizedParams,
    /// First-passage barrier instead of a finite rate.
    pub absorbing: bool,
}

impl Case {
    fn model(&self) -> Result<ModelParams> {
        let p = if self.absorbing {
            NormalizedParams {
                kc_tilde: 0.0,
                ..self.params
            }
        } else {
            self.params
        };
        p.to_unit_model()
    }

    fn closed_form(&self, t: f64) -> Result<f64> {
        let p = self.model()?;
        if self.absorbing {
            pod_absorbing(t, &p)
        } else {
            pod_radiation(t, &p)
        }
    }
}

/// The four published fits plus a radiation case on the line `kc + a = 0`.
pub fn default_cases() -> Vec<Case> {
    let mut cases: Vec<Case> = Preset::ALL
        .iter()
        .map(|p| Case {
            name: p.name().to_string(),
            params: p.params(),
            absorbing: p.variant() == crate::calibration::ModelVariant::Absorbing,
        })
        .collect();
    cases.push(Case {
        name: "critical_drift".into(),
        params: NormalizedParams::new(-0.25, 1.09, 0.25, 0.0),
        absorbing: false,
    });
    cases
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPlan {
    pub cases: Vec<Case>,
    pub pde_nx: usize,
    pub pde_dt: f64,
    pub pde_times: Vec<f64>,
    /// Absolute PoD tolerance of the PDE comparison.
    pub pde_tol: f64,
    pub mc_paths: u64,
    /// Step sizes for the radiation runs, coarse to fine.
    pub mc_dts: Vec<f64>,
    /// Step size for the first-passage runs, which need no extrapolation.
    pub mc_absorbing_dt: f64,
    pub mc_times: Vec<f64>,
    /// Allowed deviation from the closed form, in standard errors.
    pub mc_sigmas: f64,
    /// Allowed deviation from the PDE when checking the contact constant.
    pub contact_sigmas: f64,
    pub seed: u64,
    pub contact_constant: f64,
}

impl ValidationPlan {
    pub fn full(seed: u64) -> Self {
        Self {
            cases: default_cases(),
            pde_nx: 4000,
            pde_dt: 2e-3,
            pde_times: vec![0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0],
            pde_tol: 1e-4,
            mc_paths: 1_000_000,
            mc_dts: vec![1e-2, 1e-3, 1e-4],
            mc_absorbing_dt: 1e-3,
            mc_times: vec![1.0, 5.0, 20.0],
            mc_sigmas: 3.0,
            contact_sigmas: 2.0,
            seed,
            contact_constant: CONTACT_CONSTANT,
        }
    }

    /// Reduced lattice for smoke runs: coarser grids, fewer paths and a
    /// looser five-standard-error gate.
    pub fn quick(seed: u64) -> Self {
        Self {
            pde_nx: 1000,
            pde_dt: 1e-2,
            pde_times: vec![0.5, 1.0, 5.0, 20.0],
            pde_tol: 1e-3,
            mc_paths: 20_000,
            mc_dts: vec![1e-2, 1e-3],
            mc_sigmas: 5.0,
            contact_sigmas: 5.0,
            ..Self::full(seed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// PDE solver against the closed form.
    Pde,
    /// Monte Carlo (extrapolated for radiation cases) against the closed form.
    MonteCarlo,
    /// Extrapolated Monte Carlo against the PDE; tests the contact constant.
    ContactConstant,
    /// The coarsest Monte Carlo level is not closer to the closed form than
    /// the next one.
    StepTrend,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Pde => "pde",
            CheckKind::MonteCarlo => "mc",
            CheckKind::ContactConstant => "mc_contact_constant",
            CheckKind::StepTrend => "mc_step_trend",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub check: CheckKind,
    pub case: String,
    pub t: f64,
    /// Value the oracle is compared against.
    pub reference: f64,
    pub oracle: f64,
    /// Standard error or discretization-error estimate of the oracle.
    pub error_bar: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationRow {
    pub fn deviation(&self) -> f64 {
        self.oracle - self.reference
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub seconds: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationRow> {
        self.rows.iter().filter(|r| !r.passed)
    }
}

pub fn run_validation(plan: &ValidationPlan) -> Result<ValidationReport> {
    let start = Instant::now();
    let mut rows = Vec::new();
    let t_end = plan
        .pde_times
        .iter()
        .chain(&plan.mc_times)
        .fold(0.0f64, |a, &b| a.max(b));
    for case in &plan.cases {
        let p = case.model()?;
        let boundary = if case.absorbing {
            BoundaryKind::Absorbing
        } else {
            BoundaryKind::Radiation
        };
        let mut times = plan.pde_times.clone();
        times.extend(&plan.mc_times);
        times.sort_by(f64::total_cmp);
        times.dedup();
        let grid = GridSpec::for_params(&p, t_end, plan.pde_nx, plan.pde_dt)
            .with_boundary(boundary)
            .with_times(times);
        let pde = fpe_solve(&p, &grid)?.curve;
        for &t in &plan.pde_times {
            let pt = pde.at(t).expect("pde horizon");
            let closed = case.closed_form(t)?;
            rows.push(ValidationRow {
                check: CheckKind::Pde,
                case: case.name.clone(),
                t,
                reference: closed,
                oracle: pt.pod,
                error_bar: pt.error,
                tolerance: plan.pde_tol,
                passed: (pt.pod - closed).abs() <= plan.pde_tol,
            });
        }
        let base = McSpec {
            contact_constant: plan.contact_constant,
            ..McSpec::new(
                plan.mc_paths,
                plan.mc_absorbing_dt,
                plan.seed,
                if case.absorbing {
                    McBoundary::Absorbing
                } else {
                    McBoundary::Radiation
                },
                plan.mc_times.clone(),
            )
        };
        let mc: OracleCurve = if case.absorbing {
            mc_simulate(&p, &base)?
        } else {
            let ex = mc_extrapolated(&p, &base, &plan.mc_dts)?;
            push_trend_rows(&mut rows, case, &ex.levels)?;
            ex.extrapolated
        };
        for pt in &mc.points {
            let closed = case.closed_form(pt.t)?;
            let tol = plan.mc_sigmas * pt.error;
            rows.push(ValidationRow {
                check: CheckKind::MonteCarlo,
                case: case.name.clone(),
                t: pt.t,
                reference: closed,
                oracle: pt.pod,
                error_bar: pt.error,
                tolerance: tol,
                passed: (pt.pod - closed).abs() <= tol,
            });
            if !case.absorbing {
                let reference = pde.at(pt.t).expect("pde horizon");
                let combined = (pt.error.powi(2) + reference.error.powi(2)).sqrt();
                let tol = plan.contact_sigmas * combined;
                rows.push(ValidationRow {
                    check: CheckKind::ContactConstant,
                    case: case.name.clone(),
                    t: pt.t,
                    reference: reference.pod,
                    oracle: pt.pod,
                    error_bar: combined,
                    tolerance: tol,
                    passed: (pt.pod - reference.pod).abs() <= tol,
                });
            }
        }
    }
    Ok(ValidationReport {
        rows,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn push_trend_rows(rows: &mut Vec<ValidationRow>, case: &Case, levels: &[(f64, OracleCurve)]) -> Result<()> {
    let (coarse, next) = (&levels[0].1, &levels[1].1);
    for (c, n) in coarse.points.iter().zip(&next.points) {
        let closed = case.closed_form(c.t)?;
        let combined = (c.error.powi(2) + n.error.powi(2)).sqrt();
        let tol = 2.0 * combined;
        // the coarse level may not be significantly better than the finer one
        let gain = (c.pod - closed).abs() - (n.pod - closed).abs();
        rows.push(ValidationRow {
            check: CheckKind::StepTrend,
            case: case.name.clone(),
            t: c.t,
            reference: n.pod,
            oracle: c.pod,
            error_bar: combined,
            tolerance: tol,
            passed: gain >= -tol,
        });
    }
    Ok(())
}
