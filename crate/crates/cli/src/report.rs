//! Reference tables and figure data.

use extbc::reference::YEARS;
use extbc::{calibrate, fitted_table, ModelVariant, NormalizedParams, Preset, Rating};

use crate::args::{Options, ReportKind};
use crate::commands::{calibration_config, linear_grid, ModelChoice, BP_PER_UNIT};
use crate::error::Result;
use crate::output::{format_value, Table};

/// Initial-distance spreads of the short-term spread figure.
pub const FIG3_DELTAS: [f64; 5] = [0.0, 0.1, 0.25, 0.5, 1.0];

/// Upper edge of the short-time zoom panel, years.
pub const ZOOM_T_MAX: f64 = 4.0;

const FIGURE_POINTS: usize = 201;
const FIG3_T_MAX: f64 = 2.0;

/// Column order of the figure reports.
const FIGURE_PRESETS: [Preset; 4] = [
    Preset::BbAbsorbing,
    Preset::BbRadiation,
    Preset::BAbsorbing,
    Preset::BRadiation,
];

pub fn run_report(kind: ReportKind, o: &Options) -> Result<Table> {
    match kind {
        ReportKind::Table1 => table1(),
        ReportKind::Table2 => table2(o),
        ReportKind::Fig1 => fig1(o),
        ReportKind::Fig2 => fig2(o),
        ReportKind::Fig3 => fig3(o),
    }
}

fn choice(p: NormalizedParams, variant: ModelVariant) -> ModelChoice {
    ModelChoice {
        params: p,
        variant,
        sigma: 1.0,
    }
}

fn preset_choice(p: Preset) -> ModelChoice {
    choice(p.params(), p.variant())
}

/// PoD and hazard vanish as `t → 0` without initial uncertainty.
fn pod_at(m: &ModelChoice, t: f64) -> extbc::Result<f64> {
    if t == 0.0 && m.params.delta_tilde == 0.0 {
        Ok(0.0)
    } else {
        m.pod(t)
    }
}

fn hazard_at(m: &ModelChoice, t: f64) -> extbc::Result<f64> {
    if t == 0.0 && m.params.delta_tilde == 0.0 {
        Ok(0.0)
    } else {
        m.hazard(t)
    }
}

fn figure_grid(o: &Options, t_max: f64) -> Result<Vec<f64>> {
    linear_grid(
        o.t_min.unwrap_or(0.0),
        o.t_max.unwrap_or(t_max),
        o.t_points.unwrap_or(FIGURE_POINTS),
    )
}

/// Observed and model PoD for both ratings at the reference horizons.
fn table1() -> Result<Table> {
    let mut table = Table::new([
        "year",
        "bb_observed_pct",
        "bb_bc_pct",
        "bb_ebc_pct",
        "b_observed_pct",
        "b_bc_pct",
        "b_ebc_pct",
    ]);
    let fitted = |p: Preset| -> Result<Vec<f64>> {
        Ok(fitted_table(&p.params(), &YEARS, p.variant())?.values().collect())
    };
    let bb_bc = fitted(Preset::BbAbsorbing)?;
    let bb_ebc = fitted(Preset::BbRadiation)?;
    let b_bc = fitted(Preset::BAbsorbing)?;
    let b_ebc = fitted(Preset::BRadiation)?;
    for i in 0..YEARS.len() {
        let mut row = vec![format!("{}", YEARS[i] as u32)];
        row.extend(
            [
                Rating::BB.observed_percent()[i],
                bb_bc[i],
                bb_ebc[i],
                Rating::B.observed_percent()[i],
                b_bc[i],
                b_ebc[i],
            ]
            .map(format_value),
        );
        table.push_row(row);
    }
    Ok(table)
}

/// Fresh calibrations next to the published fits.
fn table2(o: &Options) -> Result<Table> {
    let mut table = Table::new([
        "preset",
        "rating",
        "variant",
        "rho_pp",
        "published_rho_pp",
        "delta_rho_pp",
        "a_tilde",
        "published_a_tilde",
        "delta_a_tilde",
        "x0_tilde",
        "published_x0_tilde",
        "delta_x0_tilde",
        "kc_tilde",
        "published_kc_tilde",
        "delta_kc_tilde",
    ]);
    for p in Preset::ALL {
        let config = calibration_config(&search_settings(o), p.variant());
        let r = calibrate(&p.rating().observed_dataset(), &config)?;
        let published = p.params();
        let mut row = vec![
            p.name().to_string(),
            p.rating().label().to_string(),
            p.variant().name().to_string(),
        ];
        for (ours, theirs) in [
            (r.rho, p.published_rho()),
            (r.params.a_tilde, published.a_tilde),
            (r.params.x0_tilde, published.x0_tilde),
            (r.params.kc_tilde, published.kc_tilde),
        ] {
            row.extend([ours, theirs, ours - theirs].map(format_value));
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Refits always start from the default initial point; only the search
/// settings carry over.
fn search_settings(o: &Options) -> Options {
    Options {
        seed: o.seed,
        trials: o.trials,
        q: o.q,
        ..Default::default()
    }
}

fn preset_columns(suffix: &str) -> Vec<String> {
    FIGURE_PRESETS.iter().map(|p| format!("{}_{suffix}", p.name())).collect()
}

/// Dense PoD curves: the full range and the short-time zoom.
fn fig1(o: &Options) -> Result<Table> {
    let mut header = vec!["panel".to_string(), "t_yr".to_string()];
    header.extend(preset_columns("pct"));
    let mut table = Table::new(header);
    let panels = [
        ("full", figure_grid(o, YEARS[YEARS.len() - 1])?),
        ("zoom", linear_grid(0.0, ZOOM_T_MAX, o.t_points.unwrap_or(FIGURE_POINTS))?),
    ];
    for (panel, grid) in panels {
        for &t in &grid {
            let mut row = vec![panel.to_string(), format_value(t)];
            for p in FIGURE_PRESETS {
                row.push(format_value(100.0 * pod_at(&preset_choice(p), t)?));
            }
            table.push_row(row);
        }
    }
    Ok(table)
}

/// Spread term structures of the four published fits.
fn fig2(o: &Options) -> Result<Table> {
    let mut header = vec!["t_yr".to_string()];
    header.extend(preset_columns("bp"));
    let mut table = Table::new(header);
    for t in figure_grid(o, YEARS[YEARS.len() - 1])? {
        let mut row = vec![t];
        for p in FIGURE_PRESETS {
            row.push(BP_PER_UNIT * hazard_at(&preset_choice(p), t)?);
        }
        table.push_values(&row);
    }
    Ok(table)
}

/// Short-term spreads of the extended fits for each initial uncertainty.
fn fig3(o: &Options) -> Result<Table> {
    let ratings = [Preset::BbRadiation, Preset::BRadiation];
    let mut header = vec!["t_yr".to_string()];
    let mut models = Vec::new();
    for p in ratings {
        for d in FIG3_DELTAS {
            header.push(format!("{}_delta_{d}_bp", p.rating().label().to_lowercase()));
            models.push(choice(
                NormalizedParams {
                    delta_tilde: d,
                    ..p.params()
                },
                ModelVariant::Radiation,
            ));
        }
    }
    let mut table = Table::new(header);
    for t in figure_grid(o, FIG3_T_MAX)? {
        let mut row = vec![t];
        for m in &models {
            row.push(BP_PER_UNIT * hazard_at(m, t)?);
        }
        table.push_values(&row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use extbc::calibration::model_pod;

    fn column(t: &Table, name: &str) -> Vec<f64> {
        let i = t.header.iter().position(|h| h == name).unwrap();
        t.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    #[test]
    fn table1_shape_and_values() {
        let t = table1().unwrap();
        assert_eq!(t.header.len(), 7);
        assert_eq!(t.rows.len(), 20);
        assert_eq!(column(&t, "b_observed_pct")[0], 4.51);
        assert_eq!(column(&t, "bb_observed_pct")[19], 22.96);
        // first-passage 'BB' fit agrees with the published column
        for (ours, theirs) in column(&t, "bb_bc_pct").iter().zip(Preset::BbAbsorbing.fitted_percent()) {
            assert!((ours - theirs).abs() <= 0.5, "{ours} vs {theirs}");
        }
        let b_ebc = column(&t, "b_ebc_pct");
        assert!((b_ebc[0] - 4.633647795).abs() < 1e-9);
        assert!((column(&t, "bb_ebc_pct")[9] - 16.19312266).abs() < 1e-8);
    }

    #[test]
    fn fig1_panels() {
        let t = fig1(&Options::default()).unwrap();
        let zoom: Vec<_> = t.rows.iter().filter(|r| r[0] == "zoom").collect();
        assert_eq!(zoom.len(), FIGURE_POINTS);
        assert_eq!(zoom.last().unwrap()[1].parse::<f64>().unwrap(), ZOOM_T_MAX);
        let at20 = t.rows.iter().find(|r| r[0] == "full" && r[1].starts_with("20.")).unwrap();
        let b: f64 = at20[5].parse().unwrap();
        assert!((b - 100.0 * model_pod(&Preset::BRadiation.params(), ModelVariant::Radiation, 20.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn fig2_spread_shapes() {
        let t = fig2(&Options::default()).unwrap();
        let s = column(&t, "b_ebc_bp");
        let (imax, _) = s
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert!(imax > 0 && imax < s.len() - 1);
        // 'BB' still rises where 'B' already falls
        let bb = column(&t, "bb_ebc_bp");
        let t_yr = column(&t, "t_yr");
        let i1 = t_yr.iter().position(|&t| t == 1.0).unwrap();
        let i2 = t_yr.iter().position(|&t| t == 2.0).unwrap();
        assert!(bb[i2] > bb[i1]);
        assert!(s[i2] < s[i1]);
    }

    #[test]
    fn fig3_zero_delta_is_reference_curve() {
        let o = Options {
            t_min: Some(0.05),
            ..Default::default()
        };
        let t = fig3(&o).unwrap();
        assert_eq!(t.header.len(), 11);
        let s = column(&t, "b_delta_0_bp")[0];
        let m = preset_choice(Preset::BRadiation);
        assert_eq!(s, format_value(1e4 * m.hazard(0.05).unwrap()).parse::<f64>().unwrap());
        let t0 = fig3(&Options::default()).unwrap();
        let short: Vec<f64> = [0.1, 0.25, 0.5]
            .iter()
            .map(|d| column(&t0, &format!("b_delta_{d}_bp"))[0])
            .collect();
        assert!(short[0] > 0.0 && short[1] > short[0] && short[2] > short[1]);
    }

    #[test]
    fn table2_reports_deltas() {
        let o = Options {
            trials: Some(300),
            ..Default::default()
        };
        let t = table2(&o).unwrap();
        assert_eq!(t.rows.len(), 4);
        let rho = column(&t, "rho_pp");
        let published = column(&t, "published_rho_pp");
        let delta = column(&t, "delta_rho_pp");
        for i in 0..4 {
            assert!((rho[i] - published[i] - delta[i]).abs() < 1e-8);
        }
    }
}
