use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extbc::{ModelVariant, Preset};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "extbc", version, about = "Extended Black-Cox structural default-risk model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Cumulative probability of default, percent.
    Pod,
    /// Hazard rate, per year.
    Hazard,
    /// Zero-recovery credit spread, basis points per year.
    Spread,
    /// Density of the log-distance to the barrier at `--t-max`.
    Density,
    /// Fit the model to a dataset by random search.
    Calibrate,
    /// Compare the PDE and Monte Carlo oracles with the closed forms.
    Validate,
    /// Reproduce a reference table or figure as CSV.
    Report {
        #[arg(value_enum)]
        kind: ReportKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Table1,
    Table2,
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Absorbing,
    Radiation,
}

impl From<VariantArg> for ModelVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Absorbing => ModelVariant::Absorbing,
            VariantArg::Radiation => ModelVariant::Radiation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PresetArg {
    BBc,
    BEbc,
    BbBc,
    BbEbc,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::BBc => Preset::BAbsorbing,
            PresetArg::BEbc => Preset::BRadiation,
            PresetArg::BbBc => Preset::BbAbsorbing,
            PresetArg::BbEbc => Preset::BbRadiation,
        }
    }
}

/// Shared flags. Any of them may also come from `--config`; flags given on
/// the command line take precedence.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Normalized drift a/σ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a_tilde: Option<f64>,
    /// Normalized initial log-distance x0/σ.
    #[arg(long, global = true)]
    pub x0_tilde: Option<f64>,
    /// Normalized default rate kc/σ, year^(-1/2).
    #[arg(long, global = true)]
    pub kc_tilde: Option<f64>,
    /// Normalized spread of the initial distance δ/σ.
    #[arg(long, global = true)]
    pub delta_tilde: Option<f64>,
    /// Asset volatility; only rescales the density abscissa.
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_points: Option<usize>,
    /// CSV with header `year,pod_percent[,weight]`.
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// Dataset label; defaults to the file stem.
    #[arg(long, global = true)]
    pub label: Option<String>,
    /// Comma-separated weights, one per dataset row.
    #[arg(long, global = true)]
    pub weights: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Random-search contraction factor in (0, 1].
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Reduced validation lattice.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Load a published parameter set; explicit flags override its values.
    #[arg(long, global = true, value_enum)]
    pub preset: Option<PresetArg>,
    /// Flat `key = value` file using the flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Scales the Monte Carlo contact constant (debug builds only).
    #[arg(long, global = true, hide = true)]
    pub fault_contact_factor: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config line {line}: invalid value {value:?} for {key}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str, line: usize) -> Result<T> {
    T::from_str(value, false)
        .map_err(|_| CliError::Usage(format!("config line {line}: invalid value {value:?} for {key}")))
}

fn fill<T>(slot: &mut Option<T>, value: Result<T>) -> Result<()> {
    let v = value?;
    if slot.is_none() {
        *slot = Some(v);
    }
    Ok(())
}

impl Options {
    /// Fills unset options from `key = value` lines. Blank lines and lines
    /// starting with `#` are skipped; keys may carry a leading `--`.
    pub fn merge_config_text(&mut self, text: &str) -> Result<()> {
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {line}: expected key = value")))?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            let value = value.trim();
            if !seen.insert(key.clone()) {
                return Err(CliError::Usage(format!("config line {line}: duplicate key {key}")));
            }
            let k = key.as_str();
            match k {
                "a-tilde" => fill(&mut self.a_tilde, parse_value(k, value, line))?,
                "x0-tilde" => fill(&mut self.x0_tilde, parse_value(k, value, line))?,
                "kc-tilde" => fill(&mut self.kc_tilde, parse_value(k, value, line))?,
                "delta-tilde" => fill(&mut self.delta_tilde, parse_value(k, value, line))?,
                "sigma" => fill(&mut self.sigma, parse_value(k, value, line))?,
                "variant" => fill(&mut self.variant, parse_enum(k, value, line))?,
                "t-min" => fill(&mut self.t_min, parse_value(k, value, line))?,
                "t-max" => fill(&mut self.t_max, parse_value(k, value, line))?,
                "t-points" => fill(&mut self.t_points, parse_value(k, value, line))?,
                "dataset" => fill(&mut self.dataset, Ok(PathBuf::from(value)))?,
                "label" => fill(&mut self.label, Ok(value.to_string()))?,
                "weights" => fill(&mut self.weights, Ok(value.to_string()))?,
                "seed" => fill(&mut self.seed, parse_value(k, value, line))?,
                "trials" => fill(&mut self.trials, parse_value(k, value, line))?,
                "q" => fill(&mut self.q, parse_value(k, value, line))?,
                "out" => fill(&mut self.out, Ok(PathBuf::from(value)))?,
                "quick" => self.quick |= parse_value::<bool>(k, value, line)?,
                "preset" => fill(&mut self.preset, parse_enum(k, value, line))?,
                _ => return Err(CliError::Usage(format!("config line {line}: unknown key {key}"))),
            }
        }
        Ok(())
    }

    pub fn merge_config_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.merge_config_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = Cli::try_parse_from(["extbc", "pod", "--preset", "b_ebc", "--a-tilde", "-0.1"]).unwrap();
        assert_eq!(cli.opts.preset, Some(PresetArg::BEbc));
        assert_eq!(cli.opts.a_tilde, Some(-0.1));
        let cli = Cli::try_parse_from(["extbc", "report", "table1"]).unwrap();
        assert!(matches!(cli.command, Command::Report { kind: ReportKind::Table1 }));
    }

    #[test]
    fn command_line_overrides_config() {
        let mut o = Options {
            a_tilde: Some(0.3),
            ..Default::default()
        };
        o.merge_config_text("# fit\na-tilde = 0.1\n--x0_tilde=2\nvariant = absorbing\nquick = true\n\npreset=bb_ebc\n")
            .unwrap();
        assert_eq!(o.a_tilde, Some(0.3));
        assert_eq!(o.x0_tilde, Some(2.0));
        assert_eq!(o.variant, Some(VariantArg::Absorbing));
        assert_eq!(o.preset, Some(PresetArg::BbEbc));
        assert!(o.quick);
    }

    #[test]
    fn config_errors_are_usage_errors() {
        for text in ["bogus = 1", "a-tilde", "t-points = 1.5", "variant = maybe", "q=1\nq=2"] {
            let err = Options::default().merge_config_text(text).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{text}");
        }
    }
}
