use extbc::calibration::DEFAULT_SEED;
use extbc::oracle::{run_validation, ValidationPlan, ValidationReport};

use crate::args::Options;
use crate::error::{CliError, Result};
use crate::output::{format_value, Table};

/// Builds the plan from the options. The hidden fault factor is honoured
/// only in debug builds, where it serves as a negative control.
pub fn plan(o: &Options) -> Result<ValidationPlan> {
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let mut plan = if o.quick {
        ValidationPlan::quick(seed)
    } else {
        ValidationPlan::full(seed)
    };
    if let Some(f) = o.fault_contact_factor {
        if !cfg!(debug_assertions) {
            return Err(CliError::Usage("fault injection is only available in debug builds".into()));
        }
        plan.contact_constant *= f;
    }
    Ok(plan)
}

pub fn report_table(r: &ValidationReport) -> Table {
    let mut table = Table::new([
        "check",
        "case",
        "t_yr",
        "reference_pct",
        "oracle_pct",
        "deviation_pct",
        "error_bar_pct",
        "tolerance_pct",
        "passed",
    ]);
    for row in &r.rows {
        let mut cells = vec![row.check.name().to_string(), row.case.clone(), format_value(row.t)];
        cells.extend(
            [row.reference, row.oracle, row.deviation(), row.error_bar, row.tolerance]
                .map(|v| format_value(100.0 * v)),
        );
        cells.push(row.passed.to_string());
        table.push_row(cells);
    }
    table
}

/// Runs the lattice, writes the table, and fails if any gate failed.
pub fn run(o: &Options) -> Result<()> {
    let plan = plan(o)?;
    let report = run_validation(&plan)?;
    let table = report_table(&report);
    table.emit(o.out.as_deref())?;
    let failures: Vec<String> = report
        .failures()
        .map(|r| format!("{} {} t={}", r.check.name(), r.case, r.t))
        .collect();
    eprintln!(
        "validate: {} comparisons, {} failed, {:.1} s",
        report.rows.len(),
        failures.len(),
        report.seconds
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(failures.join("; ")))
    }
}
