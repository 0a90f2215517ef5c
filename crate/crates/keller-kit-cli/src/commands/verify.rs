//! `verify`: check a solution file against its instance.

use std::path::Path;

use keller_kit::verify::verify_solution;

use crate::cli::CliError;
use crate::formats;

pub fn run(instance: &Path, solution: &Path) -> Result<(), CliError> {
    let sys = formats::read_instance(instance).map_err(CliError::invalid)?;
    let sol = formats::read_solution(solution, sys.alphabet()).map_err(|msg| {
        // A malformed grid is a usage problem; bad elements are domain data.
        if msg.starts_with("rows must form") {
            CliError::usage(msg)
        } else {
            CliError::invalid(msg)
        }
    })?;
    let report = verify_solution(&sys, &sol).map_err(|e| CliError::usage(e.to_string()))?;
    if report.pass() {
        println!("ok: solution certifies");
        Ok(())
    } else {
        for violation in &report.violations {
            println!("violation: {violation}");
        }
        Err(CliError::invalid(format!(
            "solution fails verification ({} violation{})",
            report.violations.len(),
            if report.violations.len() == 1 { "" } else { "s" }
        )))
    }
}
