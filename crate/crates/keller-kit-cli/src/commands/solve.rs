//! `solve`: construct a certified solution for one instance.

use std::path::Path;

use keller_kit::solver::{solve, FirstColumn, SolveError};
use keller_kit::system::SetSystem;

use crate::cli::CliError;
use crate::commands::resolve_column;
use crate::formats;

pub fn run(
    instance: &Path,
    first_column: Option<&[String]>,
    emit: Option<&Path>,
) -> Result<(), CliError> {
    let sys = formats::read_instance(instance).map_err(CliError::invalid)?;
    let pinned = match first_column {
        Some(tokens) => {
            if tokens.len() != sys.n() {
                return Err(CliError::usage(format!(
                    "--first-column needs {} elements, got {}",
                    sys.n(),
                    tokens.len()
                )));
            }
            let elems = resolve_column(sys.alphabet(), tokens)?;
            Some(FirstColumn::new(&sys, elems).map_err(|e| CliError::invalid(e.to_string()))?)
        }
        None => None,
    };
    let sol = solve(&sys, pinned.as_ref()).map_err(|e| match e {
        SolveError::Certification { report } => {
            CliError::certification(format!("solution failed certification:\n{report}"))
        }
        other => CliError::invalid(other.to_string()),
    })?;
    print_rows(&sys, &sol.rows);
    if let Some(path) = emit {
        formats::write_canonical(path, &formats::solution_value(&sol))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn print_rows(sys: &SetSystem, rows: &[keller_kit::system::SeqRow]) {
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> =
            row.values.iter().map(|&e| sys.alphabet().label(e)).collect();
        println!("row {}: {}", i + 1, cells.join(" "));
    }
}
