//! `oracle`: exhaustive backtracking search over one instance.

use std::path::Path;

use keller_kit::oracle::{
    enumerate_solutions, exists_solution, extendable, Answer, SearchBudget,
};
use keller_kit::solver::FirstColumn;
use keller_kit::system::SetSystem;

use crate::cli::CliError;
use crate::commands::resolve_column;
use crate::formats;

pub fn run(
    instance: &Path,
    enumerate: Option<usize>,
    exists: bool,
    extendable_tokens: Option<&[String]>,
    max_nodes: Option<usize>,
) -> Result<(), CliError> {
    let modes = usize::from(enumerate.is_some())
        + usize::from(exists)
        + usize::from(extendable_tokens.is_some());
    if modes != 1 {
        return Err(CliError::usage(
            "choose exactly one of --enumerate, --exists, --extendable",
        ));
    }
    let sys = formats::read_instance(instance).map_err(CliError::invalid)?;
    let mut budget = SearchBudget::default();
    if let Some(nodes) = max_nodes {
        if nodes == 0 {
            return Err(CliError::usage("--max-nodes must be positive"));
        }
        budget.max_nodes = nodes;
    }

    if exists {
        let answer =
            exists_solution(&sys, budget).map_err(|e| CliError::invalid(e.to_string()))?;
        return report_answer(answer);
    }

    if let Some(tokens) = extendable_tokens {
        if tokens.len() != sys.n() {
            return Err(CliError::usage(format!(
                "--extendable needs {} elements, got {}",
                sys.n(),
                tokens.len()
            )));
        }
        let elems = resolve_column(sys.alphabet(), tokens)?;
        let column =
            FirstColumn::new(&sys, elems).map_err(|e| CliError::invalid(e.to_string()))?;
        let answer =
            extendable(&sys, &column, budget).map_err(|e| CliError::invalid(e.to_string()))?;
        return report_answer(answer);
    }

    let wanted = enumerate.expect("mode count checked above");
    if wanted == 0 {
        return Err(CliError::usage("--enumerate must request at least one solution"));
    }
    budget.max_solutions = wanted;
    let result =
        enumerate_solutions(&sys, budget).map_err(|e| CliError::invalid(e.to_string()))?;
    println!("solutions: {}", result.solutions.len());
    for (idx, sol) in result.solutions.iter().enumerate() {
        println!("solution {}:", idx + 1);
        print_rows(&sys, &sol.rows);
    }
    if !result.exhausted && result.solutions.len() < wanted {
        return Err(CliError::invalid(format!(
            "node budget exhausted after {} nodes; enumeration may be incomplete",
            result.nodes
        )));
    }
    Ok(())
}

fn report_answer(answer: Answer) -> Result<(), CliError> {
    match answer {
        Answer::Yes => {
            println!("true");
            Ok(())
        }
        Answer::No => {
            println!("false");
            Ok(())
        }
        Answer::Unknown => Err(CliError::invalid(
            "node budget exhausted before an answer; raise --max-nodes",
        )),
    }
}

fn print_rows(sys: &SetSystem, rows: &[keller_kit::system::SeqRow]) {
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> =
            row.values.iter().map(|&e| sys.alphabet().label(e)).collect();
        println!("  row {}: {}", i + 1, cells.join(" "));
    }
}
