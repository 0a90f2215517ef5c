//! `poset check-lemma` / `check-prop` / `paths` / `from-row` / `enumerate`.

use std::path::{Path, PathBuf};

use keller_kit::poset::gen::enumerate_branching;
use keller_kit::poset::paths::{disjoint_full_paths, PathMode, PathOutcome};
use keller_kit::poset::{
    check_lemma, check_proposition, is_branching, row_to_poset, PosetError, MAX_GROUND,
};
use serde_json::{json, Value};

use crate::cli::{CliError, PosetCommand};
use crate::formats;

pub fn run(cmd: PosetCommand) -> Result<(), CliError> {
    match cmd {
        PosetCommand::CheckLemma { poset } => check_lemma_cmd(&poset),
        PosetCommand::CheckProp { poset } => check_prop_cmd(&poset),
        PosetCommand::Paths { poset, mode, emit } => paths_cmd(&poset, mode.into(), emit),
        PosetCommand::FromRow { instance, row, emit } => from_row_cmd(&instance, row, emit),
        PosetCommand::Enumerate { n } => enumerate_cmd(n),
    }
}

fn check_lemma_cmd(path: &Path) -> Result<(), CliError> {
    let p = formats::read_poset(path).map_err(CliError::invalid)?;
    let report = check_lemma(&p);
    if let Some(predicate) = report.failed_precondition() {
        return Err(CliError::invalid(format!("poset is not {predicate}")));
    }
    println!("rooted: yes");
    println!("branching: yes");
    println!("leaves: {}", report.leaf_count);
    println!("height levels: {}", report.height_levels);
    if report.inequality_holds() {
        println!("result: pass");
        Ok(())
    } else {
        println!("result: fail");
        Err(CliError::invalid("leaf count is below the height level count"))
    }
}

fn check_prop_cmd(path: &Path) -> Result<(), CliError> {
    let p = formats::read_poset(path).map_err(CliError::invalid)?;
    let report = check_proposition(&p);
    if let Some(predicate) = report.failed_precondition() {
        return Err(CliError::invalid(format!("poset is not {predicate}")));
    }
    println!("wide: yes");
    println!("rooted: yes");
    println!("branching: yes");
    println!("ground set: {}", report.n);
    println!("leaves: {}", report.leaf_count);
    for (elem, charge) in report.charges.iter().enumerate() {
        println!("charge {}: {charge}", elem + 1);
    }
    if report.pass() {
        println!("result: pass");
        Ok(())
    } else {
        println!("result: fail");
        Err(CliError::invalid("leaf count or a singleton charge falls below the bound"))
    }
}

fn paths_cmd(path: &Path, requested: PathMode, emit: Option<PathBuf>) -> Result<(), CliError> {
    let p = formats::read_poset(path).map_err(CliError::invalid)?;
    let outcome = disjoint_full_paths(&p, requested).map_err(map_poset_err)?;
    let (mode, outcome) = match outcome {
        PathOutcome::NoTargets => {
            println!(
                "note: no member has {} elements; reporting leaf mode instead",
                p.n() - 1
            );
            (PathMode::Leaf, disjoint_full_paths(&p, PathMode::Leaf).map_err(map_poset_err)?)
        }
        other => (requested, other),
    };
    println!("mode: {mode}");
    let value = match &outcome {
        PathOutcome::Paths(bundle) => {
            println!("paths: {}", bundle.paths.len());
            for (i, steps) in bundle.paths.iter().enumerate() {
                let rendered: Vec<String> =
                    steps.iter().map(|&m| formats::braced_set(m)).collect();
                println!("path {}: {}", i + 1, rendered.join(" -> "));
            }
            json!({
                "mode": mode.to_string(),
                "paths": bundle
                    .paths
                    .iter()
                    .map(|steps| Value::from(steps.iter().map(|&m| mask_value(m)).collect::<Vec<Value>>()))
                    .collect::<Vec<Value>>(),
            })
        }
        PathOutcome::Cut { vertices, flow } => {
            println!("flow: {flow}");
            let rendered: Vec<String> =
                vertices.iter().map(|&m| formats::braced_set(m)).collect();
            println!("cut: {}", rendered.join(" "));
            json!({
                "cut": vertices.iter().map(|&m| mask_value(m)).collect::<Vec<Value>>(),
                "flow": flow,
                "mode": mode.to_string(),
            })
        }
        PathOutcome::NoTargets => {
            return Err(CliError::invalid("family has no path targets in either mode"))
        }
    };
    if let Some(out) = emit {
        formats::write_canonical(&out, &value)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", out.display())))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn from_row_cmd(instance: &Path, row: usize, emit: Option<PathBuf>) -> Result<(), CliError> {
    let sys = formats::read_instance(instance).map_err(CliError::invalid)?;
    if row == 0 || row > sys.n() {
        return Err(CliError::usage(format!("--row must lie in 1..={}", sys.n())));
    }
    if sys.universe() > MAX_GROUND {
        return Err(CliError::invalid(format!(
            "alphabet of size {} exceeds the poset ground-set bound {MAX_GROUND}",
            sys.universe()
        )));
    }
    let family =
        row_to_poset(sys.row(row - 1), sys.universe()).map_err(map_poset_err)?;
    println!("ground set: {}", family.n());
    println!("members: {}", family.len());
    println!("branching: {}", if is_branching(&family) { "yes" } else { "no" });
    if let Some(out) = emit {
        formats::write_canonical(&out, &formats::poset_value(&family))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", out.display())))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn enumerate_cmd(n: usize) -> Result<(), CliError> {
    let families = enumerate_branching(n).map_err(map_poset_err)?;
    println!("n = {n}: {} rooted branching families", families.len());
    Ok(())
}

fn map_poset_err(e: PosetError) -> CliError {
    CliError::invalid(e.to_string())
}

/// A member mask as a sorted 1-based JSON array.
fn mask_value(mask: u32) -> Value {
    Value::from((0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect::<Vec<u32>>())
}
