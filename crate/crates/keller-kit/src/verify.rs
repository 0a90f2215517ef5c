//! Definitional predicates on value rows and the solution verifier.

use std::fmt;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::system::{Elem, SeqRow, SetRow, SetSystem, SolutionMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("value at position {} is not a member of its set", col + 1)]
    NotRepresentative { col: usize },
    #[error("solution has {solution} rows, system has {system}")]
    RowCountMismatch { system: usize, solution: usize },
}

fn check_len(a: usize, b: usize) -> Result<(), ShapeError> {
    if a == b {
        Ok(())
    } else {
        Err(ShapeError::LengthMismatch { left: a, right: b })
    }
}

/// Universe wide enough to hold every value of every row, plus `base`.
fn widened_universe<'a>(base: usize, rows: impl IntoIterator<Item = &'a SeqRow>) -> usize {
    rows.into_iter()
        .flat_map(|r| &r.values)
        .map(|e| e.0 as usize + 1)
        .chain([base])
        .max()
        .unwrap()
}

/// Does the sequence pick a member of each set?
pub fn is_representative(seq: &SeqRow, row: &SetRow) -> Result<bool, ShapeError> {
    check_len(seq.len(), row.len())?;
    Ok(seq
        .values
        .iter()
        .zip(&row.sets)
        .all(|(&Elem(id), set)| set.contains(id)))
}

/// Count of elements of `set` not already chosen.
fn new_count(set: &ElemSet, used: &ElemSet) -> usize {
    set.iter().filter(|&id| !used.contains(id)).count()
}

/// Is the sequence regular: a value may repeat an earlier one only when the
/// set offers at most one element not seen so far in the row.
pub fn is_regular(seq: &SeqRow, row: &SetRow) -> Result<bool, ShapeError> {
    check_len(seq.len(), row.len())?;
    for (j, (&Elem(id), set)) in seq.values.iter().zip(&row.sets).enumerate() {
        if !set.contains(id) {
            return Err(ShapeError::NotRepresentative { col: j });
        }
    }
    let universe = widened_universe(0, [seq]);
    let mut used = ElemSet::empty(universe);
    for (&Elem(id), set) in seq.values.iter().zip(&row.sets) {
        if used.contains(id) && new_count(set, &used) >= 2 {
            return Ok(false);
        }
        used.insert(id);
    }
    Ok(true)
}

/// Do the two sequences trace identical prefix value-sets at every length?
pub fn are_equivalent(a: &SeqRow, b: &SeqRow) -> Result<bool, ShapeError> {
    check_len(a.len(), b.len())?;
    let universe = widened_universe(0, [a, b]);
    Ok(a.prefix_sets(universe)
        .iter()
        .zip(b.prefix_sets(universe).iter())
        .all(|(x, y)| x == y))
}

/// Do the two sequences trace differing prefix value-sets at every length?
pub fn are_compatible(a: &SeqRow, b: &SeqRow) -> Result<bool, ShapeError> {
    check_len(a.len(), b.len())?;
    let universe = widened_universe(0, [a, b]);
    Ok(a.prefix_sets(universe)
        .iter()
        .zip(b.prefix_sets(universe).iter())
        .all(|(x, y)| x != y))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `sol[row][col]` is not a member of `sys[row][col]`.
    NotRepresentative { row: usize, col: usize },
    /// `sol[row][col]` repeats an earlier value although the set offered two
    /// or more unseen elements.
    Irregular { row: usize, col: usize },
    /// Rows `row_a` and `row_b` have equal value-sets at prefix length `len`.
    EqualPrefixes { row_a: usize, row_b: usize, len: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NotRepresentative { row, col } => {
                write!(f, "row {}, position {}: value not in its set", row + 1, col + 1)
            }
            Violation::Irregular { row, col } => write!(
                f,
                "row {}, position {}: repeated value while two or more new elements were available",
                row + 1,
                col + 1
            ),
            Violation::EqualPrefixes { row_a, row_b, len } => write!(
                f,
                "rows {} and {}: equal prefix value-sets at length {len}",
                row_a + 1,
                row_b + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            write!(f, "solution verified")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Check a value matrix against a system: every row a regular representative
/// of its set row, all row pairs compatible. Lists every violation found.
///
/// Values outside the system's alphabet are reported as non-representative
/// rather than rejected up front.
pub fn verify_solution(
    sys: &SetSystem,
    sol: &SolutionMatrix,
) -> Result<VerificationReport, ShapeError> {
    if sol.n() != sys.n() {
        return Err(ShapeError::RowCountMismatch { system: sys.n(), solution: sol.n() });
    }
    for row in &sol.rows {
        check_len(row.len(), sys.k())?;
    }

    let universe = widened_universe(sys.universe(), &sol.rows);
    let mut violations = Vec::new();
    let mut chains: Vec<Vec<ElemSet>> = Vec::with_capacity(sol.n());

    for (i, seq) in sol.rows.iter().enumerate() {
        let mut used = ElemSet::empty(universe);
        for (j, &Elem(id)) in seq.values.iter().enumerate() {
            let set = sys.set(i, j);
            if !set.contains(id) {
                violations.push(Violation::NotRepresentative { row: i, col: j });
            }
            if used.contains(id) && new_count(set, &used) >= 2 {
                violations.push(Violation::Irregular { row: i, col: j });
            }
            used.insert(id);
        }
        chains.push(seq.prefix_sets(universe));
    }

    for a in 0..sol.n() {
        for b in a + 1..sol.n() {
            for t in 0..sys.k() {
                if chains[a][t] == chains[b][t] {
                    violations.push(Violation::EqualPrefixes {
                        row_a: a,
                        row_b: b,
                        len: t + 1,
                    });
                }
            }
        }
    }

    Ok(VerificationReport { violations })
}
