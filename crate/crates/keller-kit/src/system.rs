//! Core domain types: alphabets, candidate-set matrices, and value matrices.

use std::fmt;

use thiserror::Error;

use crate::bitset::ElemSet;

/// Dense element id. Display names, when any, live in the owning [`Alphabet`].
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("system has no rows")]
    NoRows,
    #[error("row {row} has {got} sets, expected {expected}")]
    RaggedRow { row: usize, got: usize, expected: usize },
    #[error("row {row}, column {col}: empty set")]
    EmptySet { row: usize, col: usize },
    #[error("row {row}, column {col}: element id {id} outside alphabet of size {size}")]
    ElementOutOfRange { row: usize, col: usize, id: u32, size: usize },
    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },
}

/// Element universe: a size plus optional display labels (one per id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Alphabet {
    pub fn plain(size: usize) -> Self {
        Alphabet { size, labels: None }
    }

    pub fn labeled(labels: Vec<String>) -> Result<Self, SystemError> {
        let mut seen = std::collections::BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(SystemError::DuplicateLabel { label: label.clone() });
            }
        }
        Ok(Alphabet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(ls) if (e.0 as usize) < ls.len() => ls[e.0 as usize].clone(),
            _ => e.0.to_string(),
        }
    }

    /// Resolve a user-supplied token: label match first, then a bare id.
    pub fn lookup(&self, token: &str) -> Option<Elem> {
        if let Some(ls) = &self.labels {
            if let Some(pos) = ls.iter().position(|l| l == token) {
                return Some(Elem(pos as u32));
            }
        }
        match token.parse::<u32>() {
            Ok(id) if (id as usize) < self.size => Some(Elem(id)),
            _ => None,
        }
    }
}

/// One row of candidate sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRow {
    pub sets: Vec<ElemSet>,
}

impl SetRow {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// An n×k matrix of candidate sets over one alphabet.
///
/// Construction enforces shape (uniform k, non-empty sets, ids in range); the
/// cardinality-≥-n condition is checked separately by [`validate_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    alphabet: Alphabet,
    rows: Vec<SetRow>,
    k: usize,
}

impl SetSystem {
    pub fn new(alphabet: Alphabet, cells: Vec<Vec<Vec<u32>>>) -> Result<Self, SystemError> {
        if cells.is_empty() {
            return Err(SystemError::NoRows);
        }
        let k = cells[0].len();
        let size = alphabet.size();
        let mut rows = Vec::with_capacity(cells.len());
        for (i, row) in cells.iter().enumerate() {
            if row.len() != k {
                return Err(SystemError::RaggedRow { row: i, got: row.len(), expected: k });
            }
            let mut sets = Vec::with_capacity(k);
            for (j, ids) in row.iter().enumerate() {
                if ids.is_empty() {
                    return Err(SystemError::EmptySet { row: i, col: j });
                }
                for &id in ids {
                    if id as usize >= size {
                        return Err(SystemError::ElementOutOfRange { row: i, col: j, id, size });
                    }
                }
                sets.push(ElemSet::from_ids(size, ids));
            }
            rows.push(SetRow { sets });
        }
        Ok(SetSystem { alphabet, rows, k })
    }

    /// Assemble from prebuilt rows; used by the solver when deriving systems.
    pub fn from_rows(alphabet: Alphabet, rows: Vec<SetRow>, k: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == k));
        debug_assert!(rows
            .iter()
            .flat_map(|r| &r.sets)
            .all(|s| !s.is_empty() && s.universe() == alphabet.size()));
        SetSystem { alphabet, rows, k }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn universe(&self) -> usize {
        self.alphabet.size()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rows(&self) -> &[SetRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SetRow {
        &self.rows[i]
    }

    pub fn set(&self, i: usize, j: usize) -> &ElemSet {
        &self.rows[i].sets[j]
    }
}

/// One row of chosen values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqRow {
    pub values: Vec<Elem>,
}

impl SeqRow {
    pub fn new(values: Vec<Elem>) -> Self {
        SeqRow { values }
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        SeqRow { values: ids.iter().map(|&id| Elem(id)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The chain of prefix value-sets, one per prefix length 1..=len.
    pub fn prefix_sets(&self, universe: usize) -> Vec<ElemSet> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = ElemSet::empty(universe);
        for &Elem(id) in &self.values {
            acc.insert(id);
            out.push(acc.clone());
        }
        out
    }
}

/// An n×k matrix of chosen values; `verify::verify_solution` decides whether it
/// solves a given system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionMatrix {
    pub rows: Vec<SeqRow>,
}

impl SolutionMatrix {
    pub fn new(rows: Vec<SeqRow>) -> Self {
        SolutionMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.rows.first().map_or(0, SeqRow::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationViolation {
    RowCount { got: usize, expected: usize },
    SmallSet { row: usize, col: usize, cardinality: usize, required: usize },
}

impl fmt::Display for ValidationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationViolation::RowCount { got, expected } => {
                write!(f, "system has {got} rows, expected {expected}")
            }
            ValidationViolation::SmallSet { row, col, cardinality, required } => write!(
                f,
                "row {}, column {}: cardinality {cardinality} < {required}",
                row + 1,
                col + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<ValidationViolation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            return write!(f, "system valid");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Check the defining cardinality condition: every set has at least `n`
/// elements, and the system has exactly `n` rows.
pub fn validate_system(sys: &SetSystem, n: usize) -> ValidationReport {
    let mut violations = Vec::new();
    if sys.n() != n {
        violations.push(ValidationViolation::RowCount { got: sys.n(), expected: n });
    }
    for (i, row) in sys.rows().iter().enumerate() {
        for (j, set) in row.sets.iter().enumerate() {
            let cardinality = set.len();
            if cardinality < n {
                violations.push(ValidationViolation::SmallSet {
                    row: i,
                    col: j,
                    cardinality,
                    required: n,
                });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Uniform system: every cell is the same set.
    pub fn uniform(n: usize, k: usize, ids: &[u32]) -> SetSystem {
        let universe = ids.iter().max().map_or(1, |&m| m as usize + 1);
        SetSystem::new(
            Alphabet::plain(universe),
            vec![vec![ids.to_vec(); k]; n],
        )
        .unwrap()
    }

    #[test]
    fn validate_minimum_cardinality_met() {
        let sys = uniform(2, 3, &[1, 2]);
        assert!(validate_system(&sys, 2).pass());
    }

    #[test]
    fn validate_flags_small_cell() {
        let mut cells = vec![vec![vec![1, 2, 3]; 2]; 3];
        cells[1][0] = vec![1, 2];
        let sys = SetSystem::new(Alphabet::plain(4), cells).unwrap();
        let report = validate_system(&sys, 3);
        assert_eq!(
            report.violations,
            vec![ValidationViolation::SmallSet { row: 1, col: 0, cardinality: 2, required: 3 }]
        );
    }

    #[test]
    fn validate_uniform_four() {
        let sys = uniform(4, 6, &[1, 2, 3, 4]);
        assert!(validate_system(&sys, 4).pass());
    }

    #[test]
    fn prefix_sets_chain() {
        let u = 6;
        assert_eq!(
            SeqRow::from_ids(&[1, 2, 2]).prefix_sets(u),
            vec![
                ElemSet::from_ids(u, &[1]),
                ElemSet::from_ids(u, &[1, 2]),
                ElemSet::from_ids(u, &[1, 2]),
            ]
        );
        assert!(SeqRow::from_ids(&[]).prefix_sets(u).is_empty());
        assert_eq!(
            SeqRow::from_ids(&[3, 4, 1, 1]).prefix_sets(u),
            vec![
                ElemSet::from_ids(u, &[3]),
                ElemSet::from_ids(u, &[3, 4]),
                ElemSet::from_ids(u, &[1, 3, 4]),
                ElemSet::from_ids(u, &[1, 3, 4]),
            ]
        );
    }

    #[test]
    fn alphabet_lookup_prefers_labels() {
        let a = Alphabet::labeled(vec!["x".into(), "7".into(), "y".into()]).unwrap();
        assert_eq!(a.lookup("x"), Some(Elem(0)));
        assert_eq!(a.lookup("7"), Some(Elem(1))); // label match wins over id parse
        assert_eq!(a.lookup("2"), Some(Elem(2)));
        assert_eq!(a.lookup("z"), None);
        assert!(Alphabet::labeled(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(matches!(
            SetSystem::new(Alphabet::plain(3), vec![]),
            Err(SystemError::NoRows)
        ));
        assert!(matches!(
            SetSystem::new(Alphabet::plain(3), vec![vec![vec![1]], vec![vec![1], vec![2]]]),
            Err(SystemError::RaggedRow { row: 1, .. })
        ));
        assert!(matches!(
            SetSystem::new(Alphabet::plain(3), vec![vec![vec![]]]),
            Err(SystemError::EmptySet { row: 0, col: 0 })
        ));
        assert!(matches!(
            SetSystem::new(Alphabet::plain(3), vec![vec![vec![3]]]),
            Err(SystemError::ElementOutOfRange { id: 3, .. })
        ));
    }
}
