//! Exhaustive backtracking enumeration of solutions: independent ground truth
//! for the solver on small systems.

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::solver::{FirstColumn, FirstColumnError};
use crate::system::{validate_system, Elem, SeqRow, SetSystem, SolutionMatrix, ValidationReport};

/// Limits on the backtracking search. A search that stops on either limit is
/// reported as not exhausted, never silently truncated.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_solutions: usize,
    pub max_nodes: usize,
}

impl SearchBudget {
    pub fn new(max_solutions: usize, max_nodes: usize) -> Self {
        assert!(max_solutions > 0 && max_nodes > 0, "budget limits must be positive");
        SearchBudget { max_solutions, max_nodes }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_solutions: 1 << 20, max_nodes: 20_000_000 }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid system: {report}")]
    InvalidSystem { report: ValidationReport },
    #[error(transparent)]
    FirstColumn(#[from] FirstColumnError),
}

/// Three-valued search verdict: a budget stop yields `Unknown`, never `No`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub solutions: Vec<SolutionMatrix>,
    /// True iff the whole search space was explored within budget.
    pub exhausted: bool,
    pub nodes: usize,
}

struct Search<'a> {
    sys: &'a SetSystem,
    pinned: Option<&'a [Elem]>,
    budget: SearchBudget,
    empty: ElemSet,
    values: Vec<Vec<Elem>>,
    chains: Vec<Vec<ElemSet>>,
    solutions: Vec<SolutionMatrix>,
    nodes: usize,
    stopped: bool,
}

impl Search<'_> {
    /// Depth-first over cells in column-major order (rows ascending within a
    /// column, candidate ids ascending), pruning irregular picks and prefix
    /// value-set collisions against rows already at the same length.
    fn run(&mut self, cell: usize) -> bool {
        let n = self.sys.n();
        if cell == n * self.sys.k() {
            let rows = self.values.iter().map(|v| SeqRow::new(v.clone())).collect();
            let sol = SolutionMatrix::new(rows);
            debug_assert!(crate::verify::verify_solution(self.sys, &sol).unwrap().pass());
            self.solutions.push(sol);
            if self.solutions.len() >= self.budget.max_solutions {
                self.stopped = true;
                return false;
            }
            return true;
        }
        let col = cell / n;
        let row = cell % n;
        let set = self.sys.set(row, col);
        let candidates: Vec<u32> = match self.pinned {
            Some(p) if col == 0 => vec![p[row].0],
            _ => set.iter().collect(),
        };
        for id in candidates {
            if self.nodes >= self.budget.max_nodes {
                self.stopped = true;
                return false;
            }
            self.nodes += 1;
            let used = self.chains[row].last().unwrap_or(&self.empty);
            if used.contains(id)
                && set.iter().filter(|&e| !used.contains(e)).nth(1).is_some()
            {
                continue; // repeat while two or more new elements remain
            }
            let mut grown = used.clone();
            grown.insert(id);
            if (0..row).any(|r| self.chains[r][col] == grown) {
                continue; // prefix value-set collision with a finished row
            }
            self.values[row].push(Elem(id));
            self.chains[row].push(grown);
            let keep_going = self.run(cell + 1);
            self.values[row].pop();
            self.chains[row].pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

fn search(sys: &SetSystem, pinned: Option<&[Elem]>, budget: SearchBudget) -> EnumerationResult {
    let n = sys.n();
    let mut s = Search {
        sys,
        pinned,
        budget,
        empty: ElemSet::empty(sys.universe()),
        values: vec![Vec::with_capacity(sys.k()); n],
        chains: vec![Vec::with_capacity(sys.k()); n],
        solutions: Vec::new(),
        nodes: 0,
    stopped: false,
    };
    s.run(0);
    EnumerationResult {
        exhausted: !s.stopped,
        solutions: s.solutions,
        nodes: s.nodes,
    }
}

fn checked(sys: &SetSystem) -> Result<(), OracleError> {
    let report = validate_system(sys, sys.n());
    if report.pass() {
        Ok(())
    } else {
        Err(OracleError::InvalidSystem { report })
    }
}

/// Every solution of the system up to the budget, in search order.
pub fn enumerate_solutions(
    sys: &SetSystem,
    budget: SearchBudget,
) -> Result<EnumerationResult, OracleError> {
    checked(sys)?;
    Ok(search(sys, None, budget))
}

/// Every solution whose first column equals `p`, up to the budget.
pub fn enumerate_extensions(
    sys: &SetSystem,
    p: &FirstColumn,
    budget: SearchBudget,
) -> Result<EnumerationResult, OracleError> {
    checked(sys)?;
    let p = FirstColumn::new(sys, p.values().to_vec())?;
    Ok(search(sys, Some(p.values()), budget))
}

fn to_answer(res: &EnumerationResult) -> Answer {
    if !res.solutions.is_empty() {
        Answer::Yes
    } else if res.exhausted {
        Answer::No
    } else {
        Answer::Unknown
    }
}

/// Does any solution exist? Early-exits on the first one found.
pub fn exists_solution(sys: &SetSystem, budget: SearchBudget) -> Result<Answer, OracleError> {
    checked(sys)?;
    let res = search(sys, None, SearchBudget { max_solutions: 1, ..budget });
    Ok(to_answer(&res))
}

/// Does any solution with first column `p` exist?
pub fn extendable(
    sys: &SetSystem,
    p: &FirstColumn,
    budget: SearchBudget,
) -> Result<Answer, OracleError> {
    checked(sys)?;
    let p = FirstColumn::new(sys, p.values().to_vec())?;
    let res = search(sys, Some(p.values()), SearchBudget { max_solutions: 1, ..budget });
    Ok(to_answer(&res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Alphabet;

    fn sys(universe: usize, cells: Vec<Vec<Vec<u32>>>) -> SetSystem {
        SetSystem::new(Alphabet::plain(universe), cells).unwrap()
    }

    fn uniform(n: usize, k: usize, ids: &[u32]) -> SetSystem {
        let universe = ids.iter().max().map_or(1, |&m| m as usize + 1);
        sys(universe, vec![vec![ids.to_vec(); k]; n])
    }

    fn matrix(rows: &[&[u32]]) -> SolutionMatrix {
        SolutionMatrix::new(rows.iter().map(|ids| SeqRow::from_ids(ids)).collect())
    }

    #[test]
    fn single_row_allows_repeat_when_one_new_element_remains() {
        // At position 2 only one unseen element is left, so repeating the
        // first pick is regular and all four sequences count.
        let s = uniform(1, 2, &[1, 2]);
        let res = enumerate_solutions(&s, SearchBudget::default()).unwrap();
        assert!(res.exhausted);
        assert_eq!(
            res.solutions,
            vec![
                matrix(&[&[1, 1]]),
                matrix(&[&[1, 2]]),
                matrix(&[&[2, 1]]),
                matrix(&[&[2, 2]]),
            ]
        );
    }

    #[test]
    fn two_rows_one_column_yields_both_assignments() {
        let s = uniform(2, 1, &[1, 2]);
        let res = enumerate_solutions(&s, SearchBudget::default()).unwrap();
        assert!(res.exhausted);
        assert_eq!(
            res.solutions,
            vec![matrix(&[&[1], &[2]]), matrix(&[&[2], &[1]])]
        );
    }

    #[test]
    fn uniform_three_by_five_contains_rotating_matrix() {
        let s = uniform(3, 5, &[1, 2, 3]);
        let res = enumerate_solutions(&s, SearchBudget::default()).unwrap();
        assert!(res.exhausted, "budget too small: {} nodes", res.nodes);
        assert!(!res.solutions.is_empty());
        let rotating = matrix(&[
            &[1, 2, 2, 2, 2],
            &[2, 3, 3, 3, 3],
            &[3, 1, 1, 1, 1],
        ]);
        assert!(res.solutions.contains(&rotating));
    }

    #[test]
    fn exists_and_extendable_answers() {
        let s = uniform(3, 3, &[1, 2, 3]);
        assert_eq!(exists_solution(&s, SearchBudget::default()).unwrap(), Answer::Yes);
        let p = FirstColumn::new(&s, vec![Elem(1), Elem(2), Elem(3)]).unwrap();
        assert_eq!(extendable(&s, &p, SearchBudget::default()).unwrap(), Answer::Yes);
    }

    #[test]
    fn budget_exhaustion_is_reported_as_unknown() {
        let s = uniform(3, 3, &[1, 2, 3]);
        let tight = SearchBudget::new(1, 2);
        assert_eq!(exists_solution(&s, tight).unwrap(), Answer::Unknown);

        let res = enumerate_solutions(&s, SearchBudget::new(1, 1_000_000)).unwrap();
        assert_eq!(res.solutions.len(), 1);
        assert!(!res.exhausted);
    }

    #[test]
    fn invalid_inputs_are_errors_not_answers() {
        let small = sys(3, vec![vec![vec![1, 2]], vec![vec![1]]]);
        assert!(matches!(
            exists_solution(&small, SearchBudget::default()),
            Err(OracleError::InvalidSystem { .. })
        ));

        let s = uniform(2, 2, &[1, 2]);
        let p = FirstColumn::new(&s, vec![Elem(1), Elem(2)]).unwrap();
        let shuffled = uniform(2, 2, &[3, 4]);
        assert!(matches!(
            extendable(&shuffled, &p, SearchBudget::default()),
            Err(OracleError::FirstColumn(FirstColumnError::NotMember { row: 0 }))
        ));
    }

    #[test]
    fn empty_width_system_has_the_empty_solution() {
        let s = SetSystem::new(Alphabet::plain(2), vec![vec![], vec![]]).unwrap();
        let res = enumerate_solutions(&s, SearchBudget::default()).unwrap();
        assert!(res.exhausted);
        assert_eq!(res.solutions, vec![matrix(&[&[], &[]])]);
    }
}
