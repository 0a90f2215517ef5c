//! Constructive solver: extends any valid first column to a full verified
//! solution, by induction on the row count.
//!
//! One induction step: normalize the column set, pick a pivot row pair,
//! reorder rows, reduce to a smaller system, solve that recursively, re-insert
//! the pivot element along a diagonal, and fill the last row directly.

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::system::{Elem, SeqRow, SetRow, SetSystem, SolutionMatrix, ValidationReport};
use crate::verify::{is_regular, verify_solution, VerificationReport};
use crate::system::validate_system;

/// A choice of pairwise-distinct first-column values, one per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstColumn {
    values: Vec<Elem>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FirstColumnError {
    #[error("first column has {got} entries, system has {expected} rows")]
    WrongLength { got: usize, expected: usize },
    #[error("system has no columns, so no first column exists")]
    NoColumns,
    #[error("entry for row {} is not in that row's first set", row + 1)]
    NotMember { row: usize },
    #[error("rows {} and {} share the same first-column entry", row_a + 1, row_b + 1)]
    Duplicate { row_a: usize, row_b: usize },
}

impl FirstColumn {
    pub fn new(sys: &SetSystem, values: Vec<Elem>) -> Result<Self, FirstColumnError> {
        if sys.k() == 0 {
            return Err(FirstColumnError::NoColumns);
        }
        if values.len() != sys.n() {
            return Err(FirstColumnError::WrongLength { got: values.len(), expected: sys.n() });
        }
        for (i, &Elem(id)) in values.iter().enumerate() {
            if !sys.set(i, 0).contains(id) {
                return Err(FirstColumnError::NotMember { row: i });
            }
            if let Some(prev) = values[..i].iter().position(|&e| e == Elem(id)) {
                return Err(FirstColumnError::Duplicate { row_a: prev, row_b: i });
            }
        }
        Ok(FirstColumn { values })
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Everything the induction step decides up front: the row reordering, the
/// pivot element `a`, the last row's lead value `b`, the earliest-repeat
/// matrix `q`, and the per-row diagonal positions `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotPlan {
    /// `order[i]` = input row placed at position `i` after reordering.
    pub order: Vec<usize>,
    /// Pivot element: the first-column value that re-occurs earliest in
    /// another row's sets.
    pub a: Elem,
    /// First-column value of the row that ends up last.
    pub b: Elem,
    /// `q[i][j]`: least column position t ≥ 2 (1-based) whose set in row `j`
    /// contains row `i`'s first-column value; `None` on the diagonal.
    pub q: Vec<Vec<Option<usize>>>,
    /// 1-based diagonal position per reordered row; `d[0] = 1`, and `d[i]` for
    /// i ≥ 1 is the least position ≥ 2 whose set contains `a`. Non-decreasing
    /// from index 1 on.
    pub d: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtendError {
    #[error("position {}: set exhausted after removing the forbidden element", col + 1)]
    Blocked { col: usize },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid system: {report}")]
    InvalidSystem { report: ValidationReport },
    #[error(transparent)]
    FirstColumn(#[from] FirstColumnError),
    #[error("row {}: sets beyond the first column do not cover the element pool; normalize first", row + 1)]
    NotNormalized { row: usize },
    #[error(transparent)]
    Extension(#[from] ExtendError),
    #[error("certification failed; the built matrix does not verify: {report}")]
    Certification { report: VerificationReport },
}

/// Append one column holding the union of all sets to every row, if some row's
/// sets beyond the first column do not already cover that union.
pub fn normalize(sys: &SetSystem) -> (SetSystem, bool) {
    let universe = sys.universe();
    let mut pool = ElemSet::empty(universe);
    for row in sys.rows() {
        for set in &row.sets {
            pool.union_with(set);
        }
    }
    let covered = |row: &SetRow| {
        let mut tail = ElemSet::empty(universe);
        for set in row.sets.iter().skip(1) {
            tail.union_with(set);
        }
        tail == pool
    };
    if sys.rows().iter().all(covered) {
        return (sys.clone(), false);
    }
    let rows = sys
        .rows()
        .iter()
        .map(|row| {
            let mut sets = row.sets.clone();
            sets.push(pool.clone());
            SetRow { sets }
        })
        .collect();
    (SetSystem::from_rows(sys.alphabet().clone(), rows, sys.k() + 1), true)
}

fn earliest_repeat(sys: &SetSystem, row: usize, Elem(id): Elem) -> Option<usize> {
    (2..=sys.k()).find(|&t| sys.set(row, t - 1).contains(id))
}

/// Pick the pivot: the pair (i*, j*) minimizing q, lexicographic on ties; row
/// i* moves to position 1, row j* to position 2, and the remaining rows are
/// stably sorted by their diagonal position.
///
/// Requires a normalized system (so every q entry is defined) with ≥ 2 rows.
pub fn choose_pivot(sys: &SetSystem, p: &FirstColumn) -> Result<PivotPlan, SolveError> {
    let m = sys.n();
    assert!(m >= 2, "pivot selection needs at least two rows");
    let mut q = vec![vec![None; m]; m];
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let t = earliest_repeat(sys, j, p.values[i])
                .ok_or(SolveError::NotNormalized { row: j })?;
            q[i][j] = Some(t);
            if best.is_none_or(|(bt, _, _)| t < bt) {
                best = Some((t, i, j));
            }
        }
    }
    let (_, i_star, j_star) = best.expect("m >= 2 gives at least one row pair");
    let a = p.values[i_star];

    // Rows other than i*, led by j*, keyed by diagonal position; stable sort
    // keeps j* first among equal keys, so d is non-decreasing from index 1.
    let mut keyed: Vec<(usize, usize)> = Vec::with_capacity(m - 1);
    for r in std::iter::once(j_star).chain((0..m).filter(|&r| r != i_star && r != j_star)) {
        let d = earliest_repeat(sys, r, a).ok_or(SolveError::NotNormalized { row: r })?;
        keyed.push((d, r));
    }
    keyed.sort_by_key(|&(d, _)| d);

    let mut order = Vec::with_capacity(m);
    let mut d = Vec::with_capacity(m);
    order.push(i_star);
    d.push(1);
    for (dr, r) in keyed {
        order.push(r);
        d.push(dr);
    }
    let b = p.values[order[m - 1]];
    Ok(PivotPlan { order, a, b, q, d })
}

impl PivotPlan {
    /// The system with rows rearranged into this plan's order.
    pub fn permute_system(&self, sys: &SetSystem) -> SetSystem {
        let rows = self.order.iter().map(|&i| sys.row(i).clone()).collect();
        SetSystem::from_rows(sys.alphabet().clone(), rows, sys.k())
    }

    pub fn permute_first_column(&self, p: &FirstColumn) -> FirstColumn {
        FirstColumn { values: self.order.iter().map(|&i| p.values[i]).collect() }
    }

    /// Send solved rows back to the input row order.
    pub fn restore_rows(&self, rows: Vec<SeqRow>) -> Vec<SeqRow> {
        let mut out = vec![SeqRow::new(Vec::new()); rows.len()];
        for (pos, row) in rows.into_iter().enumerate() {
            out[self.order[pos]] = row;
        }
        out
    }
}

/// Shrink a reordered m-row system to m−1 rows and k−1 columns: drop the last
/// row; in each surviving row remove `a` at and after the diagonal, remove `b`
/// up to min(diagonal, m−2), then erase the diagonal position itself.
///
/// Panics if any resulting set drops below m−1 elements — the removals overlap
/// only at the erased position, so this cannot happen for a valid input.
pub fn reduce(psys: &SetSystem, plan: &PivotPlan) -> SetSystem {
    let m = psys.n();
    let k = psys.k();
    assert!(m >= 2 && k >= 2);
    let Elem(a) = plan.a;
    let Elem(b) = plan.b;
    let b_cut = m - 2;
    let rows = (0..m - 1)
        .map(|i| {
            let di = plan.d[i];
            let sets = (1..=k)
                .filter(|&t| t != di)
                .map(|t| {
                    let mut s = psys.set(i, t - 1).clone();
                    if t >= di {
                        s.remove(a);
                    }
                    if t <= di.min(b_cut) {
                        s.remove(b);
                    }
                    assert!(
                        s.len() >= m - 1,
                        "reduced set at row {}, position {t} fell below cardinality {}",
                        i + 1,
                        m - 1
                    );
                    s
                })
                .collect();
            SetRow { sets }
        })
        .collect();
    SetSystem::from_rows(psys.alphabet().clone(), rows, k - 1)
}

/// First column for the reduced system: keep the reordered first-column values
/// for rows 2.., and give row 1 the smallest element of its reduced first set
/// that avoids `a` and all the kept values.
///
/// Panics if no such element exists; the cardinality bound on the reduced
/// system guarantees at least one.
pub fn build_first_column(reduced: &SetSystem, pp: &FirstColumn, plan: &PivotPlan) -> FirstColumn {
    let n = reduced.n();
    let mut excluded = ElemSet::empty(reduced.universe());
    excluded.insert(plan.a.0);
    for &Elem(id) in &pp.values[1..n] {
        excluded.insert(id);
    }
    let y1 = reduced
        .set(0, 0)
        .iter()
        .find(|&e| !excluded.contains(e))
        .expect("reduced first set large enough to avoid a and the kept values");
    let mut values = Vec::with_capacity(n);
    values.push(Elem(y1));
    values.extend_from_slice(&pp.values[1..n]);
    FirstColumn { values }
}

/// Insert `a` into each solved row at that row's diagonal position.
pub fn insert_diagonal(y: &SolutionMatrix, plan: &PivotPlan) -> SolutionMatrix {
    let rows = y
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut values = row.values.clone();
            values.insert(plan.d[i] - 1, plan.a);
            SeqRow::new(values)
        })
        .collect();
    SolutionMatrix::new(rows)
}

/// The element of `zs` that comes last when ordered by first occurrence in
/// `xrow`; elements that never occur sort after all that do, and among
/// themselves by id.
///
/// The id rule for never-occurring elements is one fixed choice among several
/// workable ones. `choose_zt` uses these orderings to select a symbol that is
/// last for no row, and the only scenario that selection must exclude is a
/// prefix value-set tie between the filled last row and a row of `x`; such a
/// tie forces the row's prefix to contain every candidate symbol except the
/// avoided one, so at most one candidate is missing from the row and the
/// among-missing tie-break never decides a comparison that matters.
pub fn ordering_last(xrow: &SeqRow, zs: &[Elem]) -> Elem {
    assert!(!zs.is_empty());
    *zs.iter()
        .max_by_key(|&&Elem(id)| {
            let pos = xrow.values.iter().position(|&Elem(v)| v == id);
            (pos.unwrap_or(usize::MAX), id)
        })
        .expect("zs is non-empty")
}

/// Smallest index t ≥ 2 (1-based into the z-list headed by z_1) whose symbol
/// `zs[t-2]` is last in none of the given rows' orderings. `zs` holds
/// z_2, z_3, … — one more symbol than there are rows, so some symbol is never
/// last.
pub fn choose_zt(upper_rows: &[SeqRow], zs: &[Elem]) -> usize {
    let lasts: Vec<Elem> = upper_rows.iter().map(|row| ordering_last(row, zs)).collect();
    for (idx, z) in zs.iter().enumerate() {
        if !lasts.contains(z) {
            return idx + 2;
        }
    }
    unreachable!("{} rows cannot make all {} symbols last", upper_rows.len(), zs.len())
}

/// Extend a regular prefix to the full row length, never choosing the
/// forbidden element for a position (`forbid` takes a 0-based position).
///
/// Per position, with U the values so far and N the set's unseen elements:
/// with two or more in N pick the least non-forbidden one; with exactly one
/// pick it unless forbidden, else repeat the least non-forbidden seen member;
/// with none repeat the least non-forbidden member.
///
/// Panics if `prefix` is not a representative of the leading sets. Errors only
/// if some set has every element forbidden, impossible for sets of size ≥ 2.
pub fn regular_extend<F>(row: &SetRow, prefix: &SeqRow, forbid: F) -> Result<SeqRow, ExtendError>
where
    F: Fn(usize) -> Option<Elem>,
{
    let k = row.len();
    assert!(prefix.len() <= k, "prefix longer than the row");
    let lead = SetRow { sets: row.sets[..prefix.len()].to_vec() };
    debug_assert_eq!(is_regular(prefix, &lead), Ok(true), "prefix must be regular");
    for (j, (&Elem(id), set)) in prefix.values.iter().zip(&lead.sets).enumerate() {
        assert!(set.contains(id), "prefix value at position {} not in its set", j + 1);
    }

    let universe = row.sets.first().map_or(0, ElemSet::universe);
    let mut values = prefix.values.clone();
    let mut used = ElemSet::empty(universe);
    for &Elem(id) in &values {
        used.insert(id);
    }
    for j in prefix.len()..k {
        let set = &row.sets[j];
        let banned = forbid(j).map(|e| e.0);
        let allowed = |e: u32| Some(e) != banned;
        let mut fresh = set.iter().filter(|&e| !used.contains(e));
        let pick = match (fresh.next(), fresh.next()) {
            (Some(first), Some(_)) => {
                if allowed(first) {
                    first
                } else {
                    set.iter()
                        .filter(|&e| !used.contains(e))
                        .find(|&e| allowed(e))
                        .expect("two unseen elements, at most one forbidden")
                }
            }
            (Some(only), None) => {
                if allowed(only) {
                    only
                } else {
                    set.iter()
                        .find(|&e| used.contains(e) && allowed(e))
                        .ok_or(ExtendError::Blocked { col: j })?
                }
            }
            (None, _) => set
                .iter()
                .find(|&e| allowed(e))
                .ok_or(ExtendError::Blocked { col: j })?,
        };
        values.push(Elem(pick));
        used.insert(pick);
    }
    Ok(SeqRow::new(values))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LastRowCase {
    /// The last row's diagonal lies within the first m−1 positions: start from
    /// `b` and extend, avoiding `a` everywhere after position 1.
    EarlyDiagonal,
    /// The diagonal lies beyond position m−1: seed the row with fresh picks
    /// z_1=b, z_2, …, z_{m−1}, swap one of them for a replacement, and extend
    /// under a forbidden-element window.
    LateDiagonal,
}

/// The last row's construction decisions: the seed values `z` (just `b` in the
/// early-diagonal case), the swapped index `t`, and the replacement value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastRowPlan {
    pub case: LastRowCase,
    pub z: Vec<Elem>,
    pub t: Option<usize>,
    pub z_prime: Option<Elem>,
}

impl LastRowPlan {
    /// The prefix actually fed to `regular_extend`: `z` with the swap applied.
    pub fn prefix(&self) -> SeqRow {
        let mut values = self.z.clone();
        if let (Some(t), Some(zp)) = (self.t, self.z_prime) {
            values[t - 1] = zp;
        }
        SeqRow::new(values)
    }
}

/// Decide how the last row will be built; see [`fill_last_row`].
pub fn plan_last_row(psys: &SetSystem, x: &SolutionMatrix, plan: &PivotPlan) -> LastRowPlan {
    let m = psys.n();
    let d_last = plan.d[m - 1];
    if d_last <= m - 1 {
        return LastRowPlan {
            case: LastRowCase::EarlyDiagonal,
            z: vec![plan.b],
            t: None,
            z_prime: None,
        };
    }

    let mut z = vec![plan.b];
    let mut used = ElemSet::empty(psys.universe());
    used.insert(plan.b.0);
    for j in 2..=m - 1 {
        let fresh = psys
            .set(m - 1, j - 1)
            .iter()
            .find(|&e| !used.contains(e))
            .expect("set larger than the seed values so far");
        z.push(Elem(fresh));
        used.insert(fresh);
    }

    let (t, z_prime) = if m == 2 {
        (None, None)
    } else {
        let t = choose_zt(&x.rows[2..], &z[1..]);
        let zp = psys
            .set(m - 1, t - 1)
            .iter()
            .find(|&e| !used.contains(e))
            .expect("set larger than the full seed list");
        (Some(t), Some(Elem(zp)))
    };
    LastRowPlan { case: LastRowCase::LateDiagonal, z, t, z_prime }
}

/// Build the last row of the reordered system so it completes `x` (the solved
/// first m−1 rows) to a full solution.
///
/// Early diagonal: extend from `(b)`, forbidding `a` at every later position.
/// Late diagonal: extend from the swapped seed prefix, forbidding the swapped-
/// out symbol up to the diagonal and `a` from the diagonal on. Either way the
/// result starts with `b` and never contains `a`.
pub fn fill_last_row(
    psys: &SetSystem,
    x: &SolutionMatrix,
    plan: &PivotPlan,
) -> Result<SeqRow, ExtendError> {
    let m = psys.n();
    let d_last = plan.d[m - 1];
    let lp = plan_last_row(psys, x, plan);
    let row = psys.row(m - 1);
    let a = plan.a;
    match lp.case {
        LastRowCase::EarlyDiagonal => {
            regular_extend(row, &lp.prefix(), |j0| if j0 >= 1 { Some(a) } else { None })
        }
        LastRowCase::LateDiagonal => {
            debug_assert!(
                (2..d_last).all(|t| !row.sets[t - 1].contains(a.0)),
                "diagonal position must be the first occurrence of a"
            );
            let z_t = lp.t.map(|t| lp.z[t - 1]);
            regular_extend(row, &lp.prefix(), |j0| {
                let pos = j0 + 1;
                if pos >= d_last {
                    Some(a)
                } else if pos >= m {
                    z_t
                } else {
                    None
                }
            })
        }
    }
}

fn greedy_first_column(sys: &SetSystem) -> FirstColumn {
    let mut used = ElemSet::empty(sys.universe());
    let values = (0..sys.n())
        .map(|i| {
            let e = sys
                .set(i, 0)
                .iter()
                .find(|&e| !used.contains(e))
                .expect("first set has more elements than rows above");
            used.insert(e);
            Elem(e)
        })
        .collect();
    FirstColumn { values }
}

fn solve_rec(sys: &SetSystem, p: &FirstColumn) -> Result<SolutionMatrix, SolveError> {
    let m = sys.n();
    let k = sys.k();
    if m == 1 {
        let prefix = SeqRow::new(vec![p.values[0]]);
        let row = regular_extend(sys.row(0), &prefix, |_| None)?;
        return Ok(SolutionMatrix::new(vec![row]));
    }
    if k == 1 {
        let rows = p.values.iter().map(|&e| SeqRow::new(vec![e])).collect();
        return Ok(SolutionMatrix::new(rows));
    }

    let (nsys, appended) = normalize(sys);
    let plan = choose_pivot(&nsys, p)?;
    let psys = plan.permute_system(&nsys);
    let pp = plan.permute_first_column(p);
    let reduced = reduce(&psys, &plan);
    let y = build_first_column(&reduced, &pp, &plan);
    let ysol = solve_rec(&reduced, &y)?;
    let x = insert_diagonal(&ysol, &plan);
    let last = fill_last_row(&psys, &x, &plan)?;

    let mut rows = x.rows;
    rows.push(last);
    if appended {
        for row in &mut rows {
            row.values.pop();
        }
    }
    Ok(SolutionMatrix::new(plan.restore_rows(rows)))
}

/// Solve the system: build a matrix of values whose rows are regular
/// representatives with pairwise-distinct prefix value-sets. With `p` given,
/// the output's first column equals `p`; otherwise a greedy distinct first
/// column is used. The result is re-verified before being returned.
pub fn solve(sys: &SetSystem, p: Option<&FirstColumn>) -> Result<SolutionMatrix, SolveError> {
    let report = validate_system(sys, sys.n());
    if !report.pass() {
        return Err(SolveError::InvalidSystem { report });
    }
    if sys.k() == 0 {
        if p.is_some() {
            return Err(FirstColumnError::NoColumns.into());
        }
        return Ok(SolutionMatrix::new(vec![SeqRow::new(Vec::new()); sys.n()]));
    }
    let first = match p {
        Some(fc) => FirstColumn::new(sys, fc.values.clone())?,
        None => greedy_first_column(sys),
    };
    let sol = solve_rec(sys, &first)?;
    debug_assert!(sol
        .rows
        .iter()
        .zip(&first.values)
        .all(|(row, &e)| row.values[0] == e));
    let vr = verify_solution(sys, &sol).expect("solver output matches the system shape");
    if !vr.pass() {
        return Err(SolveError::Certification { report: vr });
    }
    Ok(sol)
}
