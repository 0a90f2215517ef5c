//! Families of subsets of `[n]` viewed as posets inside the Boolean lattice.
//!
//! A family is *rooted* when it contains the empty set, *wide* when it
//! contains every singleton, and *branching* when every non-maximal member is
//! covered by at least two members one cardinality up. Maximal members are
//! the *leaves*. The module provides those predicates, leaf and height
//! counting, upward-closure slices, exact fractional leaf charges, witness
//! reports for the two leaf-count bounds, and the conversion from a row of
//! element sets to the family of prefix sets its admissible sequences reach.
//!
//! [`paths`] extracts vertex-disjoint source→sink paths via max-flow;
//! [`gen`] supplies generated and exhaustively enumerated test families.

pub mod gen;
pub mod paths;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num::rational::Ratio;
use thiserror::Error;

use crate::system::SetRow;

/// Largest ground-set size accepted (masks are `u32`).
pub const MAX_GROUND: usize = 30;

/// Visited-state limit for [`row_to_poset`].
pub const ROW_NODE_CAP: usize = 1 << 20;

/// Failures for poset construction, slicing, and generation.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("member element {} is outside 1..={n}", elem + 1)]
    ElementOutOfRange { elem: u32, n: usize },
    #[error("member {index} repeats an earlier member")]
    DuplicateMember { index: usize },
    #[error("singleton {{{}}} is not a member", elem + 1)]
    SingletonAbsent { elem: u32 },
    #[error("prefix-set search exceeded {cap} states")]
    NodeCapExceeded { cap: usize },
    #[error("poset is not {predicate}")]
    PreconditionFailed { predicate: &'static str },
    #[error("generation rejected {limit} candidates without finding a wide family")]
    RejectionLimitExceeded { limit: usize },
    #[error("n = {n} exceeds the generation bound ({bound})")]
    GenerationBound { n: usize, bound: usize },
    #[error("n = {n} exceeds the enumeration bound ({bound})")]
    EnumerationBound { n: usize, bound: usize },
}

/// A deduplicated family of subsets of `[n]`, each stored as a bitmask.
/// Order relation is inclusion; `B` covers `A` iff both are members,
/// `A ⊂ B`, and `|B| = |A| + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPoset {
    n: usize,
    members: BTreeSet<u32>,
}

impl SubPoset {
    /// Builds a family from masks. Panics on out-of-range masks; use
    /// [`SubPoset::from_sets`] for untrusted input.
    pub fn new(n: usize, members: impl IntoIterator<Item = u32>) -> SubPoset {
        assert!((1..=MAX_GROUND).contains(&n), "ground-set size {n}");
        let members: BTreeSet<u32> = members.into_iter().collect();
        assert!(
            members.iter().all(|m| *m < 1 << n),
            "members must be subsets of the ground set"
        );
        SubPoset { n, members }
    }

    /// Builds a family from explicit element lists (0-based), rejecting
    /// out-of-range elements and duplicate members.
    pub fn from_sets(n: usize, sets: &[Vec<u32>]) -> Result<SubPoset, PosetError> {
        assert!((1..=MAX_GROUND).contains(&n), "ground-set size {n}");
        let mut members = BTreeSet::new();
        for (index, set) in sets.iter().enumerate() {
            let mut mask = 0u32;
            for &elem in set {
                if elem as usize >= n {
                    return Err(PosetError::ElementOutOfRange { elem, n });
                }
                mask |= 1 << elem;
            }
            if !members.insert(mask) {
                return Err(PosetError::DuplicateMember { index });
            }
        }
        Ok(SubPoset { n, members })
    }

    /// The full Boolean lattice on `[n]`.
    pub fn full_boolean(n: usize) -> SubPoset {
        SubPoset::new(n, 0..1u32 << n)
    }

    /// The Boolean lattice without its top element `[n]`.
    pub fn boolean_without_top(n: usize) -> SubPoset {
        SubPoset::new(n, (0..1u32 << n).filter(|m| m.count_ones() as usize != n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.members.contains(&mask)
    }

    /// Members in ascending mask order.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    /// Members as sorted element lists (0-based), in ascending mask order.
    pub fn sets(&self) -> Vec<Vec<u32>> {
        self.members().map(mask_elems).collect()
    }

    /// The members covering `mask`, ascending.
    pub fn covers_of(&self, mask: u32) -> Vec<u32> {
        let size = mask.count_ones();
        self.members()
            .filter(|&b| b.count_ones() == size + 1 && b & mask == mask)
            .collect()
    }

    fn cover_count(&self, mask: u32) -> usize {
        self.covers_of(mask).len()
    }

    /// A member no other member covers.
    pub fn is_maximal(&self, mask: u32) -> bool {
        self.cover_count(mask) == 0
    }
}

/// Ascending element list of a bitmask.
fn mask_elems(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Does the family contain the empty set?
pub fn is_rooted(p: &SubPoset) -> bool {
    p.contains(0)
}

/// Does the family contain every singleton of `[n]`?
pub fn is_wide(p: &SubPoset) -> bool {
    (0..p.n()).all(|e| p.contains(1 << e))
}

/// Is every non-maximal member covered by at least two members? Maximal
/// members (the leaves) are exempt.
pub fn is_branching(p: &SubPoset) -> bool {
    p.members().all(|m| p.cover_count(m) != 1)
}

/// The maximal members, ascending.
pub fn leaves(p: &SubPoset) -> Vec<u32> {
    p.members().filter(|&m| p.is_maximal(m)).collect()
}

/// Members reachable from the empty set by chains of covers (the empty set
/// itself included when present).
fn root_component(p: &SubPoset) -> BTreeSet<u32> {
    let mut reached = BTreeSet::new();
    if !is_rooted(p) {
        return reached;
    }
    let mut queue = VecDeque::from([0u32]);
    reached.insert(0);
    while let Some(mask) = queue.pop_front() {
        for cover in p.covers_of(mask) {
            if reached.insert(cover) {
                queue.push_back(cover);
            }
        }
    }
    reached
}

/// Largest cardinality of a member connected to the root by covers; 0 when
/// the family is not rooted.
pub fn cardinality_height(p: &SubPoset) -> usize {
    root_component(p)
        .iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Number of levels of the root component: one for the root alone, plus one
/// per cardinality step. 0 when the family is not rooted.
pub fn height_level_count(p: &SubPoset) -> usize {
    if is_rooted(p) {
        cardinality_height(p) + 1
    } else {
        0
    }
}

/// The upward closure of the singleton `{x}`: all members containing `x`.
/// Its maximal members are maximal in the whole family.
pub fn subposet_above(p: &SubPoset, x: u32) -> Result<SubPoset, PosetError> {
    if (x as usize) >= p.n() || !p.contains(1 << x) {
        return Err(PosetError::SingletonAbsent { elem: x });
    }
    Ok(SubPoset {
        n: p.n(),
        members: p.members().filter(|m| m & (1 << x) != 0).collect(),
    })
}

/// The exact fractional charge of singleton `s`: the sum of `1/|l|` over all
/// leaves `l` containing `s`.
pub fn leaf_charge(p: &SubPoset, s: u32) -> Ratio<u64> {
    leaves(p)
        .into_iter()
        .filter(|&l| l & (1 << s) != 0)
        .map(|l| Ratio::new(1, u64::from(l.count_ones())))
        .sum()
}

/// Witness report for the bound "a rooted branching family has at least as
/// many leaves as root-component levels".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub rooted: bool,
    pub branching: bool,
    pub leaf_count: usize,
    pub height_levels: usize,
}

impl LemmaReport {
    /// The first unsatisfied precondition, if any.
    pub fn failed_precondition(&self) -> Option<&'static str> {
        if !self.rooted {
            Some("rooted")
        } else if !self.branching {
            Some("branching")
        } else {
            None
        }
    }

    pub fn inequality_holds(&self) -> bool {
        self.leaf_count >= self.height_levels
    }

    pub fn pass(&self) -> bool {
        self.failed_precondition().is_none() && self.inequality_holds()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(predicate) = self.failed_precondition() {
            return write!(f, "precondition failed: not {predicate}");
        }
        write!(
            f,
            "leaves {} {} height levels {}",
            self.leaf_count,
            if self.inequality_holds() { ">=" } else { "<" },
            self.height_levels
        )
    }
}

/// Checks the leaf/height bound on a rooted branching family; unsatisfied
/// preconditions are reported, never silently ignored.
pub fn check_lemma(p: &SubPoset) -> LemmaReport {
    LemmaReport {
        rooted: is_rooted(p),
        branching: is_branching(p),
        leaf_count: leaves(p).len(),
        height_levels: height_level_count(p),
    }
}

/// Witness report for the bound "a wide rooted branching family has at least
/// `n` leaves", together with the per-singleton charges that prove it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropositionReport {
    pub wide: bool,
    pub rooted: bool,
    pub branching: bool,
    pub n: usize,
    pub leaf_count: usize,
    /// `charges[s]` is the fractional leaf charge of singleton `s`.
    pub charges: Vec<Ratio<u64>>,
}

impl PropositionReport {
    /// The first unsatisfied precondition, if any.
    pub fn failed_precondition(&self) -> Option<&'static str> {
        if !self.rooted {
            Some("rooted")
        } else if !self.wide {
            Some("wide")
        } else if !self.branching {
            Some("branching")
        } else {
            None
        }
    }

    pub fn leaf_bound_holds(&self) -> bool {
        self.leaf_count >= self.n
    }

    pub fn charges_hold(&self) -> bool {
        self.charges.iter().all(|c| *c >= Ratio::from_integer(1))
    }

    pub fn pass(&self) -> bool {
        self.failed_precondition().is_none() && self.leaf_bound_holds() && self.charges_hold()
    }
}

impl fmt::Display for PropositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(predicate) = self.failed_precondition() {
            return write!(f, "precondition failed: not {predicate}");
        }
        write!(
            f,
            "leaves {} {} n = {}; singleton charges [",
            self.leaf_count,
            if self.leaf_bound_holds() { ">=" } else { "<" },
            self.n
        )?;
        for (s, charge) in self.charges.iter().enumerate() {
            if s > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{charge}")?;
        }
        write!(
            f,
            "] {} 1",
            if self.charges_hold() { "all >=" } else { "not all >=" }
        )
    }
}

/// Checks the `n`-leaf bound and the per-singleton charge inequality on a
/// wide rooted branching family.
pub fn check_proposition(p: &SubPoset) -> PropositionReport {
    PropositionReport {
        wide: is_wide(p),
        rooted: is_rooted(p),
        branching: is_branching(p),
        n: p.n(),
        leaf_count: leaves(p).len(),
        charges: (0..p.n() as u32).map(|s| leaf_charge(p, s)).collect(),
    }
}

/// The family of prefix sets reachable by admissible value sequences of one
/// row, the empty set included. A value is admissible at a position when it
/// is a new element of that position's set, or when the set holds at most
/// one unused element (in which case any of its values may be played).
///
/// Breadth-first over (position, prefix-set) states with a visited-state cap.
pub fn row_to_poset(row: &SetRow, n: usize) -> Result<SubPoset, PosetError> {
    row_to_poset_capped(row, n, ROW_NODE_CAP)
}

/// [`row_to_poset`] with an explicit visited-state cap.
pub fn row_to_poset_capped(row: &SetRow, n: usize, cap: usize) -> Result<SubPoset, PosetError> {
    assert!((1..=MAX_GROUND).contains(&n), "ground-set size {n}");
    let sets: Vec<u32> = row
        .sets
        .iter()
        .map(|s| {
            let mut mask = 0u32;
            for elem in s.iter() {
                if elem as usize >= n {
                    return Err(PosetError::ElementOutOfRange { elem, n });
                }
                mask |= 1 << elem;
            }
            Ok(mask)
        })
        .collect::<Result<_, _>>()?;

    let mut members = BTreeSet::from([0u32]);
    let mut visited: HashSet<(usize, u32)> = HashSet::from([(0, 0)]);
    let mut queue: VecDeque<(usize, u32)> = VecDeque::from([(0, 0)]);
    while let Some((position, prefix)) = queue.pop_front() {
        let Some(&set) = sets.get(position) else {
            continue;
        };
        let fresh = set & !prefix;
        let options = if fresh.count_ones() >= 2 { fresh } else { set };
        let mut remaining = options;
        while remaining != 0 {
            let value = remaining.trailing_zeros();
            remaining &= remaining - 1;
            let next = prefix | 1 << value;
            members.insert(next);
            if visited.insert((position + 1, next)) {
                if visited.len() > cap {
                    return Err(PosetError::NodeCapExceeded { cap });
                }
                queue.push_back((position + 1, next));
            }
        }
    }
    Ok(SubPoset { n, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{Alphabet, SetSystem};

    fn small_family(n: usize, sets: &[&[u32]]) -> SubPoset {
        SubPoset::from_sets(n, &sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn structural_predicates_on_reference_families() {
        let open = SubPoset::boolean_without_top(3);
        assert!(is_rooted(&open) && is_wide(&open) && is_branching(&open));

        let full = SubPoset::full_boolean(3);
        assert!(is_rooted(&full) && is_wide(&full));
        assert!(
            !is_branching(&full),
            "each 2-set has the single cover [3]"
        );

        let fork = small_family(2, &[&[], &[0], &[1]]);
        assert!(is_rooted(&fork) && is_branching(&fork) && is_wide(&fork));
        let fork3 = small_family(3, &[&[], &[0], &[1]]);
        assert!(is_rooted(&fork3) && is_branching(&fork3));
        assert!(!is_wide(&fork3), "singleton {{3}} is missing");
    }

    #[test]
    fn construction_rejects_bad_members() {
        assert_eq!(
            SubPoset::from_sets(3, &[vec![0], vec![3]]),
            Err(PosetError::ElementOutOfRange { elem: 3, n: 3 })
        );
        assert_eq!(
            SubPoset::from_sets(3, &[vec![0, 1], vec![1, 0]]),
            Err(PosetError::DuplicateMember { index: 1 })
        );
    }

    #[test]
    fn leaves_and_heights_of_reference_families() {
        let fork = small_family(2, &[&[], &[0], &[1]]);
        assert_eq!(leaves(&fork), vec![0b01, 0b10]);
        assert_eq!(height_level_count(&fork), 2);
        assert_eq!(cardinality_height(&fork), 1);

        let open = SubPoset::boolean_without_top(3);
        assert_eq!(leaves(&open), vec![0b011, 0b101, 0b110]);
        assert_eq!(height_level_count(&open), 3);

        let lonely = small_family(3, &[&[]]);
        assert_eq!(leaves(&lonely), vec![0]);
        assert_eq!(height_level_count(&lonely), 1);
    }

    #[test]
    fn height_counts_only_the_root_component() {
        let p = small_family(3, &[&[], &[0], &[1], &[0, 1, 2]]);
        assert_eq!(cardinality_height(&p), 1, "the 3-set hangs disconnected");
        assert_eq!(height_level_count(&p), 2);
        assert_eq!(leaves(&p), vec![0b001, 0b010, 0b111]);

        let rootless = small_family(3, &[&[0], &[0, 1]]);
        assert_eq!(height_level_count(&rootless), 0);
    }

    #[test]
    fn upward_closures_keep_only_supersets() {
        let open = SubPoset::boolean_without_top(3);
        let above = subposet_above(&open, 0).unwrap();
        assert_eq!(above.members().collect::<Vec<_>>(), vec![0b001, 0b011, 0b101]);
        for leaf in leaves(&above) {
            assert!(open.is_maximal(leaf), "leaves of the slice are leaves of the whole");
        }

        let fork = small_family(2, &[&[], &[0], &[1]]);
        let above = subposet_above(&fork, 0).unwrap();
        assert_eq!(above.members().collect::<Vec<_>>(), vec![0b01]);

        assert_eq!(
            subposet_above(&fork, 5),
            Err(PosetError::SingletonAbsent { elem: 5 })
        );
    }

    #[test]
    fn charges_are_exact_rationals() {
        let open = SubPoset::boolean_without_top(3);
        for s in 0..3 {
            assert_eq!(leaf_charge(&open, s), Ratio::from_integer(1));
        }

        let fork = small_family(2, &[&[], &[0], &[1]]);
        assert_eq!(leaf_charge(&fork, 0), Ratio::from_integer(1));

        let mixed = small_family(3, &[&[], &[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]]);
        let total: Ratio<u64> = (0..3).map(|s| leaf_charge(&mixed, s)).sum();
        assert!(total <= Ratio::from_integer(leaves(&mixed).len() as u64));
    }

    #[test]
    fn lemma_reports_cover_pass_tight_and_precondition_cases() {
        let fork = small_family(2, &[&[], &[0], &[1]]);
        let report = check_lemma(&fork);
        assert!(report.pass());
        assert_eq!((report.leaf_count, report.height_levels), (2, 2));

        let open = SubPoset::boolean_without_top(3);
        let report = check_lemma(&open);
        assert!(report.pass());
        assert_eq!((report.leaf_count, report.height_levels), (3, 3));

        let rootless = small_family(3, &[&[0], &[1]]);
        let report = check_lemma(&rootless);
        assert_eq!(report.failed_precondition(), Some("rooted"));
        assert!(!report.pass());
        assert_eq!(report.to_string(), "precondition failed: not rooted");

        let chain = SubPoset::full_boolean(2);
        assert_eq!(check_lemma(&chain).failed_precondition(), Some("branching"));
    }

    #[test]
    fn proposition_reports_check_leaves_and_charges() {
        let open = SubPoset::boolean_without_top(3);
        let report = check_proposition(&open);
        assert!(report.pass());
        assert_eq!(report.leaf_count, 3);
        assert_eq!(report.charges, vec![Ratio::from_integer(1); 3]);

        let star = small_family(4, &[&[], &[0], &[1], &[2], &[3]]);
        let report = check_proposition(&star);
        assert!(report.pass());
        assert_eq!(report.leaf_count, 4);

        let narrow = small_family(3, &[&[], &[0], &[1]]);
        assert_eq!(check_proposition(&narrow).failed_precondition(), Some("wide"));
    }

    fn single_row_system(k: usize, cells: &[&[u32]], alphabet: usize) -> SetSystem {
        assert_eq!(cells.len(), k);
        let rows = vec![cells.iter().map(|c| c.to_vec()).collect::<Vec<_>>()];
        SetSystem::new(Alphabet::plain(alphabet), rows).unwrap()
    }

    #[test]
    fn uniform_row_reaches_every_prefix_set() {
        let sys = single_row_system(3, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]], 3);
        let poset = row_to_poset(sys.row(0), 3).unwrap();
        // A repeat is admissible once only one unused element remains, and so
        // is that last element itself, so level 3 is reachable too.
        assert_eq!(poset, SubPoset::full_boolean(3));

        let mut from_oracle = BTreeSet::from([0u32]);
        let out = crate::oracle::enumerate_solutions(&sys, Default::default()).unwrap();
        assert!(out.exhausted);
        for sol in &out.solutions {
            let mut mask = 0u32;
            for value in &sol.rows[0].values {
                mask |= 1 << value.0;
                from_oracle.insert(mask);
            }
        }
        assert_eq!(poset.members().collect::<BTreeSet<_>>(), from_oracle);
    }

    #[test]
    fn disjoint_pair_row_builds_the_small_tree() {
        let sys = single_row_system(2, &[&[0, 1], &[2, 3]], 4);
        let poset = row_to_poset(sys.row(0), 4).unwrap();
        let expected = small_family(
            4,
            &[&[], &[0], &[1], &[0, 2], &[0, 3], &[1, 2], &[1, 3]],
        );
        assert_eq!(poset, expected);
        assert!(is_branching(&poset));
    }

    #[test]
    fn forced_repeats_keep_the_prefix_set() {
        let sys = single_row_system(3, &[&[0, 1], &[0, 1], &[0, 1]], 2);
        let poset = row_to_poset(sys.row(0), 2).unwrap();
        assert_eq!(poset, SubPoset::full_boolean(2));
        assert!(!is_branching(&poset), "each singleton has one cover");
    }

    #[test]
    fn node_cap_is_enforced() {
        let all: &[u32] = &[0, 1, 2, 3];
        let sys = single_row_system(4, &[all; 4], 4);
        assert_eq!(
            row_to_poset_capped(sys.row(0), 4, 3),
            Err(PosetError::NodeCapExceeded { cap: 3 })
        );
        assert!(row_to_poset_capped(sys.row(0), 4, 1 << 10).is_ok());
    }

    #[test]
    fn narrow_rows_yield_branching_families() {
        for seed in 0..40 {
            let sys = crate::instances::random_system(4, 3, 6, seed);
            for row in 0..sys.n() {
                let poset = row_to_poset(sys.row(row), 6).unwrap();
                assert!(
                    is_branching(&poset),
                    "row shorter than its sets always branches (seed {seed}, row {row})"
                );
            }
        }
    }
}
