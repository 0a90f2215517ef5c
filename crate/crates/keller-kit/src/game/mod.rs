//! Rules engine for the set-growing pursuit game.
//!
//! Play starts from `n` singleton sets `S_1 = {1}, …, S_n = {n}` over the
//! ground set `{1, …, n}` (stored 0-based internally). Each round the
//! adversary offers every row an unordered pair of elements missing from that
//! row's set, the chooser keeps exactly one element per row, and every set
//! grows by one. The chooser survives a round only if the sets stay pairwise
//! distinct, and wins after `n - 2` completed rounds.
//!
//! [`solve`] holds the exact win/loss analysis, [`play`] the simulation
//! strategies and transcripts.

pub mod play;
pub mod solve;

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// Largest ground-set size the rules engine accepts (set masks are `u32`).
pub const MAX_GROUND: usize = 32;

/// When pairwise distinctness of the sets is enforced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DistinctnessMode {
    /// Sets must be pairwise distinct after every round (the default, and
    /// the strictest reading of the rules).
    #[default]
    PerRound,
    /// Mid-game collisions are tolerated; only the final sets are checked.
    EndOnly,
}

impl fmt::Display for DistinctnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistinctnessMode::PerRound => write!(f, "per-round"),
            DistinctnessMode::EndOnly => write!(f, "end-only"),
        }
    }
}

/// Rule violations and malformed inputs for the game engine.
///
/// Rows and elements are reported 1-based, matching the transcripts.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("expected {expected} rows, got {got}")]
    WrongRowCount { expected: usize, got: usize },
    #[error("row {} has {size} elements, expected {expected}", row + 1)]
    SizeMismatch {
        row: usize,
        size: usize,
        expected: usize,
    },
    #[error("row {} does not contain its own index", row + 1)]
    MissingDiagonal { row: usize },
    #[error("row {} uses element {} outside 1..={n}", row + 1, elem + 1)]
    ElementOutOfRange { row: usize, elem: u32, n: usize },
    #[error("rows {} and {} hold identical sets", row_a + 1, row_b + 1)]
    DuplicateSets { row_a: usize, row_b: usize },
    #[error("round {round} is terminal for n = {n}; no move is possible")]
    TerminalState { n: usize, round: usize },
    #[error("offer for row {} includes unavailable element {}", row + 1, elem + 1)]
    OfferedElementUnavailable { row: usize, elem: u32 },
    #[error("offer for row {} repeats a single element", row + 1)]
    DegeneratePair { row: usize },
    #[error("pick for row {} takes element {} outside the offered pair", row + 1, elem + 1)]
    PickOutsideOffer { row: usize, elem: u32 },
    #[error("n = {n} exceeds configured search bound ({bound})")]
    SolveBoundExceeded { n: usize, bound: usize },
    #[error("state encoding is not canonical")]
    NotCanonical,
}

/// A position in the game: `n` element sets and the number of completed
/// rounds. Invariant: every set has `round + 1` elements and row `i`
/// contains element `i`.
///
/// Pairwise distinctness is a *play* condition, not a structural one:
/// [`GameState::new`] insists on it (it describes positions of the default
/// per-round game), while states produced by [`apply_move`] under
/// [`DistinctnessMode::EndOnly`] may carry mid-game collisions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    n: usize,
    masks: Vec<u32>,
    round: usize,
}

impl GameState {
    /// The opening position: `S_i = {i}` for every row.
    pub fn initial(n: usize) -> GameState {
        assert!(
            (1..=MAX_GROUND).contains(&n),
            "ground-set size {n} outside 1..={MAX_GROUND}"
        );
        GameState {
            n,
            masks: (0..n).map(|i| 1 << i).collect(),
            round: 0,
        }
    }

    /// Builds a mid-game position from explicit element lists (0-based),
    /// checking every invariant including pairwise distinctness.
    pub fn new(n: usize, sets: &[Vec<u32>], round: usize) -> Result<GameState, GameError> {
        assert!(
            (1..=MAX_GROUND).contains(&n),
            "ground-set size {n} outside 1..={MAX_GROUND}"
        );
        if sets.len() != n {
            return Err(GameError::WrongRowCount {
                expected: n,
                got: sets.len(),
            });
        }
        let mut masks = Vec::with_capacity(n);
        for (row, elems) in sets.iter().enumerate() {
            let mut mask = 0u32;
            for &e in elems {
                if e as usize >= n {
                    return Err(GameError::ElementOutOfRange { row, elem: e, n });
                }
                mask |= 1 << e;
            }
            if mask.count_ones() as usize != round + 1 || elems.len() != round + 1 {
                return Err(GameError::SizeMismatch {
                    row,
                    size: elems.len(),
                    expected: round + 1,
                });
            }
            if mask & (1 << row) == 0 {
                return Err(GameError::MissingDiagonal { row });
            }
            masks.push(mask);
        }
        for row_a in 0..n {
            for row_b in row_a + 1..n {
                if masks[row_a] == masks[row_b] {
                    return Err(GameError::DuplicateSets { row_a, row_b });
                }
            }
        }
        Ok(GameState { n, masks, round })
    }

    /// Rebuilds a state from raw masks; shape is debug-asserted, pairwise
    /// distinctness deliberately not (end-only play reaches collided states).
    pub(crate) fn from_masks(n: usize, masks: Vec<u32>, round: usize) -> GameState {
        debug_assert_eq!(masks.len(), n);
        debug_assert!(masks
            .iter()
            .enumerate()
            .all(|(i, &m)| m.count_ones() as usize == round + 1
                && m & (1 << i) != 0
                && (n == 32 || m < 1 << n)));
        GameState { n, masks, round }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Number of rounds in a full game.
    pub fn rounds_total(&self) -> usize {
        self.n.saturating_sub(2)
    }

    pub fn is_terminal(&self) -> bool {
        self.round >= self.rounds_total()
    }

    pub fn mask(&self, row: usize) -> u32 {
        self.masks[row]
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    /// Elements of one row, ascending, 0-based.
    pub fn set(&self, row: usize) -> Vec<u32> {
        mask_elems(self.masks[row])
    }

    /// The lexicographically least pair of rows holding equal sets, if any.
    pub fn colliding_pair(&self) -> Option<(usize, usize)> {
        for row_a in 0..self.n {
            for row_b in row_a + 1..self.n {
                if self.masks[row_a] == self.masks[row_b] {
                    return Some((row_a, row_b));
                }
            }
        }
        None
    }

    fn advanced(&self, choices: &[u32]) -> GameState {
        let masks = self
            .masks
            .iter()
            .zip(choices)
            .map(|(&m, &e)| m | 1 << e)
            .collect();
        GameState {
            n: self.n,
            masks,
            round: self.round + 1,
        }
    }
}

/// Ascending element list of a bitmask.
pub(crate) fn mask_elems(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// One round's offer: an unordered pair of elements per row, stored with the
/// smaller element first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Offer {
    pairs: Vec<(u32, u32)>,
}

impl Offer {
    /// Normalizes each pair to `(min, max)`. Panics on a repeated element;
    /// validation against a concrete state happens in [`apply_move`].
    pub fn new(pairs: Vec<(u32, u32)>) -> Offer {
        let pairs = pairs
            .into_iter()
            .map(|(u, v)| {
                assert_ne!(u, v, "offer pairs hold two distinct elements");
                (u.min(v), u.max(v))
            })
            .collect();
        Offer { pairs }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Checks the offer against a state: one pair per row, both elements in
    /// range and outside the row's current set.
    pub fn validate(&self, state: &GameState) -> Result<(), GameError> {
        if self.pairs.len() != state.n() {
            return Err(GameError::WrongRowCount {
                expected: state.n(),
                got: self.pairs.len(),
            });
        }
        for (row, &(u, v)) in self.pairs.iter().enumerate() {
            if u == v {
                return Err(GameError::DegeneratePair { row });
            }
            for e in [u, v] {
                if e as usize >= state.n() {
                    return Err(GameError::ElementOutOfRange {
                        row,
                        elem: e,
                        n: state.n(),
                    });
                }
                if state.mask(row) & (1 << e) != 0 {
                    return Err(GameError::OfferedElementUnavailable { row, elem: e });
                }
            }
        }
        Ok(())
    }

    /// The offer as seen after relabeling rows and elements by `perm`
    /// (row `i` becomes row `perm[i]`, element `e` becomes `perm[e]`).
    pub(crate) fn apply_perm(&self, perm: &[usize]) -> Offer {
        let mut pairs = vec![(0, 0); self.pairs.len()];
        for (row, &(u, v)) in self.pairs.iter().enumerate() {
            let (pu, pv) = (perm[u as usize] as u32, perm[v as usize] as u32);
            pairs[perm[row]] = (pu.min(pv), pu.max(pv));
        }
        Offer { pairs }
    }
}

impl fmt::Display for Offer {
    /// 1-based, e.g. `2|3 1|3 1|2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, (u, v)) in self.pairs.iter().enumerate() {
            if row > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}|{}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

/// The chooser's reply: one kept element per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pick {
    choices: Vec<u32>,
}

impl Pick {
    pub fn new(choices: Vec<u32>) -> Pick {
        Pick { choices }
    }

    pub fn choices(&self) -> &[u32] {
        &self.choices
    }

    /// Checks one kept element per row, each drawn from the offered pair.
    pub fn validate(&self, offer: &Offer) -> Result<(), GameError> {
        if self.choices.len() != offer.pairs().len() {
            return Err(GameError::WrongRowCount {
                expected: offer.pairs().len(),
                got: self.choices.len(),
            });
        }
        for (row, (&e, &(u, v))) in self.choices.iter().zip(offer.pairs()).enumerate() {
            if e != u && e != v {
                return Err(GameError::PickOutsideOffer { row, elem: e });
            }
        }
        Ok(())
    }

    /// Translates a pick made at the `perm`-relabeled state back to the
    /// original labeling: original row `i` keeps the preimage of whatever
    /// relabeled row `perm[i]` kept.
    pub(crate) fn unapply_perm(&self, perm: &[usize]) -> Pick {
        let mut inv = vec![0usize; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let choices = (0..self.choices.len())
            .map(|row| inv[self.choices[perm[row]] as usize] as u32)
            .collect();
        Pick { choices }
    }
}

impl fmt::Display for Pick {
    /// 1-based, space-separated kept elements.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, e) in self.choices.iter().enumerate() {
            if row > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", e + 1)?;
        }
        Ok(())
    }
}

/// All offers available to the adversary, in lexicographic order: pairs per
/// row ascend `(u, v)`-wise and the first row varies slowest.
pub fn legal_offers(state: &GameState) -> Result<impl Iterator<Item = Offer>, GameError> {
    if state.is_terminal() {
        return Err(GameError::TerminalState {
            n: state.n(),
            round: state.round(),
        });
    }
    let per_row: Vec<Vec<(u32, u32)>> = (0..state.n())
        .map(|row| {
            let missing: Vec<u32> = (0..state.n() as u32)
                .filter(|&e| state.mask(row) & (1 << e) == 0)
                .collect();
            missing.into_iter().tuple_combinations().collect()
        })
        .collect();
    Ok(per_row
        .into_iter()
        .multi_cartesian_product()
        .map(|pairs| Offer { pairs }))
}

/// Result of a legal move: either the advanced position or the first pair of
/// rows whose sets collided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveOutcome {
    Advanced(GameState),
    Violation { row_a: usize, row_b: usize },
}

/// Plays one round. Collisions are reported as [`MoveOutcome::Violation`]
/// after every round in [`DistinctnessMode::PerRound`], and only on the final
/// round in [`DistinctnessMode::EndOnly`]. Malformed offers or picks are
/// errors, not game outcomes.
pub fn apply_move(
    state: &GameState,
    offer: &Offer,
    pick: &Pick,
    mode: DistinctnessMode,
) -> Result<MoveOutcome, GameError> {
    if state.is_terminal() {
        return Err(GameError::TerminalState {
            n: state.n(),
            round: state.round(),
        });
    }
    offer.validate(state)?;
    pick.validate(offer)?;
    let next = state.advanced(pick.choices());
    let must_check = mode == DistinctnessMode::PerRound || next.is_terminal();
    if must_check {
        if let Some((row_a, row_b)) = next.colliding_pair() {
            return Ok(MoveOutcome::Violation { row_a, row_b });
        }
    }
    Ok(MoveOutcome::Advanced(next))
}

/// A state encoding minimal over simultaneous relabelings of rows and
/// elements: two states are equivalent positions iff their canonical
/// encodings are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalState {
    masks: Vec<u32>,
}

impl CanonicalState {
    /// Accepts an encoding only if it is self-canonical.
    pub fn from_masks(masks: Vec<u32>) -> Result<CanonicalState, GameError> {
        let n = masks.len();
        if !(1..=MAX_GROUND).contains(&n) || masks.iter().any(|m| n < 32 && *m >= 1 << n) {
            return Err(GameError::NotCanonical);
        }
        let size = masks[0].count_ones();
        if size == 0 || masks.iter().any(|m| m.count_ones() != size) {
            return Err(GameError::NotCanonical);
        }
        if masks
            .iter()
            .enumerate()
            .any(|(row, &m)| m & (1 << row) == 0)
        {
            return Err(GameError::NotCanonical);
        }
        let round = size as usize - 1;
        let state = GameState::from_masks(n, masks.clone(), round);
        if canonical_state(&state).masks != masks {
            return Err(GameError::NotCanonical);
        }
        Ok(CanonicalState { masks })
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn n(&self) -> usize {
        self.masks.len()
    }

    pub fn round(&self) -> usize {
        self.masks[0].count_ones() as usize - 1
    }

    /// The representative position this encoding denotes.
    pub(crate) fn to_state(&self) -> GameState {
        GameState::from_masks(self.n(), self.masks.clone(), self.round())
    }

    pub(crate) fn from_raw(masks: Vec<u32>) -> CanonicalState {
        CanonicalState { masks }
    }
}

/// Shared machinery for canonicalization: all permutations of `0..n` in
/// lexicographic order together with their inverses.
pub(crate) struct Canonicalizer {
    n: usize,
    perms: Vec<Vec<usize>>,
    invs: Vec<Vec<usize>>,
}

impl Canonicalizer {
    pub(crate) fn new(n: usize) -> Canonicalizer {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        debug_assert!(perms[0].iter().enumerate().all(|(i, &p)| i == p));
        let invs = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; n];
                for (i, &x) in p.iter().enumerate() {
                    inv[x] = i;
                }
                inv
            })
            .collect();
        Canonicalizer { n, perms, invs }
    }

    fn map_mask(perm: &[usize], mut mask: u32) -> u32 {
        let mut out = 0;
        while mask != 0 {
            let b = mask.trailing_zeros() as usize;
            out |= 1 << perm[b];
            mask &= mask - 1;
        }
        out
    }

    /// The minimal relabeled encoding, plus the lexicographically least
    /// permutation achieving it.
    pub(crate) fn canon_with_perm(&self, masks: &[u32]) -> (Vec<u32>, &[usize]) {
        debug_assert_eq!(masks.len(), self.n);
        let mut best: Vec<u32> = masks.to_vec();
        let mut best_idx = 0;
        'perms: for idx in 1..self.perms.len() {
            let (perm, inv) = (&self.perms[idx], &self.invs[idx]);
            for j in 0..self.n {
                let v = Self::map_mask(perm, masks[inv[j]]);
                match v.cmp(&best[j]) {
                    std::cmp::Ordering::Less => {
                        for (jj, slot) in best.iter_mut().enumerate() {
                            *slot = Self::map_mask(perm, masks[inv[jj]]);
                        }
                        best_idx = idx;
                        continue 'perms;
                    }
                    std::cmp::Ordering::Greater => continue 'perms,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        (best, &self.perms[best_idx])
    }

    pub(crate) fn canon(&self, masks: &[u32]) -> Vec<u32> {
        self.canon_with_perm(masks).0
    }
}

/// Canonical encoding of a state (see [`CanonicalState`]).
pub fn canonical_state(state: &GameState) -> CanonicalState {
    CanonicalState {
        masks: Canonicalizer::new(state.n()).canon(state.masks()),
    }
}
