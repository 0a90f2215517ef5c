//! Exact win/loss analysis of the pursuit game.
//!
//! A position is winning for the chooser when every legal offer admits a pick
//! that survives the round and leads to another winning position; positions
//! with all rounds played are winning. The engine memoizes on canonical
//! encodings, so equivalent positions are solved once. A win comes with a
//! replayable certificate: for every reachable winning position and every
//! offer, the pick to make.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use super::{
    apply_move, canonical_state, legal_offers, CanonicalState, Canonicalizer, DistinctnessMode,
    GameError, GameState, MoveOutcome, Offer, Pick,
};

/// Largest `n` the memoized solver accepts.
pub const SOLVE_BOUND: usize = 6;

/// Largest `n` the memo-free cross-check walker accepts.
pub const BRUTE_BOUND: usize = 4;

/// Outcome of solving one game size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameAnalysis {
    pub n: usize,
    pub mode: DistinctnessMode,
    pub chooser_wins: bool,
    /// Present exactly when the chooser wins.
    pub certificate: Option<Certificate>,
}

/// A winning strategy: for every reachable winning position (canonically
/// encoded) and every legal offer there, the pick that keeps the game won.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    n: usize,
    mode: DistinctnessMode,
    entries: BTreeMap<CanonicalState, BTreeMap<Offer, Pick>>,
}

impl Certificate {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> DistinctnessMode {
        self.mode
    }

    /// Number of recorded positions.
    pub fn state_count(&self) -> usize {
        self.entries.len()
    }

    /// Number of (position, offer) entries.
    pub fn entry_count(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    /// Deterministically ordered view of the full strategy.
    pub fn states(
        &self,
    ) -> impl Iterator<Item = (&CanonicalState, &BTreeMap<Offer, Pick>)> {
        self.entries.iter()
    }

    /// The stored pick for a canonically-encoded position and offer.
    pub fn lookup(&self, state: &CanonicalState, offer: &Offer) -> Option<&Pick> {
        self.entries.get(state)?.get(offer)
    }

    /// The pick to make at a concrete position: the position and offer are
    /// relabeled into canonical coordinates, looked up, and the stored pick
    /// is translated back.
    pub fn pick_for(&self, state: &GameState, offer: &Offer) -> Option<Pick> {
        let canon = Canonicalizer::new(state.n());
        let (masks, perm) = canon.canon_with_perm(state.masks());
        let key = CanonicalState::from_raw(masks);
        let stored = self.entries.get(&key)?.get(&offer.apply_perm(perm))?;
        Some(stored.unapply_perm(perm))
    }

    /// Rebuilds a certificate from parsed parts, validating that keys are
    /// canonical and that every offer/pick fits its position.
    pub fn from_parts(
        n: usize,
        mode: DistinctnessMode,
        parts: Vec<(CanonicalState, Vec<(Offer, Pick)>)>,
    ) -> Result<Certificate, GameError> {
        let mut entries = BTreeMap::new();
        for (state, moves) in parts {
            if state.n() != n {
                return Err(GameError::WrongRowCount {
                    expected: n,
                    got: state.n(),
                });
            }
            let position = state.to_state();
            let mut per_state = BTreeMap::new();
            for (offer, pick) in moves {
                offer.validate(&position)?;
                pick.validate(&offer)?;
                per_state.insert(offer, pick);
            }
            entries.insert(state, per_state);
        }
        Ok(Certificate { n, mode, entries })
    }
}

/// Memoized minimax evaluator. The memo is keyed on canonical encodings and
/// behaves as one logically-consistent map: inserts are idempotent because a
/// position's value is a pure function of the position, so concurrent
/// evaluation of sibling offers cannot disagree.
pub(crate) struct Engine {
    mode: DistinctnessMode,
    canon: Canonicalizer,
    memo: Mutex<HashMap<CanonicalState, bool>>,
}

impl Engine {
    pub(crate) fn new(n: usize, mode: DistinctnessMode) -> Engine {
        Engine {
            mode,
            canon: Canonicalizer::new(n),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn value(&self, state: &GameState) -> bool {
        if state.is_terminal() {
            return true;
        }
        let key = CanonicalState::from_raw(self.canon.canon(state.masks()));
        if let Some(&known) = self.memo.lock().unwrap().get(&key) {
            return known;
        }
        let win = legal_offers(state)
            .expect("state is not terminal")
            .all(|offer| self.winning_pick(state, &offer).is_some());
        self.memo.lock().unwrap().insert(key, win);
        win
    }

    /// The lexicographically first pick that survives the round and leads to
    /// a winning position, if one exists.
    pub(crate) fn winning_pick(&self, state: &GameState, offer: &Offer) -> Option<Pick> {
        for pick in picks_lex(offer) {
            match apply_move(state, offer, &pick, self.mode).expect("offer and pick are legal") {
                MoveOutcome::Advanced(next) => {
                    if self.value(&next) {
                        return Some(pick);
                    }
                }
                MoveOutcome::Violation { .. } => {}
            }
        }
        None
    }

    fn memoize_root(&self, root: &GameState, win: bool) {
        let key = CanonicalState::from_raw(self.canon.canon(root.masks()));
        self.memo.lock().unwrap().insert(key, win);
    }
}

/// All picks for an offer in lexicographic order (row 0 varies slowest; the
/// smaller element of each pair comes first).
fn picks_lex(offer: &Offer) -> impl Iterator<Item = Pick> + '_ {
    let n = offer.pairs().len();
    (0..1u64 << n).map(move |selector| {
        let choices = offer
            .pairs()
            .iter()
            .enumerate()
            .map(|(row, &(u, v))| {
                if selector >> (n - 1 - row) & 1 == 0 {
                    u
                } else {
                    v
                }
            })
            .collect();
        Pick::new(choices)
    })
}

/// Decodes the `index`-th offer of the lexicographic enumeration without
/// materializing the whole product (the root of `n = 6` has a million).
fn offer_at(per_row: &[Vec<(u32, u32)>], mut index: usize) -> Offer {
    let mut pairs = vec![(0, 0); per_row.len()];
    for (row, options) in per_row.iter().enumerate().rev() {
        pairs[row] = options[index % options.len()];
        index /= options.len();
    }
    debug_assert_eq!(index, 0);
    Offer::new(pairs)
}

/// Solves the game with the default per-round distinctness rule. Worker
/// count comes from [`crate::worker_threads`].
pub fn chooser_wins(n: usize) -> Result<GameAnalysis, GameError> {
    chooser_wins_with(n, DistinctnessMode::default(), crate::worker_threads())
}

/// Solves the game, choosing the distinctness rule and the number of worker
/// threads used to sweep the root offers (0 or 1 = fully sequential). The
/// result and certificate are independent of the thread count.
pub fn chooser_wins_with(
    n: usize,
    mode: DistinctnessMode,
    threads: usize,
) -> Result<GameAnalysis, GameError> {
    if !(2..=SOLVE_BOUND).contains(&n) {
        return Err(GameError::SolveBoundExceeded {
            n,
            bound: SOLVE_BOUND,
        });
    }
    let engine = Engine::new(n, mode);
    let root = GameState::initial(n);
    let wins = if root.is_terminal() {
        true
    } else if threads <= 1 {
        engine.value(&root)
    } else {
        sweep_root_offers(&engine, &root, threads)
    };
    let certificate = wins.then(|| build_certificate(&engine, &root));
    Ok(GameAnalysis {
        n,
        mode,
        chooser_wins: wins,
        certificate,
    })
}

/// Evaluates the root's offers across worker threads. Each worker claims
/// offer indices from a shared counter; one refuted offer settles the game
/// as lost. The shared memo only caches pure position values, so the final
/// verdict does not depend on scheduling.
fn sweep_root_offers(engine: &Engine, root: &GameState, threads: usize) -> bool {
    let per_row: Vec<Vec<(u32, u32)>> = (0..root.n())
        .map(|row| {
            let missing: Vec<u32> = (0..root.n() as u32)
                .filter(|&e| root.mask(row) & (1 << e) == 0)
                .collect();
            use itertools::Itertools;
            missing.into_iter().tuple_combinations().collect()
        })
        .collect();
    let total: usize = per_row.iter().map(Vec::len).product();
    let next_index = AtomicUsize::new(0);
    let refuted = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(total) {
            scope.spawn(|| loop {
                let index = next_index.fetch_add(1, Ordering::Relaxed);
                if index >= total || refuted.load(Ordering::Relaxed) {
                    break;
                }
                let offer = offer_at(&per_row, index);
                if engine.winning_pick(root, &offer).is_none() {
                    refuted.store(true, Ordering::Relaxed);
                }
            });
        }
    });
    let win = !refuted.load(Ordering::Relaxed);
    engine.memoize_root(root, win);
    win
}

/// Collects the winning strategy reachable from the root: breadth-first over
/// canonical positions, storing for every offer the lexicographically first
/// winning pick. Sequential by construction, so the output is deterministic.
fn build_certificate(engine: &Engine, root: &GameState) -> Certificate {
    let mut entries: BTreeMap<CanonicalState, BTreeMap<Offer, Pick>> = BTreeMap::new();
    let mut seen: HashSet<CanonicalState> = HashSet::new();
    let mut queue: VecDeque<CanonicalState> = VecDeque::new();
    let start = canonical_state(root);
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(encoded) = queue.pop_front() {
        let position = encoded.to_state();
        if position.is_terminal() {
            continue;
        }
        debug_assert!(engine.value(&position), "certificate positions are winning");
        let mut per_state = BTreeMap::new();
        for offer in legal_offers(&position).expect("position is not terminal") {
            let pick = engine
                .winning_pick(&position, &offer)
                .expect("every offer at a winning position has a surviving pick");
            let MoveOutcome::Advanced(next) =
                apply_move(&position, &offer, &pick, engine.mode).expect("legal move")
            else {
                unreachable!("a winning pick never collides");
            };
            let encoded_next = canonical_state(&next);
            if seen.insert(encoded_next.clone()) {
                queue.push_back(encoded_next);
            }
            per_state.insert(offer, pick);
        }
        entries.insert(encoded, per_state);
    }
    Certificate {
        n: root.n(),
        mode: engine.mode,
        entries,
    }
}

/// Memo-free, canonicalization-free expansion of the whole game tree.
/// Exponentially slower than [`chooser_wins_with`]; it exists as an
/// independent cross-check for small `n`.
pub fn chooser_wins_brute(n: usize, mode: DistinctnessMode) -> Result<bool, GameError> {
    if !(2..=BRUTE_BOUND).contains(&n) {
        return Err(GameError::SolveBoundExceeded {
            n,
            bound: BRUTE_BOUND,
        });
    }
    fn walk(state: &GameState, mode: DistinctnessMode) -> bool {
        if state.is_terminal() {
            return true;
        }
        legal_offers(state).expect("not terminal").all(|offer| {
            picks_lex(&offer).any(|pick| {
                match apply_move(state, &offer, &pick, mode).expect("legal move") {
                    MoveOutcome::Advanced(next) => walk(&next, mode),
                    MoveOutcome::Violation { .. } => false,
                }
            })
        })
    }
    Ok(walk(&GameState::initial(n), mode))
}

/// How a certificate replay failed.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("no certificate entry covers round {round}")]
    MissingEntry { round: usize },
    #[error("replay collided rows {} and {} in round {}", row_a + 1, row_b + 1, round + 1)]
    Collision {
        row_a: usize,
        row_b: usize,
        round: usize,
    },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Replay coverage counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub positions_visited: usize,
    pub moves_checked: usize,
}

/// Replays a certificate against *every* adversary line from the opening
/// position: at each reached position, every legal offer is answered with
/// the certificate's pick. Succeeds only if no line is missing an entry and
/// no line collides. Positions are deduplicated concretely (not canonically),
/// so the permutation-translation path of [`Certificate::pick_for`] is
/// exercised throughout.
pub fn replay_certificate(certificate: &Certificate) -> Result<ReplayStats, ReplayError> {
    let mut stats = ReplayStats::default();
    let mut seen: HashSet<GameState> = HashSet::new();
    let mut stack = vec![GameState::initial(certificate.n())];
    seen.insert(stack[0].clone());
    while let Some(state) = stack.pop() {
        stats.positions_visited += 1;
        if state.is_terminal() {
            continue;
        }
        for offer in legal_offers(&state)? {
            let pick = certificate
                .pick_for(&state, &offer)
                .ok_or(ReplayError::MissingEntry {
                    round: state.round(),
                })?;
            stats.moves_checked += 1;
            match apply_move(&state, &offer, &pick, certificate.mode())? {
                MoveOutcome::Advanced(next) => {
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
                MoveOutcome::Violation { row_a, row_b } => {
                    return Err(ReplayError::Collision {
                        row_a,
                        row_b,
                        round: state.round(),
                    });
                }
            }
        }
    }
    Ok(stats)
}
