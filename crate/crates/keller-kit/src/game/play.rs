//! Simulation harness: strategy traits, canned strategies, and transcripts.
//!
//! All randomness is seeded ChaCha8; two runs with equal seeds and strategies
//! produce byte-equal transcripts.

use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::solve::{Certificate, Engine};
use super::{
    apply_move, legal_offers, DistinctnessMode, GameError, GameState, MoveOutcome, Offer, Pick,
};

/// Strategy-level failures (rule violations arrive as [`GameError`]).
#[derive(Debug, Error)]
pub enum PlayError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("interactive input ended before a pick was made")]
    InputClosed,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Picks one element per row after seeing the whole offer.
pub trait Chooser {
    fn choose(&mut self, state: &GameState, offer: &Offer) -> Result<Pick, PlayError>;
}

/// Proposes the round's offer.
pub trait Adversary {
    fn propose(&mut self, state: &GameState) -> Result<Offer, PlayError>;
}

/// Uniformly random element per row.
pub struct RandomChooser {
    rng: ChaCha8Rng,
}

impl RandomChooser {
    pub fn new(seed: u64) -> RandomChooser {
        RandomChooser {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Chooser for RandomChooser {
    fn choose(&mut self, _state: &GameState, offer: &Offer) -> Result<Pick, PlayError> {
        let choices = offer
            .pairs()
            .iter()
            .map(|&(u, v)| if self.rng.gen_range(0..2u8) == 0 { u } else { v })
            .collect();
        Ok(Pick::new(choices))
    }
}

/// The deterministic one-round lookahead rule: rows are settled in order,
/// and each row keeps the element whose tentative set is matched by the
/// fewest other rows. A row already settled this round that equals the
/// tentative set is a guaranteed collision, so those matches dominate;
/// unsettled rows (which might still be steered elsewhere) only break ties
/// among survivable options, and remaining ties go to the smaller element.
pub struct GreedyChooser;

/// Danger of keeping `elem` in `row`: how many settled rows already hold the
/// tentative set, and how many later rows could still reach it through the
/// current offer.
fn greedy_danger(
    settled: &[u32],
    offer: &Offer,
    row: usize,
    elem: u32,
    state: &GameState,
) -> (usize, usize) {
    let tentative = state.mask(row) | 1 << elem;
    let mut certain = 0;
    let mut possible = 0;
    for other in 0..state.n() {
        if other == row {
            continue;
        }
        if other < row {
            if settled[other] == tentative {
                certain += 1;
            }
        } else {
            let (u, v) = offer.pairs()[other];
            if state.mask(other) | 1 << u == tentative || state.mask(other) | 1 << v == tentative {
                possible += 1;
            }
        }
    }
    (certain, possible)
}

/// The pick the greedy rule makes; also the deterministic fallback for
/// optimal play outside certified positions.
pub(crate) fn greedy_choice(state: &GameState, offer: &Offer) -> Pick {
    let mut settled = state.masks().to_vec();
    let mut choices = Vec::with_capacity(state.n());
    for row in 0..state.n() {
        let (u, v) = offer.pairs()[row];
        let du = greedy_danger(&settled, offer, row, u, state);
        let dv = greedy_danger(&settled, offer, row, v, state);
        let elem = if dv < du { v } else { u };
        choices.push(elem);
        settled[row] |= 1 << elem;
    }
    Pick::new(choices)
}

impl Chooser for GreedyChooser {
    fn choose(&mut self, state: &GameState, offer: &Offer) -> Result<Pick, PlayError> {
        Ok(greedy_choice(state, offer))
    }
}

/// Follows a winning certificate; at positions the certificate does not
/// cover (there are none while the game is still winnable), it falls back
/// to the greedy rule so play can always continue.
pub struct OptimalChooser<'a> {
    certificate: Option<&'a Certificate>,
}

impl<'a> OptimalChooser<'a> {
    pub fn new(certificate: Option<&'a Certificate>) -> OptimalChooser<'a> {
        OptimalChooser { certificate }
    }
}

impl Chooser for OptimalChooser<'_> {
    fn choose(&mut self, state: &GameState, offer: &Offer) -> Result<Pick, PlayError> {
        if let Some(pick) = self
            .certificate
            .and_then(|cert| cert.pick_for(state, offer))
        {
            return Ok(pick);
        }
        Ok(greedy_choice(state, offer))
    }
}

/// Prompts `row i: pick u or v` (1-based) and reads `row:element` replies.
/// Unparsable replies are re-prompted; end of input is an error.
pub struct HumanChooser<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> HumanChooser<R, W> {
    pub fn new(input: R, output: W) -> HumanChooser<R, W> {
        HumanChooser { input, output }
    }

    fn read_row_pick(&mut self, row: usize, u: u32, v: u32) -> Result<u32, PlayError> {
        loop {
            writeln!(self.output, "row {}: pick {} or {}", row + 1, u + 1, v + 1)?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(PlayError::InputClosed);
            }
            if let Some(elem) = parse_row_pick(line.trim(), row, u, v) {
                return Ok(elem);
            }
            writeln!(
                self.output,
                "enter {}:{} or {}:{}",
                row + 1,
                u + 1,
                row + 1,
                v + 1
            )?;
        }
    }
}

/// Parses a 1-based `row:element` reply for the given row; returns the
/// 0-based element if it names this row and one of the offered elements.
fn parse_row_pick(token: &str, row: usize, u: u32, v: u32) -> Option<u32> {
    let (row_part, elem_part) = token.split_once(':')?;
    let given_row: usize = row_part.trim().parse().ok()?;
    let given_elem: u32 = elem_part.trim().parse().ok()?;
    if given_row != row + 1 {
        return None;
    }
    let elem = given_elem.checked_sub(1)?;
    (elem == u || elem == v).then_some(elem)
}

impl<R: BufRead, W: Write> Chooser for HumanChooser<R, W> {
    fn choose(&mut self, state: &GameState, offer: &Offer) -> Result<Pick, PlayError> {
        writeln!(
            self.output,
            "round {} of {} — offer: {}",
            state.round() + 1,
            state.rounds_total(),
            offer
        )?;
        let mut choices = Vec::with_capacity(state.n());
        for (row, &(u, v)) in offer.pairs().iter().enumerate() {
            choices.push(self.read_row_pick(row, u, v)?);
        }
        Ok(Pick::new(choices))
    }
}

/// Uniformly random pair per row.
pub struct RandomAdversary {
    rng: ChaCha8Rng,
}

impl RandomAdversary {
    pub fn new(seed: u64) -> RandomAdversary {
        RandomAdversary {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Adversary for RandomAdversary {
    fn propose(&mut self, state: &GameState) -> Result<Offer, PlayError> {
        if state.is_terminal() {
            return Err(GameError::TerminalState {
                n: state.n(),
                round: state.round(),
            }
            .into());
        }
        let mut pairs = Vec::with_capacity(state.n());
        for row in 0..state.n() {
            let missing: Vec<u32> = (0..state.n() as u32)
                .filter(|&e| state.mask(row) & (1 << e) == 0)
                .collect();
            let u = self.rng.gen_range(0..missing.len());
            let v = self.rng.gen_range(0..missing.len() - 1);
            let v = if v >= u { v + 1 } else { v };
            pairs.push((missing[u], missing[v]));
        }
        Ok(Offer::new(pairs))
    }
}

/// Mirror of the greedy chooser: rows are assigned pairs in order, and each
/// row gets the pair whose two tentative sets are matched by the most other
/// rows (fixed pairs count their two options, unassigned rows any superset);
/// ties go to the lexicographically smallest pair.
pub struct GreedyAdversary;

impl Adversary for GreedyAdversary {
    fn propose(&mut self, state: &GameState) -> Result<Offer, PlayError> {
        if state.is_terminal() {
            return Err(GameError::TerminalState {
                n: state.n(),
                round: state.round(),
            }
            .into());
        }
        let n = state.n();
        let mut fixed: Vec<(u32, u32)> = Vec::with_capacity(n);
        for row in 0..n {
            let missing: Vec<u32> = (0..n as u32)
                .filter(|&e| state.mask(row) & (1 << e) == 0)
                .collect();
            let threat = |elem: u32| {
                let tentative = state.mask(row) | 1 << elem;
                (0..n)
                    .filter(|&other| other != row)
                    .filter(|&other| {
                        if let Some(&(u, v)) = fixed.get(other) {
                            state.mask(other) | 1 << u == tentative
                                || state.mask(other) | 1 << v == tentative
                        } else {
                            state.mask(other) & !tentative == 0
                        }
                    })
                    .count()
            };
            let mut best: Option<((u32, u32), usize)> = None;
            for (i, &u) in missing.iter().enumerate() {
                for &v in &missing[i + 1..] {
                    let score = threat(u) + threat(v);
                    if best.map_or(true, |(_, s)| score > s) {
                        best = Some(((u, v), score));
                    }
                }
            }
            fixed.push(best.expect("non-terminal rows have at least one pair").0);
        }
        Ok(Offer::new(fixed))
    }
}

/// Plays minimax-perfect offers: the lexicographically first offer the
/// chooser cannot survive, or the first offer when none refutes.
pub struct OptimalAdversary {
    engine: Engine,
}

impl OptimalAdversary {
    pub fn new(n: usize, mode: DistinctnessMode) -> Result<OptimalAdversary, GameError> {
        if !(2..=super::solve::SOLVE_BOUND).contains(&n) {
            return Err(GameError::SolveBoundExceeded {
                n,
                bound: super::solve::SOLVE_BOUND,
            });
        }
        Ok(OptimalAdversary {
            engine: Engine::new(n, mode),
        })
    }
}

impl Adversary for OptimalAdversary {
    fn propose(&mut self, state: &GameState) -> Result<Offer, PlayError> {
        let mut offers = legal_offers(state).map_err(GameError::from)?;
        let first = offers.next().expect("non-terminal states have offers");
        if self.engine.winning_pick(state, &first).is_none() {
            return Ok(first);
        }
        for offer in offers {
            if self.engine.winning_pick(state, &offer).is_none() {
                return Ok(offer);
            }
        }
        Ok(first)
    }
}

/// One completed round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub offer: Offer,
    pub pick: Pick,
}

/// How a play ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayOutcome {
    ChooserWins,
    Collision {
        row_a: usize,
        row_b: usize,
        round: usize,
    },
}

/// Full record of one play: every offer and pick, the outcome, and the sets
/// as they stood after the last move (collided sets included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub n: usize,
    pub mode: DistinctnessMode,
    pub rounds: Vec<RoundRecord>,
    pub outcome: PlayOutcome,
    pub final_sets: Vec<Vec<u32>>,
}

/// Runs one game to completion (or collision).
pub fn play(
    n: usize,
    mode: DistinctnessMode,
    chooser: &mut dyn Chooser,
    adversary: &mut dyn Adversary,
) -> Result<Transcript, PlayError> {
    let mut state = GameState::initial(n);
    let mut rounds = Vec::new();
    let outcome = loop {
        if state.is_terminal() {
            break PlayOutcome::ChooserWins;
        }
        let offer = adversary.propose(&state)?;
        offer.validate(&state).map_err(GameError::from)?;
        let pick = chooser.choose(&state, &offer)?;
        let move_outcome = apply_move(&state, &offer, &pick, mode)?;
        let round = state.round();
        match move_outcome {
            MoveOutcome::Advanced(next) => {
                rounds.push(RoundRecord { offer, pick });
                state = next;
            }
            MoveOutcome::Violation { row_a, row_b } => {
                let masks: Vec<u32> = state
                    .masks()
                    .iter()
                    .zip(pick.choices())
                    .map(|(&m, &e)| m | 1 << e)
                    .collect();
                rounds.push(RoundRecord { offer, pick });
                return Ok(Transcript {
                    n,
                    mode,
                    rounds,
                    outcome: PlayOutcome::Collision {
                        row_a,
                        row_b,
                        round,
                    },
                    final_sets: masks.into_iter().map(super::mask_elems).collect(),
                });
            }
        }
    };
    Ok(Transcript {
        n,
        mode,
        rounds,
        outcome,
        final_sets: state.masks().iter().map(|&m| super::mask_elems(m)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::solve::chooser_wins_with;
    use super::*;
    use std::io::Cursor;

    #[test]
    fn greedy_survives_the_forced_three_round() {
        let state = GameState::initial(3);
        let offer = legal_offers(&state).unwrap().next().unwrap();
        assert_eq!(greedy_choice(&state, &offer), Pick::new(vec![1, 2, 0]));

        let transcript = play(
            3,
            DistinctnessMode::PerRound,
            &mut GreedyChooser,
            &mut RandomAdversary::new(0),
        )
        .unwrap();
        assert_eq!(transcript.outcome, PlayOutcome::ChooserWins);
        assert_eq!(
            transcript.final_sets,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]]
        );
    }

    #[test]
    fn optimal_play_never_loses_a_won_game() {
        let analysis = chooser_wins_with(4, DistinctnessMode::PerRound, 0).unwrap();
        assert!(analysis.chooser_wins);
        let cert = analysis.certificate.as_ref().unwrap();
        for seed in 0..16 {
            let transcript = play(
                4,
                DistinctnessMode::PerRound,
                &mut OptimalChooser::new(Some(cert)),
                &mut RandomAdversary::new(seed),
            )
            .unwrap();
            assert_eq!(transcript.outcome, PlayOutcome::ChooserWins, "seed {seed}");
            assert_eq!(transcript.rounds.len(), 2);
        }
        let vs_greedy = play(
            4,
            DistinctnessMode::PerRound,
            &mut OptimalChooser::new(Some(cert)),
            &mut GreedyAdversary,
        )
        .unwrap();
        assert_eq!(vs_greedy.outcome, PlayOutcome::ChooserWins);
        let vs_optimal = play(
            4,
            DistinctnessMode::PerRound,
            &mut OptimalChooser::new(Some(cert)),
            &mut OptimalAdversary::new(4, DistinctnessMode::PerRound).unwrap(),
        )
        .unwrap();
        assert_eq!(vs_optimal.outcome, PlayOutcome::ChooserWins);
    }

    #[test]
    fn seeded_play_reproduces_exactly() {
        let run = |seed| {
            play(
                5,
                DistinctnessMode::PerRound,
                &mut RandomChooser::new(seed),
                &mut RandomAdversary::new(seed + 1),
            )
            .unwrap()
        };
        assert_eq!(run(7), run(7));
        let greedy_twice = |_| {
            play(
                5,
                DistinctnessMode::PerRound,
                &mut GreedyChooser,
                &mut GreedyAdversary,
            )
            .unwrap()
        };
        assert_eq!(greedy_twice(()), greedy_twice(()));
    }

    #[test]
    fn zero_round_games_end_immediately() {
        let transcript = play(
            2,
            DistinctnessMode::PerRound,
            &mut GreedyChooser,
            &mut RandomAdversary::new(0),
        )
        .unwrap();
        assert_eq!(transcript.outcome, PlayOutcome::ChooserWins);
        assert!(transcript.rounds.is_empty());
        assert_eq!(transcript.final_sets, vec![vec![0], vec![1]]);
    }

    #[test]
    fn human_chooser_reads_and_reprompts() {
        let input = Cursor::new("1:2\nnonsense\n2:9\n2:3\n3:1\n");
        let mut output = Vec::new();
        let pick = {
            let mut human = HumanChooser::new(input, &mut output);
            let state = GameState::initial(3);
            let offer = legal_offers(&state).unwrap().next().unwrap();
            human.choose(&state, &offer).unwrap()
        };
        assert_eq!(pick, Pick::new(vec![1, 2, 0]));
        let printed = String::from_utf8(output).unwrap();
        assert!(printed.contains("row 1: pick 2 or 3"));
        assert!(printed.contains("enter 2:1 or 2:3"));
    }

    #[test]
    fn human_input_eof_is_an_error() {
        let mut human = HumanChooser::new(Cursor::new(""), Vec::new());
        let state = GameState::initial(3);
        let offer = legal_offers(&state).unwrap().next().unwrap();
        assert!(matches!(
            human.choose(&state, &offer),
            Err(PlayError::InputClosed)
        ));
    }

    #[test]
    fn optimal_adversary_bound_is_checked() {
        assert!(matches!(
            OptimalAdversary::new(9, DistinctnessMode::PerRound),
            Err(GameError::SolveBoundExceeded { n: 9, bound: 6 })
        ));
    }
}
