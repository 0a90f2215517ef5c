//! `game solve` / `game play` / `game sim`.

use std::io::IsTerminal;
use std::path::PathBuf;

use keller_kit::game::play::{
    play, Adversary, Chooser, GreedyAdversary, GreedyChooser, HumanChooser, OptimalAdversary,
    OptimalChooser, PlayOutcome, RandomAdversary, RandomChooser, Transcript,
};
use keller_kit::game::solve::{chooser_wins_with, Certificate};
use keller_kit::game::DistinctnessMode;
use keller_kit::worker_threads;

use crate::cli::{AdversaryArg, ChooserArg, CliError, GameCommand};
use crate::formats;

pub fn run(cmd: GameCommand) -> Result<(), CliError> {
    match cmd {
        GameCommand::Solve { n, mode, emit } => solve_cmd(n, mode.into(), emit),
        GameCommand::Play { n, chooser, adversary, seed, mode, certificate, emit } => {
            play_cmd(n, chooser, adversary, seed, mode.into(), certificate, emit)
        }
        GameCommand::Sim { n, trials, seed, mode } => sim_cmd(n, trials, seed, mode.into()),
    }
}

fn solve_cmd(n: usize, mode: DistinctnessMode, emit: Option<PathBuf>) -> Result<(), CliError> {
    let analysis = chooser_wins_with(n, mode, worker_threads())
        .map_err(|e| CliError::invalid(e.to_string()))?;
    println!("chooser wins: {}", analysis.chooser_wins);
    if let Some(cert) = &analysis.certificate {
        println!(
            "strategy: {} positions, {} offers answered",
            cert.state_count(),
            cert.entry_count()
        );
        let path = emit.unwrap_or_else(|| PathBuf::from(format!("certificate-n{n}.json")));
        formats::write_canonical(&path, &formats::certificate_value(cert))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn play_cmd(
    n: usize,
    chooser: ChooserArg,
    adversary: AdversaryArg,
    seed: u64,
    mode: DistinctnessMode,
    certificate: Option<PathBuf>,
    emit: Option<PathBuf>,
) -> Result<(), CliError> {
    let cert_store = load_strategy(n, mode, chooser, certificate.as_deref())?;

    let mut random_chooser;
    let mut greedy_chooser;
    let mut optimal_chooser;
    let mut human_chooser;
    let chooser_ref: &mut dyn Chooser = match chooser {
        ChooserArg::Random => {
            random_chooser = RandomChooser::new(seed);
            &mut random_chooser
        }
        ChooserArg::Greedy => {
            greedy_chooser = GreedyChooser;
            &mut greedy_chooser
        }
        ChooserArg::Optimal => {
            optimal_chooser = OptimalChooser::new(cert_store.as_ref());
            &mut optimal_chooser
        }
        ChooserArg::Human => {
            if !std::io::stdin().is_terminal() {
                return Err(CliError::usage("--chooser human needs an interactive terminal"));
            }
            human_chooser = HumanChooser::new(std::io::stdin().lock(), std::io::stdout());
            &mut human_chooser
        }
    };

    let mut random_adv;
    let mut greedy_adv;
    let mut optimal_adv;
    let adversary_ref: &mut dyn Adversary = match adversary {
        AdversaryArg::Random => {
            random_adv = RandomAdversary::new(seed + 1);
            &mut random_adv
        }
        AdversaryArg::Greedy => {
            greedy_adv = GreedyAdversary;
            &mut greedy_adv
        }
        AdversaryArg::Optimal => {
            optimal_adv =
                OptimalAdversary::new(n, mode).map_err(|e| CliError::invalid(e.to_string()))?;
            &mut optimal_adv
        }
    };

    let transcript =
        play(n, mode, chooser_ref, adversary_ref).map_err(|e| CliError::invalid(e.to_string()))?;
    print_transcript(&transcript);
    if let Some(path) = emit {
        formats::write_canonical(&path, &formats::transcript_value(&transcript))
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Loads (or computes) the winning strategy when the optimal chooser plays.
fn load_strategy(
    n: usize,
    mode: DistinctnessMode,
    chooser: ChooserArg,
    certificate: Option<&std::path::Path>,
) -> Result<Option<Certificate>, CliError> {
    if chooser != ChooserArg::Optimal {
        return Ok(None);
    }
    match certificate {
        Some(path) => {
            let cert = formats::read_certificate(path).map_err(CliError::invalid)?;
            if cert.n() != n || cert.mode() != mode {
                return Err(CliError::invalid(format!(
                    "certificate covers n = {} in {} mode; this game is n = {} in {} mode",
                    cert.n(),
                    cert.mode(),
                    n,
                    mode
                )));
            }
            Ok(Some(cert))
        }
        None => Ok(chooser_wins_with(n, mode, worker_threads())
            .map_err(|e| CliError::invalid(e.to_string()))?
            .certificate),
    }
}

fn print_transcript(t: &Transcript) {
    for (idx, r) in t.rounds.iter().enumerate() {
        println!("round {}: offer {}  pick {}", idx + 1, r.offer, r.pick);
    }
    match t.outcome {
        PlayOutcome::ChooserWins => println!("outcome: chooser wins"),
        PlayOutcome::Collision { row_a, row_b, round } => println!(
            "outcome: rows {} and {} collide in round {}",
            row_a + 1,
            row_b + 1,
            round + 1
        ),
    }
    for (i, set) in t.final_sets.iter().enumerate() {
        let elems: Vec<String> = set.iter().map(|e| (e + 1).to_string()).collect();
        println!("set {}: {{{}}}", i + 1, elems.join(","));
    }
}

fn sim_cmd(n: usize, trials: usize, seed: u64, mode: DistinctnessMode) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    // One strategy build and one memoized adversary engine serve every trial.
    let cert = chooser_wins_with(n, mode, worker_threads())
        .map_err(|e| CliError::invalid(e.to_string()))?
        .certificate;
    let mut optimal_adv =
        OptimalAdversary::new(n, mode).map_err(|e| CliError::invalid(e.to_string()))?;

    for chooser_kind in [ChooserArg::Random, ChooserArg::Greedy, ChooserArg::Optimal] {
        for adversary_kind in [AdversaryArg::Random, AdversaryArg::Greedy, AdversaryArg::Optimal] {
            let mut wins = 0usize;
            for trial in 0..trials {
                let chooser_seed = seed + 2 * trial as u64;
                let mut random_chooser;
                let mut greedy_chooser;
                let mut optimal_chooser;
                let chooser_ref: &mut dyn Chooser = match chooser_kind {
                    ChooserArg::Random => {
                        random_chooser = RandomChooser::new(chooser_seed);
                        &mut random_chooser
                    }
                    ChooserArg::Greedy => {
                        greedy_chooser = GreedyChooser;
                        &mut greedy_chooser
                    }
                    ChooserArg::Optimal => {
                        optimal_chooser = OptimalChooser::new(cert.as_ref());
                        &mut optimal_chooser
                    }
                    ChooserArg::Human => unreachable!("sim never plays the human chooser"),
                };
                let mut random_adv;
                let mut greedy_adv;
                let adversary_ref: &mut dyn Adversary = match adversary_kind {
                    AdversaryArg::Random => {
                        random_adv = RandomAdversary::new(chooser_seed + 1);
                        &mut random_adv
                    }
                    AdversaryArg::Greedy => {
                        greedy_adv = GreedyAdversary;
                        &mut greedy_adv
                    }
                    AdversaryArg::Optimal => &mut optimal_adv,
                };
                let transcript = play(n, mode, chooser_ref, adversary_ref)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                if matches!(transcript.outcome, PlayOutcome::ChooserWins) {
                    wins += 1;
                }
            }
            println!(
                "chooser {} vs adversary {}: {wins}/{trials}",
                kind_name_chooser(chooser_kind),
                kind_name_adversary(adversary_kind)
            );
        }
    }
    Ok(())
}

fn kind_name_chooser(arg: ChooserArg) -> &'static str {
    match arg {
        ChooserArg::Random => "random",
        ChooserArg::Greedy => "greedy",
        ChooserArg::Optimal => "optimal",
        ChooserArg::Human => "human",
    }
}

fn kind_name_adversary(arg: AdversaryArg) -> &'static str {
    match arg {
        AdversaryArg::Random => "random",
        AdversaryArg::Greedy => "greedy",
        AdversaryArg::Optimal => "optimal",
    }
}
