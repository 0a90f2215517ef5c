//! Command tree and dispatch.
//!
//! Exit codes: 0 success, 1 domain failure (invalid input, violated
//! precondition, exhausted budget or bound), 2 usage error, 3 a produced
//! solution failed its own certification.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use keller_kit::game::DistinctnessMode;
use keller_kit::poset::paths::PathMode;

use crate::commands;

/// Failure carried up to `main`, which prints the message and exits.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> CliError {
        CliError { code: 1, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn certification(message: impl Into<String>) -> CliError {
        CliError { code: 3, message: message.into() }
    }
}

#[derive(Parser)]
#[command(
    name = "keller-kit",
    version,
    about = "Certified solver, exhaustive search, set-growing game, and subset-poset checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve an instance and certify the result
    Solve {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Pin the first column: one element per row (label or 0-based id)
        #[arg(long, value_name = "ELEM", num_args = 1..)]
        first_column: Option<Vec<String>>,
        /// Write the solution to FILE as canonical JSON
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Check a solution file against its instance
    Verify {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Solution file (JSON)
        solution: PathBuf,
    },
    /// Exhaustive backtracking search over an instance
    Oracle {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Enumerate up to N solutions
        #[arg(long, value_name = "N")]
        enumerate: Option<usize>,
        /// Decide whether any solution exists
        #[arg(long)]
        exists: bool,
        /// Decide whether this first column extends to a full solution
        #[arg(long, value_name = "ELEM", num_args = 1.., conflicts_with_all = ["enumerate", "exists"])]
        extendable: Option<Vec<String>>,
        /// Search-node budget (default 20000000)
        #[arg(long, value_name = "NODES")]
        max_nodes: Option<usize>,
    },
    /// Adversarial set-growing game
    #[command(subcommand)]
    Game(GameCommand),
    /// Subset-poset checks and constructions
    #[command(subcommand)]
    Poset(PosetCommand),
}

#[derive(Subcommand)]
pub enum GameCommand {
    /// Decide who wins and write the chooser's strategy
    Solve {
        /// Ground-set size
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::PerRound)]
        mode: ModeArg,
        /// Strategy output path (default certificate-n<N>.json)
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Play one game, round by round
    Play {
        /// Ground-set size
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        chooser: ChooserArg,
        #[arg(long, value_enum)]
        adversary: AdversaryArg,
        /// Base RNG seed (chooser uses seed, adversary seed+1)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::PerRound)]
        mode: ModeArg,
        /// Strategy file for the optimal chooser (computed in-process if absent)
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        /// Write the transcript to FILE as canonical JSON
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Tally wins across every chooser/adversary pairing
    Sim {
        /// Ground-set size
        #[arg(long)]
        n: usize,
        /// Plays per pairing
        #[arg(long)]
        trials: usize,
        /// Base RNG seed (trial t uses seed+2t / seed+2t+1)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::PerRound)]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
pub enum PosetCommand {
    /// Check the leaf-versus-height bound on a rooted branching family
    CheckLemma {
        /// Poset file (JSON)
        poset: PathBuf,
    },
    /// Check the n-leaf bound and singleton charges on a wide family
    CheckProp {
        /// Poset file (JSON)
        poset: PathBuf,
    },
    /// Extract vertex-disjoint upward paths, or the cut blocking them
    Paths {
        /// Poset file (JSON)
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = PathModeArg::Full)]
        mode: PathModeArg,
        /// Write the outcome to FILE as canonical JSON
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Build the prefix-set family reachable from one instance row
    FromRow {
        /// Instance file (JSON)
        instance: PathBuf,
        /// Row index (1-based)
        #[arg(long)]
        row: usize,
        /// Write the family to FILE as canonical JSON
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Count every rooted branching family on n elements (n <= 4)
    Enumerate {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PerRound,
    EndOnly,
}

impl From<ModeArg> for DistinctnessMode {
    fn from(arg: ModeArg) -> DistinctnessMode {
        match arg {
            ModeArg::PerRound => DistinctnessMode::PerRound,
            ModeArg::EndOnly => DistinctnessMode::EndOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChooserArg {
    Random,
    Greedy,
    Optimal,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Random,
    Greedy,
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathModeArg {
    Full,
    Leaf,
}

impl From<PathModeArg> for PathMode {
    fn from(arg: PathModeArg) -> PathMode {
        match arg {
            PathModeArg::Full => PathMode::Full,
            PathModeArg::Leaf => PathMode::Leaf,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { instance, first_column, emit } => {
            commands::solve::run(&instance, first_column.as_deref(), emit.as_deref())
        }
        Command::Verify { instance, solution } => commands::verify::run(&instance, &solution),
        Command::Oracle { instance, enumerate, exists, extendable, max_nodes } => {
            commands::oracle::run(&instance, enumerate, exists, extendable.as_deref(), max_nodes)
        }
        Command::Game(cmd) => commands::game::run(cmd),
        Command::Poset(cmd) => commands::poset::run(cmd),
    }
}
