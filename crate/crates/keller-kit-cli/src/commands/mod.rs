//! One module per top-level command.

pub mod game;
pub mod oracle;
pub mod poset;
pub mod solve;
pub mod verify;

use keller_kit::system::{Alphabet, Elem};

use crate::cli::CliError;

/// Resolves command-line element tokens (labels first, then bare 0-based ids).
pub fn resolve_column(alphabet: &Alphabet, tokens: &[String]) -> Result<Vec<Elem>, CliError> {
    tokens
        .iter()
        .map(|token| {
            alphabet.lookup(token).ok_or_else(|| {
                CliError::invalid(format!("unknown element {token:?}"))
            })
        })
        .collect()
}
