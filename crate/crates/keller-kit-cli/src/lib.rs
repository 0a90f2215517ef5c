//! Command-line front end: instance solving and verification, exhaustive
//! search, the adversarial set-growing game, and subset-poset checks.

pub mod cli;
pub mod commands;
pub mod formats;
