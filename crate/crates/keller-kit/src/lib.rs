//! Set-system solver toolkit: a certified constructive solver for (n,k)-systems
//! of candidate sets, an exhaustive backtracking oracle, an exact engine for the
//! related set-growing adversarial game, and a subset-poset toolkit with
//! vertex-disjoint path extraction.

pub mod bitset;
pub mod game;
pub mod instances;
pub mod oracle;
pub mod poset;
pub mod solver;
pub mod system;
pub mod verify;

/// Worker cap from the `KELLER_KIT_THREADS` environment variable.
///
/// 0 (the default) and 1 both mean sequential; unparseable values fall back to 0.
pub fn worker_threads() -> usize {
    std::env::var("KELLER_KIT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}
