//! Seeded generation and exhaustive enumeration of rooted branching
//! families, for randomized scans and small-scale exhaustive checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_branching, is_rooted, is_wide, PosetError, SubPoset};

/// Largest ground-set size the seeded generator accepts.
pub const GEN_BOUND: usize = 8;

/// Largest ground-set size the exhaustive enumerator accepts.
pub const ENUM_BOUND: usize = 4;

/// Defensive bound on the total number of rejected candidate deletions per
/// generation call; carving is quadratic in the pool at worst, so hitting
/// this means something is badly off.
const REJECTION_LIMIT: usize = 10_000;

/// Generates a wide rooted branching family on `[n]`, reproducibly from
/// `seed`. Starting from the Boolean lattice without its top element, it
/// performs up to `round(density * pool)` deletions of members of
/// cardinality at least 2 (`pool` is the initial count of such members).
/// Each deletion cascades top-down, further removing every member left with
/// exactly one cover; a candidate whose cascade would consume a singleton
/// or the root is rolled back and the next candidate (seeded random order,
/// without replacement) is tried. When no surviving candidate can be
/// deleted, the family is saturated and generation stops early.
pub fn gen_branching(n: usize, seed: u64, density: f64) -> Result<SubPoset, PosetError> {
    if n > GEN_BOUND {
        return Err(PosetError::GenerationBound { n, bound: GEN_BOUND });
    }
    // On one element the root of a wide family has exactly one cover, so no
    // wide branching family exists at all.
    assert!(n >= 2, "ground-set size");
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");

    let subsets = 1usize << n;
    let pool: Vec<u32> = (0..subsets as u32)
        .filter(|m| (2..n as u32).contains(&m.count_ones()))
        .collect();
    let attempts = (density * pool.len() as f64).round() as usize;
    let levels: Vec<Vec<u32>> = (0..n as u32)
        .map(|l| (0..subsets as u32).filter(|m| m.count_ones() == l).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = vec![true; subsets];
    present[subsets - 1] = false; // the top element is never a member
    let mut rejected = 0;

    'carve: for _ in 0..attempts {
        let mut live: Vec<u32> = pool
            .iter()
            .copied()
            .filter(|&m| present[m as usize])
            .collect();
        while !live.is_empty() {
            let drawn = rng.gen_range(0..live.len());
            let candidate = live.swap_remove(drawn);
            if let Some(next) = cascade(&present, n, &levels, candidate) {
                present = next;
                continue 'carve;
            }
            rejected += 1;
            if rejected > REJECTION_LIMIT {
                return Err(PosetError::RejectionLimitExceeded {
                    limit: REJECTION_LIMIT,
                });
            }
        }
        break; // saturated: no member can be deleted without losing width
    }

    let family = SubPoset::new(n, (0..subsets as u32).filter(|&m| present[m as usize]));
    debug_assert!(is_rooted(&family) && is_wide(&family) && is_branching(&family));
    Ok(family)
}

/// Deletes `target` from a scratch copy and sweeps levels top-down,
/// removing every member left with exactly one cover (a deletion at one
/// level only uncovers members one level down, so one sweep reaches the
/// fixpoint; each level's victims are collected before any is removed).
/// Returns `None` when the cascade would consume a singleton or the root.
fn cascade(present: &[bool], n: usize, levels: &[Vec<u32>], target: u32) -> Option<Vec<bool>> {
    let mut next = present.to_vec();
    next[target as usize] = false;
    for level_masks in levels.iter().rev() {
        let victims: Vec<u32> = level_masks
            .iter()
            .copied()
            .filter(|&m| next[m as usize] && cover_count(&next, n, m) == 1)
            .collect();
        for victim in victims {
            if victim.count_ones() <= 1 {
                return None;
            }
            next[victim as usize] = false;
        }
    }
    Some(next)
}

/// Covers of `mask` among the present members, counted by probing the
/// `n` one-bit extensions.
fn cover_count(present: &[bool], n: usize, mask: u32) -> usize {
    (0..n as u32)
        .filter(|b| mask & (1 << b) == 0 && present[(mask | 1 << b) as usize])
        .count()
}

/// Every rooted branching family on `[n]`, in ascending order of the
/// bitmask-of-members encoding. Families may be narrow; filter with
/// [`is_wide`] when width matters.
pub fn enumerate_branching(n: usize) -> Result<Vec<SubPoset>, PosetError> {
    if n > ENUM_BOUND {
        return Err(PosetError::EnumerationBound { n, bound: ENUM_BOUND });
    }
    assert!(n >= 1, "ground-set size");
    let subsets = 1u32 << n;
    let mut out = Vec::new();
    for family in 0..1u64 << subsets {
        if family & 1 == 0 {
            continue; // not rooted
        }
        let branching = (0..subsets).filter(|&m| family >> m & 1 == 1).all(|m| {
            let covers = (0..n as u32)
                .filter(|b| m & (1 << b) == 0 && family >> (m | 1 << b) & 1 == 1)
                .count();
            covers != 1
        });
        if branching {
            out.push(SubPoset::new(
                n,
                (0..subsets).filter(|&m| family >> m & 1 == 1),
            ));
        }
    }
    Ok(out)
}
