//! Instance supply: deterministic fixtures, seeded random systems, and
//! exhaustive enumerations over small parameter ranges.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solver::FirstColumn;
use crate::system::{Alphabet, Elem, SeqRow, SetSystem, SolutionMatrix};

fn numeric_labels(count: usize) -> Vec<String> {
    (1..=count).map(|i| i.to_string()).collect()
}

/// The uniform system: every set is the full pool `{1..n}` (ids 0..n−1 with
/// numeric labels).
pub fn cyclic_system(n: usize, k: usize) -> SetSystem {
    assert!(n >= 1);
    let all: Vec<u32> = (0..n as u32).collect();
    SetSystem::new(
        Alphabet::labeled(numeric_labels(n)).unwrap(),
        vec![vec![all; k]; n],
    )
    .unwrap()
}

/// The rotating solution of [`cyclic_system`]: row i walks i, i+1, … for the
/// first n−1 positions (mod n), then repeats its last value.
pub fn cyclic_solution(n: usize, k: usize) -> SolutionMatrix {
    assert!(n >= 1);
    let shift_cap = n.saturating_sub(2);
    let rows = (0..n)
        .map(|i| {
            SeqRow::new(
                (0..k)
                    .map(|j| Elem(((i + j.min(shift_cap)) % n) as u32))
                    .collect(),
            )
        })
        .collect();
    SolutionMatrix::new(rows)
}

/// Each row gets its own n fresh symbols, repeated across all k columns; any
/// representative matrix solves it.
pub fn disjoint_rows_system(n: usize, k: usize) -> SetSystem {
    assert!(n >= 1);
    let cells = (0..n)
        .map(|i| {
            let ids: Vec<u32> = (i * n..(i + 1) * n).map(|v| v as u32).collect();
            vec![ids; k]
        })
        .collect();
    SetSystem::new(Alphabet::labeled(numeric_labels(n * n)).unwrap(), cells).unwrap()
}

/// Seeded random system: every cell is a uniformly sized (n..=alphabet) random
/// subset of `0..alphabet`. Identical seeds give identical systems.
pub fn random_system(n: usize, k: usize, alphabet: usize, seed: u64) -> SetSystem {
    assert!(n >= 1 && alphabet >= n, "alphabet must hold at least n elements");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (0..n)
        .map(|_| {
            (0..k)
                .map(|_| {
                    let size = rng.gen_range(n..=alphabet);
                    let mut ids: Vec<u32> = (0..alphabet as u32).collect();
                    ids.shuffle(&mut rng);
                    ids.truncate(size);
                    ids
                })
                .collect()
        })
        .collect();
    SetSystem::new(Alphabet::plain(alphabet), cells).unwrap()
}

/// Every system over `0..alphabet` whose cells all have cardinality ≥ n, in a
/// fixed odometer order.
pub fn enumerate_systems(n: usize, k: usize, alphabet: usize) -> SystemEnumerator {
    assert!(n >= 1 && alphabet >= n && alphabet < 32);
    let subsets: Vec<Vec<u32>> = (0u32..1 << alphabet)
        .filter(|mask| mask.count_ones() as usize >= n)
        .map(|mask| (0..alphabet as u32).filter(|&b| mask >> b & 1 == 1).collect())
        .collect();
    SystemEnumerator {
        subsets,
        indices: vec![0; n * k],
        n,
        k,
        alphabet,
        done: false,
    }
}

pub struct SystemEnumerator {
    subsets: Vec<Vec<u32>>,
    indices: Vec<usize>,
    n: usize,
    k: usize,
    alphabet: usize,
    done: bool,
}

impl Iterator for SystemEnumerator {
    type Item = SetSystem;

    fn next(&mut self) -> Option<SetSystem> {
        if self.done {
            return None;
        }
        let cells = (0..self.n)
            .map(|i| {
                (0..self.k)
                    .map(|j| self.subsets[self.indices[i * self.k + j]].clone())
                    .collect()
            })
            .collect();
        let sys = SetSystem::new(Alphabet::plain(self.alphabet), cells).unwrap();

        let mut pos = self.indices.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.indices[pos] += 1;
            if self.indices[pos] < self.subsets.len() {
                break;
            }
            self.indices[pos] = 0;
        }
        Some(sys)
    }
}

/// All valid first columns of a system (distinct entries, one from each row's
/// first set), in lexicographic order.
pub fn enumerate_first_columns(sys: &SetSystem) -> Vec<FirstColumn> {
    if sys.k() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Elem> = Vec::with_capacity(sys.n());
    fn rec(sys: &SetSystem, chosen: &mut Vec<Elem>, out: &mut Vec<FirstColumn>) {
        if chosen.len() == sys.n() {
            out.push(FirstColumn::new(sys, chosen.clone()).unwrap());
            return;
        }
        for id in sys.set(chosen.len(), 0).iter() {
            if chosen.contains(&Elem(id)) {
                continue;
            }
            chosen.push(Elem(id));
            rec(sys, chosen, out);
            chosen.pop();
        }
    }
    rec(sys, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::validate_system;
    use crate::verify::verify_solution;

    #[test]
    fn cyclic_fixture_matches_rotating_pattern() {
        let sol = cyclic_solution(4, 6);
        let expect: Vec<Vec<u32>> = vec![
            vec![0, 1, 2, 2, 2, 2],
            vec![1, 2, 3, 3, 3, 3],
            vec![2, 3, 0, 0, 0, 0],
            vec![3, 0, 1, 1, 1, 1],
        ];
        for (row, ids) in sol.rows.iter().zip(&expect) {
            assert_eq!(row, &SeqRow::from_ids(ids));
        }
    }

    #[test]
    fn cyclic_solution_verifies_for_all_sizes() {
        for n in 1..=7 {
            let k = n + 2;
            let sys = cyclic_system(n, k);
            assert!(validate_system(&sys, n).pass());
            let report = verify_solution(&sys, &cyclic_solution(n, k)).unwrap();
            assert!(report.pass(), "n={n}: {report}");
        }
    }

    #[test]
    fn disjoint_rows_have_private_symbols() {
        let sys = disjoint_rows_system(2, 3);
        assert_eq!(sys.set(0, 0).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(sys.set(1, 2).iter().collect::<Vec<_>>(), vec![2, 3]);
        assert!(validate_system(&sys, 2).pass());
        assert_eq!(sys.alphabet().label(Elem(2)), "3");
    }

    #[test]
    fn random_systems_are_valid_and_seed_deterministic() {
        for seed in 0..10 {
            let a = random_system(3, 4, 6, seed);
            let b = random_system(3, 4, 6, seed);
            assert_eq!(a, b);
            assert!(validate_system(&a, 3).pass());
        }
        assert_ne!(random_system(3, 4, 6, 1), random_system(3, 4, 6, 2));
    }

    #[test]
    fn enumeration_counts_match_subset_arithmetic() {
        // 4 subsets of {0,1,2} with ≥ 2 elements; 2 cells for n=2, k=1.
        assert_eq!(enumerate_systems(2, 1, 3).count(), 16);
        assert_eq!(enumerate_systems(2, 2, 3).count(), 256);
        let all: Vec<SetSystem> = enumerate_systems(2, 1, 3).collect();
        assert!(all.iter().all(|s| validate_system(s, 2).pass()));
        // Odometer order is deterministic: first system uses the first subset.
        assert_eq!(all[0].set(0, 0).iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn first_column_enumeration_is_exhaustive() {
        let sys = SetSystem::new(
            Alphabet::plain(3),
            vec![vec![vec![0, 1]], vec![vec![0, 1]]],
        )
        .unwrap();
        let cols = enumerate_first_columns(&sys);
        let values: Vec<Vec<u32>> = cols
            .iter()
            .map(|c| c.values().iter().map(|e| e.0).collect())
            .collect();
        assert_eq!(values, vec![vec![0, 1], vec![1, 0]]);
    }
}
