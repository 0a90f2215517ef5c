//! Bit sets over a fixed universe of dense element ids.

use std::fmt;

/// Set of element ids drawn from `0..universe`.
///
/// Invariant: the block count is fixed by the universe at construction, so sets
/// from the same universe compare with plain block equality/ordering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn from_ids(universe: usize, ids: &[u32]) -> Self {
        let mut set = Self::empty(universe);
        for &id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, id: u32) {
        assert!(
            (id as usize) < self.universe,
            "id {id} outside universe {}",
            self.universe
        );
        self.blocks[id as usize / 64] |= 1 << (id % 64);
    }

    pub fn remove(&mut self, id: u32) {
        if (id as usize) < self.universe {
            self.blocks[id as usize / 64] &= !(1 << (id % 64));
        }
    }

    pub fn contains(&self, id: u32) -> bool {
        (id as usize) < self.universe && self.blocks[id as usize / 64] >> (id % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn min_id(&self) -> Option<u32> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i as u32 * 64 + b.trailing_zeros())
    }

    /// Elements in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            (0..64u32)
                .filter(move |&j| b >> j & 1 == 1)
                .map(move |j| i as u32 * 64 + j)
        })
    }

    pub fn minus(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.universe, other.universe);
        ElemSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// |self ∖ other| without allocating.
    pub fn minus_len(&self, other: &ElemSet) -> usize {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// Same contents in a (weakly) larger universe.
    pub fn widen(&self, universe: usize) -> ElemSet {
        assert!(universe >= self.universe);
        let mut blocks = self.blocks.clone();
        blocks.resize(universe.div_ceil(64), 0);
        ElemSet { universe, blocks }
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
