//! Vertex-disjoint upward paths from the singletons of a wide rooted
//! branching family to its top-cardinality members or to its leaves.
//!
//! Each member is split into an in/out node pair joined by a capacity-1 arc,
//! so a maximum flow from the singletons to the chosen sinks yields a set of
//! vertex-disjoint cover chains, and a blocked flow yields a genuine vertex
//! cut (the saturated split arcs along a minimum cut).

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt;

use super::{is_branching, is_rooted, is_wide, leaves, PosetError, SubPoset};

/// Which members count as path targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// Members of cardinality `n - 1`.
    Full,
    /// Maximal members.
    Leaf,
}

impl fmt::Display for PathMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathMode::Full => "full",
            PathMode::Leaf => "leaf",
        })
    }
}

/// A full set of `n` vertex-disjoint cover chains, one per singleton, in
/// ascending order of starting element. Every path steps up one cardinality
/// at a time and no member appears twice across the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBundle {
    pub paths: Vec<Vec<u32>>,
}

/// Result of the path search on a family that passed the preconditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathOutcome {
    /// All `n` disjoint paths were found.
    Paths(PathBundle),
    /// Fewer than `n` paths exist; `vertices` is a cut whose removal
    /// separates every singleton from every target, of size `flow`.
    Cut { vertices: Vec<u32>, flow: usize },
    /// The family has no member of the target kind.
    NoTargets,
}

/// Searches for `n` vertex-disjoint upward paths from the singletons to the
/// targets selected by `mode`. Requires the family to be rooted, wide, and
/// branching; the first missing property is reported by name.
pub fn disjoint_full_paths(p: &SubPoset, mode: PathMode) -> Result<PathOutcome, PosetError> {
    let checks = [
        (is_rooted(p), "rooted"),
        (is_wide(p), "wide"),
        (is_branching(p), "branching"),
    ];
    for (ok, predicate) in checks {
        if !ok {
            return Err(PosetError::PreconditionFailed { predicate });
        }
    }
    Ok(flow_outcome(p, mode))
}

/// The flow computation itself, without precondition checks. Singletons
/// absent from the family are simply not sources.
pub(crate) fn flow_outcome(p: &SubPoset, mode: PathMode) -> PathOutcome {
    let n = p.n();
    let members: Vec<u32> = p.members().collect();
    let index: HashMap<u32, usize> = members
        .iter()
        .enumerate()
        .map(|(i, &mask)| (mask, i))
        .collect();

    let sink_masks: Vec<u32> = match mode {
        PathMode::Full => members
            .iter()
            .copied()
            .filter(|m| m.count_ones() as usize == n - 1)
            .collect(),
        PathMode::Leaf => leaves(p),
    };
    if sink_masks.is_empty() {
        return PathOutcome::NoTargets;
    }

    // Node layout: in(v) = 2i, out(v) = 2i + 1, then source and target.
    let source = 2 * members.len();
    let target = source + 1;
    let mut graph = FlowGraph::new(target + 1);
    let unbounded = n as u32 + 1;
    // Split arcs first, so member i's split arc is exactly edge 2i.
    for i in 0..members.len() {
        graph.add(2 * i, 2 * i + 1, 1);
    }
    for (i, &mask) in members.iter().enumerate() {
        for cover in p.covers_of(mask) {
            graph.add(2 * i + 1, 2 * index[&cover], unbounded);
        }
    }
    for elem in 0..n as u32 {
        if let Some(&i) = index.get(&(1 << elem)) {
            graph.add(source, 2 * i, unbounded);
        }
    }
    let mut sink_arc = HashMap::new();
    for &mask in &sink_masks {
        let i = index[&mask];
        sink_arc.insert(i, graph.add(2 * i + 1, target, unbounded));
    }

    let flow = graph.max_flow(source, target);
    if flow < n {
        let reached = graph.residual_reachable(source);
        let vertices = (0..members.len())
            .filter(|&i| reached[2 * i] && !reached[2 * i + 1])
            .map(|i| members[i])
            .collect();
        return PathOutcome::Cut { vertices, flow };
    }

    // Every singleton's split arc carries one unit; follow it upward. The
    // capacity-1 split bounds each out-node to a single flowing arc, so the
    // walk is unambiguous.
    let mut paths = Vec::with_capacity(n);
    for elem in 0..n as u32 {
        let mut i = index[&(1 << elem)];
        debug_assert_eq!(graph.flow_on(2 * i), 1);
        let mut path = vec![members[i]];
        loop {
            if sink_arc.get(&i).is_some_and(|&e| graph.flow_on(e) > 0) {
                break;
            }
            let next = graph
                .flowing_cover_head(2 * i + 1, target)
                .expect("a flowing unit continues upward or exits at a sink");
            i = next / 2;
            path.push(members[i]);
        }
        paths.push(path);
    }
    PathOutcome::Paths(PathBundle { paths })
}

/// Adjacency-list max-flow graph with paired forward/reverse edges
/// (augmenting shortest paths; capacities here are tiny).
struct FlowGraph {
    adjacency: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowGraph {
    fn new(nodes: usize) -> FlowGraph {
        FlowGraph {
            adjacency: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds a forward edge (even index, returned) and its reverse.
    fn add(&mut self, u: usize, v: usize, capacity: u32) -> usize {
        let e = self.to.len();
        self.adjacency[u].push(e);
        self.to.push(v);
        self.cap.push(capacity);
        self.adjacency[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
        e
    }

    /// Units pushed along forward edge `e` (its reverse holds the flow).
    fn flow_on(&self, e: usize) -> u32 {
        debug_assert_eq!(e % 2, 0);
        self.cap[e ^ 1]
    }

    /// Head node of the unique flowing forward arc out of `out_node` that is
    /// not the sink arc; the head is the next member's in-node.
    fn flowing_cover_head(&self, out_node: usize, target: usize) -> Option<usize> {
        self.adjacency[out_node]
            .iter()
            .copied()
            .find(|&e| e % 2 == 0 && self.to[e] != target && self.flow_on(e) > 0)
            .map(|e| self.to[e])
    }

    fn max_flow(&mut self, source: usize, target: usize) -> usize {
        let mut total = 0;
        loop {
            let mut arrived_by = vec![usize::MAX; self.adjacency.len()];
            let mut queue = VecDeque::from([source]);
            arrived_by[source] = usize::MAX - 1;
            while let Some(u) = queue.pop_front() {
                for &e in &self.adjacency[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && arrived_by[v] == usize::MAX {
                        arrived_by[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if arrived_by[target] == usize::MAX {
                return total;
            }
            let mut bottleneck = u32::MAX;
            let mut v = target;
            while v != source {
                let e = arrived_by[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = target;
            while v != source {
                let e = arrived_by[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck as usize;
        }
    }

    /// Nodes reachable from `source` in the residual graph.
    fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut reached = vec![false; self.adjacency.len()];
        let mut queue = VecDeque::from([source]);
        reached[source] = true;
        while let Some(u) = queue.pop_front() {
            for &e in &self.adjacency[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !reached[v] {
                    reached[v] = true;
                    queue.push_back(v);
                }
            }
        }
        reached
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn assert_bundle_shape(p: &SubPoset, bundle: &PathBundle, mode: PathMode) {
        let n = p.n();
        assert_eq!(bundle.paths.len(), n);
        let mut seen = BTreeSet::new();
        for (elem, path) in bundle.paths.iter().enumerate() {
            assert_eq!(path[0], 1 << elem, "path {elem} starts at its singleton");
            for window in path.windows(2) {
                let (a, b) = (window[0], window[1]);
                assert_eq!(b.count_ones(), a.count_ones() + 1);
                assert_eq!(a & b, a, "consecutive members are nested");
                assert!(p.contains(b));
            }
            let last = *path.last().unwrap();
            match mode {
                PathMode::Full => assert_eq!(last.count_ones() as usize, n - 1),
                PathMode::Leaf => assert!(p.is_maximal(last)),
            }
            for &v in path {
                assert!(seen.insert(v), "member {v:#b} appears in two paths");
            }
        }
    }

    #[test]
    fn open_boolean_families_carry_full_path_systems() {
        for n in 2..=6 {
            let p = SubPoset::boolean_without_top(n);
            match disjoint_full_paths(&p, PathMode::Full).unwrap() {
                PathOutcome::Paths(bundle) => assert_bundle_shape(&p, &bundle, PathMode::Full),
                other => panic!("expected paths for n = {n}, got {other:?}"),
            }
        }
    }

    #[test]
    fn leaf_mode_accepts_singleton_leaves() {
        let star = SubPoset::new(4, [0b0000, 0b0001, 0b0010, 0b0100, 0b1000]);
        match disjoint_full_paths(&star, PathMode::Leaf).unwrap() {
            PathOutcome::Paths(bundle) => {
                assert_eq!(
                    bundle.paths,
                    vec![vec![0b0001], vec![0b0010], vec![0b0100], vec![0b1000]]
                );
            }
            other => panic!("expected trivial paths, got {other:?}"),
        }
    }

    #[test]
    fn leaf_mode_on_the_open_boolean_family() {
        let p = SubPoset::boolean_without_top(4);
        match disjoint_full_paths(&p, PathMode::Leaf).unwrap() {
            PathOutcome::Paths(bundle) => assert_bundle_shape(&p, &bundle, PathMode::Leaf),
            other => panic!("expected paths, got {other:?}"),
        }
    }

    #[test]
    fn full_mode_without_targets_is_reported() {
        let star = SubPoset::new(3, [0b000, 0b001, 0b010, 0b100]);
        assert_eq!(
            disjoint_full_paths(&star, PathMode::Full).unwrap(),
            PathOutcome::NoTargets
        );
    }

    #[test]
    fn precondition_failures_name_the_missing_property() {
        let rootless = SubPoset::new(2, [0b01, 0b10]);
        assert_eq!(
            disjoint_full_paths(&rootless, PathMode::Full),
            Err(PosetError::PreconditionFailed { predicate: "rooted" })
        );
        let narrow = SubPoset::new(2, [0b00, 0b01]);
        assert_eq!(
            disjoint_full_paths(&narrow, PathMode::Full),
            Err(PosetError::PreconditionFailed { predicate: "wide" })
        );
        let chained = SubPoset::full_boolean(2);
        assert_eq!(
            disjoint_full_paths(&chained, PathMode::Full),
            Err(PosetError::PreconditionFailed { predicate: "branching" })
        );
    }

    #[test]
    fn blocked_flow_yields_a_separating_cut() {
        // Only one 2-set, so at most one unit can reach a full-mode target.
        let p = SubPoset::new(3, [0b000, 0b001, 0b010, 0b100, 0b011]);
        match flow_outcome(&p, PathMode::Full) {
            PathOutcome::Cut { vertices, flow } => {
                assert_eq!(flow, 1);
                assert_eq!(vertices, vec![0b011]);
            }
            other => panic!("expected a cut, got {other:?}"),
        }
    }

    #[test]
    fn path_search_is_deterministic() {
        let p = SubPoset::boolean_without_top(5);
        let a = disjoint_full_paths(&p, PathMode::Full).unwrap();
        let b = disjoint_full_paths(&p, PathMode::Full).unwrap();
        assert_eq!(a, b);
    }
}
