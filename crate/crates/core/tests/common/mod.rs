//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use hierbrack::brackets::parse_label;
use hierbrack::{DepGraph, Label, LabelSequence};

/// The running example tree with seven tokens.
pub fn running_example() -> DepGraph {
    DepGraph::from_arcs(7, [(0, 4), (0, 1), (4, 3), (4, 2), (4, 7), (7, 6), (6, 5)]).unwrap()
}

/// A crossing tree that needs index 2.
pub fn deep_example() -> DepGraph {
    DepGraph::from_arcs(
        8,
        [
            (0, 6),
            (2, 7),
            (3, 8),
            (0, 2),
            (6, 1),
            (6, 3),
            (7, 4),
            (8, 5),
        ],
    )
    .unwrap()
}

pub const DEEP_LABELS: [&str; 9] = ["/*", "<", ">/*", "/*<", "<1", "<2", ">*2", ">*1", ">*"];

/// The complex crossing example.
pub fn tangled_example() -> DepGraph {
    DepGraph::from_arcs(
        13,
        [
            (0, 6),
            (2, 7),
            (3, 8),
            (8, 12),
            (13, 9),
            (0, 2),
            (6, 1),
            (6, 3),
            (7, 4),
            (8, 5),
            (8, 10),
            (8, 11),
            (10, 13),
        ],
    )
    .unwrap()
}

pub const TANGLED_LABELS: [&str; 14] = [
    "/*", "<", ">/*", "/*<", "<1", "<2", ">*2", ">*1", ">*/*", "<*", ">1/1", ">1", ">*", "\\*",
];

/// Auxiliary arcs crossing structural arcs.
pub fn sample_a() -> DepGraph {
    DepGraph::from_arcs(5, [(0, 5), (0, 2), (5, 3), (5, 4), (4, 1)]).unwrap()
}

pub const SAMPLE_A_LABELS: [&str; 6] = ["/*", "<*", ">1", "<1", "\\*<", ">*"];

/// Crossing structural arcs.
pub fn sample_b() -> DepGraph {
    DepGraph::from_arcs(5, [(0, 3), (1, 4), (2, 5), (0, 2), (2, 1)]).unwrap()
}

pub const SAMPLE_B_LABELS: [&str; 6] = ["/*", "/*", "\\>1/*", ">*2", ">*1", ">*"];

pub const SAMPLE_C_LABELS: [&str; 6] = ["/*", ">", "<", ">", "<", ">*"];

/// A sequence whose first entry is the root's label.
pub fn with_root(labels: &[&str]) -> LabelSequence {
    let mut all: Vec<Label> = labels.iter().map(|l| parse_label(l).unwrap()).collect();
    let root = all.remove(0);
    let mut seq = LabelSequence::from_labels(all);
    seq.root = Some(root);
    seq
}

pub fn rendered(seq: &LabelSequence) -> Vec<String> {
    seq.positions().map(|(_, l)| l.to_string()).collect()
}

pub fn sorted_arcs(g: &DepGraph) -> Vec<(usize, usize)> {
    let mut arcs: Vec<_> = g.arcs().iter().map(|a| (a.head, a.dep)).collect();
    arcs.sort();
    arcs
}

/// 4-bit flags read straight off the tree: right dependent, farthest
/// dependent on that side, has left dependents, has right dependents.
pub fn fourbit_oracle(tree: &DepGraph, node: usize) -> u8 {
    let head = tree.head(node).unwrap();
    let rightward = head < node;
    let farthest = tree
        .dependents(head)
        .filter(|&d| (d > head) == rightward)
        .all(|d| d.abs_diff(head) <= node.abs_diff(head));
    let left = tree.dependents(node).any(|d| d < node);
    let right = tree.dependents(node).any(|d| d > node);
    (rightward as u8) << 3 | (farthest as u8) << 2 | (left as u8) << 1 | right as u8
}

/// Largest number of `structural` arcs spanning a gap between adjacent
/// nodes, by checking every gap against every arc.
pub fn thickness_oracle(n: usize, structural: &[hierbrack::Arc]) -> usize {
    (0..n)
        .map(|k| {
            structural
                .iter()
                .filter(|a| a.left() <= k && k < a.right())
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Projectivity straight from the definition: every node strictly inside an
/// arc descends from the arc's head.
pub fn projective_oracle(tree: &DepGraph) -> bool {
    let heads = tree.heads();
    let descends = |mut node: usize, ancestor: usize| loop {
        if node == ancestor {
            return true;
        }
        match heads[node] {
            Some(h) => node = h,
            None => return false,
        }
    };
    tree.arcs()
        .iter()
        .all(|a| (a.left() + 1..a.right()).all(|k| descends(k, a.head)))
}
