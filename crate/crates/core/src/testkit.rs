//! Tree enumeration and random generation for exhaustive and randomized
//! checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deptree::{Arc, DepGraph};
use crate::error::{Error, Result};

/// Largest sentence length [`enumerate_trees`] accepts.
pub const MAX_ENUMERATION: usize = 7;

/// Every tree over `n` tokens, in head-vector odometer order (the head of
/// token 1 varies fastest).
pub fn enumerate_trees(n: usize, projective_only: bool) -> Result<TreeIter> {
    if n > MAX_ENUMERATION {
        return Err(Error::EnumerationTooLarge(n));
    }
    Ok(TreeIter {
        heads: vec![0; n],
        done: false,
        projective_only,
    })
}

/// Iterator returned by [`enumerate_trees`].
#[derive(Clone, Debug)]
pub struct TreeIter {
    heads: Vec<usize>,
    done: bool,
    projective_only: bool,
}

impl TreeIter {
    fn advance(&mut self) {
        let n = self.heads.len();
        for slot in 0..n {
            self.heads[slot] += 1;
            if self.heads[slot] <= n {
                return;
            }
            self.heads[slot] = 0;
        }
        self.done = true;
    }
}

impl Iterator for TreeIter {
    type Item = DepGraph;

    fn next(&mut self) -> Option<DepGraph> {
        while !self.done {
            let candidate = heads_form_tree(&self.heads).then(|| self.heads.clone());
            self.advance();
            let Some(heads) = candidate else { continue };
            let tree = DepGraph::from_heads(&heads).expect("a valid head vector");
            if !self.projective_only || !tree.has_crossing() {
                return Some(tree);
            }
        }
        None
    }
}

/// `heads[i]` is the head of token `i + 1`.
fn heads_form_tree(heads: &[usize]) -> bool {
    let n = heads.len();
    // 0 = unvisited, 1 = on the current path, 2 = reaches the root
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    for start in 1..=n {
        let mut path = Vec::new();
        let mut node = start;
        loop {
            if heads.get(node.wrapping_sub(1)) == Some(&node) {
                return false;
            }
            match state[node] {
                2 => break,
                1 => return false,
                _ => {
                    state[node] = 1;
                    path.push(node);
                    node = heads[node - 1];
                }
            }
        }
        for p in path {
            state[p] = 2;
        }
    }
    true
}

/// A random tree: head vectors are drawn uniformly and redrawn until they
/// form a tree, and a projective one unless `allow_nonprojective`. This is
/// not uniform over tree shapes, and projective rejection gets slow beyond
/// about 12 tokens.
pub fn random_tree(n: usize, seed: u64, allow_nonprojective: bool) -> DepGraph {
    random_tree_with(&mut ChaCha8Rng::seed_from_u64(seed), n, allow_nonprojective)
}

pub fn random_tree_with<R: Rng>(rng: &mut R, n: usize, allow_nonprojective: bool) -> DepGraph {
    assert!(n >= 1, "a tree needs at least one token");
    let mut heads = vec![0; n];
    loop {
        for (i, h) in heads.iter_mut().enumerate() {
            // uniform over 0..=n without the token itself
            let pick = rng.gen_range(0..n);
            *h = if pick > i { pick + 1 } else { pick };
        }
        if !heads_form_tree(&heads) {
            continue;
        }
        let tree = DepGraph::from_heads(&heads).expect("a valid head vector");
        if allow_nonprojective || !tree.has_crossing() {
            return tree;
        }
    }
}

/// Relations drawn by [`add_random_deprels`].
pub const DEPRELS: [&str; 6] = ["nsubj", "obj", "amod", "det", "advmod", "punct"];

/// Gives every arc a random relation; arcs from the root get `root`.
pub fn add_random_deprels<R: Rng>(rng: &mut R, graph: &mut DepGraph) {
    let arcs: Vec<Arc> = graph.arcs().to_vec();
    for arc in arcs {
        let rel = if arc.head == 0 {
            "root"
        } else {
            DEPRELS.choose(rng).expect("non-empty")
        };
        graph.set_deprel(&arc, rel);
    }
}

/// A seeded generator for reproducible suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
