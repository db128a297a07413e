//! Pseudo-projective lifting with head-relation annotations.
//!
//! [`projectivize`] lifts non-projective arcs one step up at a time until the
//! tree is projective. A lifted node's relation becomes `rel↑headrel`, where
//! `headrel` is the relation of the head it was detached from.
//! [`deprojectivize`] searches below the new head for a node with that
//! relation and moves the node back there.

use std::collections::VecDeque;

use crate::deptree::{Arc, DepGraph};

/// Separator between a lifted node's own relation and its old head's.
pub const LIFT_MARK: char = '↑';

/// Relation written for a missing one inside an annotation.
const NO_RELATION: &str = "_";

/// Result of [`projectivize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivized {
    pub graph: DepGraph,
    /// Single-step lifts performed.
    pub lifts: usize,
}

/// Lifts arcs until `tree` is projective. Projective trees come back
/// unchanged.
pub fn projectivize(tree: &DepGraph) -> DepGraph {
    projectivize_counted(tree).graph
}

pub fn projectivize_counted(tree: &DepGraph) -> Projectivized {
    let mut graph = tree.clone();
    let mut lifted = vec![false; graph.n() + 1];
    let mut lifts = 0;
    while let Some(arc) = shortest_nonprojective(&graph) {
        let grand = graph
            .head(arc.head)
            .expect("a non-projective arc never leaves the root");
        if !lifted[arc.dep] {
            lifted[arc.dep] = true;
            let own = graph.deprel(&arc).unwrap_or(NO_RELATION).to_owned();
            let above = graph.deprel_of(arc.head).unwrap_or(NO_RELATION);
            let annotated = format!("{own}{LIFT_MARK}{}", base_relation(above));
            graph.set_deprel(&arc, annotated);
        }
        graph
            .set_head(arc.dep, grand)
            .expect("lifting keeps the arc valid");
        lifts += 1;
    }
    Projectivized { graph, lifts }
}

/// The relation before any lift annotation.
pub fn base_relation(deprel: &str) -> &str {
    deprel.split(LIFT_MARK).next().unwrap_or(deprel)
}

/// Shortest arc whose span holds a node not descending from its head; ties
/// go to the leftmost.
fn shortest_nonprojective(graph: &DepGraph) -> Option<Arc> {
    let heads = graph.heads();
    let descends = |node: usize, ancestor: usize| {
        let mut cur = Some(node);
        let mut steps = 0;
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            steps += 1;
            if steps > heads.len() {
                return false;
            }
            cur = heads[c];
        }
        false
    };
    graph
        .arcs()
        .iter()
        .filter(|arc| (arc.left() + 1..arc.right()).any(|k| !descends(k, arc.head)))
        .min_by_key(|arc| (arc.len(), arc.left()))
        .copied()
}

/// Result of [`deprojectivize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deprojectivized {
    pub graph: DepGraph,
    /// One message per annotation that could not be resolved.
    pub diagnostics: Vec<String>,
}

/// Undoes the lifts recorded in relation annotations. Nodes are handled top
/// down. For each one the descendants of its current head are searched
/// breadth first, skipping the node's own subtree; at equal depth the
/// candidate nearest the head wins, then the leftmost. Annotations without a
/// match are stripped.
pub fn deprojectivize(tree: &DepGraph) -> Deprojectivized {
    let mut graph = tree.clone();
    let mut diagnostics = Vec::new();
    for node in graph.descendants(0) {
        let Some(arc) = graph.head_arc(node) else {
            continue;
        };
        let Some(deprel) = graph.deprel(&arc).map(str::to_owned) else {
            continue;
        };
        let Some((own, wanted)) = deprel.split_once(LIFT_MARK) else {
            continue;
        };
        let own = own.to_owned();
        match find_target(&graph, arc.head, node, wanted) {
            Some(target) => {
                graph
                    .set_head(node, target)
                    .expect("target lies outside the moved subtree");
            }
            None => diagnostics.push(format!(
                "node {node}: no {wanted:?} below head {}, annotation dropped",
                arc.head
            )),
        }
        let arc = graph.head_arc(node).expect("node keeps a head");
        if own == NO_RELATION {
            graph.clear_deprel(&arc);
        } else {
            graph.set_deprel(&arc, own);
        }
    }
    Deprojectivized { graph, diagnostics }
}

fn find_target(graph: &DepGraph, head: usize, node: usize, wanted: &str) -> Option<usize> {
    let mut frontier: Vec<usize> = graph.dependents(head).filter(|&d| d != node).collect();
    let mut queue = VecDeque::new();
    while !frontier.is_empty() {
        frontier.sort_by_key(|&c| (c.abs_diff(head), c));
        if let Some(&hit) = frontier
            .iter()
            .find(|&&c| graph.deprel_of(c).map(base_relation) == Some(wanted))
        {
            return Some(hit);
        }
        queue.extend(frontier.drain(..));
        while let Some(c) = queue.pop_front() {
            frontier.extend(graph.dependents(c).filter(|&d| d != node));
        }
    }
    None
}
