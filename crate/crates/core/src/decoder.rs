//! Decoding label sequences back into graphs.
//!
//! [`decode_noncrossing`] is the plain stack decoder for unindexed labels.
//! [`decode_indexed`] handles bracket indices by reaching below the top of
//! the stack. [`decode_robust`] wraps the indexed decoder for arbitrary,
//! possibly ill-formed input and can force a tree.
//!
//! When a sequence has no root label, the root's opening superbrackets are
//! reconstructed first: one `/*` for every `>*` that would otherwise find
//! nothing to match.

use std::fmt;

use crate::brackets::{BracketSymbol, Label, Shape, OPEN_RIGHT_SUPER};
use crate::deptree::{Arc, DepGraph};
use crate::encoder::{opener_for, LabelSequence};

/// Stack operation counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub symbols_read: usize,
    pub pushes: usize,
    /// Closing semibracket lookups of a superbracket.
    pub peeks: usize,
    /// Opening superbrackets removed by their closing superbracket.
    pub super_pops: usize,
    /// Opening semibrackets removed while creating their arc.
    pub semi_pops: usize,
    /// Every removal, including entries that were put back.
    pub removes: usize,
    pub puts: usize,
    pub max_super_depth: usize,
}

impl DecodeStats {
    /// Total stack operations.
    pub fn stack_ops(&self) -> usize {
        self.pushes + self.peeks + self.removes + self.puts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StackEntry {
    pub symbol: BracketSymbol,
    pub node: usize,
}

/// The decoder's stack with random access by depth. Depths count from the
/// top, which is depth 1.
#[derive(Clone, Debug, Default)]
pub struct DecodeStack {
    entries: Vec<StackEntry>,
    supers: usize,
    stats: DecodeStats,
}

impl DecodeStack {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries bottom to top.
    pub fn entries(&self) -> &[StackEntry] {
        &self.entries
    }

    pub fn stats(&self) -> &DecodeStats {
        &self.stats
    }

    /// Superbrackets currently on the stack.
    pub fn super_count(&self) -> usize {
        self.supers
    }

    pub fn push(&mut self, entry: StackEntry) {
        debug_assert!(entry.symbol.is_opening());
        self.stats.pushes += 1;
        self.track_insert(&entry);
        self.entries.push(entry);
    }

    /// The `nth` (1-based) entry from the top satisfying `cond`.
    pub fn fetch(&mut self, cond: impl Fn(&StackEntry) -> bool, nth: usize) -> Option<StackEntry> {
        self.stats.peeks += 1;
        self.entries
            .iter()
            .rev()
            .filter(|e| cond(e))
            .nth(nth.checked_sub(1)?)
            .copied()
    }

    /// Removes the entry at `depth`.
    pub fn remove(&mut self, depth: usize) -> Option<StackEntry> {
        let at = self.entries.len().checked_sub(depth)?;
        self.stats.removes += 1;
        let entry = self.entries.remove(at);
        if entry.symbol.is_super() {
            self.supers -= 1;
        }
        Some(entry)
    }

    /// Inserts `entry` so that it sits at `depth`.
    pub fn put(&mut self, entry: StackEntry, depth: usize) {
        self.stats.puts += 1;
        let at = (self.entries.len() + 1).saturating_sub(depth);
        self.track_insert(&entry);
        self.entries.insert(at, entry);
    }

    fn track_insert(&mut self, entry: &StackEntry) {
        if entry.symbol.is_super() {
            self.supers += 1;
            self.stats.max_super_depth = self.stats.max_super_depth.max(self.supers);
        }
    }
}

/// One repair made while decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// Node position of the symbol, or of the node for attachments.
    pub position: usize,
    /// Symbol text; `_` when no symbol is involved.
    pub symbol: String,
    pub action: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.position, self.symbol, self.action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub graph: DepGraph,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: DecodeStats,
    /// The root label used, reconstructed when the input had none.
    pub root: Label,
}

/// Decodes unindexed labels with the plain stack decoder. Indices, if any,
/// are ignored.
pub fn decode_noncrossing(labels: &LabelSequence) -> DepGraph {
    decode_noncrossing_traced(labels).graph
}

pub fn decode_noncrossing_traced(labels: &LabelSequence) -> Decoded {
    run(labels, Mode::Plain, false)
}

/// Decodes labels that may carry bracket indices.
pub fn decode_indexed(labels: &LabelSequence) -> DepGraph {
    decode_indexed_traced(labels).graph
}

pub fn decode_indexed_traced(labels: &LabelSequence) -> Decoded {
    run(labels, Mode::Indexed, false)
}

/// Decodes any label sequence. With `want_tree`, arcs that would give a
/// node a second head or close a cycle are skipped, and nodes left without
/// a head are attached to the syntactic root, so the result is always a
/// tree.
pub fn decode_robust(labels: &LabelSequence, want_tree: bool) -> Decoded {
    run(labels, Mode::Indexed, want_tree)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Plain,
    Indexed,
}

fn run(labels: &LabelSequence, mode: Mode, want_tree: bool) -> Decoded {
    let root = match &labels.root {
        Some(root) => root.clone(),
        None => reconstruct_root(labels, mode),
    };
    let mut decoder = Decoder::new(labels.n(), want_tree, true);
    decoder.read(0, &root, mode);
    for (k, label) in labels.labels.iter().enumerate() {
        decoder.read(k + 1, label, mode);
    }
    decoder.finish(labels, root)
}

/// The root label a sequence would need: one `/*` per `>*` left unmatched
/// when decoding without any root.
fn reconstruct_root(labels: &LabelSequence, mode: Mode) -> Label {
    let mut probe = Decoder::new(labels.n(), false, false);
    for (k, label) in labels.labels.iter().enumerate() {
        probe.read(k + 1, label, mode);
    }
    Label(vec![OPEN_RIGHT_SUPER; probe.unmatched_right])
}

struct Decoder {
    stack: DecodeStack,
    sink: ArcSink,
    unmatched_right: usize,
    log: bool,
    diagnostics: Vec<Diagnostic>,
}

impl Decoder {
    fn new(n: usize, want_tree: bool, log: bool) -> Self {
        Decoder {
            stack: DecodeStack::new(),
            sink: ArcSink::new(n, want_tree),
            unmatched_right: 0,
            log,
            diagnostics: Vec::new(),
        }
    }

    fn note(&mut self, position: usize, symbol: impl fmt::Display, action: impl Into<String>) {
        if self.log {
            self.diagnostics.push(Diagnostic {
                position,
                symbol: symbol.to_string(),
                action: action.into(),
            });
        }
    }

    fn read(&mut self, pos: usize, label: &Label, mode: Mode) {
        for &symbol in label.symbols() {
            self.stack.stats.symbols_read += 1;
            if symbol.is_opening() {
                self.stack.push(StackEntry { symbol, node: pos });
            } else if !symbol.is_super() {
                let nth = match mode {
                    Mode::Plain => 0,
                    Mode::Indexed => symbol.index as usize,
                };
                self.close_semi(pos, symbol, nth);
            } else {
                match mode {
                    Mode::Plain => self.close_super_plain(pos, symbol),
                    Mode::Indexed => self.close_super_indexed(pos, symbol),
                }
            }
        }
    }

    fn close_semi(&mut self, pos: usize, symbol: BracketSymbol, skip: usize) {
        let found = match self.stack.fetch(|e| e.symbol.is_super(), skip + 1) {
            Some(entry) => Some(entry),
            None if self.stack.super_count() > 0 => {
                let deepest = self.stack.super_count();
                self.note(
                    pos,
                    symbol,
                    "index beyond the stack, clamped to the deepest superbracket",
                );
                self.stack.stats.peeks -= 1;
                self.stack.fetch(|e| e.symbol.is_super(), deepest)
            }
            None => None,
        };
        let Some(entry) = found else {
            self.note(pos, symbol, "no superbracket to match, discarded");
            return;
        };
        match symbol.shape {
            Shape::CloseRight => self.arc(entry.node, pos, pos, symbol),
            _ => self.arc(pos, entry.node, pos, symbol),
        }
    }

    /// Arc created when the sweep of a closer at `pos` removes an opening
    /// semibracket.
    fn pop_semi(&mut self, pos: usize, entry: StackEntry, closer: BracketSymbol) {
        self.stack.stats.semi_pops += 1;
        match entry.symbol.shape {
            Shape::OpenLeft => self.arc(pos, entry.node, pos, closer),
            _ => self.arc(entry.node, pos, pos, closer),
        }
    }

    fn unmatched_super(&mut self, pos: usize, symbol: BracketSymbol) {
        if symbol.shape == Shape::CloseRight {
            self.unmatched_right += 1;
        }
        self.note(pos, symbol, "unmatched closing superbracket, discarded");
    }

    fn close_super_plain(&mut self, pos: usize, symbol: BracketSymbol) {
        loop {
            let Some(entry) = self.stack.remove(1) else {
                self.unmatched_super(pos, symbol);
                return;
            };
            if !entry.symbol.is_super() {
                self.pop_semi(pos, entry, symbol);
                continue;
            }
            self.stack.stats.super_pops += 1;
            if entry.symbol.shape == opener_for(symbol.shape) {
                self.super_arc(pos, entry, symbol);
            } else {
                self.note(
                    pos,
                    symbol,
                    format!("mismatched with {} at {}, no arc", entry.symbol, entry.node),
                );
            }
            return;
        }
    }

    fn close_super_indexed(&mut self, pos: usize, symbol: BracketSymbol) {
        let wanted = opener_for(symbol.shape);
        let mut rind = symbol.index;
        let mut depth = 1;
        loop {
            let Some(mut entry) = self.stack.remove(depth) else {
                self.unmatched_super(pos, symbol);
                return;
            };
            if entry.symbol.is_super() {
                if entry.symbol.shape == wanted {
                    if rind == 0 {
                        self.stack.stats.super_pops += 1;
                        self.super_arc(pos, entry, symbol);
                        return;
                    }
                    rind -= 1;
                }
                self.stack.put(entry, depth);
                depth += 1;
            } else if entry.symbol.index > 0 {
                entry.symbol.index -= 1;
                self.stack.put(entry, depth);
                depth += 1;
            } else {
                self.pop_semi(pos, entry, symbol);
            }
        }
    }

    fn super_arc(&mut self, pos: usize, entry: StackEntry, closer: BracketSymbol) {
        match closer.shape {
            Shape::CloseRight => self.arc(entry.node, pos, pos, closer),
            _ => self.arc(pos, entry.node, pos, closer),
        }
    }

    fn arc(&mut self, head: usize, dep: usize, pos: usize, symbol: BracketSymbol) {
        if let Err(reason) = self.sink.add(head, dep) {
            self.note(pos, symbol, format!("arc {head}->{dep} skipped: {reason}"));
        }
    }

    fn finish(mut self, labels: &LabelSequence, root: Label) -> Decoded {
        let leftovers: Vec<StackEntry> = self.stack.entries().to_vec();
        for entry in leftovers {
            self.note(entry.node, entry.symbol, "left open, ignored");
        }
        if self.sink.want_tree {
            let root_deps: Vec<usize> = self.sink.graph.dependents(0).collect();
            let target = match root_deps[..] {
                [only] => only,
                _ => 0,
            };
            for node in 1..self.sink.heads.len() {
                if self.sink.heads[node].is_none() {
                    self.sink
                        .add(target, node)
                        .expect("attaching a headless node to the root cannot fail");
                    self.note(node, "_", format!("no head, attached to {target}"));
                }
            }
        }
        let mut graph = self.sink.graph;
        for (k, deprel) in labels.deprels.iter().enumerate() {
            if let Some(deprel) = deprel {
                let dep = k + 1;
                let incoming: Vec<Arc> = graph
                    .arcs()
                    .iter()
                    .filter(|a| a.dep == dep)
                    .copied()
                    .collect();
                for arc in incoming {
                    graph.set_deprel(&arc, deprel.clone());
                }
            }
        }
        Decoded {
            graph,
            diagnostics: self.diagnostics,
            stats: self.stack.stats,
            root,
        }
    }
}

/// Collects arcs, rejecting the ones a graph (or, with `want_tree`, a tree)
/// cannot hold.
struct ArcSink {
    graph: DepGraph,
    heads: Vec<Option<usize>>,
    want_tree: bool,
    components: UnionFind,
}

impl ArcSink {
    fn new(n: usize, want_tree: bool) -> Self {
        ArcSink {
            graph: DepGraph::new(n),
            heads: vec![None; n + 1],
            want_tree,
            components: UnionFind::new(n + 1),
        }
    }

    fn add(&mut self, head: usize, dep: usize) -> Result<(), &'static str> {
        if head == dep {
            return Err("self-loop");
        }
        if dep == 0 {
            return Err("the root cannot be a dependent");
        }
        let arc = Arc::new(head, dep);
        if self.graph.contains(&arc) {
            return Err("duplicate");
        }
        if self.want_tree {
            if self.heads[dep].is_some() {
                return Err("second head");
            }
            // dep heads its own component, so a shared component means head
            // already descends from dep
            if self.components.find(head) == self.components.find(dep) {
                return Err("cycle");
            }
            self.components.union(head, dep);
        }
        self.heads[dep].get_or_insert(head);
        self.graph.add_arc(arc).map_err(|_| "out of range")
    }
}

/// Disjoint sets with path compression and union by rank.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(size: usize) -> Self {
        UnionFind {
            parent: (0..size).collect(),
            rank: vec![0; size],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::parse_label;

    fn seq(root: Option<&str>, labels: &[&str]) -> LabelSequence {
        let mut ls =
            LabelSequence::from_labels(labels.iter().map(|l| parse_label(l).unwrap()).collect());
        ls.root = root.map(|r| parse_label(r).unwrap());
        ls
    }

    fn arcs(g: &DepGraph) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = g.arcs().iter().map(|a| (a.head, a.dep)).collect();
        v.sort();
        v
    }

    #[test]
    fn running_example_optimal_both_decoders() {
        let ls = seq(Some("/*"), &[">", "<", "<", ">*/*", "<*", "\\*<", ">*"]);
        let want = vec![(0, 1), (0, 4), (4, 2), (4, 3), (4, 7), (6, 5), (7, 6)];
        assert_eq!(arcs(&decode_noncrossing(&ls)), want);
        assert_eq!(arcs(&decode_indexed(&ls)), want);
        let without_root = ls.clone().without_root();
        let decoded = decode_indexed_traced(&without_root);
        assert_eq!(arcs(&decoded.graph), want);
        assert_eq!(decoded.root.to_string(), "/*");
        assert!(decoded.diagnostics.is_empty());
    }

    #[test]
    fn crossing_auxiliary_arcs() {
        let ls = seq(None, &["/*", ">", "<", ">", "<", ">*"]);
        let got = arcs(&decode_noncrossing(&shift(ls)));
        assert_eq!(got, vec![(0, 1), (0, 3), (0, 5), (5, 2), (5, 4)]);
    }

    /// Treats the first label as the root's.
    fn shift(mut ls: LabelSequence) -> LabelSequence {
        ls.root = Some(ls.labels.remove(0));
        ls.deprels.remove(0);
        ls
    }

    #[test]
    fn closers_only_become_a_flat_tree() {
        let ls = seq(None, &[">", ">", ">"]);
        let decoded = decode_robust(&ls, true);
        assert_eq!(arcs(&decoded.graph), vec![(0, 1), (0, 2), (0, 3)]);
        let discarded = decoded
            .diagnostics
            .iter()
            .filter(|d| d.symbol == ">")
            .count();
        let attached = decoded
            .diagnostics
            .iter()
            .filter(|d| d.symbol == "_")
            .count();
        assert_eq!((discarded, attached), (3, 3));
    }

    #[test]
    fn cycles_and_second_heads_are_skipped() {
        let ls = seq(Some(""), &["/*", "\\*>/*", ">*"]);
        let decoded = decode_robust(&ls, true);
        assert!(decoded.graph.is_tree(), "{:?}", decoded.graph);
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(1), uf.find(4));
        assert!(uf.union(1, 4));
        assert_eq!(uf.find(0), uf.find(3));
    }

    #[test]
    fn stack_depth_operations() {
        let mut stack = DecodeStack::new();
        for node in 0..3 {
            stack.push(StackEntry {
                symbol: OPEN_RIGHT_SUPER,
                node,
            });
        }
        let second = stack.fetch(|_| true, 2).unwrap();
        assert_eq!(second.node, 1);
        let removed = stack.remove(2).unwrap();
        assert_eq!(removed.node, 1);
        stack.put(removed, 1);
        assert_eq!(stack.entries().last().unwrap().node, 1);
        assert_eq!(stack.stats().max_super_depth, 3);
        assert!(stack.fetch(|_| true, 4).is_none());
    }
}
