//! Dependency graph data model and the structural predicates on arcs.
//!
//! Nodes are `0..=n`; node 0 is the dummy root and never has a head. Arcs
//! are kept in a canonical order (leftmost endpoint first, then longest
//! first, rightward before leftward) so that every traversal is
//! deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A dependency from `head` to `dep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub head: usize,
    pub dep: usize,
}

impl Arc {
    /// Panics if `head == dep` or `dep == 0`.
    pub fn new(head: usize, dep: usize) -> Self {
        Self::try_new(head, dep).expect("invalid arc")
    }

    pub fn try_new(head: usize, dep: usize) -> Result<Self> {
        if head == dep {
            return Err(Error::InvalidArc {
                head,
                dep,
                reason: "self loop",
            });
        }
        if dep == 0 {
            return Err(Error::InvalidArc {
                head,
                dep,
                reason: "the root cannot be a dependent",
            });
        }
        Ok(Arc { head, dep })
    }

    #[inline]
    pub fn left(&self) -> usize {
        self.head.min(self.dep)
    }

    #[inline]
    pub fn right(&self) -> usize {
        self.head.max(self.dep)
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.right() - self.left()
    }

    #[inline]
    pub fn is_rightward(&self) -> bool {
        self.head < self.dep
    }

    /// Interleaved endpoints. Symmetric.
    pub fn crosses(&self, other: &Arc) -> bool {
        let (a0, a1) = (self.left(), self.right());
        let (b0, b1) = (other.left(), other.right());
        (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
    }

    /// `self` spans `other` (an arc covers itself).
    pub fn covers(&self, other: &Arc) -> bool {
        self.left() <= other.left() && other.right() <= self.right()
    }

    /// `self` leans on `support`: it is covered by `support`, shares one of
    /// its endpoints and is a different arc.
    pub fn leans_on(&self, support: &Arc) -> bool {
        self != support
            && support.covers(self)
            && (support.left() == self.left() || support.right() == self.right())
    }

    /// Key of the canonical arc order.
    pub fn canonical_key(&self) -> (usize, Reverse<usize>, bool) {
        (self.left(), Reverse(self.len()), !self.is_rightward())
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.head, self.dep)
    }
}

/// Why a graph fails to be a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    MissingHead(usize),
    MultipleHeads(usize),
    Cycle(usize),
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::MissingHead(node) => write!(f, "node {node} has no head"),
            TreeViolation::MultipleHeads(node) => write!(f, "node {node} has several heads"),
            TreeViolation::Cycle(node) => write!(f, "node {node} lies on a cycle"),
        }
    }
}

/// A dependency graph over the nodes `0..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepGraph {
    n: usize,
    arcs: Vec<Arc>,
    deprels: BTreeMap<Arc, String>,
}

impl DepGraph {
    /// A graph with `n` tokens and no arcs.
    pub fn new(n: usize) -> Self {
        DepGraph {
            n,
            arcs: Vec::new(),
            deprels: BTreeMap::new(),
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut graph = DepGraph::new(n);
        for (head, dep) in arcs {
            graph.add_arc(Arc::try_new(head, dep)?)?;
        }
        Ok(graph)
    }

    /// Builds a graph from a head vector: `heads[i]` is the head of token
    /// `i + 1`.
    pub fn from_heads(heads: &[usize]) -> Result<Self> {
        Self::from_arcs(
            heads.len(),
            heads.iter().enumerate().map(|(i, &h)| (h, i + 1)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in canonical order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.position(arc).is_ok()
    }

    fn position(&self, arc: &Arc) -> std::result::Result<usize, usize> {
        self.arcs
            .binary_search_by(|probe| probe.canonical_key().cmp(&arc.canonical_key()))
    }

    pub fn add_arc(&mut self, arc: Arc) -> Result<()> {
        if arc.head > self.n || arc.dep > self.n {
            return Err(Error::ArcOutOfRange {
                head: arc.head,
                dep: arc.dep,
                n: self.n,
            });
        }
        match self.position(&arc) {
            Ok(_) => Err(Error::DuplicateArc(arc)),
            Err(at) => {
                self.arcs.insert(at, arc);
                Ok(())
            }
        }
    }

    pub fn add_labeled_arc(&mut self, arc: Arc, deprel: impl Into<String>) -> Result<()> {
        self.add_arc(arc)?;
        self.deprels.insert(arc, deprel.into());
        Ok(())
    }

    pub fn remove_arc(&mut self, arc: &Arc) -> bool {
        match self.position(arc) {
            Ok(at) => {
                self.arcs.remove(at);
                self.deprels.remove(arc);
                true
            }
            Err(_) => false,
        }
    }

    pub fn set_deprel(&mut self, arc: &Arc, deprel: impl Into<String>) {
        if self.contains(arc) {
            self.deprels.insert(*arc, deprel.into());
        }
    }

    pub fn clear_deprel(&mut self, arc: &Arc) {
        self.deprels.remove(arc);
    }

    pub fn deprel(&self, arc: &Arc) -> Option<&str> {
        self.deprels.get(arc).map(String::as_str)
    }

    /// Relation of the (first) arc entering `dep`.
    pub fn deprel_of(&self, dep: usize) -> Option<&str> {
        self.head_arc(dep).and_then(|arc| self.deprel(&arc))
    }

    pub fn deprels(&self) -> &BTreeMap<Arc, String> {
        &self.deprels
    }

    /// The first arc entering `dep`, if any.
    pub fn head_arc(&self, dep: usize) -> Option<Arc> {
        self.arcs.iter().find(|a| a.dep == dep).copied()
    }

    pub fn head(&self, dep: usize) -> Option<usize> {
        self.head_arc(dep).map(|a| a.head)
    }

    /// Head of every node, indexed by node; entry 0 is always `None`.
    pub fn heads(&self) -> Vec<Option<usize>> {
        let mut heads = vec![None; self.n + 1];
        for arc in &self.arcs {
            heads[arc.dep].get_or_insert(arc.head);
        }
        heads
    }

    /// Re-attaches `dep` to `head`, moving its relation along. Any other
    /// arcs entering `dep` are dropped.
    pub fn set_head(&mut self, dep: usize, head: usize) -> Result<()> {
        let old: Vec<Arc> = self.arcs.iter().filter(|a| a.dep == dep).copied().collect();
        let deprel = old.first().and_then(|a| self.deprels.get(a).cloned());
        for arc in &old {
            self.remove_arc(arc);
        }
        let arc = Arc::try_new(head, dep)?;
        self.add_arc(arc)?;
        if let Some(deprel) = deprel {
            self.deprels.insert(arc, deprel);
        }
        Ok(())
    }

    pub fn dependents(&self, head: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .filter(move |a| a.head == head)
            .map(|a| a.dep)
    }

    /// Checks the tree conditions: node 0 has no head, every other node has
    /// exactly one, and there are no cycles.
    pub fn check_tree(&self) -> std::result::Result<(), TreeViolation> {
        let mut heads = vec![None; self.n + 1];
        for arc in &self.arcs {
            if heads[arc.dep].replace(arc.head).is_some() {
                return Err(TreeViolation::MultipleHeads(arc.dep));
            }
        }
        if let Some(node) = (1..=self.n).find(|&node| heads[node].is_none()) {
            return Err(TreeViolation::MissingHead(node));
        }
        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root
        let mut state = vec![0u8; self.n + 1];
        state[0] = 2;
        for start in 1..=self.n {
            let mut walk = Vec::new();
            let mut node = start;
            while state[node] == 0 {
                state[node] = 1;
                walk.push(node);
                node = heads[node].expect("checked above");
            }
            if state[node] == 1 {
                return Err(TreeViolation::Cycle(node));
            }
            for visited in walk {
                state[visited] = 2;
            }
        }
        Ok(())
    }

    pub fn is_tree(&self) -> bool {
        self.check_tree().is_ok()
    }

    fn require_tree(&self) -> Result<()> {
        self.check_tree().map_err(Error::NotATree)
    }

    /// First pair of crossing arcs in canonical order.
    pub fn crossing_pair(&self) -> Option<(Arc, Arc)> {
        for (i, a) in self.arcs.iter().enumerate() {
            for b in &self.arcs[i + 1..] {
                if a.crosses(b) {
                    return Some((*a, *b));
                }
            }
        }
        None
    }

    pub fn has_crossing(&self) -> bool {
        self.crossing_pair().is_some()
    }

    /// Projectivity of a tree as absence of crossing arcs.
    pub fn is_projective(&self) -> Result<bool> {
        self.require_tree()?;
        Ok(!self.has_crossing())
    }

    /// Projectivity of a tree by the dominance condition: every node strictly
    /// inside an arc descends from one of the arc's endpoints.
    pub fn is_projective_by_descendants(&self) -> Result<bool> {
        self.require_tree()?;
        let heads = self.heads();
        let descends = |mut node: usize, ancestor: usize| loop {
            if node == ancestor {
                return true;
            }
            match heads[node] {
                Some(h) => node = h,
                None => return false,
            }
        };
        Ok(self.arcs.iter().all(|arc| {
            (arc.left() + 1..arc.right()).all(|k| descends(k, arc.head) || descends(k, arc.dep))
        }))
    }

    /// Nodes dominated by `root` (including itself) in breadth-first order.
    pub fn descendants(&self, root: usize) -> Vec<usize> {
        let mut children = vec![Vec::new(); self.n + 1];
        for arc in &self.arcs {
            children[arc.head].push(arc.dep);
        }
        for list in &mut children {
            list.sort_unstable();
        }
        let mut seen = vec![false; self.n + 1];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(node) = queue.pop_front() {
            order.push(node);
            for &child in &children[node] {
                if !seen[child] {
                    seen[child] = true;
                    queue.push_back(child);
                }
            }
        }
        order
    }
}
