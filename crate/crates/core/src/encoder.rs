//! Encoding a graph and a rope cover into one bracket label per token.
//!
//! Structural arcs become a pair of superbrackets. Every auxiliary arc
//! becomes a single semibracket placed at the endpoint it does not share with
//! its supporting structural arc. The indexed encoder adds bracket indices so
//! crossing arcs can be matched deep in the decoder's stack.

use std::fmt;
use std::str::FromStr;

use crate::brackets::{
    order_key, BracketSymbol, Label, Shape, CLOSE_LEFT_SEMI, CLOSE_LEFT_SUPER, CLOSE_RIGHT_SEMI,
    CLOSE_RIGHT_SUPER, OPEN_LEFT_SEMI, OPEN_LEFT_SUPER, OPEN_RIGHT_SEMI, OPEN_RIGHT_SUPER,
};
use crate::decoder::decode_indexed;
use crate::deptree::{Arc, DepGraph};
use crate::error::{Error, Result};
use crate::ropecover::{fourbit_rope_cover, naive_rope_cover, proper_rope_cover, RopeCover};

/// Labels for the tokens of one sentence.
///
/// `labels[k]` belongs to token `k + 1`. The dummy root's label is optional:
/// it only ever holds opening superbrackets and the decoder can supply them
/// when it is missing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelSequence {
    pub root: Option<Label>,
    pub labels: Vec<Label>,
    pub deprels: Vec<Option<String>>,
}

impl LabelSequence {
    /// A sequence without a root label or relations.
    pub fn from_labels(labels: Vec<Label>) -> Self {
        let deprels = vec![None; labels.len()];
        LabelSequence {
            root: None,
            labels,
            deprels,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// The label at node `pos`; position 0 is the root.
    pub fn label(&self, pos: usize) -> Option<&Label> {
        match pos {
            0 => self.root.as_ref(),
            _ => self.labels.get(pos - 1),
        }
    }

    /// Every present label with its node position.
    pub fn positions(&self) -> impl Iterator<Item = (usize, &Label)> {
        self.root
            .iter()
            .map(|l| (0, l))
            .chain(self.labels.iter().enumerate().map(|(k, l)| (k + 1, l)))
    }

    pub fn symbol_count(&self) -> usize {
        self.positions().map(|(_, l)| l.len()).sum()
    }

    pub fn max_index(&self) -> u32 {
        self.positions()
            .map(|(_, l)| l.max_index())
            .max()
            .unwrap_or(0)
    }

    pub fn without_root(mut self) -> Self {
        self.root = None;
        self
    }
}

impl fmt::Display for LabelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (_, label) in self.positions() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Every arc structural.
    Naive,
    /// The cover equivalent to the 4-bit encoding.
    FourBit,
    /// Proper rope cover, projective trees only.
    OptimalProjective,
    /// Proper rope cover with indexed brackets, any tree.
    OptimalNonProjective,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Naive,
        Scheme::FourBit,
        Scheme::OptimalProjective,
        Scheme::OptimalNonProjective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Naive => "naive",
            Scheme::FourBit => "fourbit",
            Scheme::OptimalProjective => "optimal",
            Scheme::OptimalNonProjective => "optimal-np",
        }
    }

    /// Whether the scheme can only encode crossing-free graphs.
    pub fn is_projective(self) -> bool {
        self != Scheme::OptimalNonProjective
    }

    pub fn cover(self, graph: &DepGraph) -> RopeCover {
        match self {
            Scheme::Naive => naive_rope_cover(graph),
            Scheme::FourBit => fourbit_rope_cover(graph),
            Scheme::OptimalProjective | Scheme::OptimalNonProjective => proper_rope_cover(graph),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        Scheme::ALL
            .into_iter()
            .find(|s| s.name() == text)
            .ok_or_else(|| {
                format!("unknown scheme {text:?}; expected naive, fourbit, optimal or optimal-np")
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Reject trees whose encoding needs a larger bracket index.
    pub max_index: Option<u32>,
}

pub fn encode(graph: &DepGraph, scheme: Scheme) -> Result<LabelSequence> {
    encode_with(graph, scheme, &EncodeOptions::default())
}

pub fn encode_with(
    graph: &DepGraph,
    scheme: Scheme,
    options: &EncodeOptions,
) -> Result<LabelSequence> {
    let cover = scheme.cover(graph);
    let labels = match scheme {
        Scheme::OptimalNonProjective => encode_nonprojective(graph, &cover)?,
        _ => encode_noncrossing(graph, &cover)?,
    };
    if let Some(cap) = options.max_index {
        let required = labels.max_index();
        if required > cap {
            return Err(Error::IndexCapExceeded { required, cap });
        }
    }
    Ok(labels)
}

/// Encodes a crossing-free graph with unindexed brackets.
pub fn encode_noncrossing(graph: &DepGraph, cover: &RopeCover) -> Result<LabelSequence> {
    if let Some((a, b)) = graph.crossing_pair() {
        return Err(Error::Crossing(a, b));
    }
    cover.validate(graph)?;
    Ok(encode_ignoring_crossings(graph, cover))
}

/// Applies the unindexed encoding rules even where arcs cross. The result
/// need not decode back to `graph`; it is what a projective scheme would
/// emit, which is what coverage measurements need.
pub fn encode_ignoring_crossings(graph: &DepGraph, cover: &RopeCover) -> LabelSequence {
    let mut slots = placements(graph, cover);
    let mut labels: Vec<Label> = slots
        .iter_mut()
        .map(|slot| {
            slot.sort_by_key(|p| order_key(p.symbol, p.arc.len()));
            Label(slot.iter().map(|p| p.symbol).collect())
        })
        .collect();
    let root = labels.remove(0);
    LabelSequence {
        root: Some(root),
        labels,
        deprels: deprels_of(graph),
    }
}

fn deprels_of(graph: &DepGraph) -> Vec<Option<String>> {
    (1..=graph.n())
        .map(|d| graph.deprel_of(d).map(str::to_owned))
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Placement {
    symbol: BracketSymbol,
    arc: Arc,
}

/// Unindexed symbols per node, in no particular order.
fn placements(graph: &DepGraph, cover: &RopeCover) -> Vec<Vec<Placement>> {
    let mut slots = vec![Vec::new(); graph.n() + 1];
    for &arc in graph.arcs() {
        match cover.supporter(&arc) {
            None => {
                let (open, close) = if arc.is_rightward() {
                    (OPEN_RIGHT_SUPER, CLOSE_RIGHT_SUPER)
                } else {
                    (OPEN_LEFT_SUPER, CLOSE_LEFT_SUPER)
                };
                slots[arc.left()].push(Placement { symbol: open, arc });
                slots[arc.right()].push(Placement { symbol: close, arc });
            }
            Some(support) => {
                let (pos, symbol) = semibracket(arc, support);
                slots[pos].push(Placement { symbol, arc });
            }
        }
    }
    slots
}

/// Position and shape of the semibracket for `arc` leaning on `support`.
fn semibracket(arc: Arc, support: Arc) -> (usize, BracketSymbol) {
    let (h, d) = (arc.head, arc.dep);
    if support.left() == h {
        (d, CLOSE_RIGHT_SEMI)
    } else if support.right() == h {
        (d, OPEN_LEFT_SEMI)
    } else if support.left() == d {
        (h, CLOSE_LEFT_SEMI)
    } else {
        debug_assert_eq!(support.right(), d);
        (h, OPEN_RIGHT_SEMI)
    }
}

/// An opening symbol on the simulated stack.
struct Entry {
    symbol: BracketSymbol,
    node: usize,
    arc: Arc,
    /// Where the symbol sits in the output, to fill in its index later.
    slot: (usize, usize),
    /// Sweeps that passed over this semibracket before its own.
    skipped: u32,
}

impl Entry {
    fn other_end(&self) -> usize {
        if self.arc.head == self.node {
            self.arc.dep
        } else {
            self.arc.head
        }
    }
}

/// Encodes any graph with indexed brackets.
///
/// Positions are processed left to right while the decoder's stack is
/// simulated alongside. Every closing bracket gets the index that makes the
/// decoder reach its intended partner, and every opening semibracket gets
/// the number of sweeps that will pass over it before its own. The result
/// is decoded and compared against `graph` before it is returned.
pub fn encode_nonprojective(graph: &DepGraph, cover: &RopeCover) -> Result<LabelSequence> {
    cover.validate(graph)?;
    let mut slots = placements(graph, cover);
    for slot in &mut slots {
        slot.sort_by_key(|p| order_key(p.symbol, p.arc.len()));
    }
    let mut out: Vec<Vec<BracketSymbol>> = slots
        .iter()
        .map(|slot| slot.iter().map(|p| p.symbol).collect())
        .collect();
    let mut stack: Vec<Entry> = Vec::new();

    for (pos, slot) in slots.iter().enumerate() {
        for (k, placement) in slot.iter().enumerate() {
            let symbol = placement.symbol;
            let arc = placement.arc;
            if symbol.is_opening() {
                stack.push(Entry {
                    symbol,
                    node: pos,
                    arc,
                    slot: (pos, k),
                    skipped: 0,
                });
            } else if !symbol.is_super() {
                let shared = if arc.head == pos { arc.dep } else { arc.head };
                let mut above = 0;
                let mut found = false;
                for entry in stack.iter().rev().filter(|e| e.symbol.is_super()) {
                    if entry.node == shared {
                        found = true;
                        break;
                    }
                    above += 1;
                }
                if !found {
                    return Err(Error::InvalidCover(format!(
                        "no open superbracket at node {shared} for {arc}"
                    )));
                }
                out[pos][k].index = above;
            } else {
                let wanted = opener_for(symbol.shape);
                let Some(target) = stack
                    .iter()
                    .rposition(|e| e.symbol.is_super() && e.arc == arc)
                else {
                    return Err(Error::InvalidCover(format!(
                        "structural arc {arc} closed before it opened"
                    )));
                };
                let mut skipped_supers = 0;
                let mut at = stack.len();
                while at > target + 1 {
                    at -= 1;
                    let entry = &mut stack[at];
                    if entry.symbol.is_super() {
                        if entry.symbol.shape == wanted {
                            skipped_supers += 1;
                        }
                    } else if entry.other_end() == pos {
                        let entry = stack.remove(at);
                        out[entry.slot.0][entry.slot.1].index = entry.skipped;
                    } else {
                        entry.skipped += 1;
                    }
                }
                stack.remove(target);
                out[pos][k].index = skipped_supers;
            }
        }
    }

    let mut labels: Vec<Label> = out.into_iter().map(Label).collect();
    let root = labels.remove(0);
    let encoded = LabelSequence {
        root: Some(root),
        labels,
        deprels: deprels_of(graph),
    };
    let decoded = decode_indexed(&encoded);
    if decoded != *graph {
        return Err(Error::SelfCheck {
            expected: Box::new(graph.clone()),
            decoded: Box::new(decoded),
        });
    }
    Ok(encoded)
}

/// The opening shape a closing superbracket of `shape` matches.
pub(crate) fn opener_for(shape: Shape) -> Shape {
    match shape {
        Shape::CloseRight => Shape::OpenRight,
        Shape::CloseLeft => Shape::OpenLeft,
        other => other,
    }
}
