//! Attachment scores, encoding coverage and treebank statistics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::brackets::Label;
use crate::decoder::decode_robust;
use crate::deptree::DepGraph;
use crate::encoder::{encode, encode_ignoring_crossings, LabelSequence, Scheme};
use crate::error::{Error, Result};
use crate::pseudoproj::{deprojectivize, projectivize};
use crate::ropecover::proper_rope_cover;

/// Token-level attachment scores and sentence-level exact match, as
/// fractions in `0..=1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Score {
    pub uas: f64,
    pub las: f64,
    pub um: f64,
    pub lm: f64,
}

impl Score {
    pub const PERFECT: Score = Score {
        uas: 1.0,
        las: 1.0,
        um: 1.0,
        lm: 1.0,
    };
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "uas={:.4}\tlas={:.4}\tum={:.4}\tlm={:.4}",
            self.uas, self.las, self.um, self.lm
        )
    }
}

/// Raw counts behind a [`Score`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub tokens: usize,
    pub heads: usize,
    pub labeled: usize,
    pub sentences: usize,
    pub complete: usize,
    pub labeled_complete: usize,
}

impl Tally {
    pub fn add_sentence(&mut self, gold: &DepGraph, pred: &DepGraph) {
        let mut all_heads = true;
        let mut all_labeled = true;
        for dep in 1..=gold.n() {
            let head_ok = gold.head(dep) == pred.head(dep);
            let label_ok = head_ok && gold.deprel_of(dep) == pred.deprel_of(dep);
            self.tokens += 1;
            self.heads += head_ok as usize;
            self.labeled += label_ok as usize;
            all_heads &= head_ok;
            all_labeled &= label_ok;
        }
        self.sentences += 1;
        self.complete += all_heads as usize;
        self.labeled_complete += all_labeled as usize;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.tokens += other.tokens;
        self.heads += other.heads;
        self.labeled += other.labeled;
        self.sentences += other.sentences;
        self.complete += other.complete;
        self.labeled_complete += other.labeled_complete;
        self
    }

    /// Empty inputs score 1.
    pub fn score(&self) -> Score {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                1.0
            } else {
                num as f64 / den as f64
            }
        };
        Score {
            uas: ratio(self.heads, self.tokens),
            las: ratio(self.labeled, self.tokens),
            um: ratio(self.complete, self.sentences),
            lm: ratio(self.labeled_complete, self.sentences),
        }
    }
}

/// Scores predicted trees against gold ones. Every token counts,
/// punctuation included.
pub fn score(gold: &[DepGraph], pred: &[DepGraph]) -> Result<Score> {
    if gold.len() != pred.len() {
        return Err(Error::Mismatch {
            sentence: gold.len().min(pred.len()) + 1,
            message: format!("{} gold sentences but {} predicted", gold.len(), pred.len()),
        });
    }
    let mut tally = Tally::default();
    for (k, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.n() != p.n() {
            return Err(Error::Mismatch {
                sentence: k + 1,
                message: format!("{} gold tokens but {} predicted", g.n(), p.n()),
            });
        }
        tally.add_sentence(g, p);
    }
    Ok(tally.score())
}

/// How a corpus is turned into labels for coverage and statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Setup {
    pub scheme: Scheme,
    /// Lift non-projective arcs before encoding and restore after decoding.
    pub pseudoproj: bool,
}

impl Setup {
    pub fn new(scheme: Scheme) -> Self {
        Setup {
            scheme,
            pseudoproj: false,
        }
    }

    pub fn with_pseudoproj(scheme: Scheme) -> Self {
        Setup {
            scheme,
            pseudoproj: true,
        }
    }

    /// The labels for `tree`. Projective schemes applied to crossing trees
    /// still produce labels, which then fail to decode exactly.
    pub fn labels(&self, tree: &DepGraph) -> LabelSequence {
        let tree = if self.pseudoproj {
            projectivize(tree)
        } else {
            tree.clone()
        };
        match encode(&tree, self.scheme) {
            Ok(labels) => labels,
            Err(_) => encode_ignoring_crossings(&tree, &self.scheme.cover(&tree)),
        }
        .without_root()
    }

    pub fn decode(&self, labels: &LabelSequence) -> DepGraph {
        let decoded = decode_robust(labels, true).graph;
        if self.pseudoproj {
            deprojectivize(&decoded).graph
        } else {
            decoded
        }
    }
}

/// Encodes and decodes every gold tree and scores the result.
pub fn theoretical_coverage(treebank: &[DepGraph], setup: Setup) -> Score {
    let mut tally = Tally::default();
    for gold in treebank {
        let pred = setup.decode(&setup.labels(gold));
        tally.add_sentence(gold, &pred);
    }
    tally.score()
}

/// Labels and relations seen in training, with the most frequent of each.
#[derive(Clone, Debug, Default)]
pub struct Inventory {
    labels: HashMap<Label, usize>,
    deprels: HashMap<String, usize>,
    top_label: Option<Label>,
    top_deprel: Option<String>,
}

impl Inventory {
    pub fn collect(train: &[DepGraph], setup: Setup) -> Self {
        let mut inv = Inventory::default();
        for tree in train {
            let labels = setup.labels(tree);
            for label in labels.labels {
                *inv.labels.entry(label).or_default() += 1;
            }
            for deprel in labels.deprels.into_iter().flatten() {
                *inv.deprels.entry(deprel).or_default() += 1;
            }
        }
        inv.top_label = most_frequent(&inv.labels);
        inv.top_deprel = most_frequent(&inv.deprels);
        inv
    }

    pub fn knows_label(&self, label: &Label) -> bool {
        self.labels.contains_key(label)
    }

    pub fn knows_deprel(&self, deprel: &str) -> bool {
        self.deprels.contains_key(deprel)
    }

    /// Replaces unseen labels and relations by the most frequent seen ones.
    pub fn restrict(&self, mut labels: LabelSequence) -> LabelSequence {
        for label in &mut labels.labels {
            if !self.knows_label(label) {
                *label = self.top_label.clone().unwrap_or_default();
            }
        }
        for deprel in &mut labels.deprels {
            if let Some(d) = deprel {
                if !self.knows_deprel(d) {
                    *deprel = self.top_deprel.clone();
                }
            }
        }
        labels
    }
}

/// Highest count, ties broken by the smallest key so results are stable.
fn most_frequent<K: Ord + Clone>(counts: &HashMap<K, usize>) -> Option<K> {
    counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, _)| k.clone())
}

/// Like [`theoretical_coverage`], restricted to what `train` shows.
pub fn empirical_coverage(train: &[DepGraph], eval: &[DepGraph], setup: Setup) -> Score {
    let inventory = Inventory::collect(train, setup);
    let mut tally = Tally::default();
    for gold in eval {
        let labels = inventory.restrict(setup.labels(gold));
        tally.add_sentence(gold, &setup.decode(&labels));
    }
    tally.score()
}

/// Index buckets of [`EncodingStats`]: 0, 1, 2 and 3 or more.
pub const INDEX_BUCKETS: usize = 4;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EncodingStats {
    pub trees: usize,
    /// Trees the scheme could not encode.
    pub failures: usize,
    /// Distinct token label strings; relations and root labels excluded.
    pub distinct_labels: usize,
    /// Encoded trees by the largest index they need.
    pub index_counts: [usize; INDEX_BUCKETS],
    pub rope_thickness_max: usize,
}

impl EncodingStats {
    /// `index_counts` as percentages of the encoded trees.
    pub fn index_histogram(&self) -> [f64; INDEX_BUCKETS] {
        let total: usize = self.index_counts.iter().sum();
        self.index_counts.map(|c| {
            if total == 0 {
                0.0
            } else {
                100.0 * c as f64 / total as f64
            }
        })
    }
}

/// Label inventory and index statistics of a corpus under one setup.
/// Projective schemes without lifting skip crossing trees and count them as
/// failures.
pub fn encoding_stats(treebank: &[DepGraph], setup: Setup) -> EncodingStats {
    let mut stats = EncodingStats::default();
    let mut seen = BTreeSet::new();
    for tree in treebank {
        stats.trees += 1;
        stats.rope_thickness_max = stats.rope_thickness_max.max(rope_thickness(tree));
        let tree = if setup.pseudoproj {
            projectivize(tree)
        } else {
            tree.clone()
        };
        let Ok(labels) = encode(&tree, setup.scheme) else {
            stats.failures += 1;
            continue;
        };
        let bucket = (labels.max_index() as usize).min(INDEX_BUCKETS - 1);
        stats.index_counts[bucket] += 1;
        for label in &labels.labels {
            seen.insert(label.to_string());
        }
    }
    stats.distinct_labels = seen.len();
    stats
}

/// Largest number of proper-cover structural arcs spanning one gap between
/// adjacent nodes.
pub fn rope_thickness(tree: &DepGraph) -> usize {
    let cover = proper_rope_cover(tree);
    let n = tree.n();
    let mut delta = vec![0isize; n + 2];
    for arc in cover.structural() {
        delta[arc.left()] += 1;
        delta[arc.right()] -= 1;
    }
    let mut depth = 0isize;
    let mut best = 0isize;
    for d in delta.iter().take(n) {
        depth += d;
        best = best.max(depth);
    }
    best as usize
}
