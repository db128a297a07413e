//! Rope covers: sets of structural arcs on which every other arc leans.
//!
//! A cover records, for every auxiliary arc, the structural arc it is
//! encoded against. The proper cover is the unique cover in which no
//! structural arc leans on another; it has minimum cardinality.

use std::collections::BTreeMap;

use crate::deptree::{Arc, DepGraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RopeCover {
    structural: Vec<Arc>,
    support: BTreeMap<Arc, Arc>,
}

impl RopeCover {
    /// Builds a cover from an explicit structural set, assigning every other
    /// arc the first structural arc (in canonical order) it leans on.
    pub fn from_structural(graph: &DepGraph, structural: &[Arc]) -> Result<Self> {
        let mut cover = RopeCover {
            structural: Vec::new(),
            support: BTreeMap::new(),
        };
        for arc in graph.arcs() {
            if structural.contains(arc) {
                cover.structural.push(*arc);
            }
        }
        if cover.structural.len() != structural.len() {
            return Err(Error::InvalidCover(
                "structural arcs must belong to the graph".into(),
            ));
        }
        for arc in graph.arcs() {
            if cover.structural.contains(arc) {
                continue;
            }
            let support = cover
                .structural
                .iter()
                .find(|s| arc.leans_on(s))
                .ok_or_else(|| Error::InvalidCover(format!("{arc} leans on no structural arc")))?;
            cover.support.insert(*arc, *support);
        }
        Ok(cover)
    }

    /// Structural arcs in canonical order.
    pub fn structural(&self) -> &[Arc] {
        &self.structural
    }

    pub fn is_structural(&self, arc: &Arc) -> bool {
        self.structural.contains(arc)
    }

    /// Auxiliary arc -> the structural arc it is encoded against.
    pub fn support(&self) -> &BTreeMap<Arc, Arc> {
        &self.support
    }

    pub fn supporter(&self, arc: &Arc) -> Option<Arc> {
        self.support.get(arc).copied()
    }

    pub fn len(&self) -> usize {
        self.structural.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structural.is_empty()
    }

    /// Checks the cover against `graph`: structural arcs belong to it, and
    /// every other arc has a recorded supporter it actually leans on.
    pub fn validate(&self, graph: &DepGraph) -> Result<()> {
        if let Some(arc) = self.structural.iter().find(|a| !graph.contains(a)) {
            return Err(Error::InvalidCover(format!("{arc} is not in the graph")));
        }
        for arc in graph.arcs() {
            if self.is_structural(arc) {
                continue;
            }
            match self.support.get(arc) {
                None => {
                    return Err(Error::InvalidCover(format!("{arc} has no supporter")));
                }
                Some(s) if !self.is_structural(s) || !arc.leans_on(s) => {
                    return Err(Error::InvalidCover(format!(
                        "{arc} does not lean on structural arc {s}"
                    )));
                }
                Some(_) => {}
            }
        }
        if self.support.len() + self.structural.len() != graph.arcs().len() {
            return Err(Error::InvalidCover(
                "supporters recorded for arcs outside the graph".into(),
            ));
        }
        Ok(())
    }
}

/// Every arc outside `set` leans on some arc of `set`.
pub fn is_rope_cover(graph: &DepGraph, set: &[Arc]) -> bool {
    graph
        .arcs()
        .iter()
        .filter(|arc| !set.contains(arc))
        .all(|arc| set.iter().any(|s| arc.leans_on(s)))
}

/// No arc of `set` leans on another arc of `set`.
pub fn is_proper(set: &[Arc]) -> bool {
    set.iter().all(|a| !set.iter().any(|b| a.leans_on(b)))
}

/// No node heads two structural arcs in the same direction, and no node is
/// the dependent of two structural arcs coming from the same direction.
pub fn is_compact(set: &[Arc]) -> bool {
    let mut seen = std::collections::HashSet::new();
    set.iter().all(|arc| {
        let dir = arc.is_rightward();
        seen.insert((0u8, arc.head, dir)) && seen.insert((1u8, arc.dep, dir))
    })
}

/// The proper rope cover, by repeatedly taking the longest unmarked arc with
/// the leftmost left endpoint as structural and marking everything leaning on
/// it as auxiliary. Equal-length ties go to the rightward arc. Works on
/// crossing graphs as well.
pub fn proper_rope_cover(graph: &DepGraph) -> RopeCover {
    // canonical order is exactly the selection order
    let arcs = graph.arcs();
    let mut marked = vec![false; arcs.len()];
    let mut cover = RopeCover {
        structural: Vec::new(),
        support: BTreeMap::new(),
    };
    for i in 0..arcs.len() {
        if marked[i] {
            continue;
        }
        let structural = arcs[i];
        marked[i] = true;
        cover.structural.push(structural);
        for (j, arc) in arcs.iter().enumerate() {
            if !marked[j] && arc.leans_on(&structural) {
                marked[j] = true;
                cover.support.insert(*arc, structural);
            }
        }
    }
    cover
}

/// The cover induced by the 4-bit encoding: the longest outgoing arc of each
/// node in each direction. Other arcs are supported by the longest same-head
/// arc in their direction.
pub fn fourbit_rope_cover(graph: &DepGraph) -> RopeCover {
    let mut longest: BTreeMap<(usize, bool), Arc> = BTreeMap::new();
    for arc in graph.arcs() {
        longest
            .entry((arc.head, arc.is_rightward()))
            .and_modify(|best| {
                if arc.len() > best.len() {
                    *best = *arc;
                }
            })
            .or_insert(*arc);
    }
    let mut cover = RopeCover {
        structural: Vec::new(),
        support: BTreeMap::new(),
    };
    for arc in graph.arcs() {
        let best = longest[&(arc.head, arc.is_rightward())];
        if best == *arc {
            cover.structural.push(*arc);
        } else {
            cover.support.insert(*arc, best);
        }
    }
    cover
}

/// Every arc structural.
pub fn naive_rope_cover(graph: &DepGraph) -> RopeCover {
    RopeCover {
        structural: graph.arcs().to_vec(),
        support: BTreeMap::new(),
    }
}

/// Arc-count limit of the brute-force searches.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// For each arc, the bitmask of arcs it leans on.
fn leaning_masks(arcs: &[Arc]) -> Vec<u32> {
    arcs.iter()
        .map(|a| {
            arcs.iter()
                .enumerate()
                .filter(|(_, s)| a.leans_on(s))
                .fold(0u32, |mask, (j, _)| mask | (1 << j))
        })
        .collect()
}

fn check_size(graph: &DepGraph) -> Result<()> {
    let arcs = graph.arcs().len();
    if arcs > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchTooLarge {
            arcs,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(())
}

fn mask_is_cover(subset: u32, supports: &[u32]) -> bool {
    supports
        .iter()
        .enumerate()
        .all(|(i, &s)| subset & (1 << i) != 0 || subset & s != 0)
}

/// Minimum size of any rope cover, by subset enumeration in increasing
/// cardinality. Exponential; refuses graphs with more than
/// [`BRUTE_FORCE_LIMIT`] arcs.
pub fn min_rope_cover_size(graph: &DepGraph) -> Result<usize> {
    check_size(graph)?;
    let m = graph.arcs().len();
    let supports = leaning_masks(graph.arcs());
    for k in 0..=m {
        if subsets_of_size(m, k).any(|subset| mask_is_cover(subset, &supports)) {
            return Ok(k);
        }
    }
    unreachable!("the full arc set is always a rope cover")
}

/// Every subset of arcs that is both a rope cover and proper.
pub fn all_proper_rope_covers(graph: &DepGraph) -> Result<Vec<Vec<Arc>>> {
    check_size(graph)?;
    let arcs = graph.arcs();
    let supports = leaning_masks(arcs);
    let m = arcs.len();
    let mut found = Vec::new();
    for subset in 0u32..(1u32 << m) {
        if !mask_is_cover(subset, &supports) {
            continue;
        }
        let proper = (0..m)
            .filter(|i| subset & (1 << i) != 0)
            .all(|i| subset & supports[i] == 0);
        if proper {
            found.push(
                (0..m)
                    .filter(|i| subset & (1 << i) != 0)
                    .map(|i| arcs[i])
                    .collect(),
            );
        }
    }
    Ok(found)
}

/// Bitmasks over `m` items with exactly `k` bits set, in increasing order.
fn subsets_of_size(m: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << m;
    let mut next = if k == 0 {
        Some(0u64)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let current = next?;
        if current >= limit {
            return None;
        }
        next = if current == 0 {
            None
        } else {
            // Gosper's hack
            let c = current & current.wrapping_neg();
            let r = current + c;
            Some((((r ^ current) >> 2) / c) | r)
        };
        Some(current as u32)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example() -> DepGraph {
        DepGraph::from_arcs(7, [(0, 4), (0, 1), (4, 3), (4, 2), (4, 7), (7, 6), (6, 5)]).unwrap()
    }

    fn arcs(pairs: &[(usize, usize)]) -> Vec<Arc> {
        pairs.iter().map(|&(h, d)| Arc::new(h, d)).collect()
    }

    #[test]
    fn cover_predicates_on_running_example() {
        let g = running_example();
        let optimal = arcs(&[(0, 4), (4, 7), (6, 5)]);
        assert!(is_rope_cover(&g, &optimal));
        assert!(is_proper(&optimal));
        assert!(is_rope_cover(&g, g.arcs()));
        assert!(!is_rope_cover(&g, &arcs(&[(0, 4)])));
        let fourbit = arcs(&[(0, 4), (4, 2), (4, 7), (7, 6), (6, 5)]);
        assert!(is_rope_cover(&g, &fourbit));
        assert!(!is_proper(&fourbit));
        assert!(is_proper(&arcs(&[(0, 1)])));
    }

    #[test]
    fn compactness() {
        assert!(!is_compact(&arcs(&[(0, 3), (0, 2)])));
        assert!(is_compact(&arcs(&[(0, 4), (4, 2), (4, 7), (7, 6), (6, 5)])));
        assert!(!is_compact(&arcs(&[(0, 3), (1, 3)])));
        assert!(is_compact(&arcs(&[(0, 3), (4, 3)])));
    }

    #[test]
    fn proper_cover_of_running_example() {
        let g = running_example();
        let cover = proper_rope_cover(&g);
        assert_eq!(cover.structural(), &arcs(&[(0, 4), (4, 7), (6, 5)])[..]);
        assert_eq!(cover.supporter(&Arc::new(0, 1)), Some(Arc::new(0, 4)));
        assert_eq!(cover.supporter(&Arc::new(7, 6)), Some(Arc::new(4, 7)));
        cover.validate(&g).unwrap();
        let single = DepGraph::from_heads(&[0]).unwrap();
        assert_eq!(proper_rope_cover(&single).structural(), &[Arc::new(0, 1)]);
    }

    #[test]
    fn two_cycle_prefers_rightward() {
        let g = DepGraph::from_arcs(2, [(2, 1), (1, 2)]).unwrap();
        let cover = proper_rope_cover(&g);
        assert_eq!(cover.structural(), &[Arc::new(1, 2)]);
        assert_eq!(cover.supporter(&Arc::new(2, 1)), Some(Arc::new(1, 2)));
    }

    #[test]
    fn fourbit_cover_of_running_example() {
        let g = running_example();
        let cover = fourbit_rope_cover(&g);
        assert_eq!(
            cover.structural(),
            &arcs(&[(0, 4), (4, 2), (4, 7), (6, 5), (7, 6)])[..]
        );
        assert_eq!(cover.supporter(&Arc::new(4, 3)), Some(Arc::new(4, 2)));
        cover.validate(&g).unwrap();
        let chain = DepGraph::from_heads(&[0, 1, 2]).unwrap();
        assert_eq!(fourbit_rope_cover(&chain).len(), 3);
    }

    #[test]
    fn naive_cover() {
        let g = running_example();
        assert_eq!(naive_rope_cover(&g).len(), 7);
        assert!(naive_rope_cover(&DepGraph::new(0)).is_empty());
    }

    #[test]
    fn brute_force_minimum() {
        assert_eq!(min_rope_cover_size(&running_example()).unwrap(), 3);
        assert_eq!(
            min_rope_cover_size(&DepGraph::from_heads(&[0]).unwrap()).unwrap(),
            1
        );
        assert_eq!(min_rope_cover_size(&DepGraph::new(0)).unwrap(), 0);
        let flat = DepGraph::from_heads(&[0; 21]).unwrap();
        assert!(matches!(
            min_rope_cover_size(&flat),
            Err(Error::SearchTooLarge { arcs: 21, .. })
        ));
        let proper = all_proper_rope_covers(&running_example()).unwrap();
        assert_eq!(proper, vec![arcs(&[(0, 4), (4, 7), (6, 5)])]);
    }

    #[test]
    fn gosper_enumeration() {
        let sizes: Vec<usize> = (0..=4).map(|k| subsets_of_size(4, k).count()).collect();
        assert_eq!(sizes, [1, 4, 6, 4, 1]);
        assert!(subsets_of_size(4, 2).all(|s| s.count_ones() == 2));
    }

    #[test]
    fn from_structural_rejects_bad_sets() {
        let g = running_example();
        assert!(RopeCover::from_structural(&g, &arcs(&[(0, 4)])).is_err());
        assert!(RopeCover::from_structural(&g, &arcs(&[(0, 2)])).is_err());
        let cover = RopeCover::from_structural(&g, &arcs(&[(0, 4), (4, 7), (6, 5)])).unwrap();
        assert_eq!(cover, proper_rope_cover(&g));
    }
}
