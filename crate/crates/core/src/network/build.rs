//! Networks from a cyclic ordering and a cross-free family of its arcs.

use super::Level1Network;
use crate::bits::BitVec;
use crate::cyclic::CyclicOrdering;
use crate::taxa::{Taxon, TaxonSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("split {0} is not an arc of the cyclic ordering")]
    NotConsecutive(String),
    #[error("split {0} does not leave at least two taxa on each side")]
    Trivial(String),
    #[error("splits {0} and {1} cross")]
    Crossing(String, String),
    #[error("split has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("taxon set has {taxa} taxa but the ordering has {ordering}")]
    SizeMismatch { taxa: usize, ordering: usize },
    #[error("random networks need at least 4 taxa, got {0}")]
    TooFewTaxa(usize),
    #[error("split probability {0} is not in [0, 1]")]
    BadProbability(f64),
}

/// Cross-free nontrivial splits, each stored as the arc `[start, end]` of
/// positions in `ordering` on the side not containing `ordering.seq()[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFamily {
    ordering: CyclicOrdering,
    intervals: Vec<(usize, usize)>,
}

fn describe(set: &BitVec) -> String {
    let ids: Vec<String> = set.iter_ones().map(|i| i.to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

impl SplitFamily {
    /// Normalizes each subset to the side avoiding `seq()[0]` and checks that
    /// the result is a cross-free family of nontrivial arcs. Complements and
    /// repeats collapse.
    pub fn new(ordering: CyclicOrdering, splits: &[BitVec]) -> Result<Self, BuildError> {
        let n = ordering.len();
        let origin = ordering.seq().first().copied();
        let mut intervals = Vec::with_capacity(splits.len());
        for s in splits {
            if s.len() != n {
                return Err(BuildError::LengthMismatch {
                    expected: n,
                    got: s.len(),
                });
            }
            let side = match origin {
                Some(o) if s.get(o.index()) => s.complement(),
                _ => s.clone(),
            };
            let k = side.count_ones();
            if k < 2 || n - k < 2 {
                return Err(BuildError::Trivial(describe(s)));
            }
            let mut pos: Vec<usize> = side.iter_ones().map(|i| ordering.position(Taxon(i as u32))).collect();
            pos.sort_unstable();
            let (start, end) = (pos[0], pos[k - 1]);
            if end - start + 1 != k {
                return Err(BuildError::NotConsecutive(describe(s)));
            }
            intervals.push((start, end));
        }
        intervals.sort_by_key(|&(s, e)| (s, Reverse(e)));
        intervals.dedup();
        for (i, &(s1, e1)) in intervals.iter().enumerate() {
            for &(s2, e2) in &intervals[i + 1..] {
                // s1 <= s2; nested or disjoint is fine.
                if s2 <= e1 && e2 > e1 {
                    let show = |s: usize, e: usize| {
                        let ids: Vec<String> = (s..=e).map(|p| ordering.seq()[p].to_string()).collect();
                        format!("{{{}}}", ids.join(","))
                    };
                    return Err(BuildError::Crossing(show(s1, e1), show(s2, e2)));
                }
            }
        }
        Ok(Self { ordering, intervals })
    }

    pub fn ordering(&self) -> &CyclicOrdering {
        &self.ordering
    }

    /// Arcs `[start, end]` of positions, sorted by start then by decreasing end.
    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Each split as a taxon bit set (the side avoiding `seq()[0]`).
    pub fn splits(&self) -> Vec<BitVec> {
        let n = self.ordering.len();
        self.intervals
            .iter()
            .map(|&(s, e)| BitVec::from_indices(n, (s..=e).map(|p| self.ordering.seq()[p].index())))
            .collect()
    }
}

enum Slot {
    Parent,
    Leaf(usize),
    Child(usize),
}

/// Builds the binary level-1 network whose nontrivial splits are exactly the
/// family and whose leaves can be drawn in the family's cyclic order.
///
/// The family is a laminar set of arcs; its containment tree gets a hub per
/// node, and a hub of degree `d > 3` becomes a cycle of length `d` whose
/// attachments follow the ordering.
pub fn build_network(taxa: &TaxonSet, family: &SplitFamily) -> Result<Level1Network, BuildError> {
    let c = family.ordering();
    let n = c.len();
    if taxa.len() != n {
        return Err(BuildError::SizeMismatch {
            taxa: taxa.len(),
            ordering: n,
        });
    }
    let mut names: Vec<String> = taxa.names().to_vec();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let edge = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
        adj[u].push(v);
        adj[v].push(u);
    };
    if n == 2 {
        edge(&mut adj, 0, 1);
    }
    if n <= 2 {
        return Ok(Level1Network::from_adjacency(taxa.clone(), names, adj).expect("tiny network"));
    }

    // Node 0 is the root; node k + 1 is interval k.
    let intervals = family.intervals();
    let mut parent = vec![0usize; intervals.len() + 1];
    let mut innermost = vec![0usize; n];
    let mut open: Vec<usize> = Vec::new();
    for (k, &(s, e)) in intervals.iter().enumerate() {
        while let Some(&top) = open.last() {
            if intervals[top].1 < s {
                open.pop();
            } else {
                break;
            }
        }
        parent[k + 1] = open.last().map_or(0, |&top| top + 1);
        open.push(k);
        for p in s..=e {
            innermost[p] = k + 1;
        }
    }
    // innermost is right because nested intervals are visited after their parents.
    let mut items: Vec<Vec<(usize, Slot)>> = (0..=intervals.len()).map(|_| Vec::new()).collect();
    for (p, &node) in innermost.iter().enumerate().skip(1) {
        items[node].push((p, Slot::Leaf(c.seq()[p].index())));
    }
    for (k, &(s, _)) in intervals.iter().enumerate() {
        items[parent[k + 1]].push((s, Slot::Child(k + 1)));
    }

    let mut fresh = 0usize;
    let mut new_vertex = |names: &mut Vec<String>, adj: &mut Vec<Vec<usize>>| {
        let name = loop {
            let candidate = format!("_v{fresh}");
            fresh += 1;
            if taxa.get(&candidate).is_none() {
                break candidate;
            }
        };
        names.push(name);
        adj.push(Vec::new());
        names.len() - 1
    };

    // The hub vertex each child node attaches to, filled top-down.
    let mut attach = vec![usize::MAX; intervals.len() + 1];
    for node in 0..=intervals.len() {
        let mut list = std::mem::take(&mut items[node]);
        list.sort_by_key(|&(p, _)| p);
        let mut ring: Vec<Slot> = Vec::with_capacity(list.len() + 1);
        ring.push(if node == 0 { Slot::Leaf(c.seq()[0].index()) } else { Slot::Parent });
        ring.extend(list.into_iter().map(|(_, s)| s));

        let hubs: Vec<usize> = if ring.len() == 3 {
            vec![new_vertex(&mut names, &mut adj); 3]
        } else {
            let cyc: Vec<usize> = (0..ring.len()).map(|_| new_vertex(&mut names, &mut adj)).collect();
            for i in 0..cyc.len() {
                edge(&mut adj, cyc[i], cyc[(i + 1) % cyc.len()]);
            }
            cyc
        };
        for (slot, &h) in ring.iter().zip(&hubs) {
            match *slot {
                Slot::Parent => edge(&mut adj, h, attach[node]),
                Slot::Leaf(v) => edge(&mut adj, h, v),
                Slot::Child(k) => attach[k] = h,
            }
        }
    }
    Ok(Level1Network::from_adjacency(taxa.clone(), names, adj).expect("construction yields a level-1 network"))
}

/// A random network on taxa `t1..tn`: a uniform cyclic ordering, then a
/// recursive partition of the arc after the first taxon into sub-arcs, each
/// eligible arc kept as a split with probability `p_split`.
pub fn random_network(n: usize, p_split: f64, seed: u64) -> Result<Level1Network, BuildError> {
    if n < 4 {
        return Err(BuildError::TooFewTaxa(n));
    }
    if !(0.0..=1.0).contains(&p_split) {
        return Err(BuildError::BadProbability(p_split));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taxa = TaxonSet::numbered(n);
    let mut seq: Vec<Taxon> = taxa.iter().collect();
    seq.shuffle(&mut rng);
    let ordering = CyclicOrdering::new(seq).expect("shuffled permutation");

    let mut splits = Vec::new();
    let mut pending = vec![(1usize, n - 1)];
    while let Some((lo, hi)) = pending.pop() {
        let size = hi - lo + 1;
        if size < 2 {
            continue;
        }
        if size <= n - 2 && rng.gen_bool(p_split) {
            let side = (lo..=hi).map(|p| ordering.seq()[p].index());
            splits.push(BitVec::from_indices(n, side));
        }
        let cut = rng.gen_range(lo..hi);
        pending.push((cut + 1, hi));
        pending.push((lo, cut));
    }
    let family = SplitFamily::new(ordering, &splits)?;
    build_network(&taxa, &family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::splits_of;

    fn ordering(ids: &[u32]) -> CyclicOrdering {
        CyclicOrdering::new(ids.iter().map(|&i| Taxon(i)).collect()).unwrap()
    }

    #[test]
    fn no_splits_gives_a_cycle() {
        let taxa = TaxonSet::numbered(4);
        let family = SplitFamily::new(ordering(&[0, 1, 2, 3]), &[]).unwrap();
        let g = build_network(&taxa, &family).unwrap();
        let s = g.structure();
        assert_eq!(s.cycles.len(), 1);
        assert_eq!(s.cycles[0].len(), 4);
        assert_eq!(g.num_vertices(), 8);
    }

    #[test]
    fn one_split_on_four_taxa_gives_a_quartet_tree() {
        let taxa = TaxonSet::numbered(4);
        let bc = BitVec::from_indices(4, [2, 3]);
        let family = SplitFamily::new(ordering(&[0, 1, 2, 3]), &[bc.clone()]).unwrap();
        let g = build_network(&taxa, &family).unwrap();
        assert!(g.is_tree());
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(splits_of(&g), vec![BitVec::from_indices(4, [0, 1]), bc]);
    }

    #[test]
    fn family_rejects_bad_input() {
        let c = ordering(&[0, 1, 2, 3, 4, 5]);
        let s = |ids: &[usize]| BitVec::from_indices(6, ids.iter().copied());
        assert!(matches!(SplitFamily::new(c.clone(), &[s(&[1, 3])]), Err(BuildError::NotConsecutive(_))));
        assert!(matches!(SplitFamily::new(c.clone(), &[s(&[1])]), Err(BuildError::Trivial(_))));
        assert!(matches!(
            SplitFamily::new(c.clone(), &[s(&[1, 2]), s(&[2, 3])]),
            Err(BuildError::Crossing(..))
        ));
        // complement of {4, 5} avoids nothing new: the pair collapses
        let f = SplitFamily::new(c, &[s(&[4, 5]), s(&[0, 1, 2, 3])]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn small_taxon_counts() {
        for n in 1..=3 {
            let taxa = TaxonSet::numbered(n);
            let c = CyclicOrdering::new(taxa.iter().collect()).unwrap();
            let g = build_network(&taxa, &SplitFamily::new(c, &[]).unwrap()).unwrap();
            assert_eq!(g.num_taxa(), n);
        }
    }

    #[test]
    fn random_extremes() {
        let g = random_network(4, 0.0, 1).unwrap();
        assert_eq!(g.structure().cycles.len(), 1);
        let g = random_network(5, 1.0, 7).unwrap();
        assert!(g.is_tree());
        assert_eq!(splits_of(&g).len(), 4);
        assert!(random_network(3, 0.5, 0).is_err());
        assert!(random_network(5, 1.5, 0).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_network(12, 0.5, 42).unwrap();
        let b = random_network(12, 0.5, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
    }
}
