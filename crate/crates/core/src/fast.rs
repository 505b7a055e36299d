//! Cubic-time reconstruction from quartets that all contain the anchor.
//!
//! An anchored quartet on `{∞, a, b, c}` with `a < b < c` ties two anchored
//! coordinates together: `(∞a|bc)` makes `(a,b)` and `(a,c)` equal,
//! `(∞c|ab)` makes `(a,c)` and `(b,c)` equal and `(∞b|ac)` makes `(a,b)` and
//! `(b,c)` differ. Solving these equations is 2-colouring a signed graph on
//! the coordinates. When the quartets are all anchored quartets of some
//! level-1 network, the number of components is the solution dimension and
//! the taxa touched by each component form a split (or everything but the
//! anchor).

use crate::bits::BitVec;
use crate::cyclic::{CyclicOrdering, TripleIndex, TripleVector};
use crate::general::NetworkResult;
use crate::network::{build_network, count_quartets, BuildError, QuartetOracle, SplitFamily};
use crate::quartet::{Quartet, QuartetSet};
use crate::taxa::{Taxon, TaxonSet};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FastError {
    #[error("quartet {0:?} does not contain the anchor")]
    NotAnchored(Quartet),
    #[error("quartet uses taxon {0} outside the taxon set")]
    UnknownTaxon(Taxon),
    #[error("the fast path needs at least 4 taxa, got {0}")]
    TooFewTaxa(usize),
    #[error(transparent)]
    Cyclic(#[from] crate::cyclic::CyclicError),
}

/// Why an anchored quartet set is not the anchored quartet set of a level-1
/// network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotLevel1Like {
    /// Input quartets whose equations go around an odd cycle; they have no
    /// common solution at all.
    ParityConflict(Vec<Quartet>),
    /// The assembled solution is not cyclic on this 4-set.
    NonCyclic([Taxon; 4]),
    /// A component's taxa are not an arc of the decoded ordering.
    NotConsecutive(Vec<Taxon>),
    /// Two component splits cross.
    Crossing,
    /// The network built from the data displays a different anchored quartet
    /// set; `displayed` tells which side has the quartet.
    Mismatch { quartet: Quartet, displayed: bool },
}

impl NotLevel1Like {
    pub fn describe(&self, taxa: &TaxonSet) -> String {
        let names = |ts: &[Taxon]| ts.iter().map(|&t| taxa.name(t)).collect::<Vec<_>>().join(" ");
        match self {
            Self::ParityConflict(qs) => format!(
                "quartets {} contradict each other",
                qs.iter().map(|q| format!("({})", q.format(taxa))).collect::<Vec<_>>().join(", ")
            ),
            Self::NonCyclic(z) => format!("no cyclic ordering fits the solution on {}", names(z)),
            Self::NotConsecutive(s) => format!("taxa {} should form a split but are not an arc", names(s)),
            Self::Crossing => "component splits cross".to_string(),
            Self::Mismatch { quartet, displayed: true } => {
                format!("network displays ({}) which the input lacks", quartet.format(taxa))
            }
            Self::Mismatch { quartet, displayed: false } => {
                format!("network does not display input quartet ({})", quartet.format(taxa))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedEdge {
    pub u: usize,
    pub v: usize,
    pub odd: bool,
    /// Position of the generating quartet in the input.
    pub quartet: usize,
}

/// Graph on the anchored coordinates with even and odd edges.
#[derive(Debug, Clone)]
pub struct SignedGraph {
    pub num_vertices: usize,
    pub edges: Vec<SignedEdge>,
}

/// The edge contributed by the anchored quartet at input position `pos`.
pub fn signed_edge(q: &Quartet, pos: usize, index: &TripleIndex) -> Result<SignedEdge, FastError> {
    let anchor = index.anchor();
    let z = q.four_set();
    if z[3].index() >= index.num_taxa() {
        return Err(FastError::UnknownTaxon(z[3]));
    }
    let [[w, x], [y, v]] = q.pairs();
    let partner = if w == anchor {
        x
    } else if x == anchor {
        w
    } else if y == anchor {
        v
    } else if v == anchor {
        y
    } else {
        return Err(FastError::NotAnchored(*q));
    };
    let mut abc = [Taxon(0); 3];
    let mut k = 0;
    for t in z {
        if t != anchor {
            abc[k] = t;
            k += 1;
        }
    }
    let [a, b, c] = abc;
    let (ab, ac, bc) = (index.pair_index(a, b), index.pair_index(a, c), index.pair_index(b, c));
    let (u, v, odd) = if partner == a {
        (ab, ac, false)
    } else if partner == c {
        (ac, bc, false)
    } else {
        (ab, bc, true)
    };
    Ok(SignedEdge { u, v, odd, quartet: pos })
}

pub fn build_signed_graph(quartets: &QuartetSet, index: &TripleIndex) -> Result<SignedGraph, FastError> {
    let edges = quartets
        .iter()
        .enumerate()
        .map(|(pos, q)| signed_edge(q, pos, index))
        .collect::<Result<_, _>>()?;
    Ok(SignedGraph {
        num_vertices: index.len(),
        edges,
    })
}

/// Components of a signed graph with each vertex's parity relative to its
/// component root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    /// Component id per vertex, numbered by first vertex.
    pub component: Vec<usize>,
    pub parity: Vec<bool>,
    pub count: usize,
}

struct ParityUnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Parity of a vertex relative to its parent.
    flip: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            flip: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut root = x;
        let mut total = false;
        while self.parent[root] != root {
            total ^= self.flip[root];
            root = self.parent[root];
        }
        // Point the whole path at the root; `acc` is the parity from x to v.
        let mut v = x;
        let mut acc = false;
        while self.parent[v] != root && v != root {
            let (next, f) = (self.parent[v], self.flip[v]);
            self.parent[v] = root;
            self.flip[v] = total ^ acc;
            acc ^= f;
            v = next;
        }
        (root, total)
    }

    /// Joins with the constraint `parity(u) ^ parity(v) = odd`. Returns
    /// `Some(true)` if merged, `Some(false)` if already consistent, `None` on
    /// conflict.
    fn union(&mut self, u: usize, v: usize, odd: bool) -> Option<bool> {
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        if ru == rv {
            return (pu ^ pv == odd).then_some(false);
        }
        let (hi, lo) = if self.rank[ru] >= self.rank[rv] { (ru, rv) } else { (rv, ru) };
        self.parent[lo] = hi;
        self.flip[lo] = pu ^ pv ^ odd;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        Some(true)
    }
}

/// 2-colours the graph, or returns the input positions of quartets whose
/// edges form a cycle with odd total sign.
pub fn label_components(g: &SignedGraph) -> Result<ComponentLabeling, Vec<usize>> {
    let edges = g.edges.iter().map(|&e| Ok::<_, FastError>(e));
    label_edges(g.num_vertices, edges).expect("edges are already valid")
}

fn label_edges<E>(
    n: usize,
    edges: impl IntoIterator<Item = Result<SignedEdge, E>>,
) -> Result<Result<ComponentLabeling, Vec<usize>>, E> {
    let mut uf = ParityUnionFind::new(n);
    // Spanning forest, kept to recover an odd cycle; entries are
    // (neighbor, quartet position).
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in edges {
        let e = e?;
        match uf.union(e.u, e.v, e.odd) {
            Some(true) => {
                forest[e.u].push((e.v, e.quartet));
                forest[e.v].push((e.u, e.quartet));
            }
            Some(false) => {}
            None => {
                let mut quartets = forest_path(&forest, e.u, e.v);
                quartets.push(e.quartet);
                quartets.sort_unstable();
                quartets.dedup();
                return Ok(Err(quartets));
            }
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut parity = vec![false; n];
    let mut id_of_root = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        let (root, p) = uf.find(v);
        if id_of_root[root] == usize::MAX {
            id_of_root[root] = count;
            count += 1;
        }
        component[v] = id_of_root[root];
        parity[v] = p;
    }
    Ok(Ok(ComponentLabeling { component, parity, count }))
}

/// Labels on the forest path from `from` to `to`.
fn forest_path(forest: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut via = vec![None; forest.len()];
    let mut seen = vec![false; forest.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(y, k) in &forest[x] {
            if !seen[y] {
                seen[y] = true;
                via[y] = Some((x, k));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while let Some((prev, k)) = via[cur] {
        path.push(k);
        cur = prev;
    }
    path
}

/// The split of each component (its taxa), dropping the whole non-anchor
/// side and anything trivial. Every kept split must be an arc of `ordering`.
pub fn splits_from_components(
    labeling: &ComponentLabeling,
    index: &TripleIndex,
    ordering: &CyclicOrdering,
) -> Result<SplitFamily, NotLevel1Like> {
    let n = index.num_taxa();
    let mut sets = vec![BitVec::zeros(n); labeling.count];
    for (coord, &c) in labeling.component.iter().enumerate() {
        let (a, b) = index.pair(coord);
        sets[c].set(a.index(), true);
        sets[c].set(b.index(), true);
    }
    let mut splits = Vec::new();
    for s in sets {
        let k = s.count_ones();
        if k < 2 || n - k < 2 {
            continue;
        }
        if !ordering.is_consecutive(&s) {
            return Err(NotLevel1Like::NotConsecutive(s.iter_ones().map(|i| Taxon(i as u32)).collect()));
        }
        splits.push(s);
    }
    SplitFamily::new(ordering.clone(), &splits).map_err(|e| match e {
        BuildError::NotConsecutive(_) | BuildError::Trivial(_) | BuildError::Crossing(..) => NotLevel1Like::Crossing,
        other => panic!("split family from components: {other}"),
    })
}

/// Reconstructs the network whose anchored quartets are exactly `quartets`.
pub fn fast_reconstruct(
    quartets: &QuartetSet,
    taxa: &TaxonSet,
    anchor: Taxon,
    verify: bool,
) -> Result<Result<NetworkResult, NotLevel1Like>, FastError> {
    let n = taxa.len();
    if n < 4 {
        return Err(FastError::TooFewTaxa(n));
    }
    let index = TripleIndex::new(n, anchor)?;
    let edges = quartets.iter().enumerate().map(|(pos, q)| signed_edge(q, pos, &index));
    let labeling = match label_edges(index.len(), edges)? {
        Ok(l) => l,
        Err(positions) => {
            let qs = positions.iter().map(|&i| quartets.get(i)).collect();
            return Ok(Err(NotLevel1Like::ParityConflict(qs)));
        }
    };
    let u = TripleVector(BitVec::from_bools(&labeling.parity));
    let ordering = match index.decode(&u)? {
        Ok(c) => c,
        Err(w) => return Ok(Err(NotLevel1Like::NonCyclic(w.four_set))),
    };
    let splits = match splits_from_components(&labeling, &index, &ordering) {
        Ok(s) => s,
        Err(e) => return Ok(Err(e)),
    };
    let network = build_network(taxa, &splits).expect("family checked against the same ordering");
    if verify {
        if let Some(mismatch) = compare_anchored(&network, quartets, anchor) {
            return Ok(Err(mismatch));
        }
    }
    let dim_split_space = splits.len() + 1;
    Ok(Ok(NetworkResult {
        network,
        splits,
        ordering,
        dim: labeling.count,
        dim_split_space,
        augmented: Vec::new(),
    }))
}

fn compare_anchored(
    network: &crate::network::Level1Network,
    quartets: &QuartetSet,
    anchor: Taxon,
) -> Option<NotLevel1Like> {
    let oracle = QuartetOracle::new(network);
    if let Some(q) = quartets.iter().find(|q| !oracle.displays(q)) {
        return Some(NotLevel1Like::Mismatch {
            quartet: *q,
            displayed: false,
        });
    }
    // Every input quartet is displayed, so equal counts mean equal sets.
    if quartets.len() as u64 == count_quartets(network, Some(anchor)) {
        return None;
    }
    let mut missing = None;
    crate::quartet::for_each_anchored_four_set(network.num_taxa(), anchor, |z| {
        if missing.is_none() {
            missing = oracle
                .quartets_on(z)
                .as_slice()
                .iter()
                .find(|q| !quartets.contains(q))
                .copied();
        }
    });
    missing.map(|quartet| NotLevel1Like::Mismatch {
        quartet,
        displayed: true,
    })
}
