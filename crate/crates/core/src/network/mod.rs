//! Unrooted binary level-1 networks.
//!
//! Vertices are numbered `0..num_vertices()`, every vertex has a name, and the
//! leaves are exactly the vertices named after a taxon. A network value always
//! satisfies [`Level1Network::validate`]; the constructors refuse anything else.

mod analysis;
mod build;
mod io;

pub use analysis::{canonical_ordering, count_quartets, networks_equal, quartets_of, splits_of, QuartetOracle, QuartetsOnSet};
pub use build::{build_network, random_network, BuildError, SplitFamily};
pub use io::{parse_network, write_dot, write_network, NetworkFileError, NetworkParseError};

use crate::taxa::{Taxon, TaxonSet};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("network has no taxa")]
    NoTaxa,
    #[error("vertex name {0:?} is used twice")]
    DuplicateVertex(String),
    #[error("taxon {0:?} has no vertex")]
    MissingTaxon(String),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("more than one edge between {0:?} and {1:?}")]
    ParallelEdge(String, String),
    #[error("taxon {0:?} has degree {1}, leaves need degree 1")]
    TaxonNotLeaf(String, usize),
    #[error("vertex {0:?} has degree {1}, internal vertices need degree 3")]
    BadDegree(String, usize),
    #[error("vertex {0:?} is not connected to {1:?}")]
    Disconnected(String, String),
    #[error("edges around {0:?} lie on more than one cycle")]
    NotLevel1(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Level1Network {
    taxa: TaxonSet,
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
    leaf: Vec<usize>,
    taxon_at: Vec<Option<Taxon>>,
}

/// Bridges and cycles of a network.
#[derive(Debug, Clone)]
pub struct Structure {
    /// Each cycle as its vertices in cyclic order.
    pub cycles: Vec<Vec<usize>>,
    /// Cycle containing each vertex, if any. Cycles are vertex-disjoint in a
    /// binary level-1 network.
    pub cycle_of: Vec<Option<usize>>,
    bridges: HashSet<(usize, usize)>,
}

impl Structure {
    pub fn is_bridge(&self, u: usize, v: usize) -> bool {
        self.bridges.contains(&(u.min(v), u.max(v)))
    }

    pub fn bridges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bridges.iter().copied()
    }
}

impl Level1Network {
    /// Builds and validates a network from named vertices and edges given as
    /// vertex positions. Taxa with no listed vertex are an error.
    pub fn from_edges(taxa: TaxonSet, names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, Violation> {
        let mut adj = vec![Vec::new(); names.len()];
        for &(u, v) in edges {
            adj[u].push(v);
            if u != v {
                adj[v].push(u);
            }
        }
        Self::from_adjacency(taxa, names, adj)
    }

    pub(crate) fn from_adjacency(taxa: TaxonSet, names: Vec<String>, mut adj: Vec<Vec<usize>>) -> Result<Self, Violation> {
        let mut by_name = HashMap::with_capacity(names.len());
        for (v, name) in names.iter().enumerate() {
            if by_name.insert(name.as_str(), v).is_some() {
                return Err(Violation::DuplicateVertex(name.clone()));
            }
        }
        let mut leaf = Vec::with_capacity(taxa.len());
        let mut taxon_at = vec![None; names.len()];
        for t in taxa.iter() {
            let Some(&v) = by_name.get(taxa.name(t)) else {
                return Err(Violation::MissingTaxon(taxa.name(t).to_string()));
            };
            leaf.push(v);
            taxon_at[v] = Some(t);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let net = Self {
            taxa,
            names,
            adj,
            leaf,
            taxon_at,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn num_taxa(&self) -> usize {
        self.taxa.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn leaf_vertex(&self, t: Taxon) -> usize {
        self.leaf[t.index()]
    }

    pub fn taxon_at(&self, v: usize) -> Option<Taxon> {
        self.taxon_at[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Checks every structural requirement of a binary level-1 network.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.taxa.is_empty() {
            return Err(Violation::NoTaxa);
        }
        let single = self.taxa.len() == 1;
        for (v, list) in self.adj.iter().enumerate() {
            if list.contains(&v) {
                return Err(Violation::SelfLoop(self.names[v].clone()));
            }
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Violation::ParallelEdge(self.names[v].clone(), self.names[w[0]].clone()));
            }
            let want = match self.taxon_at[v] {
                Some(_) if single => 0,
                Some(_) => 1,
                None => 3,
            };
            if list.len() != want {
                return Err(match self.taxon_at[v] {
                    Some(_) => Violation::TaxonNotLeaf(self.names[v].clone(), list.len()),
                    None => Violation::BadDegree(self.names[v].clone(), list.len()),
                });
            }
        }
        let seen = self.reachable_from(self.leaf[0]);
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Violation::Disconnected(self.names[v].clone(), self.names[self.leaf[0]].clone()));
        }
        self.structure_checked().map(|_| ())
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Bridges and cycles.
    pub fn structure(&self) -> Structure {
        self.structure_checked().expect("validated network")
    }

    fn structure_checked(&self) -> Result<Structure, Violation> {
        let bridges = self.find_bridges();
        let n = self.names.len();
        let mut cycle_of = vec![None; n];
        let mut cycles = Vec::new();
        let non_bridge = |u: usize| -> Vec<usize> {
            self.adj[u]
                .iter()
                .copied()
                .filter(|&w| !bridges.contains(&(u.min(w), u.max(w))))
                .collect()
        };
        for start in 0..n {
            if cycle_of[start].is_some() || non_bridge(start).is_empty() {
                continue;
            }
            // Walk the 2-edge-connected block of `start`; it must be a simple cycle.
            let id = cycles.len();
            let mut cycle = vec![start];
            cycle_of[start] = Some(id);
            let mut prev = start;
            let mut cur = non_bridge(start)[0];
            let mut bad = false;
            while cur != start {
                let next = non_bridge(cur);
                if next.len() != 2 || cycle_of[cur].is_some() {
                    bad = true;
                    break;
                }
                cycle_of[cur] = Some(id);
                cycle.push(cur);
                let step = if next[0] == prev { next[1] } else { next[0] };
                prev = cur;
                cur = step;
            }
            if bad || non_bridge(start).len() != 2 {
                let names = cycle.iter().map(|&v| self.names[v].clone()).collect();
                return Err(Violation::NotLevel1(names));
            }
            cycles.push(cycle);
        }
        Ok(Structure {
            cycles,
            cycle_of,
            bridges,
        })
    }

    /// Tarjan's bridge finding, iterative.
    fn find_bridges(&self) -> HashSet<(usize, usize)> {
        let n = self.names.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut bridges = HashSet::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbor slot)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (v, parent, ref mut slot)) = stack.last_mut() {
                if *slot < self.adj[v].len() {
                    let w = self.adj[v][*slot];
                    *slot += 1;
                    if w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, v, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > disc[parent] {
                            bridges.insert((v.min(parent), v.max(parent)));
                        }
                    }
                }
            }
        }
        bridges
    }

    /// Whether the network has no cycles.
    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.num_vertices()
    }
}
