//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use quartetnet::{Level1Network, Quartet, Taxon, TaxonSet};
use rand::seq::index::sample;
use rand::Rng;
use std::collections::VecDeque;

/// Linear system over GF(2) solved by textbook dense elimination.
pub struct Dense {
    m: usize,
    words: usize,
    /// Reduced rows, `m` variable bits followed by the right-hand side.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    consistent: bool,
}

impl Dense {
    pub fn new(m: usize, equations: &[(Vec<usize>, bool)]) -> Self {
        let words = (m + 1).div_ceil(64);
        let mut rows: Vec<Vec<u64>> = equations
            .iter()
            .map(|(vars, rhs)| {
                let mut row = vec![0u64; words];
                for &v in vars {
                    row[v / 64] ^= 1 << (v % 64);
                }
                if *rhs {
                    row[m / 64] ^= 1 << (m % 64);
                }
                row
            })
            .collect();
        let bit = |row: &Vec<u64>, i: usize| row[i / 64] >> (i % 64) & 1 == 1;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m {
            let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], col)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && bit(row, col) {
                    for (w, pw) in row.iter_mut().zip(&pivot) {
                        *w ^= pw;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        let consistent = rows[r..].iter().all(|row| !bit(row, m));
        rows.truncate(r);
        Dense {
            m,
            words,
            rows,
            pivots,
            consistent,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.consistent
    }

    pub fn dim(&self) -> Option<usize> {
        self.consistent.then(|| self.m - self.pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Whether `x` satisfies every equation, by direct evaluation.
pub fn satisfies(equations: &[(Vec<usize>, bool)], x: &[bool]) -> bool {
    equations
        .iter()
        .all(|(vars, rhs)| vars.iter().fold(false, |acc, &v| acc ^ x[v]) == *rhs)
}

/// Random system with `k` equations on `m` variables, supports of size 1 to 4.
pub fn random_system(rng: &mut impl Rng, m: usize, k: usize) -> Vec<(Vec<usize>, bool)> {
    (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=4.min(m));
            let vars = sample(rng, m, size).into_vec();
            (vars, rng.gen())
        })
        .collect()
}

/// Whether the network has vertex-disjoint paths a-b and c-d, found by
/// enumerating every simple a-b path.
pub fn has_disjoint_paths(g: &Level1Network, a: Taxon, b: Taxon, c: Taxon, d: Taxon) -> bool {
    let (sa, sb) = (g.leaf_vertex(a), g.leaf_vertex(b));
    let (sc, sd) = (g.leaf_vertex(c), g.leaf_vertex(d));
    let mut on_path = vec![false; g.num_vertices()];
    on_path[sa] = true;
    let mut found = false;
    dfs_paths(g, sa, sb, &mut on_path, &mut |used| {
        if !found && connected_avoiding(g, sc, sd, used) {
            found = true;
        }
    });
    found
}

fn dfs_paths(g: &Level1Network, v: usize, target: usize, on_path: &mut Vec<bool>, f: &mut impl FnMut(&[bool])) {
    if v == target {
        f(on_path);
        return;
    }
    for &w in g.neighbors(v) {
        if !on_path[w] {
            on_path[w] = true;
            dfs_paths(g, w, target, on_path, f);
            on_path[w] = false;
        }
    }
}

fn connected_avoiding(g: &Level1Network, s: usize, t: usize, blocked: &[bool]) -> bool {
    if blocked[s] || blocked[t] {
        return false;
    }
    let mut seen = vec![false; g.num_vertices()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            return true;
        }
        for &w in g.neighbors(v) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Every displayed quartet, by brute force over all 4-sets.
pub fn brute_quartets(g: &Level1Network) -> Vec<Quartet> {
    let n = g.num_taxa() as u32;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let [a, b, c, d] = [a, b, c, d].map(Taxon);
                    for (p, q) in [([a, b], [c, d]), ([a, c], [b, d]), ([a, d], [b, c])] {
                        if has_disjoint_paths(g, p[0], p[1], q[0], q[1]) {
                            out.push(Quartet::new(p, q).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

/// All 3·C(n,4) quartets on `n` taxa.
pub fn all_quartets(n: usize) -> Vec<Quartet> {
    let n = n as u32;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let [a, b, c, d] = [a, b, c, d].map(Taxon);
                    out.extend(Quartet::all_on([a, b, c, d]).unwrap());
                }
            }
        }
    }
    out
}

/// A tree with leaves labelled by taxa and unlabelled internal vertices of
/// degree at least 3.
#[derive(Clone, Debug)]
pub struct XTree {
    pub leaf: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub vertices: usize,
}

impl XTree {
    fn is_leaf(&self, v: usize) -> bool {
        self.leaf.contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Edges joining two internal vertices; each gives a nontrivial split.
    pub fn internal_edges(&self) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| !self.is_leaf(a) && !self.is_leaf(b))
            .count()
    }
}

/// All trees on `n` ≥ 3 labelled leaves with internal degrees at least 3,
/// each exactly once: leaf k is inserted either on an edge or at an
/// internal vertex of a tree on the first k leaves.
pub fn all_x_trees(n: usize) -> Vec<XTree> {
    let star = XTree {
        leaf: vec![0, 1, 2],
        edges: vec![(0, 3), (1, 3), (2, 3)],
        vertices: 4,
    };
    let mut level = vec![star];
    for _ in 3..n {
        let mut next = Vec::new();
        for t in &level {
            for (i, &(a, b)) in t.edges.iter().enumerate() {
                let mut s = t.clone();
                let (w, x) = (s.vertices, s.vertices + 1);
                s.vertices += 2;
                s.edges[i] = (a, w);
                s.edges.push((w, b));
                s.edges.push((w, x));
                s.leaf.push(x);
                next.push(s);
            }
            for v in 0..t.vertices {
                if !t.is_leaf(v) {
                    let mut s = t.clone();
                    let x = s.vertices;
                    s.vertices += 1;
                    s.edges.push((v, x));
                    s.leaf.push(x);
                    next.push(s);
                }
            }
        }
        level = next;
    }
    level
}

/// Cyclic orders of `0..k` up to rotation and reflection.
fn cyclic_orders(k: usize) -> Vec<Vec<usize>> {
    fn permute(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            if cur[1] < cur[cur.len() - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            permute(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    permute(&mut (1..k).collect(), &mut vec![0], &mut out);
    out
}

/// A level-1 network together with its number of nontrivial splits.
pub struct Enumerated {
    pub network: Level1Network,
    pub splits: usize,
}

/// Every binary level-1 network on `n` taxa without triangles: an X-tree
/// whose internal vertices of degree k ≥ 4 are each replaced by a k-cycle
/// in one of the possible neighbor orders.
pub fn all_level1_networks(n: usize) -> Vec<Enumerated> {
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let taxa = TaxonSet::from_names(&names).unwrap();
    let mut out = Vec::new();
    for tree in all_x_trees(n) {
        let hubs: Vec<usize> = (0..tree.vertices)
            .filter(|&v| !tree.is_leaf(v) && tree.neighbors(v).len() >= 4)
            .collect();
        let choices: Vec<Vec<Vec<usize>>> = hubs.iter().map(|&v| cyclic_orders(tree.neighbors(v).len())).collect();
        let mut pick = vec![0usize; hubs.len()];
        loop {
            out.push(Enumerated {
                network: expand(&tree, &hubs, &choices, &pick, &taxa, &names),
                splits: tree.internal_edges(),
            });
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    out
}

fn expand(
    tree: &XTree,
    hubs: &[usize],
    choices: &[Vec<Vec<usize>>],
    pick: &[usize],
    taxa: &TaxonSet,
    names: &[String],
) -> Level1Network {
    let mut vertex_names = Vec::new();
    let mut id = vec![usize::MAX; tree.vertices];
    for v in (0..tree.vertices).filter(|v| !hubs.contains(v)) {
        id[v] = vertex_names.len();
        vertex_names.push(match tree.leaf.iter().position(|&l| l == v) {
            Some(t) => names[t].clone(),
            None => format!("_x{v}"),
        });
    }
    // For a hub, the cycle vertex that takes over each incident tree edge.
    let mut port = std::collections::HashMap::new();
    let mut edges = Vec::new();
    for (h, &v) in hubs.iter().enumerate() {
        let nbrs = tree.neighbors(v);
        let order = &choices[h][pick[h]];
        let ring: Vec<usize> = order
            .iter()
            .map(|_| {
                vertex_names.push(format!("_c{}", vertex_names.len()));
                vertex_names.len() - 1
            })
            .collect();
        for (i, &slot) in order.iter().enumerate() {
            port.insert((v, nbrs[slot]), ring[i]);
            edges.push((ring[i], ring[(i + 1) % ring.len()]));
        }
    }
    for &(a, b) in &tree.edges {
        let ea = port.get(&(a, b)).copied().unwrap_or(id[a]);
        let eb = port.get(&(b, a)).copied().unwrap_or(id[b]);
        edges.push((ea, eb));
    }
    Level1Network::from_edges(taxa.clone(), vertex_names, &edges).expect("expanded tree is level-1")
}
