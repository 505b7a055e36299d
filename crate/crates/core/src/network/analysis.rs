//! Splits, displayed quartets and a cyclic ordering of a network.

use super::Level1Network;
use crate::bits::BitVec;
use crate::cyclic::CyclicOrdering;
use crate::quartet::{for_each_anchored_four_set, for_each_four_set, Quartet, QuartetSet};
use crate::taxa::Taxon;
use std::collections::VecDeque;

/// Nontrivial splits (both sides at least two taxa), closed under complement,
/// as sorted taxon bit sets.
pub fn splits_of(g: &Level1Network) -> Vec<BitVec> {
    let n = g.num_taxa();
    let s = g.structure();
    let mut out: Vec<BitVec> = Vec::new();
    for (u, v) in s.bridges() {
        let side = leaves_beyond(g, u, v);
        let k = side.count_ones();
        if k >= 2 && n - k >= 2 {
            out.push(side.complement());
            out.push(side);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Taxa reachable from `v` without using the edge to `u`.
fn leaves_beyond(g: &Level1Network, u: usize, v: usize) -> BitVec {
    let mut side = BitVec::zeros(g.num_taxa());
    let mut seen = vec![false; g.num_vertices()];
    seen[u] = true;
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        if let Some(t) = g.taxon_at(x) {
            side.set(t.index(), true);
        }
        for &w in g.neighbors(x) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    side
}

/// A cyclic ordering of the taxa in which every cycle and every split of `g`
/// is drawn without crossings. Traversal starts at the first taxon; tree
/// vertices visit neighbors by ascending vertex id and each cycle is walked
/// starting toward its lower-id neighbor of the entry vertex.
pub fn canonical_ordering(g: &Level1Network) -> CyclicOrdering {
    let s = g.structure();
    let root = g.leaf_vertex(Taxon(0));
    let mut seq = vec![Taxon(0)];
    let mut stack: Vec<(usize, usize)> = g.neighbors(root).iter().map(|&w| (w, root)).collect();
    while let Some((v, from)) = stack.pop() {
        if let Some(t) = g.taxon_at(v) {
            seq.push(t);
            continue;
        }
        let mut next: Vec<(usize, usize)> = Vec::new();
        match s.cycle_of[v] {
            None => next.extend(g.neighbors(v).iter().filter(|&&w| w != from).map(|&w| (w, v))),
            Some(c) => {
                let cycle = &s.cycles[c];
                let k = cycle.len();
                let at = cycle.iter().position(|&x| x == v).expect("vertex on its cycle");
                let (fwd, back) = (cycle[(at + 1) % k], cycle[(at + k - 1) % k]);
                let step = |i: usize| if fwd < back { (at + i) % k } else { (at + k - i) % k };
                for i in 1..k {
                    let x = cycle[step(i)];
                    let out = g
                        .neighbors(x)
                        .iter()
                        .copied()
                        .find(|&w| s.cycle_of[w] != Some(c))
                        .expect("cycle vertex has a bridge");
                    next.push((out, x));
                }
            }
        }
        stack.extend(next.into_iter().rev());
    }
    CyclicOrdering::new(seq).expect("traversal visits every leaf once")
}

/// The quartets a network displays on one 4-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuartetsOnSet {
    /// The induced subnetwork is a quartet tree.
    One(Quartet),
    /// The induced subnetwork is a 4-cycle; both quartets are displayed.
    Two([Quartet; 2]),
}

impl QuartetsOnSet {
    pub fn as_slice(&self) -> &[Quartet] {
        match self {
            Self::One(q) => std::slice::from_ref(q),
            Self::Two(qs) => qs,
        }
    }
}

/// Constant-time-per-4-set displayed-quartet queries, after quadratic
/// preprocessing.
///
/// Contracting each cycle of a level-1 network to a point leaves a tree whose
/// edges are the bridges. Four leaves induce a quartet tree exactly when the
/// four-point sums on that tree have a unique minimum; otherwise their paths
/// meet at one contracted cycle and the order of their attachment points
/// around it gives the two displayed quartets.
#[derive(Debug, Clone)]
pub struct QuartetOracle {
    n: usize,
    /// Leaf-to-leaf distances in the contracted tree, row-major.
    dist: Vec<u32>,
    leaf_node: Vec<usize>,
    depth: Vec<u32>,
    /// `up[j][x]` is the `2^j`-th ancestor of `x` (the root maps to itself).
    up: Vec<Vec<usize>>,
    /// For a non-root node, the vertex of its parent block its bridge meets.
    parent_attach: Vec<usize>,
    /// For a cycle node, the cycle vertex on the bridge toward the root.
    top: Vec<usize>,
    num_cycles: usize,
    cycle_pos: Vec<usize>,
    /// Contracted-tree LCA of each pair of leaves, row-major.
    pair_lca: Vec<u32>,
    /// Position on cycle `c` of the vertex through which leaf `t` is
    /// reached, at `c * n + t`.
    attach_pos: Vec<u32>,
}

impl QuartetOracle {
    pub fn new(g: &Level1Network) -> Self {
        let s = g.structure();
        let nv = g.num_vertices();
        let num_cycles = s.cycles.len();
        // Cycles are nodes 0..num_cycles; other vertices follow.
        let mut node_of = vec![usize::MAX; nv];
        let mut cycle_pos = vec![usize::MAX; nv];
        for (c, cycle) in s.cycles.iter().enumerate() {
            for (i, &v) in cycle.iter().enumerate() {
                node_of[v] = c;
                cycle_pos[v] = i;
            }
        }
        let mut count = num_cycles;
        for slot in node_of.iter_mut().filter(|x| **x == usize::MAX) {
            *slot = count;
            count += 1;
        }
        // Tree edges with the endpoint vertices that realize them.
        let mut tree: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); count];
        for (u, v) in s.bridges() {
            tree[node_of[u]].push((node_of[v], u, v));
            tree[node_of[v]].push((node_of[u], v, u));
        }

        let n = g.num_taxa();
        let leaf_node: Vec<usize> = (0..n).map(|t| node_of[g.leaf_vertex(Taxon(t as u32))]).collect();
        let root = leaf_node[0];
        let mut depth = vec![0u32; count];
        let mut parent = vec![root; count];
        let mut parent_attach = vec![usize::MAX; count];
        let mut top = vec![usize::MAX; num_cycles];
        let mut seen = vec![false; count];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, here, there) in &tree[x] {
                if !seen[y] {
                    seen[y] = true;
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    parent_attach[y] = here;
                    if y < num_cycles {
                        top[y] = there;
                    }
                    queue.push_back(y);
                }
            }
        }
        let levels = (usize::BITS - count.leading_zeros()).max(1) as usize;
        let mut up = vec![parent];
        for j in 1..levels {
            let prev = &up[j - 1];
            let next: Vec<usize> = (0..count).map(|x| prev[prev[x]]).collect();
            up.push(next);
        }

        let mut dist = vec![0u32; n * n];
        let mut d = vec![u32::MAX; count];
        for a in 0..n {
            d.fill(u32::MAX);
            d[leaf_node[a]] = 0;
            let mut queue = VecDeque::from([leaf_node[a]]);
            while let Some(x) = queue.pop_front() {
                for &(y, _, _) in &tree[x] {
                    if d[y] == u32::MAX {
                        d[y] = d[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            for b in 0..n {
                dist[a * n + b] = d[leaf_node[b]];
            }
        }

        let mut oracle = Self {
            n,
            dist,
            leaf_node,
            depth,
            up,
            parent_attach,
            top,
            num_cycles,
            cycle_pos,
            pair_lca: Vec::new(),
            attach_pos: Vec::new(),
        };
        let mut pair_lca = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let x = oracle.lca(oracle.leaf_node[a], oracle.leaf_node[b]) as u32;
                pair_lca[a * n + b] = x;
                pair_lca[b * n + a] = x;
            }
        }
        let mut attach_pos = vec![0u32; num_cycles * n];
        for c in 0..num_cycles {
            for t in 0..n {
                attach_pos[c * n + t] = oracle.cycle_pos[oracle.attachment(c, Taxon(t as u32))] as u32;
            }
        }
        oracle.pair_lca = pair_lca;
        oracle.attach_pos = attach_pos;
        oracle
    }

    pub fn num_taxa(&self) -> usize {
        self.n
    }

    #[inline]
    fn d(&self, a: Taxon, b: Taxon) -> u32 {
        self.dist[a.index() * self.n + b.index()]
    }

    fn ancestor_at(&self, mut x: usize, depth: u32) -> usize {
        let mut climb = self.depth[x] - depth;
        let mut j = 0;
        while climb > 0 {
            if climb & 1 == 1 {
                x = self.up[j][x];
            }
            climb >>= 1;
            j += 1;
        }
        x
    }

    fn lca(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = if self.depth[a] >= self.depth[b] { (a, b) } else { (b, a) };
        a = self.ancestor_at(a, self.depth[b]);
        if a == b {
            return a;
        }
        for j in (0..self.up.len()).rev() {
            if self.up[j][a] != self.up[j][b] {
                a = self.up[j][a];
                b = self.up[j][b];
            }
        }
        self.up[0][a]
    }

    /// The vertex of cycle node `c` through which leaf `z` is reached.
    fn attachment(&self, c: usize, z: Taxon) -> usize {
        let x = self.leaf_node[z.index()];
        if self.depth[x] > self.depth[c] && self.ancestor_at(x, self.depth[c]) == c {
            self.parent_attach[self.ancestor_at(x, self.depth[c] + 1)]
        } else {
            self.top[c]
        }
    }

    /// Displayed quartets on four distinct taxa.
    pub fn quartets_on(&self, z: [Taxon; 4]) -> QuartetsOnSet {
        let [a, b, c, d] = z;
        let sums = [
            self.d(a, b) + self.d(c, d),
            self.d(a, c) + self.d(b, d),
            self.d(a, d) + self.d(b, c),
        ];
        let pairings = [([a, b], [c, d]), ([a, c], [b, d]), ([a, d], [b, c])];
        let min = *sums.iter().min().expect("three sums");
        if sums.iter().filter(|&&s| s == min).count() == 1 {
            let (p, q) = pairings[sums.iter().position(|&s| s == min).expect("minimum exists")];
            return QuartetsOnSet::One(Quartet::new(p, q).expect("distinct taxa"));
        }
        let lca = |x: Taxon, y: Taxon| self.pair_lca[x.index() * self.n + y.index()] as usize;
        let center = [lca(a, b), lca(a, c), lca(b, c)]
            .into_iter()
            .max_by_key(|&x| self.depth[x])
            .expect("three candidates");
        debug_assert!(center < self.num_cycles, "four paths can only meet on a cycle");
        let mut around = z;
        around.sort_by_key(|&t| self.attach_pos[center * self.n + t.index()]);
        let [w, x, y, v] = around;
        let mut two = [
            Quartet::new([w, x], [y, v]).expect("distinct taxa"),
            Quartet::new([w, v], [x, y]).expect("distinct taxa"),
        ];
        two.sort();
        QuartetsOnSet::Two(two)
    }

    pub fn displays(&self, q: &Quartet) -> bool {
        self.quartets_on(q.four_set()).as_slice().contains(q)
    }
}

/// Number of displayed quartets, or of those containing `anchor`, without
/// listing them. Every 4-set carries one quartet, plus a second when its
/// taxa hang off four different vertices of one cycle.
pub fn count_quartets(g: &Level1Network, anchor: Option<Taxon>) -> u64 {
    let n = g.num_taxa();
    if n < 4 {
        return 0;
    }
    let s = g.structure();
    // Any spanning tree contains every bridge, and the subtree below a
    // bridge is the far side of it. Rooting at the anchor puts the anchor on
    // the side of each cycle's topmost attachment.
    let root = g.leaf_vertex(anchor.unwrap_or(Taxon(0)));
    let nv = g.num_vertices();
    let mut parent = vec![usize::MAX; nv];
    parent[root] = root;
    let mut order = Vec::with_capacity(nv);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut below = vec![0u64; nv];
    for &v in order.iter().rev() {
        below[v] += g.taxon_at(v).is_some() as u64;
        if v != root {
            below[parent[v]] += below[v];
        }
    }
    let binom = |k: u64, r: u64| (0..r).fold(1u64, |acc, i| acc * (k - i) / (i + 1));
    let n = n as u64;
    let mut total = match anchor {
        Some(_) => binom(n - 1, 3),
        None => binom(n, 4),
    };
    for (c, cycle) in s.cycles.iter().enumerate() {
        // Elementary symmetric sums e_0..e_4 of the part sizes, leaving out
        // the anchor's part when counting anchored 4-sets.
        let mut e = [1u64, 0, 0, 0, 0];
        for &v in cycle {
            let w = *g
                .neighbors(v)
                .iter()
                .find(|&&w| s.cycle_of[w] != Some(c))
                .expect("every cycle vertex has one edge off the cycle");
            let (part, holds_root) = if parent[w] == v {
                (below[w], false)
            } else {
                (n - below[v], true)
            };
            if anchor.is_some() && holds_root {
                continue;
            }
            for k in (1..5).rev() {
                e[k] += e[k - 1] * part;
            }
        }
        total += if anchor.is_some() { e[3] } else { e[4] };
    }
    total
}

/// All displayed quartets, or only those whose 4-set contains `anchor`,
/// ordered by 4-set.
pub fn quartets_of(g: &Level1Network, anchor: Option<Taxon>) -> QuartetSet {
    if g.num_taxa() < 4 {
        return QuartetSet::new();
    }
    let mut out = QuartetSet::with_capacity(count_quartets(g, anchor) as usize);
    let oracle = QuartetOracle::new(g);
    let mut emit = |z: [Taxon; 4]| {
        for &q in oracle.quartets_on(z).as_slice() {
            out.push(q);
        }
    };
    match anchor {
        Some(a) => for_each_anchored_four_set(g.num_taxa(), a, &mut emit),
        None => for_each_four_set(g.num_taxa(), &mut emit),
    }
    out
}

/// Whether two networks on the same taxon names are equal up to relabeling of
/// internal vertices (and contraction of triangles, which display nothing a
/// tree vertex does not). Compares splits and the quartets through the first
/// taxon of `g`, which together determine a level-1 network.
pub fn networks_equal(g: &Level1Network, h: &Level1Network) -> bool {
    let n = g.num_taxa();
    if h.num_taxa() != n {
        return false;
    }
    let mut to_g = vec![Taxon(0); n];
    for t in h.taxa().iter() {
        match g.taxa().get(h.taxa().name(t)) {
            Some(x) => to_g[t.index()] = x,
            None => return false,
        }
    }
    let remap_set = |s: &BitVec| BitVec::from_indices(n, s.iter_ones().map(|i| to_g[i].index()));
    let mut hs: Vec<BitVec> = splits_of(h).iter().map(remap_set).collect();
    hs.sort();
    if splits_of(g) != hs {
        return false;
    }
    if n < 4 {
        return true;
    }
    let mut to_h = vec![Taxon(0); n];
    for (i, x) in to_g.iter().enumerate() {
        to_h[x.index()] = Taxon(i as u32);
    }
    let (og, oh) = (QuartetOracle::new(g), QuartetOracle::new(h));
    let back = |q: &Quartet| {
        let [[a, b], [c, d]] = q.pairs();
        Quartet::new([to_g[a.index()], to_g[b.index()]], [to_g[c.index()], to_g[d.index()]]).expect("bijection")
    };
    let mut same = true;
    for_each_anchored_four_set(n, Taxon(0), |z| {
        if !same {
            return;
        }
        let mut zh = z.map(|t| to_h[t.index()]);
        zh.sort();
        let mut theirs: Vec<Quartet> = oh.quartets_on(zh).as_slice().iter().map(back).collect();
        theirs.sort();
        same = og.quartets_on(z).as_slice() == theirs.as_slice();
    });
    same
}
