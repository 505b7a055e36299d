mod common;

use common::*;
use quartetnet::general::build_space;
use quartetnet::network::{quartets_of, random_network, QuartetOracle};
use quartetnet::quartet::is_implied;
use quartetnet::{AffineSpace, BitVec, CyclicOrdering, Outcome, Quartet, QuartetSet, SparseEquation, Taxon, TripleIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

fn to_bools(x: &BitVec) -> Vec<bool> {
    (0..x.len()).map(|i| x.get(i)).collect()
}

#[test]
fn solver_matches_dense_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..400 {
        let m = rng.gen_range(1..=30);
        let k = rng.gen_range(0..=70);
        let system = random_system(&mut rng, m, k);
        let mut space = AffineSpace::full(m);
        for (i, (vars, rhs)) in system.iter().enumerate() {
            let before = space.dim();
            let outcome = space.add_equation(SparseEquation::new(vars.clone(), *rhs).unwrap(), i).unwrap();
            let dense = Dense::new(m, &system[..=i]);
            assert_eq!(space.is_empty(), dense.is_empty());
            assert_eq!(space.dim(), dense.dim());
            let expected = match (before, dense.dim()) {
                (_, None) => Outcome::Empty,
                (Some(b), Some(a)) if a == b => Outcome::Unchanged,
                _ => Outcome::Reduced,
            };
            assert_eq!(outcome, expected);
            if space.is_empty() {
                break;
            }
        }
        match space.certificate() {
            Some(tags) => {
                let sub: Vec<_> = tags.iter().map(|&i| system[i].clone()).collect();
                assert!(Dense::new(m, &sub).is_empty());
            }
            None => {
                let u = space.particular().unwrap();
                assert!(satisfies(&system, &to_bools(u)));
                for v in space.basis().unwrap() {
                    let mut w = u.clone();
                    w.xor_assign(v);
                    assert!(satisfies(&system, &to_bools(&w)));
                }
                for _ in 0..50 {
                    let x: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
                    let bits = BitVec::from_bools(&x);
                    assert_eq!(space.contains(&bits).unwrap(), satisfies(&system, &x));
                }
            }
        }
    }
}

#[test]
fn quartet_oracle_matches_disjoint_paths() {
    for seed in 0..60u64 {
        let n = 4 + (seed % 7) as usize;
        let g = random_network(n, 0.3 + (seed % 5) as f64 * 0.15, seed).unwrap();
        let mut brute = brute_quartets(&g);
        brute.sort();
        let mut fast: Vec<Quartet> = quartets_of(&g, None).iter().copied().collect();
        fast.sort();
        assert_eq!(fast, brute, "seed {seed}");
    }
}

#[test]
fn x_tree_counts() {
    assert_eq!(all_x_trees(3).len(), 1);
    assert_eq!(all_x_trees(4).len(), 4);
    assert_eq!(all_x_trees(5).len(), 26);
    assert_eq!(all_x_trees(6).len(), 236);
}

#[test]
fn enumerated_networks_agree_with_quartet_oracle() {
    for n in 4..=6 {
        for e in all_level1_networks(n) {
            let g = &e.network;
            let oracle = QuartetOracle::new(g);
            for q in all_quartets(n) {
                let [[a, b], [c, d]] = q.pairs();
                assert_eq!(oracle.displays(&q), has_disjoint_paths(g, a, b, c, d));
            }
        }
    }
}

/// Cyclic orders of `0..n` up to rotation and reflection.
fn orderings(n: usize) -> Vec<CyclicOrdering> {
    fn go(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<CyclicOrdering>) {
        if rest.is_empty() {
            if cur.len() < 3 || cur[1] < cur[cur.len() - 1] {
                out.push(CyclicOrdering::new(cur.iter().map(|&t| Taxon(t)).collect()).unwrap());
            }
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n as u32).collect(), &mut vec![0], &mut out);
    out
}

fn crosses(c: &CyclicOrdering, q: &Quartet) -> bool {
    let [[a, b], [x, y]] = q.pairs();
    let (pa, pb) = {
        let (i, j) = (c.position(a), c.position(b));
        (i.min(j), i.max(j))
    };
    let inside = |t: Taxon| (pa..pb).contains(&c.position(t)) && c.position(t) != pa;
    inside(x) != inside(y)
}

#[test]
fn encoding_is_faithful_on_small_taxon_sets() {
    for n in 4..=7 {
        for anchor in [0, n as u32 - 1] {
            let index = TripleIndex::new(n, Taxon(anchor)).unwrap();
            let all = orderings(n);
            let expected: usize = (1..n).product::<usize>() / 2;
            assert_eq!(all.len(), expected);
            let mut seen = HashSet::new();
            for c in &all {
                let u = index.encode(c).unwrap();
                assert!(seen.insert(u.bits().clone()), "encoding not injective");
                assert_eq!(&index.decode(&u).unwrap().unwrap(), c);
                if n <= 6 {
                    for q in all_quartets(n) {
                        let holds = index.quartet_equation(&q).is_satisfied_by(u.bits());
                        assert_eq!(holds, !crosses(c, &q), "{q:?} under {:?}", c.seq());
                    }
                }
            }
        }
    }
}

#[test]
fn dyadic_inference_on_trees() {
    let (a, b, c, d, e) = (Taxon(0), Taxon(1), Taxon(2), Taxon(3), Taxon(4));
    let index = TripleIndex::new(5, a).unwrap();
    let qs: QuartetSet = [Quartet::new([a, b], [c, d]).unwrap(), Quartet::new([a, b], [d, e]).unwrap()]
        .into_iter()
        .collect();
    let space = build_space(&qs, &index).unwrap();
    assert!(is_implied(&space, &index, &Quartet::new([a, b], [c, e]).unwrap()).unwrap());
    assert!(!is_implied(&space, &index, &Quartet::new([a, c], [b, e]).unwrap()).unwrap());
    assert!(!is_implied(&space, &index, &Quartet::new([a, c], [d, e]).unwrap()).unwrap());
}

#[test]
fn displayed_quartets_are_exactly_the_implied_ones() {
    for n in 4..=6 {
        for e in all_level1_networks(n) {
            let g = &e.network;
            let displayed: HashSet<Quartet> = brute_quartets(g).into_iter().collect();
            let qs: QuartetSet = displayed.iter().copied().collect();
            let index = TripleIndex::new(n, Taxon(0)).unwrap();
            let space = build_space(&qs, &index).unwrap();
            for q in all_quartets(n) {
                assert_eq!(is_implied(&space, &index, &q).unwrap(), displayed.contains(&q));
            }
        }
    }
}

#[test]
fn enumeration_includes_cycles() {
    let nets = all_level1_networks(6);
    let with_cycles = nets.iter().filter(|e| !e.network.is_tree()).count();
    let trees = nets.len() - with_cycles;
    // 105 binary trees on six taxa; every other X-tree yields only cyclic networks.
    assert_eq!(trees, 105);
    assert!(with_cycles > 0);
}
