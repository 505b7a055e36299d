//! Coordinates for cyclic orderings relative to an anchor taxon.
//!
//! A cyclic ordering `C` is encoded by the bits `u(x,y,z) = 1` iff `C` induces
//! `[x,y,z]`. Such vectors live in an affine space whose points are determined
//! by the anchored entries `u(∞,a,b)` with `a < b`, so only those
//! `C(n-1, 2)` bits are stored: a [`TripleVector`] indexed by a [`TripleIndex`].
//! Every other entry follows from rotation invariance, `u(x,y,z) + u(y,x,z) = 1`
//! and `u(∞,x,y) + u(∞,x,z) + u(∞,y,z) + u(x,y,z) = 0`.

use crate::bits::BitVec;
use crate::gf2::SparseEquation;
use crate::quartet::Quartet;
use crate::taxa::{Taxon, TaxonSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("taxa in a triple must be distinct")]
    NotDistinct,
    #[error("anchor {anchor} out of range for {n} taxa")]
    BadAnchor { anchor: Taxon, n: usize },
    #[error("sequence is not a permutation of the {0} taxa")]
    NotPermutation(usize),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A 4-set `Z` on which a vector fails to be cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NonCyclicWitness {
    pub four_set: [Taxon; 4],
}

/// Anchored triple bits `u(∞,a,b)`, `a < b`, in [`TripleIndex`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleVector(pub BitVec);

impl TripleVector {
    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A cyclic ordering of all taxa `0..n`, kept as one representative sequence.
/// Equality is up to rotation.
#[derive(Debug, Clone, Eq)]
pub struct CyclicOrdering {
    seq: Vec<Taxon>,
    pos: Vec<u32>,
}

impl PartialEq for CyclicOrdering {
    fn eq(&self, other: &Self) -> bool {
        if self.seq.len() != other.seq.len() {
            return false;
        }
        match self.seq.first() {
            None => true,
            Some(&first) => other.starting_at(first).seq == self.seq,
        }
    }
}

impl CyclicOrdering {
    pub fn new(seq: Vec<Taxon>) -> Result<Self, CyclicError> {
        let n = seq.len();
        let mut pos = vec![u32::MAX; n];
        for (i, t) in seq.iter().enumerate() {
            if t.index() >= n || pos[t.index()] != u32::MAX {
                return Err(CyclicError::NotPermutation(n));
            }
            pos[t.index()] = i as u32;
        }
        Ok(Self { seq, pos })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// The representative sequence; `seq()[0]` is the reference taxon.
    pub fn seq(&self) -> &[Taxon] {
        &self.seq
    }

    #[inline]
    pub fn position(&self, t: Taxon) -> usize {
        self.pos[t.index()] as usize
    }

    /// Position of `t` counted clockwise from `origin`.
    #[inline]
    pub fn offset_from(&self, origin: Taxon, t: Taxon) -> usize {
        let n = self.seq.len();
        (self.position(t) + n - self.position(origin)) % n
    }

    pub fn starting_at(&self, t: Taxon) -> Self {
        let k = self.position(t);
        let seq: Vec<Taxon> = self.seq[k..].iter().chain(&self.seq[..k]).copied().collect();
        Self::new(seq).expect("rotation of a permutation")
    }

    /// The reversed ordering, still starting at the same reference taxon.
    pub fn reversed(&self) -> Self {
        let mut seq = self.seq.clone();
        if seq.len() > 1 {
            seq[1..].reverse();
        }
        Self::new(seq).expect("reversal of a permutation")
    }

    /// Whether `C` induces `[x, y, z]`.
    pub fn induces(&self, x: Taxon, y: Taxon, z: Taxon) -> bool {
        let (oy, oz) = (self.offset_from(x, y), self.offset_from(x, z));
        x != y && y != z && x != z && oy < oz
    }

    /// The members of `subset` in cyclic order starting from the reference taxon.
    pub fn induced(&self, subset: &[Taxon]) -> Vec<Taxon> {
        let mut out = subset.to_vec();
        out.sort_by_key(|&t| self.position(t));
        out
    }

    /// Whether the taxon set `subset` (a bit per taxon) is an arc of `C`.
    pub fn is_consecutive(&self, subset: &BitVec) -> bool {
        let n = self.seq.len();
        let k = subset.count_ones();
        if k == 0 || k == n {
            return true;
        }
        let boundaries = (0..n)
            .filter(|&i| subset.get(self.seq[i].index()) && !subset.get(self.seq[(i + 1) % n].index()))
            .count();
        boundaries == 1
    }

    pub fn display<'a>(&'a self, taxa: &'a TaxonSet) -> impl fmt::Display + 'a {
        struct Shown<'a>(&'a CyclicOrdering, &'a TaxonSet);
        impl fmt::Display for Shown<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("[")?;
                for (i, &t) in self.0.seq.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(self.1.name(t))?;
                }
                f.write_str("]")
            }
        }
        Shown(self, taxa)
    }
}

/// Bijection between anchored pairs `(a, b)`, `a < b`, `a, b ≠ ∞`, and
/// `0..C(n-1, 2)`, lexicographic in the ranks of `a` and `b`.
#[derive(Debug, Clone)]
pub struct TripleIndex {
    n: usize,
    anchor: Taxon,
    /// Rank among non-anchor taxa; `u32::MAX` for the anchor.
    rank: Vec<u32>,
    members: Vec<Taxon>,
    pairs: Vec<(Taxon, Taxon)>,
}

impl TripleIndex {
    pub fn new(n: usize, anchor: Taxon) -> Result<Self, CyclicError> {
        if anchor.index() >= n {
            return Err(CyclicError::BadAnchor { anchor, n });
        }
        let members: Vec<Taxon> = (0..n as u32).map(Taxon).filter(|&t| t != anchor).collect();
        let mut rank = vec![u32::MAX; n];
        for (r, t) in members.iter().enumerate() {
            rank[t.index()] = r as u32;
        }
        let mut pairs = Vec::with_capacity(members.len() * members.len().saturating_sub(1) / 2);
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                pairs.push((a, b));
            }
        }
        Ok(Self {
            n,
            anchor,
            rank,
            members,
            pairs,
        })
    }

    pub fn num_taxa(&self) -> usize {
        self.n
    }

    pub fn anchor(&self) -> Taxon {
        self.anchor
    }

    /// Number of anchored coordinates, `C(n-1, 2)`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Non-anchor taxa in linear order.
    pub fn members(&self) -> &[Taxon] {
        &self.members
    }

    #[inline]
    pub fn pair(&self, index: usize) -> (Taxon, Taxon) {
        self.pairs[index]
    }

    pub fn pairs(&self) -> &[(Taxon, Taxon)] {
        &self.pairs
    }

    /// Index of `(∞, a, b)`; requires `a < b`, both distinct from the anchor.
    #[inline]
    pub fn pair_index(&self, a: Taxon, b: Taxon) -> usize {
        let (i, j) = (self.rank[a.index()] as usize, self.rank[b.index()] as usize);
        debug_assert!(i < j && j < self.members.len());
        let m = self.members.len();
        i * (2 * m - i - 1) / 2 + (j - i - 1)
    }

    /// Coordinate and complement flag of `u(∞, x, y)` for any distinct
    /// non-anchor `x, y`: `u(∞,x,y) = bit ^ flip`.
    #[inline]
    pub fn anchored(&self, x: Taxon, y: Taxon) -> (usize, bool) {
        if self.rank[x.index()] < self.rank[y.index()] {
            (self.pair_index(x, y), false)
        } else {
            (self.pair_index(y, x), true)
        }
    }

    /// The three coordinates of the 4-set `{∞, a, b, c}` with `a < b < c`:
    /// `(a,b), (a,c), (b,c)`.
    pub fn four_set_coords(&self, abc: [Taxon; 3]) -> [usize; 3] {
        let [a, b, c] = abc;
        [self.pair_index(a, b), self.pair_index(a, c), self.pair_index(b, c)]
    }

    fn check(&self, u: &TripleVector) -> Result<(), CyclicError> {
        if u.len() != self.len() {
            return Err(CyclicError::LengthMismatch {
                expected: self.len(),
                got: u.len(),
            });
        }
        Ok(())
    }

    #[inline]
    fn anchored_value(&self, u: &BitVec, x: Taxon, y: Taxon) -> bool {
        let (i, flip) = self.anchored(x, y);
        u.get(i) ^ flip
    }

    /// `u(x, y, z)` of the unique extension of `u`.
    pub fn eval_triple(&self, u: &TripleVector, x: Taxon, y: Taxon, z: Taxon) -> Result<bool, CyclicError> {
        self.check(u)?;
        if x == y || y == z || x == z {
            return Err(CyclicError::NotDistinct);
        }
        Ok(self.eval_unchecked(&u.0, x, y, z))
    }

    fn eval_unchecked(&self, u: &BitVec, x: Taxon, y: Taxon, z: Taxon) -> bool {
        let inf = self.anchor;
        if x == inf {
            self.anchored_value(u, y, z)
        } else if y == inf {
            self.anchored_value(u, z, x)
        } else if z == inf {
            self.anchored_value(u, x, y)
        } else {
            self.anchored_value(u, x, y) ^ self.anchored_value(u, x, z) ^ self.anchored_value(u, y, z)
        }
    }

    /// The anchored bits of `u^C`.
    pub fn encode(&self, c: &CyclicOrdering) -> Result<TripleVector, CyclicError> {
        if c.len() != self.n {
            return Err(CyclicError::NotPermutation(self.n));
        }
        let mut u = BitVec::zeros(self.len());
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            if c.offset_from(self.anchor, a) < c.offset_from(self.anchor, b) {
                u.set(i, true);
            }
        }
        Ok(TripleVector(u))
    }

    /// Recovers `C` with `encode(C) = u` by inserting taxa in linear order, or
    /// returns a 4-set on which `u` is not cyclic.
    pub fn decode(&self, u: &TripleVector) -> Result<Result<CyclicOrdering, NonCyclicWitness>, CyclicError> {
        self.check(u)?;
        let mut seq: Vec<Taxon> = Vec::with_capacity(self.n);
        seq.push(self.anchor);
        for &x in &self.members {
            let placed = &seq[1..];
            let prefix = placed
                .iter()
                .take_while(|&&y| self.anchored_value(&u.0, y, x))
                .count();
            if let Some(&yj) = placed[prefix..].iter().find(|&&y| self.anchored_value(&u.0, y, x)) {
                let yi = placed[prefix];
                let mut four_set = [self.anchor, yi, yj, x];
                four_set.sort();
                return Ok(Err(NonCyclicWitness { four_set }));
            }
            seq.insert(1 + prefix, x);
        }
        Ok(Ok(CyclicOrdering::new(seq).expect("decoded sequence is a permutation")))
    }

    /// Whether the restriction of `u` to the 4-set `z` is cyclic, by the
    /// quadratic condition `u(t,x,y)u(t,y,z) + u(t,x,z)u(x,y,z) = 0` over all
    /// labelings of `z`.
    pub fn is_cyclic_on(&self, u: &TripleVector, z: [Taxon; 4]) -> Result<bool, CyclicError> {
        self.check(u)?;
        let mut sorted = z;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CyclicError::NotDistinct);
        }
        let e = |a: Taxon, b: Taxon, c: Taxon| self.eval_unchecked(&u.0, a, b, c);
        for p in PERMUTATIONS_4 {
            let [t, x, y, w] = p.map(|i| z[i]);
            if (e(t, x, y) & e(t, y, w)) ^ (e(t, x, w) & e(x, y, w)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `v^S` on the anchored coordinates: bit `(a,b)` is set iff at least two
    /// of `∞, a, b` lie in `S`. `subset` has one bit per taxon.
    pub fn split_vector(&self, subset: &BitVec) -> Result<TripleVector, CyclicError> {
        if subset.len() != self.n {
            return Err(CyclicError::LengthMismatch {
                expected: self.n,
                got: subset.len(),
            });
        }
        let inf = subset.get(self.anchor.index()) as u8;
        let mut v = BitVec::zeros(self.len());
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            if inf + subset.get(a.index()) as u8 + subset.get(b.index()) as u8 >= 2 {
                v.set(i, true);
            }
        }
        Ok(TripleVector(v))
    }

    /// The anchored-coordinate form of `u(a,b,c) + u(a,b,d) = 0` for `(ab|cd)`.
    pub fn quartet_equation(&self, q: &Quartet) -> SparseEquation {
        let inf = self.anchor;
        let [[a, b], [c, d]] = q.pairs();
        let oriented = if a == inf {
            Some((b, c, d))
        } else if b == inf {
            Some((a, c, d))
        } else if c == inf {
            Some((d, a, b))
        } else if d == inf {
            Some((c, a, b))
        } else {
            None
        };
        let terms: Vec<(usize, bool)> = match oriented {
            // u(∞,x,y) + u(∞,x,z) = 0
            Some((x, y, z)) => vec![self.anchored(x, y), self.anchored(x, z)],
            // u(∞,a,c) + u(∞,b,c) + u(∞,a,d) + u(∞,b,d) = 0
            None => vec![
                self.anchored(a, c),
                self.anchored(b, c),
                self.anchored(a, d),
                self.anchored(b, d),
            ],
        };
        let rhs = terms.iter().fold(false, |acc, &(_, flip)| acc ^ flip);
        SparseEquation::new(terms.into_iter().map(|(i, _)| i), rhs)
            .expect("quartet equations have at most four variables")
    }
}

/// Cyclic order of `{∞, a, b, c}` from the three anchored bits
/// `(a,b), (a,c), (b,c)` packed into bits 0, 1, 2, or `None` for the two
/// non-cyclic patterns `010` and `101`.
pub fn order_four_set(anchor: Taxon, abc: [Taxon; 3], bits: u64) -> Option<[Taxon; 4]> {
    let (ab, ac, bc) = (bits & 1 == 1, bits >> 1 & 1 == 1, bits >> 2 & 1 == 1);
    if ab == bc && ac != ab {
        return None;
    }
    let [a, b, c] = abc;
    let before = |x: Taxon, y: Taxon| -> bool {
        if x == a && y == b {
            ab
        } else if x == a && y == c {
            ac
        } else if x == b && y == c {
            bc
        } else if x == b && y == a {
            !ab
        } else if x == c && y == a {
            !ac
        } else {
            !bc
        }
    };
    let mut rest = [a, b, c];
    rest.sort_by(|&x, &y| {
        if x == y {
            std::cmp::Ordering::Equal
        } else if before(x, y) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Some([anchor, rest[0], rest[1], rest[2]])
}

pub(crate) const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u32) -> Taxon {
        Taxon(i)
    }

    fn ordering(ids: &[u32]) -> CyclicOrdering {
        CyclicOrdering::new(ids.iter().map(|&i| Taxon(i)).collect()).unwrap()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let idx = TripleIndex::new(5, t(0)).unwrap();
        let order: Vec<usize> = idx.pairs().iter().map(|&(a, b)| idx.pair_index(a, b)).collect();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
        assert_eq!(idx.pair(0), (t(1), t(2)));
        assert_eq!(idx.pair(5), (t(3), t(4)));
    }

    #[test]
    fn anchor_need_not_be_first() {
        let idx = TripleIndex::new(4, t(2)).unwrap();
        assert_eq!(idx.members(), &[t(0), t(1), t(3)]);
        assert_eq!(idx.pairs(), &[(t(0), t(1)), (t(0), t(3)), (t(1), t(3))]);
    }

    #[test]
    fn eval_on_anchored_triples() {
        let idx = TripleIndex::new(4, t(0)).unwrap();
        let u = TripleVector(BitVec::from_bools(&[true, false, true]));
        assert!(idx.eval_triple(&u, t(0), t(1), t(2)).unwrap());
        assert!(!idx.eval_triple(&u, t(0), t(2), t(1)).unwrap());
        assert!(!idx.eval_triple(&u, t(0), t(1), t(3)).unwrap());
        assert!(idx.eval_triple(&u, t(0), t(3), t(1)).unwrap());
        assert_eq!(idx.eval_triple(&u, t(0), t(0), t(1)), Err(CyclicError::NotDistinct));
    }

    #[test]
    fn encode_table_rows() {
        // anchor t = 0; x, y, z = 1, 2, 3
        let idx = TripleIndex::new(4, t(0)).unwrap();
        let enc = |ids: &[u32]| idx.encode(&ordering(ids)).unwrap().0.to_string();
        assert_eq!(enc(&[0, 1, 2, 3]), "111");
        assert_eq!(enc(&[0, 3, 2, 1]), "000");
        assert_eq!(enc(&[0, 1, 3, 2]), "110");
        assert_eq!(enc(&[0, 2, 1, 3]), "011");
        assert_eq!(enc(&[0, 2, 3, 1]), "001");
        assert_eq!(enc(&[0, 3, 1, 2]), "100");
    }

    #[test]
    fn reversal_flips_every_bit() {
        let idx = TripleIndex::new(6, t(2)).unwrap();
        let c = ordering(&[2, 4, 0, 5, 1, 3]);
        let mut u = idx.encode(&c).unwrap().0;
        u.xor_assign(&idx.encode(&c.reversed()).unwrap().0);
        assert_eq!(u, BitVec::ones(idx.len()));
    }

    #[test]
    fn decode_round_trip_and_all_ones() {
        let idx = TripleIndex::new(4, t(0)).unwrap();
        let c = ordering(&[0, 1, 2, 3]);
        let u = idx.encode(&c).unwrap();
        assert_eq!(idx.decode(&u).unwrap().unwrap(), c);
        let ones = TripleVector(BitVec::ones(3));
        assert_eq!(idx.decode(&ones).unwrap().unwrap().seq(), c.seq());
    }

    #[test]
    fn decode_rejects_non_cyclic() {
        let idx = TripleIndex::new(4, t(0)).unwrap();
        for bits in [[false, true, false], [true, false, true]] {
            let u = TripleVector(BitVec::from_bools(&bits));
            let w = idx.decode(&u).unwrap().unwrap_err();
            assert_eq!(w.four_set, [t(0), t(1), t(2), t(3)]);
            assert!(!idx.is_cyclic_on(&u, w.four_set).unwrap());
        }
    }

    #[test]
    fn split_vector_edges() {
        let idx = TripleIndex::new(5, t(0)).unwrap();
        assert!(idx.split_vector(&BitVec::zeros(5)).unwrap().0.is_zero());
        assert_eq!(idx.split_vector(&BitVec::ones(5)).unwrap().0, BitVec::ones(6));
        let s = BitVec::from_indices(5, [1, 3, 4]);
        let v = idx.split_vector(&s).unwrap();
        for (i, &(a, b)) in idx.pairs().iter().enumerate() {
            assert_eq!(v.0.get(i), s.get(a.index()) && s.get(b.index()));
        }
    }

    #[test]
    fn anchored_quartet_equation() {
        let idx = TripleIndex::new(4, t(0)).unwrap();
        let q = Quartet::new([t(0), t(1)], [t(2), t(3)]).unwrap();
        let e = idx.quartet_equation(&q);
        assert_eq!(e.support(), &[idx.pair_index(t(1), t(2)), idx.pair_index(t(1), t(3))]);
        assert!(!e.rhs());
    }

    #[test]
    fn unanchored_quartet_equation_has_four_terms() {
        let idx = TripleIndex::new(5, t(0)).unwrap();
        let q = Quartet::new([t(1), t(2)], [t(3), t(4)]).unwrap();
        assert_eq!(idx.quartet_equation(&q).support().len(), 4);
    }

    #[test]
    fn order_four_set_matches_table() {
        let abc = [t(1), t(2), t(3)];
        let cases = [
            (0b111, [0, 1, 2, 3]),
            (0b011, [0, 1, 3, 2]),
            (0b110, [0, 2, 1, 3]),
            (0b100, [0, 2, 3, 1]),
            (0b001, [0, 3, 1, 2]),
            (0b000, [0, 3, 2, 1]),
        ];
        for (bits, expect) in cases {
            assert_eq!(order_four_set(t(0), abc, bits), Some(expect.map(Taxon)), "{bits:03b}");
        }
        assert_eq!(order_four_set(t(0), abc, 0b010), None);
        assert_eq!(order_four_set(t(0), abc, 0b101), None);
    }

    #[test]
    fn consecutive_subsets() {
        let c = ordering(&[0, 1, 2, 3, 4]);
        assert!(c.is_consecutive(&BitVec::from_indices(5, [4, 0])));
        assert!(c.is_consecutive(&BitVec::from_indices(5, [1, 2, 3])));
        assert!(!c.is_consecutive(&BitVec::from_indices(5, [1, 3])));
    }
}
