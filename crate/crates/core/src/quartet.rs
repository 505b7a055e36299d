//! Quartets, quartet sets, and the line-oriented quartet file format.
//!
//! Each data line is `A B | C D`; `#` starts a comment and blank lines are
//! skipped. Taxa are collected in order of first appearance.

use crate::cyclic::TripleIndex;
use crate::gf2::{AffineSpace, SolverError};
use crate::taxa::{Taxon, TaxonError, TaxonSet};
use rustc_hash::FxHashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuartetError {
    #[error("quartet repeats a taxon")]
    RepeatedTaxon,
}

/// An unordered pair of unordered pairs `(ab|cd)` on four distinct taxa.
///
/// Stored canonically: each pair sorted, pairs ordered by first element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quartet([[Taxon; 2]; 2]);

impl Quartet {
    pub fn new(p: [Taxon; 2], q: [Taxon; 2]) -> Result<Self, QuartetError> {
        let mut all = [p[0], p[1], q[0], q[1]];
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(QuartetError::RepeatedTaxon);
        }
        let sort2 = |[a, b]: [Taxon; 2]| if a < b { [a, b] } else { [b, a] };
        let (p, q) = (sort2(p), sort2(q));
        Ok(if p[0] < q[0] { Self([p, q]) } else { Self([q, p]) })
    }

    /// `(ab|cd)` for a 4-set met in the cyclic order `[a, b, c, d]`.
    pub fn from_cyclic([a, b, c, d]: [Taxon; 4]) -> Result<Self, QuartetError> {
        Self::new([a, b], [c, d])
    }

    /// The three quartets on a 4-set.
    pub fn all_on(four_set: [Taxon; 4]) -> Result<[Quartet; 3], QuartetError> {
        let [w, x, y, z] = four_set;
        Ok([
            Self::new([w, x], [y, z])?,
            Self::new([w, y], [x, z])?,
            Self::new([w, z], [x, y])?,
        ])
    }

    pub fn pairs(&self) -> [[Taxon; 2]; 2] {
        self.0
    }

    /// The underlying 4-set, sorted.
    pub fn four_set(&self) -> [Taxon; 4] {
        let [[a, b], [c, d]] = self.0;
        let mut s = [a, b, c, d];
        s.sort();
        s
    }

    pub fn contains(&self, t: Taxon) -> bool {
        self.0.iter().flatten().any(|&x| x == t)
    }

    pub fn format(&self, taxa: &TaxonSet) -> String {
        let [[a, b], [c, d]] = self.0;
        format!(
            "{} {} | {} {}",
            taxa.name(a),
            taxa.name(b),
            taxa.name(c),
            taxa.name(d)
        )
    }

    /// Like [`Quartet::format`], with names rather than indices deciding the
    /// order inside and between the pairs.
    pub fn format_by_name(&self, taxa: &TaxonSet) -> String {
        let mut pairs = self.0.map(|p| {
            let mut p = p.map(|t| taxa.name(t));
            p.sort();
            p
        });
        pairs.sort();
        let [[a, b], [c, d]] = pairs;
        format!("{a} {b} | {c} {d}")
    }
}

/// Quartets as lines ordered by name, independent of taxon numbering.
pub fn write_quartets_by_name(quartets: &QuartetSet, taxa: &TaxonSet) -> String {
    let mut lines: Vec<String> = quartets.iter().map(|q| q.format_by_name(taxa)).collect();
    lines.sort();
    lines.into_iter().map(|l| l + "\n").collect()
}

/// Positions of the (at most three) quartets on one 4-set.
#[derive(Debug, Clone, Copy, Default)]
struct Slots {
    pos: [u32; 3],
    len: u32,
}

impl Slots {
    fn as_slice(&self) -> &[u32] {
        &self.pos[..self.len as usize]
    }
}

/// Distinct quartets in insertion order, indexed by underlying 4-set.
#[derive(Debug, Clone, Default)]
pub struct QuartetSet {
    quartets: Vec<Quartet>,
    by_four_set: FxHashMap<[Taxon; 4], Slots>,
    duplicates: usize,
}

impl PartialEq for QuartetSet {
    fn eq(&self, other: &Self) -> bool {
        self.quartets == other.quartets
    }
}

impl FromIterator<Quartet> for QuartetSet {
    fn from_iter<I: IntoIterator<Item = Quartet>>(iter: I) -> Self {
        let mut set = Self::new();
        for q in iter {
            set.push(q);
        }
        set
    }
}

impl QuartetSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty set with room for `quartets` quartets on about as many 4-sets.
    pub fn with_capacity(quartets: usize) -> Self {
        Self {
            quartets: Vec::with_capacity(quartets),
            by_four_set: FxHashMap::with_capacity_and_hasher(quartets, Default::default()),
            duplicates: 0,
        }
    }

    /// Appends `q` unless already present. Returns whether it was new.
    pub fn push(&mut self, q: Quartet) -> bool {
        let slots = self.by_four_set.entry(q.four_set()).or_default();
        if slots.as_slice().iter().any(|&i| self.quartets[i as usize] == q) {
            self.duplicates += 1;
            return false;
        }
        slots.pos[slots.len as usize] = u32::try_from(self.quartets.len()).expect("fewer than 2^32 quartets");
        slots.len += 1;
        self.quartets.push(q);
        true
    }

    pub fn len(&self) -> usize {
        self.quartets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quartets.is_empty()
    }

    pub fn get(&self, position: usize) -> Quartet {
        self.quartets[position]
    }

    pub fn as_slice(&self) -> &[Quartet] {
        &self.quartets
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quartet> + '_ {
        self.quartets.iter()
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.on_four_set(&q.four_set()).iter().any(|&i| self.quartets[i as usize] == *q)
    }

    /// Number of dropped repeats of already present quartets.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    /// Positions of the quartets whose underlying set is `four_set` (sorted).
    pub fn on_four_set(&self, four_set: &[Taxon; 4]) -> &[u32] {
        self.by_four_set.get(four_set).map(Slots::as_slice).unwrap_or(&[])
    }

    pub fn is_anchored_at(&self, anchor: Taxon) -> bool {
        self.quartets.iter().all(|q| q.contains(anchor))
    }

    /// The same quartets in canonical sorted order.
    pub fn sorted(&self) -> Self {
        let mut qs = self.quartets.clone();
        qs.sort_by_key(|q| (q.four_set(), *q));
        qs.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `A B | C D`")]
    Malformed,
    #[error("quartet repeats a taxon")]
    RepeatedTaxon,
    #[error(transparent)]
    Taxon(#[from] TaxonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// A parsed quartet file.
#[derive(Debug, Clone)]
pub struct QuartetFile {
    pub quartets: QuartetSet,
    pub taxa: TaxonSet,
}

impl QuartetFile {
    /// Fewer than four taxa: nothing to reconstruct.
    pub fn is_trivial(&self) -> bool {
        self.taxa.len() < 4
    }
}

pub fn parse_quartets(text: &str) -> Result<QuartetFile, ParseError> {
    let mut taxa = TaxonSet::new();
    let quartets = parse_quartets_with(text, &mut taxa, true)?;
    Ok(QuartetFile { quartets, taxa })
}

/// Parses against an existing taxon set. With `allow_new`, unseen labels are
/// appended to `taxa`; otherwise they are an error.
pub fn parse_quartets_with(text: &str, taxa: &mut TaxonSet, allow_new: bool) -> Result<QuartetSet, ParseError> {
    let mut set = QuartetSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |kind: ParseErrorKind| ParseError { line, kind };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let q = parse_quartet_line(content, taxa, allow_new).map_err(err)?;
        set.push(q);
    }
    Ok(set)
}

/// Parses a single `A B | C D` line (no comment handling).
pub fn parse_quartet_line(content: &str, taxa: &mut TaxonSet, allow_new: bool) -> Result<Quartet, ParseErrorKind> {
    let mut sides = content.split('|');
    let (Some(left), Some(right), None) = (sides.next(), sides.next(), sides.next()) else {
        return Err(ParseErrorKind::Malformed);
    };
    let mut side = |s: &str| -> Result<[Taxon; 2], ParseErrorKind> {
        let labels: Vec<&str> = s.split_whitespace().collect();
        let [a, b] = labels[..] else {
            return Err(ParseErrorKind::Malformed);
        };
        let mut lookup = |name: &str| {
            if allow_new {
                taxa.intern(name)
            } else {
                taxa.require(name)
            }
        };
        Ok([lookup(a)?, lookup(b)?])
    };
    let (p, q) = (side(left)?, side(right)?);
    Quartet::new(p, q).map_err(|_| ParseErrorKind::RepeatedTaxon)
}

pub fn write_quartets(quartets: &QuartetSet, taxa: &TaxonSet) -> String {
    let mut out = String::new();
    for q in quartets.iter() {
        let _ = writeln!(out, "{}", q.format(taxa));
    }
    out
}

/// Result of a density check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub dense: bool,
    pub missing_count: usize,
    /// The first missing 4-sets in lexicographic order, at most `cap` of them.
    pub missing: Vec<[Taxon; 4]>,
}

/// Whether every 4-subset of the `n` taxa underlies some quartet.
pub fn is_dense(quartets: &QuartetSet, n: usize, cap: usize) -> DensityReport {
    let mut missing = Vec::new();
    let mut missing_count = 0;
    for_each_four_set(n, |z| {
        if quartets.on_four_set(&z).is_empty() {
            missing_count += 1;
            if missing.len() < cap {
                missing.push(z);
            }
        }
    });
    DensityReport {
        dense: missing_count == 0,
        missing_count,
        missing,
    }
}

/// Whether adding `q` would leave the solution space unchanged.
pub fn is_implied<T: Clone>(space: &AffineSpace<T>, index: &TripleIndex, q: &Quartet) -> Result<bool, SolverError> {
    space.implies(&index.quartet_equation(q))
}

/// Calls `f` on every sorted 4-subset of `0..n` in lexicographic order.
pub fn for_each_four_set(n: usize, mut f: impl FnMut([Taxon; 4])) {
    let n = n as u32;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    f([Taxon(a), Taxon(b), Taxon(c), Taxon(d)]);
                }
            }
        }
    }
}

/// Calls `f` on every sorted 4-subset of `0..n` containing `anchor`, in
/// lexicographic order.
pub fn for_each_anchored_four_set(n: usize, anchor: Taxon, mut f: impl FnMut([Taxon; 4])) {
    let others: Vec<Taxon> = (0..n as u32).map(Taxon).filter(|&t| t != anchor).collect();
    for (i, &a) in others.iter().enumerate() {
        for (j, &b) in others.iter().enumerate().skip(i + 1) {
            for &c in &others[j + 1..] {
                let mut z = [anchor, a, b, c];
                z.sort();
                f(z);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_line() {
        let f = parse_quartets("a b | c d\n").unwrap();
        assert_eq!(f.taxa.names(), &["a", "b", "c", "d"]);
        assert_eq!(f.quartets.len(), 1);
        assert_eq!(write_quartets(&f.quartets, &f.taxa), "a b | c d\n");
    }

    #[test]
    fn canonicalizes_unordered_pairs() {
        let mut taxa = TaxonSet::from_names(["a", "b", "c", "d"]).unwrap();
        let qs = parse_quartets_with("b a | d c\nd c | a b  # same\n", &mut taxa, false).unwrap();
        assert_eq!(qs.len(), 1);
        assert_eq!(qs.duplicates(), 1);
        assert_eq!(write_quartets(&qs, &taxa), "a b | c d\n");
    }

    #[test]
    fn repeated_taxon_is_an_error() {
        let e = parse_quartets("# header\n\na b | a c\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, ParseErrorKind::RepeatedTaxon);
    }

    #[test]
    fn malformed_lines() {
        for bad in ["a b c d", "a b | c", "a | b | c d", "a b c | d e"] {
            assert_eq!(parse_quartets(bad).unwrap_err().kind, ParseErrorKind::Malformed, "{bad}");
        }
    }

    #[test]
    fn unknown_taxon_when_closed() {
        let mut taxa = TaxonSet::from_names(["a", "b", "c", "d"]).unwrap();
        let e = parse_quartets_with("a b | c x", &mut taxa, false).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Taxon(TaxonError::Unknown(_))));
    }

    #[test]
    fn contradictory_quartets_are_both_kept() {
        let f = parse_quartets("a b | c d\na c | b d\n").unwrap();
        assert_eq!(f.quartets.len(), 2);
        assert_eq!(f.quartets.on_four_set(&[Taxon(0), Taxon(1), Taxon(2), Taxon(3)]), &[0, 1]);
    }

    #[test]
    fn empty_file() {
        let f = parse_quartets("").unwrap();
        assert!(f.is_trivial());
        assert_eq!(write_quartets(&f.quartets, &f.taxa), "");
    }

    #[test]
    fn anchored_four_sets_are_lexicographic() {
        let mut all = Vec::new();
        for_each_four_set(6, |z| {
            if z.contains(&Taxon(2)) {
                all.push(z);
            }
        });
        let mut anchored = Vec::new();
        for_each_anchored_four_set(6, Taxon(2), |z| anchored.push(z));
        assert_eq!(all, anchored);
    }

    #[test]
    fn density() {
        let f = parse_quartets("a b | c d").unwrap();
        assert!(is_dense(&f.quartets, 4, 10).dense);
        let r = is_dense(&f.quartets, 5, 10);
        assert!(!r.dense);
        assert_eq!(r.missing_count, 4);
    }
}
