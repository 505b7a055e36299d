//! Incremental solver for sparse linear systems over GF(2).
//!
//! An [`AffineSpace`] holds the solution set of the equations inserted so far
//! as a particular solution `u` plus a basis `V` of the parallel linear space,
//! stored column-wise as full-length bit vectors. Every equation that lowered
//! the dimension is kept together with its caller-supplied tag, so the kept
//! set alone always defines the same space (`|kept| + dim = m`). When the
//! system becomes infeasible the kept tags plus the offending tag form a
//! certificate of infeasibility.
//!
//! Cost per insertion: computing `aV` probes `O(d)` bits because equations
//! carry at most four variables; eliminating a column touches `O(d·m/64)`
//! words. Over `k` equations in `m` variables this is `O(km + m^3)`.

use crate::bits::BitVec;
use thiserror::Error;

/// Maximum number of variables in one equation.
pub const MAX_SUPPORT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("equation has {0} variables after cancellation, at most 4 are allowed")]
    SupportTooLarge(usize),
    #[error("variable index {index} out of range for {m} variables")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("vector length {got} does not match the {expected} variables of the space")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the space is empty; no further operations are defined")]
    EmptySpace,
    #[error("projection onto {0} coordinates is too wide (limit 24)")]
    ProjectionTooWide(usize),
}

/// A sparse equation `a·x = rhs` with at most four nonzero coefficients.
///
/// The support is kept sorted with duplicate variables cancelled mod 2, so two
/// equations are equal exactly when they describe the same linear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseEquation {
    vars: [usize; MAX_SUPPORT],
    len: u8,
    rhs: bool,
}

impl SparseEquation {
    pub fn new(vars: impl IntoIterator<Item = usize>, rhs: bool) -> Result<Self, SolverError> {
        let mut all: Vec<usize> = vars.into_iter().collect();
        all.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(all.len());
        for v in all {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        if reduced.len() > MAX_SUPPORT {
            return Err(SolverError::SupportTooLarge(reduced.len()));
        }
        let mut out = [0usize; MAX_SUPPORT];
        out[..reduced.len()].copy_from_slice(&reduced);
        Ok(Self {
            vars: out,
            len: reduced.len() as u8,
            rhs,
        })
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.vars[..self.len as usize]
    }

    #[inline]
    pub fn rhs(&self) -> bool {
        self.rhs
    }

    /// The homogeneous part `a·x`.
    #[inline]
    pub fn eval(&self, x: &BitVec) -> bool {
        self.support().iter().fold(false, |acc, &i| acc ^ x.get(i))
    }

    /// `a·x` where `x` is given by a bit oracle.
    #[inline]
    pub fn eval_with(&self, mut bit: impl FnMut(usize) -> bool) -> bool {
        self.support().iter().fold(false, |acc, &i| acc ^ bit(i))
    }

    #[inline]
    pub fn is_satisfied_by(&self, x: &BitVec) -> bool {
        self.eval(x) == self.rhs
    }
}

/// Effect of inserting one equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The equation already held on the whole space.
    Unchanged,
    /// The dimension dropped by exactly one and the equation was kept.
    Reduced,
    /// The equation contradicts the space; the space is now empty.
    Empty,
}

/// Work counters, used to check the cost model in tests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    /// Single-bit reads while evaluating `a·V` and `a·u`.
    pub probes: u64,
    /// 64-bit words XORed during column operations.
    pub word_xors: u64,
}

/// The explicit image of a space under restriction to a few coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    /// Distinct restricted vectors, bit `j` of each entry is coordinate `coords[j]`.
    pub vectors: Vec<u64>,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct AffineSpace<T> {
    m: usize,
    particular: BitVec,
    basis: Vec<BitVec>,
    kept: Vec<(SparseEquation, T)>,
    conflict: Option<(SparseEquation, T)>,
    stats: SolverStats,
}

impl<T: Clone> AffineSpace<T> {
    /// The whole space GF(2)^m: `u = 0`, `V = I`, nothing kept.
    pub fn full(m: usize) -> Self {
        Self {
            m,
            particular: BitVec::zeros(m),
            basis: (0..m).map(|i| BitVec::unit(m, i)).collect(),
            kept: Vec::new(),
            conflict: None,
            stats: SolverStats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.conflict.is_some()
    }

    /// Dimension, or `None` once the space is empty.
    pub fn dim(&self) -> Option<usize> {
        (!self.is_empty()).then_some(self.basis.len())
    }

    pub fn particular(&self) -> Option<&BitVec> {
        (!self.is_empty()).then_some(&self.particular)
    }

    pub fn basis(&self) -> Option<&[BitVec]> {
        (!self.is_empty()).then_some(self.basis.as_slice())
    }

    /// The kept equations with their tags, in insertion order.
    pub fn kept(&self) -> &[(SparseEquation, T)] {
        &self.kept
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// Tags whose equations alone are infeasible. Only defined once empty.
    pub fn certificate(&self) -> Option<Vec<T>> {
        let (_, last) = self.conflict.as_ref()?;
        let mut tags: Vec<T> = self.kept.iter().map(|(_, t)| t.clone()).collect();
        tags.push(last.clone());
        Some(tags)
    }

    fn check_support(&self, eq: &SparseEquation) -> Result<(), SolverError> {
        match eq.support().iter().find(|&&i| i >= self.m) {
            Some(&index) => Err(SolverError::IndexOutOfRange { index, m: self.m }),
            None => Ok(()),
        }
    }

    fn check_len(&self, x: &BitVec) -> Result<(), SolverError> {
        if x.len() != self.m {
            return Err(SolverError::LengthMismatch {
                expected: self.m,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn add_equation(&mut self, eq: SparseEquation, tag: T) -> Result<Outcome, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        self.check_support(&eq)?;

        let width = eq.support().len() as u64;
        let mut pivot: Option<usize> = None;
        for j in 0..self.basis.len() {
            self.stats.probes += width;
            if !eq.eval(&self.basis[j]) {
                continue;
            }
            match pivot {
                None => pivot = Some(j),
                Some(p) => {
                    let (lo, hi) = self.basis.split_at_mut(j);
                    self.stats.word_xors += hi[0].xor_assign(&lo[p]) as u64;
                }
            }
        }

        self.stats.probes += width;
        let holds = eq.eval(&self.particular) == eq.rhs();
        match pivot {
            None if holds => Ok(Outcome::Unchanged),
            None => {
                self.conflict = Some((eq, tag));
                Ok(Outcome::Empty)
            }
            Some(p) => {
                let column = self.basis.remove(p);
                if !holds {
                    self.stats.word_xors += self.particular.xor_assign(&column) as u64;
                }
                self.kept.push((eq, tag));
                Ok(Outcome::Reduced)
            }
        }
    }

    /// Membership test against the kept equations.
    pub fn contains(&self, x: &BitVec) -> Result<bool, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        self.check_len(x)?;
        Ok(self.kept.iter().all(|(eq, _)| eq.is_satisfied_by(x)))
    }

    /// Whether `v` is a difference of two points of the space.
    pub fn is_parallel(&self, v: &BitVec) -> Result<bool, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        self.check_len(v)?;
        Ok(self.kept.iter().all(|(eq, _)| !eq.eval(v)))
    }

    /// [`Self::is_parallel`] for a vector given by a bit oracle.
    pub fn is_parallel_with(&self, mut bit: impl FnMut(usize) -> bool) -> Result<bool, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        Ok(self.kept.iter().all(|(eq, _)| !eq.eval_with(&mut bit)))
    }

    /// Whether inserting `eq` would report [`Outcome::Unchanged`]. The space is
    /// not modified.
    pub fn implies(&self, eq: &SparseEquation) -> Result<bool, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        self.check_support(eq)?;
        Ok(self.basis.iter().all(|col| !eq.eval(col)) && eq.is_satisfied_by(&self.particular))
    }

    /// The set `{x|coords : x in space}` listed explicitly.
    pub fn restrict_project(&self, coords: &[usize]) -> Result<Projection, SolverError> {
        if self.is_empty() {
            return Err(SolverError::EmptySpace);
        }
        if coords.len() > 24 {
            return Err(SolverError::ProjectionTooWide(coords.len()));
        }
        if let Some(&index) = coords.iter().find(|&&c| c >= self.m) {
            return Err(SolverError::IndexOutOfRange { index, m: self.m });
        }
        let restrict = |v: &BitVec| -> u64 {
            coords
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &c)| acc | ((v.get(c) as u64) << j))
        };
        let offset = restrict(&self.particular);

        // Row-reduce the restricted columns; the surviving pivots span the image.
        let mut pivots: Vec<u64> = Vec::new();
        for col in &self.basis {
            let mut r = restrict(col);
            for &p in &pivots {
                let top = 63 - p.leading_zeros();
                if (r >> top) & 1 == 1 {
                    r ^= p;
                }
            }
            if r != 0 {
                pivots.push(r);
                pivots.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        let dim = pivots.len();
        let mut vectors: Vec<u64> = (0u64..(1u64 << dim))
            .map(|mask| {
                pivots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .fold(offset, |acc, (_, p)| acc ^ p)
            })
            .collect();
        vectors.sort_unstable();
        Ok(Projection { vectors, dim })
    }

    /// `u` followed by `u + V_j` for every basis column: an affine generating set.
    pub fn generators(&self) -> Option<Vec<BitVec>> {
        let u = self.particular()?;
        let mut out = vec![u.clone()];
        for col in &self.basis {
            let mut p = u.clone();
            p.xor_assign(col);
            out.push(p);
        }
        Some(out)
    }
}
