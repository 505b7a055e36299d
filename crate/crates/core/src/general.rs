//! Reconstruction from arbitrary quartet sets.
//!
//! Quartet equations are fed to an [`AffineSpace`] over the anchored
//! coordinates. An empty space yields the kept quartets as a certificate.
//! Otherwise every 4-set through the anchor is inspected on the projected
//! space: three free coordinates mean the data cannot decide the 4-set
//! (a witness), a non-cyclic line means no cyclic ordering fits, and a plane
//! with non-cyclic points is cut down by adding the one quartet that every
//! cyclic point satisfies. Any remaining point decodes to a cyclic ordering,
//! and the arcs of that ordering parallel to the space are the splits.

use crate::bits::BitVec;
use crate::cyclic::{order_four_set, CyclicError, CyclicOrdering, TripleIndex, TripleVector};
use crate::gf2::{AffineSpace, Outcome, SolverError};
use crate::network::{build_network, BuildError, Level1Network, QuartetOracle, SplitFamily};
use crate::quartet::{Quartet, QuartetSet};
use crate::taxa::{Taxon, TaxonSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("no taxa")]
    NoTaxa,
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("quartet uses taxon {0} outside the taxon set")]
    UnknownTaxon(Taxon),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Origin of an equation in the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqTag {
    /// Position in the input quartet set.
    Input(usize),
    /// Position in the list of quartets added while making the space cyclic.
    Augmented(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconsistencyReason {
    /// The quartet equations have no common solution.
    Infeasible,
    /// The equations are solvable but no solution is a cyclic ordering.
    NoCyclicSolution,
}

/// Input quartets that no level-1 network displays together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub quartets: Vec<Quartet>,
    /// Positions of `quartets` in the input set.
    pub positions: Vec<usize>,
    pub reason: InconsistencyReason,
}

#[derive(Debug, Clone)]
pub struct NetworkResult {
    pub network: Level1Network,
    pub splits: SplitFamily,
    pub ordering: CyclicOrdering,
    /// Dimension of the solution space after augmentation.
    pub dim: usize,
    /// `|splits| + 1`, the dimension spanned by the split vectors and the
    /// all-ones vector. Smaller than `dim` when the data leave part of the
    /// cyclic structure open.
    pub dim_split_space: usize,
    /// Quartets added to make the space cyclic; not part of the input.
    pub augmented: Vec<Quartet>,
}

#[derive(Debug, Clone)]
pub enum Reconstruction {
    Network(Box<NetworkResult>),
    Inconsistent(Certificate),
    /// A 4-set containing the anchor on which the data allow every
    /// assignment; some quartet on it must be supplied.
    Witness([Taxon; 4]),
}

/// Outcome of the 4-set sweep.
#[derive(Debug, Clone)]
pub enum Cyclified {
    Cyclic {
        space: AffineSpace<EqTag>,
        augmented: Vec<Quartet>,
    },
    Witness([Taxon; 4]),
    NoCyclicSolution,
}

/// The solver state for one taxon set and anchor, fed one quartet at a time.
#[derive(Debug, Clone)]
pub struct Session {
    taxa: TaxonSet,
    index: TripleIndex,
    quartets: QuartetSet,
    space: AffineSpace<EqTag>,
}

impl Session {
    pub fn new(taxa: TaxonSet, anchor: Taxon) -> Result<Self, ReconstructError> {
        if taxa.is_empty() {
            return Err(ReconstructError::NoTaxa);
        }
        let index = TripleIndex::new(taxa.len(), anchor)?;
        let space = AffineSpace::full(index.len());
        Ok(Self {
            taxa,
            index,
            quartets: QuartetSet::new(),
            space,
        })
    }

    /// A session fed with `quartets` in order, stopping at the first one that
    /// empties the space.
    pub fn with_quartets(taxa: TaxonSet, anchor: Taxon, quartets: &QuartetSet) -> Result<Self, ReconstructError> {
        let mut s = Self::new(taxa, anchor)?;
        for q in quartets.iter() {
            if s.add(*q)? == Outcome::Empty {
                break;
            }
        }
        Ok(s)
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn index(&self) -> &TripleIndex {
        &self.index
    }

    pub fn quartets(&self) -> &QuartetSet {
        &self.quartets
    }

    pub fn space(&self) -> &AffineSpace<EqTag> {
        &self.space
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Adds a quartet's equation. Repeats report [`Outcome::Unchanged`].
    pub fn add(&mut self, q: Quartet) -> Result<Outcome, ReconstructError> {
        if let Some(t) = q.four_set().into_iter().find(|t| t.index() >= self.taxa.len()) {
            return Err(ReconstructError::UnknownTaxon(t));
        }
        if self.space.is_empty() {
            return Err(SolverError::EmptySpace.into());
        }
        if !self.quartets.push(q) {
            return Ok(Outcome::Unchanged);
        }
        let tag = EqTag::Input(self.quartets.len() - 1);
        Ok(self.space.add_equation(self.index.quartet_equation(&q), tag)?)
    }

    /// Whether `q` holds on the current space without adding it.
    pub fn implies(&self, q: &Quartet) -> Result<bool, ReconstructError> {
        Ok(self.space.implies(&self.index.quartet_equation(q))?)
    }

    /// The infeasibility certificate once the space is empty.
    pub fn certificate(&self) -> Option<Certificate> {
        let tags = self.space.certificate()?;
        Some(self.certificate_from(&tags, InconsistencyReason::Infeasible))
    }

    fn certificate_from(&self, tags: &[EqTag], reason: InconsistencyReason) -> Certificate {
        let positions: Vec<usize> = tags
            .iter()
            .filter_map(|t| match *t {
                EqTag::Input(i) => Some(i),
                EqTag::Augmented(_) => None,
            })
            .collect();
        Certificate {
            quartets: positions.iter().map(|&i| self.quartets.get(i)).collect(),
            positions,
            reason,
        }
    }

    /// Runs the rest of the pipeline on a copy of the current space.
    pub fn solve(&self, verify: bool) -> Result<Reconstruction, ReconstructError> {
        if let Some(cert) = self.certificate() {
            return Ok(Reconstruction::Inconsistent(cert));
        }
        let n = self.taxa.len();
        if n < 4 {
            let ordering = CyclicOrdering::new(self.taxa.iter().collect())?;
            let splits = SplitFamily::new(ordering.clone(), &[])?;
            let network = build_network(&self.taxa, &splits)?;
            return Ok(Reconstruction::Network(Box::new(NetworkResult {
                network,
                splits,
                ordering,
                dim: self.space.dim().unwrap_or(0),
                dim_split_space: 1,
                augmented: Vec::new(),
            })));
        }
        let kept: Vec<EqTag> = self.space.kept().iter().map(|(_, t)| *t).collect();
        let (space, augmented) = match cyclify(&self.space, &self.index)? {
            Cyclified::Cyclic { space, augmented } => (space, augmented),
            Cyclified::Witness(z) => return Ok(Reconstruction::Witness(z)),
            Cyclified::NoCyclicSolution => {
                return Ok(Reconstruction::Inconsistent(
                    self.certificate_from(&kept, InconsistencyReason::NoCyclicSolution),
                ))
            }
        };
        let u = TripleVector(space.particular().expect("non-empty space").clone());
        let ordering = match self.index.decode(&u)? {
            Ok(c) => c,
            Err(w) => {
                return Err(ReconstructError::Internal(format!(
                    "solution is not cyclic on {:?} after the sweep",
                    w.four_set
                )))
            }
        };
        let splits = extract_splits(&space, &self.index, &ordering)?;
        let network = build_network(&self.taxa, &splits)?;
        if verify {
            let oracle = QuartetOracle::new(&network);
            if let Some(q) = self.quartets.iter().find(|q| !oracle.displays(q)) {
                return Err(ReconstructError::Internal(format!(
                    "reconstructed network does not display {}",
                    q.format(&self.taxa)
                )));
            }
        }
        let dim = space.dim().expect("non-empty space");
        let dim_split_space = splits.len() + 1;
        Ok(Reconstruction::Network(Box::new(NetworkResult {
            network,
            splits,
            ordering,
            dim,
            dim_split_space,
            augmented,
        })))
    }
}

/// Feeds `quartets` to a fresh space and runs the pipeline.
pub fn reconstruct(
    quartets: &QuartetSet,
    taxa: &TaxonSet,
    anchor: Taxon,
    verify: bool,
) -> Result<Reconstruction, ReconstructError> {
    Session::with_quartets(taxa.clone(), anchor, quartets)?.solve(verify)
}

/// The space of solutions of the quartet equations, or the quartets (by input
/// position) of an infeasible subset.
pub fn build_space(quartets: &QuartetSet, index: &TripleIndex) -> Result<AffineSpace<usize>, Vec<usize>> {
    let mut space = AffineSpace::full(index.len());
    for (i, q) in quartets.iter().enumerate() {
        let outcome = space
            .add_equation(index.quartet_equation(q), i)
            .expect("equations are in range for their own index");
        if outcome == Outcome::Empty {
            return Err(space.certificate().expect("empty space has a certificate"));
        }
    }
    Ok(space)
}

/// Sweeps the 4-sets through the anchor in lexicographic order on a snapshot
/// of `space`, then adds the collected quartets to a copy of it.
pub fn cyclify(space: &AffineSpace<EqTag>, index: &TripleIndex) -> Result<Cyclified, ReconstructError> {
    let anchor = index.anchor();
    let members = index.members();
    let mut augmented = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate().skip(i + 1) {
            for &c in &members[j + 1..] {
                let coords = index.four_set_coords([a, b, c]);
                let p = space.restrict_project(&coords)?;
                let mut four_set = [anchor, a, b, c];
                four_set.sort();
                if p.dim == 3 {
                    return Ok(Cyclified::Witness(four_set));
                }
                let cyclic: Vec<u64> = p
                    .vectors
                    .iter()
                    .copied()
                    .filter(|&v| order_four_set(anchor, [a, b, c], v).is_some())
                    .collect();
                if cyclic.len() == p.vectors.len() {
                    continue;
                }
                if p.dim < 2 || cyclic.is_empty() {
                    return Ok(Cyclified::NoCyclicSolution);
                }
                let order = order_four_set(anchor, [a, b, c], cyclic[0]).expect("filtered to cyclic");
                augmented.push(Quartet::from_cyclic(order).expect("distinct taxa"));
            }
        }
    }
    let mut space = space.clone();
    for (k, q) in augmented.iter().enumerate() {
        if space.add_equation(index.quartet_equation(q), EqTag::Augmented(k))? == Outcome::Empty {
            return Ok(Cyclified::NoCyclicSolution);
        }
    }
    Ok(Cyclified::Cyclic { space, augmented })
}

/// Arcs of `ordering` avoiding its first taxon whose split vectors are
/// parallel to `space`, as a cross-free family.
pub fn extract_splits<T: Clone>(
    space: &AffineSpace<T>,
    index: &TripleIndex,
    ordering: &CyclicOrdering,
) -> Result<SplitFamily, ReconstructError> {
    let n = ordering.len();
    let origin = ordering.seq()[0];
    if origin != index.anchor() {
        return Err(ReconstructError::Internal("ordering must start at the anchor".into()));
    }
    // Position of each taxon; the coordinate (a, b) of v^S for S avoiding the
    // anchor is set iff both a and b lie in S.
    let pos: Vec<usize> = (0..n).map(|t| ordering.position(Taxon(t as u32))).collect();
    let mut splits = Vec::new();
    for start in 1..n {
        for end in start + 1..n {
            let size = end - start + 1;
            if size > n - 2 {
                break;
            }
            let inside = |t: Taxon| (start..=end).contains(&pos[t.index()]);
            let parallel = space.is_parallel_with(|coord| {
                let (a, b) = index.pair(coord);
                inside(a) && inside(b)
            })?;
            if parallel {
                splits.push(BitVec::from_indices(n, (start..=end).map(|p| ordering.seq()[p].index())));
            }
        }
    }
    SplitFamily::new(ordering.clone(), &splits).map_err(|e| match e {
        BuildError::Crossing(a, b) => ReconstructError::Internal(format!("parallel arcs {a} and {b} cross")),
        other => other.into(),
    })
}
