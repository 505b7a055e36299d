//! Taxon labels and their fixed linear order.

use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// A taxon, identified by its position in the linear order of a [`TaxonSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Taxon(pub u32);

impl Taxon {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Taxon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonError {
    #[error("duplicate taxon label {0:?}")]
    Duplicate(String),
    #[error("invalid taxon label {0:?}")]
    InvalidLabel(String),
    #[error("unknown taxon {0:?}")]
    Unknown(String),
}

/// Distinct labels in order of first appearance; the order is the linear
/// order `<` used for coordinates.
#[derive(Debug, Clone, Default)]
pub struct TaxonSet {
    names: Vec<String>,
    lookup: HashMap<String, Taxon>,
}

impl PartialEq for TaxonSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for TaxonSet {}

fn valid_label(name: &str) -> bool {
    !name.is_empty() && !name.contains(|c: char| c.is_whitespace() || c == '|' || c == '#')
}

impl TaxonSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, TaxonError> {
        let mut set = Self::new();
        for name in names {
            let name = name.as_ref();
            if set.get(name).is_some() {
                return Err(TaxonError::Duplicate(name.to_string()));
            }
            set.intern(name)?;
        }
        Ok(set)
    }

    /// Labels `t1, ..., tn`.
    pub fn numbered(n: usize) -> Self {
        Self::from_names((1..=n).map(|i| format!("t{i}"))).expect("distinct labels")
    }

    /// Returns the taxon for `name`, appending it to the order if new.
    pub fn intern(&mut self, name: &str) -> Result<Taxon, TaxonError> {
        if let Some(&t) = self.lookup.get(name) {
            return Ok(t);
        }
        if !valid_label(name) {
            return Err(TaxonError::InvalidLabel(name.to_string()));
        }
        let t = Taxon(self.names.len() as u32);
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), t);
        Ok(t)
    }

    pub fn get(&self, name: &str) -> Option<Taxon> {
        self.lookup.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<Taxon, TaxonError> {
        self.get(name).ok_or_else(|| TaxonError::Unknown(name.to_string()))
    }

    pub fn name(&self, t: Taxon) -> &str {
        &self.names[t.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Taxon> + '_ {
        (0..self.names.len() as u32).map(Taxon)
    }
}
