//! Finite Coxeter groups: elements, length, Bruhat order, parabolic subgroups.
//!
//! A group is built from its Coxeter matrix through the geometric
//! representation; elements are permutations of the (finite) root system.

mod cyclotomic;
mod datum;
mod group;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use datum::{CoxeterDatum, MAX_RANK};
pub use group::{CoxeterGroup, Side, WeylElement, DEFAULT_GROUP_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unknown Coxeter type `{0}`")]
    UnknownType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the Coxeter matrix does not define a finite group")]
    InfiniteGroup,
    #[error("group has more than {bound} elements")]
    GroupTooLarge { bound: usize },
    #[error("elements belong to different Coxeter data")]
    DatumMismatch,
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
}

/// A subset of the simple reflections, indexed `0..rank`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct GeneratorSet(u64);

impl GeneratorSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn full(rank: usize) -> Self {
        assert!(rank <= MAX_RANK);
        if rank == 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << rank) - 1)
        }
    }

    pub fn singleton(s: usize) -> Self {
        Self(1 << s)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, s: usize) -> bool {
        s < 64 && self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&s| self.contains(s))
    }

    /// Checks every member is below `rank`.
    pub fn check_rank(self, rank: usize) -> Result<(), CoxeterError> {
        match self.iter().find(|&s| s >= rank) {
            Some(s) => Err(CoxeterError::BadGenerator(s)),
            None => Ok(()),
        }
    }

    /// Parses a comma-separated list of generator indices (`""` is empty).
    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        let mut set = Self::empty();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let s: usize = tok
                .parse()
                .map_err(|_| CoxeterError::Parse(format!("bad generator `{tok}`")))?;
            if s >= MAX_RANK {
                return Err(CoxeterError::BadGenerator(s));
            }
            set.insert(s);
        }
        Ok(set)
    }

    /// All subsets of `0..rank`.
    pub fn all_subsets(rank: usize) -> impl Iterator<Item = Self> {
        assert!(rank < 64);
        (0..1u64 << rank).map(Self)
    }
}

impl FromIterator<usize> for GeneratorSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = Self::empty();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl From<GeneratorSet> for Vec<usize> {
    fn from(set: GeneratorSet) -> Self {
        set.iter().collect()
    }
}

impl TryFrom<Vec<usize>> for GeneratorSet {
    type Error = CoxeterError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        match v.iter().find(|&&s| s >= MAX_RANK) {
            Some(&s) => Err(CoxeterError::BadGenerator(s)),
            None => Ok(v.into_iter().collect()),
        }
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_set_parse_and_display() {
        let set = GeneratorSet::parse("2, 0").unwrap();
        assert_eq!(set.to_string(), "0,2");
        assert_eq!(set.len(), 2);
        assert!(GeneratorSet::parse("").unwrap().is_empty());
        assert!(GeneratorSet::parse("a").is_err());
        assert!(set.is_subset(GeneratorSet::full(3)));
        assert!(set.check_rank(2).is_err());
        assert_eq!(serde_json::to_string(&set).unwrap(), "[0,2]");
    }
}
