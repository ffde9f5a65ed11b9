//! Provenance records naming the matroid behind each matrix column.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank2::Rank2Profile;
use crate::rank3::Rank3Descriptor;
use crate::schubert::schubert_lattice;
use crate::types::{CyclicFlatLattice, SchubertLabel};

/// An isomorphism class of matroids, in one of three presentations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidDescriptor {
    Schubert { label: SchubertLabel },
    Rank2(Rank2Profile),
    Rank3(Rank3Descriptor),
}

impl MatroidDescriptor {
    pub fn n(&self) -> usize {
        match self {
            MatroidDescriptor::Schubert { label } => label.n(),
            MatroidDescriptor::Rank2(p) => p.n(),
            MatroidDescriptor::Rank3(d) => d.n(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            MatroidDescriptor::Schubert { label } => label.rank(),
            MatroidDescriptor::Rank2(_) => 2,
            MatroidDescriptor::Rank3(_) => 3,
        }
    }

    /// The same matroid with one loop added.
    pub fn with_loop(&self) -> Self {
        match self {
            MatroidDescriptor::Schubert { label } => MatroidDescriptor::Schubert { label: label.with_loop() },
            MatroidDescriptor::Rank2(p) => MatroidDescriptor::Rank2(p.with_loop()),
            MatroidDescriptor::Rank3(d) => MatroidDescriptor::Rank3(d.with_loop()),
        }
    }

    /// The same matroid with one coloop added; rank 2 presentations become rank 3.
    pub fn with_coloop(&self) -> Result<Self> {
        match self {
            MatroidDescriptor::Schubert { label } => Ok(MatroidDescriptor::Schubert { label: label.with_coloop() }),
            MatroidDescriptor::Rank2(p) => Ok(MatroidDescriptor::Rank3(Rank3Descriptor::from_rank2_with_coloop(p)?)),
            MatroidDescriptor::Rank3(_) => Err(Error::UnsupportedRank(4)),
        }
    }
}

impl fmt::Display for MatroidDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatroidDescriptor::Schubert { label } => write!(f, "{label:?}"),
            MatroidDescriptor::Rank2(p) => write!(f, "{p}"),
            MatroidDescriptor::Rank3(d) => write!(f, "{d}"),
        }
    }
}

/// A concrete lattice of cyclic flats on `[n]` for the descriptor.
pub fn descriptor_to_lattice(d: &MatroidDescriptor) -> Result<CyclicFlatLattice> {
    match d {
        MatroidDescriptor::Schubert { label } => Ok(schubert_lattice(label)),
        MatroidDescriptor::Rank2(p) => p.lattice(),
        MatroidDescriptor::Rank3(r) => r.lattice(),
    }
}
