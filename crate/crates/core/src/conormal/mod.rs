//! Conormal chain complexes with coefficients, their homology, and the
//! exact sequences of the codimension filtration.

mod complex;
mod homology;
mod sequence;

use thiserror::Error;

use crate::abelian::AbelianError;
use crate::faces::{FaceError, Violation};

pub use complex::{build_complex, orientation_sign, ChainVector, ConormalChainComplex};
pub use homology::{
    homology, integral_homology, periodize, uct_homology, HomologyGenerator, HomologyResult,
};
pub use sequence::{
    connected_boundary_ses, connecting_map, six_term, ConnectedBoundarySes, SixTermSequence,
};

pub(crate) use complex::incidence_matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConormalError {
    #[error("tuple has repeated entries")]
    DuplicateEntries,
    #[error("poset fails validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidPoset(Vec<Violation>),
    #[error("boundary squares to a nonzero map into degree {degree}")]
    BoundarySquareNonzero { degree: usize },
    #[error("internal error: direct homology {direct} disagrees with universal-coefficient value {uct} in degree {degree}")]
    UctMismatch {
        degree: usize,
        direct: String,
        uct: String,
    },
    #[error("internal error: six-term sequence of triple {triple:?} is not exact at node {node}")]
    ExactnessFailure {
        node: usize,
        triple: (i64, i64, i64),
    },
    #[error("degree {0} is outside the complex")]
    DegreeOutOfRange(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}
