//! Exact calculator for conormal homology with coefficients and for the
//! K-theoretic boundary-index obstruction groups of families of manifolds
//! with embedded corners.

pub mod abelian;
pub mod conormal;
pub mod faces;
pub mod families;
pub mod obstruction;
