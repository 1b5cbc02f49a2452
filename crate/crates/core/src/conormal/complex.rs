use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::abelian::{self, FGAbelianGroup, GroupElement, IntegerHom};
use crate::faces::{FaceId, FacePoset, FilteredPair};

use super::ConormalError;

/// Sign of the permutation sorting `tuple` into ascending order, with the
/// sorted tuple. Swapping two entries of a wedge label flips the sign.
pub fn orientation_sign<T: Ord + Clone>(tuple: &[T]) -> Result<(Vec<T>, i8), ConormalError> {
    let mut inversions = 0usize;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            match tuple[i].cmp(&tuple[j]) {
                std::cmp::Ordering::Equal => return Err(ConormalError::DuplicateEntries),
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut sorted = tuple.to_vec();
    sorted.sort();
    Ok((sorted, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// Signed incidence matrix `F_p -> F_{p-1}` of a poset, in basis order.
/// Entry `(g, f)` is `(-1)^(k-1)` when `g` drops the `k`-th entry of `I_f`.
pub(crate) fn incidence_matrix(poset: &FacePoset, p: usize) -> IntegerHom {
    let sources = poset.faces_of_codim(p);
    let targets: Vec<&FaceId> = if p == 0 {
        Vec::new()
    } else {
        poset
            .faces_of_codim(p - 1)
            .into_iter()
            .map(|f| &f.id)
            .collect()
    };
    let row_of: BTreeMap<&FaceId, usize> =
        targets.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut m = IntegerHom::zero(targets.len(), sources.len());
    for (j, f) in sources.iter().enumerate() {
        for (k, h) in f.index.iter().enumerate() {
            if let Some(row) = f.parents.get(h).and_then(|g| row_of.get(g)) {
                m.set(*row, j, BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Degree {
    basis: Vec<FaceId>,
    boundary: IntegerHom,
}

/// Conormal chain complex `C_•(X_l, X_m; G)`: free on faces of codimension
/// in `(m, l]`, tensored with `G`. Degrees at or below `m` are quotiented
/// away, so the lowest boundary map has no rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConormalChainComplex {
    pair: FilteredPair,
    coefficient: FGAbelianGroup,
    degrees: BTreeMap<usize, Degree>,
}

impl ConormalChainComplex {
    pub fn pair(&self) -> &FilteredPair {
        &self.pair
    }

    pub fn coefficient(&self) -> &FGAbelianGroup {
        &self.coefficient
    }

    /// Degrees carrying chains, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.degrees.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn basis(&self, p: usize) -> &[FaceId] {
        self.degrees.get(&p).map_or(&[], |d| d.basis.as_slice())
    }

    pub fn rank(&self, p: usize) -> usize {
        self.basis(p).len()
    }

    /// `D_p : C_p -> C_{p-1}`; the empty `0 x 0` map outside the range.
    pub fn boundary(&self, p: usize) -> IntegerHom {
        match self.degrees.get(&p) {
            Some(d) => d.boundary.clone(),
            None => IntegerHom::zero(if p == 0 { 0 } else { self.rank(p - 1) }, 0),
        }
    }

    /// `D_{p+1}`, read as the matrix whose columns span the boundaries in
    /// degree `p`.
    pub(crate) fn incoming(&self, p: usize) -> IntegerHom {
        match self.degrees.get(&(p + 1)) {
            Some(d) => d.boundary.clone(),
            None => IntegerHom::zero(self.rank(p), 0),
        }
    }

    pub fn zero_chain(&self, p: usize) -> ChainVector {
        ChainVector {
            degree: p,
            coords: vec![GroupElement::zero(&self.coefficient); self.rank(p)],
        }
    }

    pub fn chain(&self, p: usize, coords: Vec<GroupElement>) -> Result<ChainVector, ConormalError> {
        if !self.degrees.contains_key(&p) {
            return Err(ConormalError::DegreeOutOfRange(p));
        }
        if coords.len() != self.rank(p) {
            return Err(abelian::AbelianError::DimensionMismatch {
                expected: self.rank(p),
                found: coords.len(),
            }
            .into());
        }
        if coords.iter().any(|c| c.parent() != &self.coefficient) {
            return Err(abelian::AbelianError::ParentMismatch.into());
        }
        Ok(ChainVector { degree: p, coords })
    }

    /// `∂ c`, landing in degree `p - 1` (the empty chain when that degree is
    /// quotiented away).
    pub fn apply_boundary(&self, c: &ChainVector) -> Result<ChainVector, ConormalError> {
        let d = self.boundary(c.degree);
        let coords = abelian::apply(&d, &self.coefficient, &c.coords)?;
        Ok(ChainVector {
            degree: c.degree.saturating_sub(1),
            coords,
        })
    }
}

/// A chain `Σ γ_f · f ⊗ e_{I_f}` of a fixed degree, one coefficient per basis
/// face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVector {
    pub degree: usize,
    pub coords: Vec<GroupElement>,
}

impl ChainVector {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(GroupElement::is_zero)
    }
}

/// Builds the conormal complex of a filtered pair with coefficients in `G`
/// and checks `D_{p-1} · D_p = 0`.
pub fn build_complex(
    pair: &FilteredPair,
    coefficient: &FGAbelianGroup,
) -> Result<ConormalChainComplex, ConormalError> {
    let poset = pair.base();
    let violations = poset.validate();
    if !violations.is_empty() {
        return Err(ConormalError::InvalidPoset(violations));
    }
    let mut degrees = BTreeMap::new();
    for p in (pair.low() + 1).max(0)..=pair.high() {
        let p = p as usize;
        let basis: Vec<FaceId> = poset
            .faces_of_codim(p)
            .into_iter()
            .map(|f| f.id.clone())
            .collect();
        let boundary = if pair.contains_degree(p as i64 - 1) {
            incidence_matrix(poset, p)
        } else {
            IntegerHom::zero(0, basis.len())
        };
        degrees.insert(p, Degree { basis, boundary });
    }
    let complex = ConormalChainComplex {
        pair: pair.clone(),
        coefficient: coefficient.clone(),
        degrees,
    };
    for p in complex.degrees() {
        if p == 0 || !complex.degrees.contains_key(&(p - 1)) {
            continue;
        }
        let dd = complex.boundary(p - 1).compose(&complex.boundary(p))?;
        if !dd.is_zero() {
            return Err(ConormalError::BoundarySquareNonzero { degree: p });
        }
    }
    Ok(complex)
}
