//! Exact arithmetic for finitely generated abelian groups and for maps
//! between their finite powers induced by integer matrices.

mod cyclic;
mod group;
mod matrix;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

pub(crate) use cyclic::{kernel_generators, reduce_vec, solve_mod, subquotient};
pub use group::{FGAbelianGroup, GroupElement};
pub use matrix::IntegerHom;
pub use snf::{smith_normal_form, SnfDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("group elements belong to different parent groups")]
    ParentMismatch,
    #[error("not in invariant-factor form: {0}")]
    NonCanonical(String),
    #[error("{0}")]
    Parse(String),
}

/// `G^rows / A(G^cols)` in canonical form.
pub fn cokernel(a: &IntegerHom, coefficient: &FGAbelianGroup) -> FGAbelianGroup {
    FGAbelianGroup::from_cyclic_orders(
        coefficient
            .summand_moduli()
            .iter()
            .flat_map(|n| cyclic::cokernel_orders(a, n)),
    )
}

/// Kernel of `A` acting on `G^cols`, computed summand by summand.
pub fn kernel_group(a: &IntegerHom, coefficient: &FGAbelianGroup) -> FGAbelianGroup {
    FGAbelianGroup::from_cyclic_orders(
        coefficient
            .summand_moduli()
            .iter()
            .flat_map(|n| cyclic::kernel_orders(a, n)),
    )
}

/// Finds `x ∈ G^cols` with `A x = target` in `G^rows`, if one exists.
///
/// Each canonical summand of `G` is solved independently: the free summands
/// over `Z`, each `Z/d` summand modulo `d`.
pub fn solve(
    a: &IntegerHom,
    coefficient: &FGAbelianGroup,
    target: &[GroupElement],
) -> Result<Option<Vec<GroupElement>>, AbelianError> {
    if target.len() != a.rows() {
        return Err(AbelianError::DimensionMismatch {
            expected: a.rows(),
            found: target.len(),
        });
    }
    if target.iter().any(|t| t.parent() != coefficient) {
        return Err(AbelianError::ParentMismatch);
    }
    let snf = smith_normal_form(a);
    let moduli = coefficient.summand_moduli();
    let mut per_summand: Vec<Vec<BigInt>> = Vec::with_capacity(moduli.len());
    for (s, n) in moduli.iter().enumerate() {
        let b: Vec<BigInt> = target.iter().map(|t| t.coord(s).clone()).collect();
        match cyclic::solve_with(&snf, a.cols(), n, &b) {
            Some(x) => per_summand.push(x),
            None => return Ok(None),
        }
    }
    let x = (0..a.cols())
        .map(|j| {
            let coords: Vec<BigInt> = per_summand.iter().map(|xs| xs[j].clone()).collect();
            GroupElement::from_coords(coefficient, &coords)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(x))
}

/// Applies `A` coordinatewise to a vector over `G`.
pub fn apply(
    a: &IntegerHom,
    coefficient: &FGAbelianGroup,
    x: &[GroupElement],
) -> Result<Vec<GroupElement>, AbelianError> {
    if x.len() != a.cols() {
        return Err(AbelianError::DimensionMismatch {
            expected: a.cols(),
            found: x.len(),
        });
    }
    if x.iter().any(|e| e.parent() != coefficient) {
        return Err(AbelianError::ParentMismatch);
    }
    let summands = coefficient.num_summands();
    (0..a.rows())
        .map(|i| {
            let coords: Vec<BigInt> = (0..summands)
                .map(|s| (0..a.cols()).map(|j| a.get(i, j) * x[j].coord(s)).sum())
                .collect();
            GroupElement::from_coords(coefficient, &coords)
        })
        .collect()
}

/// `G ⊗ H`, using `Z/a ⊗ Z/b = Z/gcd(a, b)` on cyclic summands (`Z = Z/0`).
pub fn tensor(g: &FGAbelianGroup, h: &FGAbelianGroup) -> FGAbelianGroup {
    let hm = h.summand_moduli();
    FGAbelianGroup::from_cyclic_orders(
        g.summand_moduli()
            .iter()
            .flat_map(|a| hm.iter().map(move |b| a.gcd(b)))
            .collect::<Vec<_>>(),
    )
}

/// `Tor(G, H)`: `Z/gcd(a, b)` for each pair of finite cyclic summands.
pub fn tor(g: &FGAbelianGroup, h: &FGAbelianGroup) -> FGAbelianGroup {
    FGAbelianGroup::from_cyclic_orders(
        g.torsion()
            .iter()
            .flat_map(|a| h.torsion().iter().map(move |b| a.gcd(b)))
            .collect::<Vec<_>>(),
    )
}
