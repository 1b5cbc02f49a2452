//! Linear algebra over a single cyclic ring `Z/n` (`n = 0` meaning `Z`).
//!
//! Every map in this crate is an integer matrix acting coordinatewise on the
//! cyclic summands of a coefficient group, so all group-level questions
//! reduce to these per-modulus routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, FGAbelianGroup, IntegerHom, SnfDecomposition};

pub(crate) fn reduce(x: &BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_zero() {
        x.clone()
    } else {
        x.mod_floor(modulus)
    }
}

pub(crate) fn reduce_vec(xs: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    xs.iter().map(|x| reduce(x, modulus)).collect()
}

/// `gcd(d, n)` with the convention `gcd(d, 0) = d`.
fn gcd_mod(d: &BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_zero() {
        d.clone()
    } else {
        d.gcd(modulus)
    }
}

/// Scale factors `s_i` such that `{x : A x ≡ 0 mod n}` is `V⁻¹ · diag(s) · Z^k`
/// for the indices `i` where `s_i` is `Some`.
fn kernel_scales(snf: &SnfDecomposition, cols: usize, modulus: &BigInt) -> Vec<Option<BigInt>> {
    let diag = snf.diagonal();
    (0..cols)
        .map(|i| {
            if i < diag.len() {
                if modulus.is_zero() {
                    None
                } else {
                    Some(modulus / diag[i].gcd(modulus))
                }
            } else {
                Some(BigInt::one())
            }
        })
        .collect()
}

/// Generators (as columns of integer vectors reduced mod `n`) of the kernel of
/// `A` acting on `(Z/n)^cols`. Zero generators are dropped.
pub(crate) fn kernel_generators(a: &IntegerHom, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let scales = kernel_scales(&snf, a.cols(), modulus);
    let mut gens = Vec::new();
    for (i, s) in scales.iter().enumerate() {
        let Some(s) = s else { continue };
        let g: Vec<BigInt> = (0..a.cols())
            .map(|r| reduce(&(snf.v_inv.get(r, i) * s), modulus))
            .collect();
        if g.iter().any(|x| !x.is_zero()) {
            gens.push(g);
        }
    }
    gens
}

/// Solves `A x ≡ b (mod n)`; returns a solution reduced mod `n`, or `None`.
pub(crate) fn solve_mod(a: &IntegerHom, modulus: &BigInt, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side length");
    let snf = smith_normal_form(a);
    solve_with(&snf, a.cols(), modulus, b)
}

pub(crate) fn solve_with(
    snf: &SnfDecomposition,
    cols: usize,
    modulus: &BigInt,
    b: &[BigInt],
) -> Option<Vec<BigInt>> {
    let c = snf.u_inv.apply(b).expect("shape checked");
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        let ci = reduce(ci, modulus);
        if i >= diag.len() {
            if !ci.is_zero() {
                return None;
            }
            continue;
        }
        let d = &diag[i];
        if modulus.is_zero() {
            if !ci.is_multiple_of(d) {
                return None;
            }
            y[i] = ci / d;
        } else {
            let g = d.gcd(modulus);
            if !ci.is_multiple_of(&g) {
                return None;
            }
            let m = modulus / &g;
            let dd = (d / &g).mod_floor(&m);
            let inv = if m.is_one() {
                BigInt::zero()
            } else {
                dd.extended_gcd(&m).x.mod_floor(&m)
            };
            y[i] = ((&ci / &g) * inv).mod_floor(&m);
        }
    }
    let x = snf.v_inv.apply(&y).expect("shape checked");
    Some(reduce_vec(&x, modulus))
}

/// A homology-style subquotient `{x : Z x ≡ 0} / (im B + n·Z^k)` over `Z/n`.
pub(crate) struct Subquotient {
    pub group: FGAbelianGroup,
    /// One generator per cyclic factor, with its order (`0` for infinite).
    pub generators: Vec<(BigInt, Vec<BigInt>)>,
}

/// Computes `ker(cycles) / im(boundaries)` over `Z/n` directly: a lattice
/// basis for the cycles, relations expressed in that basis, and the cokernel
/// of the relation matrix read off its Smith form.
pub(crate) fn subquotient(
    cycles: &IntegerHom,
    boundaries: &IntegerHom,
    modulus: &BigInt,
) -> Subquotient {
    let k = cycles.cols();
    assert_eq!(
        boundaries.rows(),
        k,
        "boundary target must be the cycle ambient"
    );
    let snf = smith_normal_form(cycles);
    let scales = kernel_scales(&snf, k, modulus);
    let basis: Vec<(usize, BigInt)> = scales
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.clone().map(|s| (i, s)))
        .collect();

    // coordinates of a cycle x in the lattice basis: (V x)_i / s_i
    let coords = |x: &[BigInt]| -> Vec<BigInt> {
        let y = snf.v.apply(x).expect("shape");
        basis
            .iter()
            .map(|(i, s)| {
                debug_assert!(
                    y[*i].is_multiple_of(s),
                    "relation outside the cycle lattice"
                );
                &y[*i] / s
            })
            .collect()
    };
    let mut relations: Vec<Vec<BigInt>> = (0..boundaries.cols())
        .map(|j| coords(&boundaries.column(j)))
        .collect();
    if !modulus.is_zero() {
        for j in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[j] = modulus.clone();
            relations.push(coords(&e));
        }
    }
    let dim = basis.len();
    let rel = IntegerHom::from_fn(dim, relations.len(), |i, j| relations[j][i].clone());
    let rsnf = smith_normal_form(&rel);
    let rdiag = rsnf.diagonal();

    let mut orders = Vec::new();
    let mut generators = Vec::new();
    for i in 0..dim {
        let order = if i < rdiag.len() {
            rdiag[i].clone()
        } else {
            BigInt::zero()
        };
        if order.is_one() {
            continue;
        }
        // generator U' e_i in lattice coordinates, then back to the ambient
        let mut y = vec![BigInt::zero(); k];
        for (t, (idx, s)) in basis.iter().enumerate() {
            y[*idx] = rsnf.u.get(t, i) * s;
        }
        let x = snf.v_inv.apply(&y).expect("shape");
        generators.push((order.clone(), reduce_vec(&x, modulus)));
        orders.push(order);
    }
    Subquotient {
        group: FGAbelianGroup::from_cyclic_orders(orders),
        generators,
    }
}

/// Order of the cokernel summands of `A` over `Z/n`.
pub(crate) fn cokernel_orders(a: &IntegerHom, modulus: &BigInt) -> Vec<BigInt> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    (0..a.rows())
        .map(|i| {
            if i < diag.len() {
                gcd_mod(&diag[i], modulus)
            } else {
                modulus.clone()
            }
        })
        .collect()
}

/// Order of the kernel summands of `A` acting on `(Z/n)^cols`.
pub(crate) fn kernel_orders(a: &IntegerHom, modulus: &BigInt) -> Vec<BigInt> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    (0..a.cols())
        .filter_map(|i| {
            if i < diag.len() {
                if modulus.is_zero() {
                    None
                } else {
                    Some(diag[i].gcd(modulus))
                }
            } else {
                Some(modulus.clone())
            }
        })
        .collect()
}
