//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use corner_index::faces::{Face, FacePoset, Hypersurface};
use corner_index::families::{check_embeddable, gallery, gallery_names, quotient_family};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Total posets of the embeddable gallery families, plus the fiber square
/// of the quarter twist (whose total space is not a valid poset).
pub fn gallery_posets() -> Vec<(String, FacePoset)> {
    gallery_names()
        .iter()
        .map(|name| {
            let spec = gallery(name).unwrap();
            let v = check_embeddable(&quotient_family(&spec).unwrap());
            let poset = v.poset.unwrap_or(spec.fiber);
            (name.to_string(), poset)
        })
        .collect()
}

pub fn gallery_total(name: &str) -> FacePoset {
    check_embeddable(&quotient_family(&gallery(name).unwrap()).unwrap())
        .poset
        .unwrap()
}

/// Random valid poset with at most 30 faces and codimension at most
/// `max_codim` (capped at 2). Corners are glued to pairs of codimension-one
/// faces in the same component on distinct hypersurfaces.
pub fn random_poset<R: Rng>(rng: &mut R, max_codim: usize, connected: bool) -> FacePoset {
    let n_h = rng.gen_range(1..=6);
    let hyps: Vec<String> = (1..=n_h).map(|i| i.to_string()).collect();
    let comps = if connected { 1 } else { rng.gen_range(1..=3) };
    let mut faces: Vec<Face> = (0..comps)
        .map(|c| Face::interior(format!("X{c}")))
        .collect();
    let mut budget = 30 - comps;

    // (component, hypersurface, id)
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    if max_codim >= 1 {
        let n1 = rng.gen_range(1..=budget.min(12));
        for i in 0..n1 {
            let c = rng.gen_range(0..comps);
            let h = hyps.choose(rng).unwrap().clone();
            let id = format!("e{i}");
            faces.push(Face::new(
                id.as_str(),
                &[h.as_str()],
                &[(h.as_str(), format!("X{c}"))],
            ));
            edges.push((c, h, id));
        }
        budget -= n1;
    }
    if max_codim >= 2 && budget > 0 {
        let n2 = rng.gen_range(0..=budget.min(12));
        let mut made = 0;
        for _ in 0..4 * n2 {
            if made == n2 {
                break;
            }
            let a = edges.choose(rng).unwrap();
            let b = edges.choose(rng).unwrap();
            if a.0 != b.0 || a.1 == b.1 {
                continue;
            }
            let (lo, hi) = if a.1 < b.1 { (a, b) } else { (b, a) };
            // dropping lo.1 leaves the face on hi.1, and vice versa
            faces.push(Face::new(
                format!("c{made}"),
                &[lo.1.as_str(), hi.1.as_str()],
                &[
                    (lo.1.as_str(), hi.2.as_str()),
                    (hi.1.as_str(), lo.2.as_str()),
                ],
            ));
            made += 1;
        }
    }
    FacePoset::new(
        hyps.into_iter().map(Hypersurface).collect(),
        faces,
        comps == 1,
    )
}

/// Signed incidence matrix rebuilt from the face data alone: entry `(g, f)`
/// is `(-1)^(k-1)` when `g` is the parent of `f` obtained by dropping the
/// `k`-th hypersurface of `f`.
pub fn oracle_incidence(poset: &FacePoset, p: usize) -> Vec<Vec<i64>> {
    let rows: Vec<&Face> = poset.faces().iter().filter(|f| f.codim + 1 == p).collect();
    let cols: Vec<&Face> = poset.faces().iter().filter(|f| f.codim == p).collect();
    let mut m = vec![vec![0i64; cols.len()]; rows.len()];
    for (j, f) in cols.iter().enumerate() {
        for (k, h) in f.index.iter().enumerate() {
            let parent = &f.parents[h];
            let i = rows.iter().position(|g| &g.id == parent).unwrap();
            m[i][j] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// Nonzero invariant factors by naive elimination: move a smallest entry
/// to the corner, clear its row and column, and fold in any row that it
/// fails to divide.
pub fn oracle_invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&p);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&p);
                for i in t..rows {
                    let v = &a[i][t] * &q;
                    a[i][j] -= v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                let bad =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
            // re-seat the smallest entry of the pivot row and column
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
