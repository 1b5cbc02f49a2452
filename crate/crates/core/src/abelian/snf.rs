use log::trace;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerHom;

/// Smith normal form `A = U · D · V` with `U`, `V` unimodular.
///
/// The inverses are tracked alongside so that solving and kernel
/// computations never need a separate inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerHom,
    pub u_inv: IntegerHom,
    pub d: IntegerHom,
    pub v: IntegerHom,
    pub v_inv: IntegerHom,
    rank: usize,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d_1 | d_2 | … | d_rank`, all positive.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Computes the Smith normal form of an arbitrary integer matrix.
///
/// Pivot choice is the smallest absolute value in the remaining block,
/// ties broken by leftmost column and then topmost row, so the output is a
/// deterministic function of the input.
pub fn smith_normal_form(a: &IntegerHom) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    // p · a · q = w throughout
    let mut p = IntegerHom::identity(m);
    let mut p_inv = IntegerHom::identity(m);
    let mut q = IntegerHom::identity(n);
    let mut q_inv = IntegerHom::identity(n);

    let row_add = |w: &mut IntegerHom,
                   p: &mut IntegerHom,
                   p_inv: &mut IntegerHom,
                   t: usize,
                   s: usize,
                   c: &BigInt| {
        w.add_row_multiple(t, s, c);
        p.add_row_multiple(t, s, c);
        p_inv.add_col_multiple(s, t, &-c);
    };
    let col_add = |w: &mut IntegerHom,
                   q: &mut IntegerHom,
                   q_inv: &mut IntegerHom,
                   t: usize,
                   s: usize,
                   c: &BigInt| {
        w.add_col_multiple(t, s, c);
        q.add_col_multiple(t, s, c);
        q_inv.add_row_multiple(s, t, &-c);
    };

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = smallest_entry(&w, t) else {
            break;
        };
        w.swap_rows(t, pi);
        p.swap_rows(t, pi);
        p_inv.swap_cols(t, pi);
        w.swap_cols(t, pj);
        q.swap_cols(t, pj);
        q_inv.swap_rows(t, pj);

        loop {
            let pivot = w.get(t, t).clone();
            for i in t + 1..m {
                if !w.get(i, t).is_zero() {
                    let f = -w.get(i, t).div_floor(&pivot);
                    row_add(&mut w, &mut p, &mut p_inv, i, t, &f);
                }
            }
            for j in t + 1..n {
                if !w.get(t, j).is_zero() {
                    let f = -w.get(t, j).div_floor(&pivot);
                    col_add(&mut w, &mut q, &mut q_inv, j, t, &f);
                }
            }

            // a nonzero remainder is strictly smaller than the pivot
            let smaller_in_col = (t + 1..m)
                .filter(|&i| !w.get(i, t).is_zero())
                .min_by_key(|&i| w.get(i, t).abs());
            if let Some(i) = smaller_in_col {
                w.swap_rows(t, i);
                p.swap_rows(t, i);
                p_inv.swap_cols(t, i);
                continue;
            }
            let smaller_in_row = (t + 1..n)
                .filter(|&j| !w.get(t, j).is_zero())
                .min_by_key(|&j| w.get(t, j).abs());
            if let Some(j) = smaller_in_row {
                w.swap_cols(t, j);
                q.swap_cols(t, j);
                q_inv.swap_rows(t, j);
                continue;
            }

            let pivot = w.get(t, t).clone();
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::from(1);
                    row_add(&mut w, &mut p, &mut p_inv, t, i, &one);
                }
                None => break,
            }
        }

        if w.get(t, t).is_negative() {
            w.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
        t += 1;
    }
    trace!("snf {}x{} rank {}", m, n, t);

    SnfDecomposition {
        u: p_inv,
        u_inv: p,
        d: w,
        v: q_inv,
        v_inv: q,
        rank: t,
    }
}

fn smallest_entry(w: &IntegerHom, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for j in t..w.cols() {
        for i in t..w.rows() {
            let x = w.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
