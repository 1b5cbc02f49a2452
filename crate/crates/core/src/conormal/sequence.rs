use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{kernel_generators, reduce_vec, solve_mod, FGAbelianGroup, IntegerHom};
use crate::faces::{FacePoset, FilteredPair};

use super::complex::incidence_matrix;
use super::{build_complex, homology, ConormalChainComplex, ConormalError};

/// Connecting maps `∂_i : H_i^pcn(X_l, X_m) -> H_{1-i}^pcn(X_m, X_q)` as
/// chain-level matrices, indexed by the parity `i` of the source.
///
/// Columns run over the source faces of parity `i` in `(m, l]`, rows over
/// the target faces of parity `1 - i` in `(q, m]`, both in ascending degree
/// and basis order. The only nonzero block is the incidence matrix from
/// codimension `m + 1` to codimension `m`.
pub fn connecting_map(
    poset: &FacePoset,
    q: i64,
    m: i64,
    l: i64,
) -> Result<[IntegerHom; 2], ConormalError> {
    check_triple(poset, q, m, l)?;
    let src = FilteredPair::new(poset.clone(), m, l)?;
    let dst = FilteredPair::new(poset.clone(), q, m)?;
    Ok([0, 1].map(|parity| {
        block_map(poset, &src, &dst, parity, 1 - parity, |from, to| {
            (from == to + 1 && to as i64 == m).then(|| incidence_matrix(poset, from))
        })
    }))
}

fn check_triple(poset: &FacePoset, q: i64, m: i64, l: i64) -> Result<(), ConormalError> {
    let d = poset.codim();
    if !(-1 <= q && q <= m && m <= l && l <= d.max(-1)) {
        return Err(ConormalError::Precondition(format!(
            "need -1 <= q <= m <= l <= {d}, got ({q}, {m}, {l})"
        )));
    }
    Ok(())
}

fn parity_degrees(pair: &FilteredPair, parity: usize) -> Vec<usize> {
    ((pair.low() + 1).max(0)..=pair.high())
        .map(|p| p as usize)
        .filter(|p| p % 2 == parity)
        .collect()
}

/// Block matrix between the parity-`sp` chains of `src` and the parity-`dp`
/// chains of `dst`, filled by `block(from_degree, to_degree)`.
fn block_map<F>(
    poset: &FacePoset,
    src: &FilteredPair,
    dst: &FilteredPair,
    sp: usize,
    dp: usize,
    block: F,
) -> IntegerHom
where
    F: Fn(usize, usize) -> Option<IntegerHom>,
{
    let sdeg = parity_degrees(src, sp);
    let ddeg = parity_degrees(dst, dp);
    let size = |p: usize| poset.count_of_codim(p);
    let rows: usize = ddeg.iter().map(|&p| size(p)).sum();
    let cols: usize = sdeg.iter().map(|&p| size(p)).sum();
    let mut out = IntegerHom::zero(rows, cols);
    let mut c0 = 0;
    for &a in &sdeg {
        let mut r0 = 0;
        for &b in &ddeg {
            if let Some(blk) = block(a, b) {
                for i in 0..blk.rows() {
                    for j in 0..blk.cols() {
                        out.set(r0 + i, c0 + j, blk.get(i, j).clone());
                    }
                }
            }
            r0 += size(b);
        }
        c0 += size(a);
    }
    out
}

/// Chain-level model of `H_i^pcn` of one pair: the cycle condition and
/// the boundary generators on the parity-`i` chains.
#[derive(Clone, Debug)]
struct Node {
    cycles: IntegerHom,
    boundaries: IntegerHom,
}

impl Node {
    fn new(c: &ConormalChainComplex, parity: usize) -> Node {
        let degrees: Vec<usize> = c.degrees().filter(|p| p % 2 == parity).collect();
        let cycles =
            IntegerHom::block_diag(&degrees.iter().map(|&p| c.boundary(p)).collect::<Vec<_>>());
        let boundaries =
            IntegerHom::block_diag(&degrees.iter().map(|&p| c.incoming(p)).collect::<Vec<_>>());
        Node { cycles, boundaries }
    }

    fn dim(&self) -> usize {
        self.cycles.cols()
    }
}

/// Over `Z/n`: is `A --f--> B --g--> C` exact at `B` on homology?
fn exact_at(a: &Node, f: &IntegerHom, b: &Node, g: &IntegerHom, c: &Node, n: &BigInt) -> bool {
    let is_zero = |v: &[BigInt]| reduce_vec(v, n).iter().all(Zero::is_zero);

    // im f ⊆ ker g, checked on generators of the cycles of A
    for z in kernel_generators(&a.cycles, n) {
        let w = f.apply(&z).expect("shape");
        if !is_zero(&b.cycles.apply(&w).expect("shape")) {
            return false;
        }
        let gw = g.apply(&w).expect("shape");
        if solve_mod(&c.boundaries, n, &gw).is_none() {
            return false;
        }
    }

    // ker g ⊆ im f: cycles w of B with g w a boundary of C
    let top = b
        .cycles
        .hstack(&IntegerHom::zero(b.cycles.rows(), c.boundaries.cols()));
    let bottom = g.hstack(&c.boundaries.negated());
    let pullback = top.vstack(&bottom);
    let lift = a
        .cycles
        .hstack(&IntegerHom::zero(a.cycles.rows(), b.boundaries.cols()))
        .vstack(&f.hstack(&b.boundaries));
    for wy in kernel_generators(&pullback, n) {
        let w = &wy[..b.dim()];
        let mut rhs = vec![BigInt::zero(); a.cycles.rows()];
        rhs.extend_from_slice(w);
        if solve_mod(&lift, n, &rhs).is_none() {
            return false;
        }
    }
    true
}

/// Does `f` induce the zero map `A -> B` on homology over `Z/n`?
fn zero_on_homology(a: &Node, f: &IntegerHom, b: &Node, n: &BigInt) -> bool {
    kernel_generators(&a.cycles, n)
        .into_iter()
        .all(|z| solve_mod(&b.boundaries, n, &f.apply(&z).expect("shape")).is_some())
}

/// Periodized six-term exact sequence of the triple `X_q ⊂ X_m ⊂ X_l`.
///
/// Node order: `H_1(m,q), H_1(l,q), H_1(l,m), H_0(m,q), H_0(l,q), H_0(l,m)`;
/// `maps[k]` leaves node `k` (so `maps[2]` is `∂_1` and `maps[5]` is `∂_0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermSequence {
    pub triple: (i64, i64, i64),
    pub groups: [FGAbelianGroup; 6],
    pub maps: [IntegerHom; 6],
    pub exact: [bool; 6],
}

struct Assembled {
    seq: SixTermSequence,
    nodes: [Node; 6],
}

fn assemble(
    poset: &FacePoset,
    q: i64,
    m: i64,
    l: i64,
    coefficient: &FGAbelianGroup,
) -> Result<Assembled, ConormalError> {
    check_triple(poset, q, m, l)?;
    let mq = FilteredPair::new(poset.clone(), q, m)?;
    let lq = FilteredPair::new(poset.clone(), q, l)?;
    let lm = FilteredPair::new(poset.clone(), m, l)?;
    let cx = [&mq, &lq, &lm].map(|p| build_complex(p, coefficient));
    let [c_mq, c_lq, c_lm] = cx;
    let (c_mq, c_lq, c_lm) = (c_mq?, c_lq?, c_lm?);
    let h = [homology(&c_mq)?, homology(&c_lq)?, homology(&c_lm)?];
    let pcn = |k: usize, parity: usize| -> FGAbelianGroup {
        if parity == 0 {
            h[k].periodized.0.clone()
        } else {
            h[k].periodized.1.clone()
        }
    };
    let groups = [
        pcn(0, 1),
        pcn(1, 1),
        pcn(2, 1),
        pcn(0, 0),
        pcn(1, 0),
        pcn(2, 0),
    ];

    let identity =
        |a: usize, b: usize| (a == b).then(|| IntegerHom::identity(poset.count_of_codim(a)));
    let [d0, d1] = connecting_map(poset, q, m, l)?;
    let maps = [
        block_map(poset, &mq, &lq, 1, 1, identity),
        block_map(poset, &lq, &lm, 1, 1, identity),
        d1,
        block_map(poset, &mq, &lq, 0, 0, identity),
        block_map(poset, &lq, &lm, 0, 0, identity),
        d0,
    ];
    let nodes = [
        Node::new(&c_mq, 1),
        Node::new(&c_lq, 1),
        Node::new(&c_lm, 1),
        Node::new(&c_mq, 0),
        Node::new(&c_lq, 0),
        Node::new(&c_lm, 0),
    ];

    let moduli: BTreeSet<BigInt> = coefficient.summand_moduli().into_iter().collect();
    let mut exact = [true; 6];
    for (k, ok) in exact.iter_mut().enumerate() {
        let prev = (k + 5) % 6;
        let next = (k + 1) % 6;
        *ok = moduli.iter().all(|n| {
            exact_at(
                &nodes[prev],
                &maps[prev],
                &nodes[k],
                &maps[k],
                &nodes[next],
                n,
            )
        });
    }
    Ok(Assembled {
        seq: SixTermSequence {
            triple: (q, m, l),
            groups,
            maps,
            exact,
        },
        nodes,
    })
}

/// Assembles the six-term sequence and verifies exactness at every node by
/// double inclusion of image and kernel.
pub fn six_term(
    poset: &FacePoset,
    q: i64,
    m: i64,
    l: i64,
    coefficient: &FGAbelianGroup,
) -> Result<SixTermSequence, ConormalError> {
    let seq = assemble(poset, q, m, l, coefficient)?.seq;
    if let Some(node) = seq.exact.iter().position(|e| !e) {
        return Err(ConormalError::ExactnessFailure {
            node,
            triple: (q, m, l),
        });
    }
    Ok(seq)
}

/// `0 -> H_1^pcn(X) -> H_1^pcn(X, X_0) -> H_0^pcn(X_0) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedBoundarySes {
    pub absolute: FGAbelianGroup,
    pub relative: FGAbelianGroup,
    pub interior: FGAbelianGroup,
    pub exact: bool,
}

/// Short exact sequence of a connected poset with nonempty boundary, read
/// off the triple `(∅, X_0, X)`: the outer terms of the six-term sequence
/// must vanish or map trivially for the middle three to form a short exact
/// sequence.
pub fn connected_boundary_ses(
    poset: &FacePoset,
    coefficient: &FGAbelianGroup,
) -> Result<ConnectedBoundarySes, ConormalError> {
    if !poset.is_connected() || poset.count_of_codim(0) != 1 {
        return Err(ConormalError::Precondition("poset is not connected".into()));
    }
    if poset.count_of_codim(1) == 0 {
        return Err(ConormalError::Precondition(
            "poset has empty boundary".into(),
        ));
    }
    let d = poset.codim();
    let Assembled { seq, nodes } = assemble(poset, -1, 0, d, coefficient)?;
    let moduli: BTreeSet<BigInt> = coefficient.summand_moduli().into_iter().collect();
    // H_1(X_0) = 0 and H_0(X_0) -> H_0(X) is zero
    let outer_vanish = seq.groups[0].is_trivial()
        && moduli
            .iter()
            .all(|n| zero_on_homology(&nodes[3], &seq.maps[3], &nodes[4], n));
    let exact = outer_vanish && seq.exact[1] && seq.exact[2] && seq.exact[3];
    if !exact {
        return Err(ConormalError::ExactnessFailure {
            node: 1,
            triple: (-1, 0, d),
        });
    }
    Ok(ConnectedBoundarySes {
        absolute: seq.groups[1].clone(),
        relative: seq.groups[2].clone(),
        interior: seq.groups[3].clone(),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{check_embeddable, gallery, quotient_family};

    fn total(name: &str) -> FacePoset {
        check_embeddable(&quotient_family(&gallery(name).unwrap()).unwrap())
            .poset
            .unwrap()
    }

    fn g(s: &str) -> FGAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn interval_connecting_map() {
        let [_, d1] = connecting_map(&total("trivial_interval"), -1, 0, 1).unwrap();
        assert_eq!(d1, IntegerHom::from_rows(&[vec![1, 1]]));
    }

    #[test]
    fn equal_levels_give_empty_map() {
        let maps = connecting_map(&total("trivial_square"), 0, 1, 1).unwrap();
        for m in maps {
            assert_eq!(m.cols(), 0);
        }
    }

    #[test]
    fn square_connecting_map_is_corner_incidence() {
        let sq = total("trivial_square");
        let [d0, _] = connecting_map(&sq, 0, 1, 2).unwrap();
        assert_eq!(d0, incidence_matrix(&sq, 2));
        assert_eq!((d0.rows(), d0.cols()), (4, 4));
    }

    #[test]
    fn codim_two_zero_positions() {
        for name in ["trivial_square", "half_twist_square"] {
            let s = six_term(&total(name), 0, 1, 2, &g("Z + Z/2")).unwrap();
            // H_1(X, X_1) and H_0(X_1, X_0)
            assert!(s.groups[2].is_trivial());
            assert!(s.groups[3].is_trivial());
        }
    }

    #[test]
    fn degenerate_triple_is_trivial() {
        let s = six_term(&total("trivial_square"), 1, 1, 1, &g("Z")).unwrap();
        assert!(s.groups.iter().all(FGAbelianGroup::is_trivial));
    }

    #[test]
    fn interval_ses() {
        let ses = connected_boundary_ses(&total("trivial_interval"), &g("Z")).unwrap();
        assert_eq!(ses.absolute, g("Z"));
        assert_eq!(ses.relative, g("Z^2"));
        assert_eq!(ses.interior, g("Z"));
    }

    #[test]
    fn mobius_ses() {
        let ses = connected_boundary_ses(&total("mobius"), &g("Z")).unwrap();
        assert!(ses.absolute.is_trivial());
        assert_eq!(ses.relative, g("Z"));
        assert_eq!(ses.interior, g("Z"));
    }

    #[test]
    fn ses_preconditions() {
        let closed = FacePoset::new(vec![], vec![crate::faces::Face::interior("X")], true);
        assert!(matches!(
            connected_boundary_ses(&closed, &g("Z")),
            Err(ConormalError::Precondition(_))
        ));
        assert!(connecting_map(&total("trivial_square"), 1, 0, 2).is_err());
    }

    #[test]
    fn broken_map_is_detected() {
        // replacing the connecting map by zero breaks exactness around it
        let sq = total("trivial_interval");
        let mut a = assemble(&sq, -1, 0, 1, &g("Z")).unwrap();
        a.seq.maps[2] = IntegerHom::zero(a.seq.maps[2].rows(), a.seq.maps[2].cols());
        let n = BigInt::zero();
        assert!(!exact_at(
            &a.nodes[2],
            &a.seq.maps[2],
            &a.nodes[3],
            &a.seq.maps[3],
            &a.nodes[4],
            &n
        ));
    }
}
