use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{self, smith_normal_form, subquotient, FGAbelianGroup, GroupElement};

use super::{ChainVector, ConormalChainComplex, ConormalError};

/// One cyclic generator of a homology group: a cycle and its order
/// (`0` for infinite order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGenerator {
    pub order: BigInt,
    pub cycle: ChainVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub groups: BTreeMap<usize, FGAbelianGroup>,
    pub generators: BTreeMap<usize, Vec<HomologyGenerator>>,
    /// `(H_0^pcn, H_1^pcn)`.
    pub periodized: (FGAbelianGroup, FGAbelianGroup),
}

impl HomologyResult {
    /// `H_p`, trivial outside the complex's range.
    pub fn group(&self, p: usize) -> FGAbelianGroup {
        self.groups.get(&p).cloned().unwrap_or_default()
    }
}

/// Homology of the complex over its coefficient group.
///
/// Computed per cyclic summand of `G` as `ker D_p / im D_{p+1}`, then
/// cross-checked against the universal-coefficient assembly from integral
/// homology. Disagreement is reported as an internal error.
pub fn homology(c: &ConormalChainComplex) -> Result<HomologyResult, ConormalError> {
    let g = c.coefficient();
    let moduli = g.summand_moduli();
    let mut groups = BTreeMap::new();
    let mut generators = BTreeMap::new();

    for p in c.degrees() {
        let cycles = c.boundary(p);
        let boundaries = c.incoming(p);
        let mut direct = FGAbelianGroup::trivial();
        let mut gens = Vec::new();
        for (s, n) in moduli.iter().enumerate() {
            let sq = subquotient(&cycles, &boundaries, n);
            direct = direct.direct_sum(&sq.group);
            for (order, v) in sq.generators {
                let coords = v
                    .iter()
                    .map(|x| {
                        let mut e = vec![BigInt::zero(); moduli.len()];
                        e[s] = x.clone();
                        GroupElement::from_coords(g, &e)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                gens.push(HomologyGenerator {
                    order,
                    cycle: ChainVector { degree: p, coords },
                });
            }
        }
        let uct = uct_homology(c, p);
        if direct != uct {
            return Err(ConormalError::UctMismatch {
                degree: p,
                direct: direct.to_string(),
                uct: uct.to_string(),
            });
        }
        groups.insert(p, direct);
        generators.insert(p, gens);
    }
    let periodized = periodize_groups(&groups);
    Ok(HomologyResult {
        groups,
        generators,
        periodized,
    })
}

/// Integral homology read off the Smith forms of the adjacent boundaries:
/// free rank `dim C_p − rank D_p − rank D_{p+1}`, torsion the nonunit
/// diagonal entries of `D_{p+1}`.
pub fn integral_homology(c: &ConormalChainComplex, p: usize) -> FGAbelianGroup {
    if !c.degrees().any(|q| q == p) {
        return FGAbelianGroup::trivial();
    }
    let out = smith_normal_form(&c.boundary(p));
    let inc = smith_normal_form(&c.incoming(p));
    let free = c.rank(p) - out.rank() - inc.rank();
    FGAbelianGroup::from_cyclic_orders(
        std::iter::repeat_n(BigInt::zero(), free).chain(inc.diagonal()),
    )
}

/// `H_p(C; G) ≅ H_p(C; Z) ⊗ G ⊕ Tor(H_{p−1}(C; Z), G)`.
pub fn uct_homology(c: &ConormalChainComplex, p: usize) -> FGAbelianGroup {
    let g = c.coefficient();
    let hp = integral_homology(c, p);
    let hprev = if p == 0 {
        FGAbelianGroup::trivial()
    } else {
        integral_homology(c, p - 1)
    };
    abelian::tensor(&hp, g).direct_sum(&abelian::tor(&hprev, g))
}

fn periodize_groups(groups: &BTreeMap<usize, FGAbelianGroup>) -> (FGAbelianGroup, FGAbelianGroup) {
    let even = FGAbelianGroup::sum_all(groups.iter().filter(|(p, _)| *p % 2 == 0).map(|(_, g)| g));
    let odd = FGAbelianGroup::sum_all(groups.iter().filter(|(p, _)| *p % 2 == 1).map(|(_, g)| g));
    (even, odd)
}

/// `(H_0^pcn, H_1^pcn)`: direct sums of the even and odd degree groups.
pub fn periodize(h: &HomologyResult) -> (FGAbelianGroup, FGAbelianGroup) {
    periodize_groups(&h.groups)
}
