use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::AbelianError;

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t` in
/// invariant-factor form: every `d_j ≥ 2` and `d_j | d_{j+1}`.
///
/// Construction always normalizes, so structural equality is group
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FGAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn integers() -> Self {
        Self::free(1)
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z/n`, with `Z/0 = Z` and `Z/1 = 0`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders([n.into()])
    }

    /// Accepts an already-canonical description, rejecting anything that is
    /// not a divisibility chain of integers `≥ 2`.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, AbelianError> {
        if torsion.iter().any(|d| d < &BigInt::from(2)) {
            return Err(AbelianError::NonCanonical(
                "invariant factors must be at least 2".into(),
            ));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(AbelianError::NonCanonical(
                "invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(FGAbelianGroup { rank, torsion })
    }

    /// Direct sum of cyclic groups `Z/n_i` (order 0 meaning `Z`) brought into
    /// invariant-factor form.
    pub fn from_cyclic_orders<I>(orders: I) -> Self
    where
        I: IntoIterator<Item = BigInt>,
    {
        let mut rank = 0;
        let mut finite = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                rank += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        FGAbelianGroup {
            rank,
            torsion: invariant_factors(finite),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn num_summands(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Moduli of the canonical cyclic summands: `rank` zeros (for `Z`)
    /// followed by the invariant factors.
    pub fn summand_moduli(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        Self::from_cyclic_orders(
            self.summand_moduli()
                .into_iter()
                .chain(other.summand_moduli()),
        )
    }

    pub fn power(&self, n: usize) -> FGAbelianGroup {
        let moduli = self.summand_moduli();
        Self::from_cyclic_orders((0..n).flat_map(|_| moduli.iter().cloned()))
    }

    pub fn sum_all<'a, I>(groups: I) -> FGAbelianGroup
    where
        I: IntoIterator<Item = &'a FGAbelianGroup>,
    {
        Self::from_cyclic_orders(groups.into_iter().flat_map(|g| g.summand_moduli()))
    }
}

/// Reduces a list of positive cyclic orders to an invariant-factor chain by
/// repeated `(a, b) -> (gcd, lcm)` exchanges.
fn invariant_factors(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = xs[i].gcd(&xs[j]);
            let l = xs[i].lcm(&xs[j]);
            xs[i] = g;
            xs[j] = l;
        }
    }
    xs.retain(|d| !d.is_one());
    xs
}

impl Default for FGAbelianGroup {
    fn default() -> Self {
        Self::trivial()
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the coefficient mini-language `Z^r + Z/d + Z/d' + …`.
///
/// Whitespace is ignored; `Z` alone means `Z^1` and `0` is the trivial
/// group. `Z/0` and negative moduli are rejected.
impl FromStr for FGAbelianGroup {
    type Err = AbelianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(AbelianError::Parse("empty group description".into()));
        }
        let mut orders = Vec::new();
        for term in compact.split('+') {
            if term == "0" {
                continue;
            }
            let bad = || AbelianError::Parse(format!("cannot parse summand `{term}`"));
            let rest = term.strip_prefix('Z').ok_or_else(bad)?;
            if rest.is_empty() {
                orders.push(BigInt::zero());
            } else if let Some(exp) = rest.strip_prefix('^') {
                let r: usize = exp.parse().map_err(|_| bad())?;
                orders.extend(std::iter::repeat_n(BigInt::zero(), r));
            } else if let Some(modulus) = rest.strip_prefix('/') {
                if modulus.starts_with('-') || modulus.starts_with('+') {
                    return Err(bad());
                }
                let d: BigInt = modulus.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(AbelianError::Parse(
                        "Z/0 is not a valid torsion summand (write Z)".into(),
                    ));
                }
                orders.push(d);
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(orders))
    }
}

/// An element of a [`FGAbelianGroup`], stored in canonical coordinates with
/// every torsion coordinate reduced into `[0, d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    parent: FGAbelianGroup,
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(
        parent: &FGAbelianGroup,
        free: Vec<BigInt>,
        torsion: Vec<BigInt>,
    ) -> Result<Self, AbelianError> {
        if free.len() != parent.rank {
            return Err(AbelianError::DimensionMismatch {
                expected: parent.rank,
                found: free.len(),
            });
        }
        if torsion.len() != parent.torsion.len() {
            return Err(AbelianError::DimensionMismatch {
                expected: parent.torsion.len(),
                found: torsion.len(),
            });
        }
        let torsion = torsion
            .into_iter()
            .zip(&parent.torsion)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        Ok(GroupElement {
            parent: parent.clone(),
            free,
            torsion,
        })
    }

    pub fn zero(parent: &FGAbelianGroup) -> Self {
        GroupElement {
            parent: parent.clone(),
            free: vec![BigInt::zero(); parent.rank],
            torsion: vec![BigInt::zero(); parent.torsion.len()],
        }
    }

    /// Builds an element from one coordinate per canonical summand (free
    /// summands first), reducing torsion coordinates.
    pub fn from_coords(parent: &FGAbelianGroup, coords: &[BigInt]) -> Result<Self, AbelianError> {
        if coords.len() != parent.num_summands() {
            return Err(AbelianError::DimensionMismatch {
                expected: parent.num_summands(),
                found: coords.len(),
            });
        }
        let (free, torsion) = coords.split_at(parent.rank);
        Self::new(parent, free.to_vec(), torsion.to_vec())
    }

    pub fn parent(&self) -> &FGAbelianGroup {
        &self.parent
    }

    pub fn free_coords(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[BigInt] {
        &self.torsion
    }

    /// One coordinate per canonical summand, free summands first.
    pub fn coords(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }

    pub fn coord(&self, summand: usize) -> &BigInt {
        if summand < self.free.len() {
            &self.free[summand]
        } else {
            &self.torsion[summand - self.free.len()]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, AbelianError> {
        if self.parent != other.parent {
            return Err(AbelianError::ParentMismatch);
        }
        let coords: Vec<BigInt> = self
            .coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_coords(&self.parent, &coords)
    }

    pub fn negate(&self) -> GroupElement {
        let coords: Vec<BigInt> = self.coords().iter().map(|a| -a).collect();
        Self::from_coords(&self.parent, &coords).expect("same shape")
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.add(&other.negate())
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let coords: Vec<BigInt> = self.coords().iter().map(|a| a * k).collect();
        Self::from_coords(&self.parent, &coords).expect("same shape")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords().iter().map(ToString::to_string).collect();
        write!(f, "({})", coords.join(", "))
    }
}
