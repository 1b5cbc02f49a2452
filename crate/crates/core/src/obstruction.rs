//! Obstruction groups for the boundary index of families in codimension one
//! and two, and decision procedures for its vanishing given the face
//! indices of a symbol.
//!
//! The codimension-two extension `0 -> L -> M -> R -> 0` is only resolved
//! when it is forced: `M = R` when `L = 0`, and `M = L ⊕ R` when `R` is free
//! (a free quotient always splits). Otherwise the middle group is reported
//! as undetermined.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::abelian::{self, AbelianError, FGAbelianGroup, GroupElement, IntegerHom};
use crate::conormal::{build_complex, homology, incidence_matrix, ChainVector, ConormalError};
use crate::faces::{FaceError, FaceId, FacePoset, FilteredPair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("codimension {0} is outside the supported range 1..=2; the reduction does not extend to codimension 3 or more")]
    UnsupportedCodim(i64),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("malformed symbol datum: {0}")]
    MalformedDatum(String),
    #[error("degree {p} is outside 1..={max}")]
    DegreeOutOfRange { p: usize, max: i64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("computation cancelled")]
    Cancelled,
    #[error(transparent)]
    Conormal(#[from] ConormalError),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Cooperative cancellation flag shared between a caller and a running
/// computation.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }

    fn check(&self) -> Result<(), ObstructionError> {
        if self.is_cancelled() {
            Err(ObstructionError::Cancelled)
        } else {
            Ok(())
        }
    }
}

/// `K^0(B)` and `K^1(B)` of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryInput {
    pub k0: FGAbelianGroup,
    pub k1: FGAbelianGroup,
    pub label: String,
}

impl KTheoryInput {
    pub fn new(k0: FGAbelianGroup, k1: FGAbelianGroup, label: impl Into<String>) -> Self {
        KTheoryInput {
            k0,
            k1,
            label: label.into(),
        }
    }

    /// `K^0(pt) = Z`, `K^1(pt) = 0`.
    pub fn point() -> Self {
        Self::new(
            FGAbelianGroup::integers(),
            FGAbelianGroup::trivial(),
            "point",
        )
    }

    /// `K^0(S^1) = K^1(S^1) = Z`.
    pub fn circle() -> Self {
        Self::new(
            FGAbelianGroup::integers(),
            FGAbelianGroup::integers(),
            "S^1",
        )
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "point" => Some(Self::point()),
            "circle" => Some(Self::circle()),
            _ => None,
        }
    }

    /// `K^i(B)` for `i` read modulo 2.
    pub fn k(&self, i: usize) -> &FGAbelianGroup {
        if i.is_multiple_of(2) {
            &self.k0
        } else {
            &self.k1
        }
    }
}

/// Face-restricted family indices of an elliptic symbol: one element of
/// `K^0(B)` per corner and one of `K^1(B)` per boundary hypersurface face.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolDatum {
    pub codim2_indices: BTreeMap<FaceId, GroupElement>,
    pub codim1_indices: BTreeMap<FaceId, GroupElement>,
}

impl SymbolDatum {
    pub fn zero(poset: &FacePoset, k: &KTheoryInput) -> Self {
        let fill = |p: usize, g: &FGAbelianGroup| {
            poset
                .faces_of_codim(p)
                .into_iter()
                .map(|f| (f.id.clone(), GroupElement::zero(g)))
                .collect()
        };
        SymbolDatum {
            codim2_indices: fill(2, &k.k0),
            codim1_indices: fill(1, &k.k1),
        }
    }

    /// Checks that keys are exactly the faces of each codimension and that
    /// every entry lives in the matching K-group.
    pub fn check(&self, poset: &FacePoset, k: &KTheoryInput) -> Result<(), ObstructionError> {
        for (p, map, group) in [
            (2, &self.codim2_indices, &k.k0),
            (1, &self.codim1_indices, &k.k1),
        ] {
            let faces: Vec<&FaceId> = poset.faces_of_codim(p).into_iter().map(|f| &f.id).collect();
            for id in map.keys() {
                if !faces.contains(&id) {
                    return Err(ObstructionError::MalformedDatum(format!(
                        "'{id}' is not a codimension-{p} face"
                    )));
                }
            }
            for id in &faces {
                match map.get(*id) {
                    None => {
                        return Err(ObstructionError::MalformedDatum(format!(
                            "missing index for codimension-{p} face '{id}'"
                        )))
                    }
                    Some(e) if e.parent() != group => {
                        return Err(ObstructionError::MalformedDatum(format!(
                            "index of '{id}' lies in {}, expected {group}",
                            e.parent()
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    fn vector(&self, poset: &FacePoset, p: usize) -> Vec<GroupElement> {
        let map = if p == 2 {
            &self.codim2_indices
        } else {
            &self.codim1_indices
        };
        poset
            .faces_of_codim(p)
            .into_iter()
            .map(|f| map[&f.id].clone())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MiddleStatus {
    ExactSplits,
    LeftTrivial,
    UndeterminedExtension,
}

impl MiddleStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MiddleStatus::ExactSplits => "exact_splits",
            MiddleStatus::LeftTrivial => "left_trivial",
            MiddleStatus::UndeterminedExtension => "undetermined_extension",
        }
    }
}

/// `0 -> H_1^pcn(X, X_0; K^1 B) -> K_0(A_2/A_0) -> H_0^pcn(X, X_0; K^0 B) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub left: FGAbelianGroup,
    pub right: FGAbelianGroup,
    pub middle: Option<FGAbelianGroup>,
    pub middle_status: MiddleStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingVerdict {
    pub vanishes: bool,
    pub failing_codim2: Vec<FaceId>,
    /// Faces with a nonzero codimension-one index.
    pub failing_codim1: Vec<FaceId>,
    pub codim1_class_vanishes: bool,
    pub certificate: Option<ChainVector>,
}

/// Per-parity K-groups of the codimension-one filtration, `[K_0, K_1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codim1Groups {
    pub ka0: [FGAbelianGroup; 2],
    pub ka1_over_a0: [FGAbelianGroup; 2],
    pub ka1: [FGAbelianGroup; 2],
}

fn require_codim(poset: &FacePoset, d: i64) -> Result<(), ObstructionError> {
    let c = poset.codim();
    if c >= 3 {
        return Err(ObstructionError::UnsupportedCodim(c));
    }
    if c != d {
        return Err(ObstructionError::Hypothesis(format!(
            "expected codimension {d}, poset has codimension {c}"
        )));
    }
    Ok(())
}

fn require_connected(poset: &FacePoset) -> Result<(), ObstructionError> {
    if !poset.is_connected() || poset.count_of_codim(0) != 1 {
        return Err(ObstructionError::Hypothesis(
            "poset is not connected".into(),
        ));
    }
    Ok(())
}

/// `(H_0^pcn, H_1^pcn)` of the pair `(X_high, X_low)` over `G`.
fn pcn(
    poset: &FacePoset,
    low: i64,
    high: i64,
    g: &FGAbelianGroup,
) -> Result<(FGAbelianGroup, FGAbelianGroup), ObstructionError> {
    let pair = FilteredPair::new(poset.clone(), low, high)?;
    Ok(homology(&build_complex(&pair, g)?)?.periodized)
}

/// K-theory of `A_0`, `A_1/A_0` and `A_1` for a connected family with
/// boundary of codimension one, by closed formula, cross-checked against
/// periodized conormal homology.
pub fn codim1_groups(
    poset: &FacePoset,
    k: &KTheoryInput,
) -> Result<Codim1Groups, ObstructionError> {
    require_codim(poset, 1)?;
    require_connected(poset)?;
    let n0 = poset.count_of_codim(0);
    let n1 = poset.count_of_codim(1);
    if n1 == 0 {
        return Err(ObstructionError::Hypothesis(
            "poset has no boundary faces".into(),
        ));
    }
    let groups = Codim1Groups {
        ka0: [k.k(0).power(n0), k.k(1).power(n0)],
        ka1_over_a0: [k.k(1).power(n1), k.k(0).power(n1)],
        ka1: [k.k(1).power(n1 - 1), k.k(0).power(n1 - 1)],
    };
    for i in 0..2 {
        let checks = [
            ("K(A_0)", &groups.ka0[i], pcn(poset, -1, 0, k.k(i))?.0),
            (
                "K(A_1/A_0)",
                &groups.ka1_over_a0[i],
                pcn(poset, 0, 1, k.k(1 - i))?.1,
            ),
            ("K(A_1)", &groups.ka1[i], pcn(poset, -1, 1, k.k(1 - i))?.1),
        ];
        for (name, formula, computed) in checks {
            if *formula != computed {
                return Err(ObstructionError::Internal(format!(
                    "{name}_{i}: formula gives {formula}, homology gives {computed}"
                )));
            }
        }
    }
    Ok(groups)
}

/// The boundary index of a codimension-one family vanishes exactly when
/// every hypersurface index does.
pub fn codim1_vanishes(
    poset: &FacePoset,
    k: &KTheoryInput,
    s: &SymbolDatum,
) -> Result<VanishingVerdict, ObstructionError> {
    require_codim(poset, 1)?;
    s.check(poset, k)?;
    let failing: Vec<FaceId> = poset
        .faces_of_codim(1)
        .into_iter()
        .filter(|f| !s.codim1_indices[&f.id].is_zero())
        .map(|f| f.id.clone())
        .collect();
    Ok(VanishingVerdict {
        vanishes: failing.is_empty(),
        failing_codim2: Vec::new(),
        codim1_class_vanishes: failing.is_empty(),
        failing_codim1: failing,
        certificate: None,
    })
}

/// End groups of the codimension-two short exact sequence and, when forced,
/// its middle term.
pub fn codim2_obstruction_space(
    poset: &FacePoset,
    k: &KTheoryInput,
) -> Result<ObstructionReport, ObstructionError> {
    codim2_obstruction_space_cancellable(poset, k, &CancelToken::new())
}

pub fn codim2_obstruction_space_cancellable(
    poset: &FacePoset,
    k: &KTheoryInput,
    cancel: &CancelToken,
) -> Result<ObstructionReport, ObstructionError> {
    require_codim(poset, 2)?;
    require_connected(poset)?;
    cancel.check()?;
    let left = pcn(poset, 0, 2, &k.k1)?.1;
    cancel.check()?;
    let right = pcn(poset, 0, 2, &k.k0)?.0;
    let (middle, middle_status) = if left.is_trivial() {
        (Some(right.clone()), MiddleStatus::LeftTrivial)
    } else if right.is_free() {
        (Some(left.direct_sum(&right)), MiddleStatus::ExactSplits)
    } else {
        (None, MiddleStatus::UndeterminedExtension)
    };
    log::debug!(
        "codim-2 obstruction: left {left}, right {right}, status {}",
        middle_status.as_str()
    );
    Ok(ObstructionReport {
        left,
        right,
        middle,
        middle_status,
    })
}

/// Decides vanishing of the boundary index in codimension two: all corner
/// indices must vanish and the hypersurface indices, read as a relative
/// 1-chain over `K^1(B)`, must be a boundary. The certificate `c` satisfies
/// `∂_2 c = v` whenever the second condition holds.
pub fn codim2_vanishes(
    poset: &FacePoset,
    k: &KTheoryInput,
    s: &SymbolDatum,
) -> Result<VanishingVerdict, ObstructionError> {
    codim2_vanishes_cancellable(poset, k, s, &CancelToken::new())
}

pub fn codim2_vanishes_cancellable(
    poset: &FacePoset,
    k: &KTheoryInput,
    s: &SymbolDatum,
    cancel: &CancelToken,
) -> Result<VanishingVerdict, ObstructionError> {
    require_codim(poset, 2)?;
    s.check(poset, k)?;
    let failing_codim2: Vec<FaceId> = poset
        .faces_of_codim(2)
        .into_iter()
        .filter(|f| !s.codim2_indices[&f.id].is_zero())
        .map(|f| f.id.clone())
        .collect();
    let failing_codim1: Vec<FaceId> = poset
        .faces_of_codim(1)
        .into_iter()
        .filter(|f| !s.codim1_indices[&f.id].is_zero())
        .map(|f| f.id.clone())
        .collect();
    cancel.check()?;

    let pair = FilteredPair::new(poset.clone(), 0, 2)?;
    let complex = build_complex(&pair, &k.k1)?;
    let d2 = complex.boundary(2);
    let target = s.vector(poset, 1);
    let solution = abelian::solve(&d2, &k.k1, &target)?;
    cancel.check()?;

    let certificate = match solution {
        Some(coords) => {
            let c = complex.chain(2, coords)?;
            if complex.apply_boundary(&c)?.coords != target {
                return Err(ObstructionError::Internal(
                    "certificate does not verify".into(),
                ));
            }
            Some(c)
        }
        None => None,
    };
    let codim1_class_vanishes = certificate.is_some();
    Ok(VanishingVerdict {
        vanishes: failing_codim2.is_empty() && codim1_class_vanishes,
        failing_codim2,
        failing_codim1,
        codim1_class_vanishes,
        certificate,
    })
}

/// Matrix of the connecting map `⊕_{F_p} K^*(B) -> ⊕_{F_{p-1}} K^*(B)` of
/// the filtration, entry `(g, f)` the incidence sign `σ(f, g)`.
///
/// Assembled face pair by face pair and checked against the conormal
/// boundary `D_p`, which is the identification making the pairing commute.
pub fn connection_matrices(poset: &FacePoset, p: usize) -> Result<IntegerHom, ObstructionError> {
    let d = poset.codim();
    if p == 0 || p as i64 > d {
        return Err(ObstructionError::DegreeOutOfRange { p, max: d });
    }
    let sources = poset.faces_of_codim(p);
    let targets = poset.faces_of_codim(p - 1);
    let mut m = IntegerHom::zero(targets.len(), sources.len());
    for (j, f) in sources.iter().enumerate() {
        for (i, g) in targets.iter().enumerate() {
            m.set(i, j, poset.incidence_sign(&f.id, &g.id)?.into());
        }
    }
    let pair = FilteredPair::new(poset.clone(), p as i64 - 2, p as i64)?;
    let boundary = build_complex(&pair, &FGAbelianGroup::integers())?.boundary(p);
    if m != boundary || m != incidence_matrix(poset, p) {
        return Err(ObstructionError::Internal(format!(
            "connection matrix in degree {p} differs from the conormal boundary"
        )));
    }
    Ok(m)
}
