//! Combinatorial model of a manifold with embedded corners.
//!
//! A face of codimension `p` is tagged by the strictly increasing tuple of
//! the `p` boundary hypersurfaces containing it, and knows, for each of
//! those hypersurfaces, the unique codimension `p − 1` face obtained by
//! dropping it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Opaque face identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub String);

/// Opaque boundary-hypersurface identifier. The lexicographic order on
/// these strings is the global order used to sort index tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypersurface(pub String);

macro_rules! string_newtype {
    ($t:ident) => {
        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_string())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }
    };
}

string_newtype!(FaceId);
string_newtype!(Hypersurface);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub codim: usize,
    pub index: Vec<Hypersurface>,
    pub parents: BTreeMap<Hypersurface, FaceId>,
}

impl Face {
    /// Codimension-0 face with empty index tuple.
    pub fn interior(id: impl Into<FaceId>) -> Self {
        Face {
            id: id.into(),
            codim: 0,
            index: Vec::new(),
            parents: BTreeMap::new(),
        }
    }

    /// Face with the given index tuple; `parents` pairs each hypersurface
    /// with the face reached by dropping it.
    pub fn new<H, P>(id: impl Into<FaceId>, index: &[H], parents: &[(H, P)]) -> Self
    where
        H: Into<Hypersurface> + Clone,
        P: Into<FaceId> + Clone,
    {
        Face {
            id: id.into(),
            codim: index.len(),
            index: index.iter().cloned().map(Into::into).collect(),
            parents: parents
                .iter()
                .cloned()
                .map(|(h, p)| (h.into(), p.into()))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    DuplicateFaceId,
    DuplicateHypersurface,
    UnknownHypersurface,
    CodimMismatch,
    DuplicateIndex,
    UnsortedTuple,
    MissingInterior,
    MultipleInterior,
    MissingParent,
    ExtraParent,
    UnknownParent,
    ParentMismatch,
    NonCommutingParents,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::DuplicateFaceId => "duplicate-face-id",
            ViolationKind::DuplicateHypersurface => "duplicate-hypersurface",
            ViolationKind::UnknownHypersurface => "unknown-hypersurface",
            ViolationKind::CodimMismatch => "codim-mismatch",
            ViolationKind::DuplicateIndex => "duplicate-index",
            ViolationKind::UnsortedTuple => "unsorted-tuple",
            ViolationKind::MissingInterior => "missing-interior",
            ViolationKind::MultipleInterior => "multiple-interior",
            ViolationKind::MissingParent => "missing-parent",
            ViolationKind::ExtraParent => "extra-parent",
            ViolationKind::UnknownParent => "unknown-parent",
            ViolationKind::ParentMismatch => "parent-mismatch",
            ViolationKind::NonCommutingParents => "non-commuting-parents",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A broken poset rule, naming the face it was found on when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub face: Option<FaceId>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.face {
            Some(id) => write!(f, "{} at face {}: {}", self.kind, id, self.detail),
            None => write!(f, "{}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceError {
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("codimension mismatch: face {f} has codim {f_codim}, face {g} has codim {g_codim}")]
    CodimMismatch {
        f: FaceId,
        f_codim: usize,
        g: FaceId,
        g_codim: usize,
    },
    #[error("filtration level {level} outside [-1, {max}]")]
    LevelOutOfRange { level: i64, max: i64 },
    #[error("invalid filtered pair: need -1 <= low ({low}) <= high ({high}) <= {max}")]
    InvalidPair { low: i64, high: i64, max: i64 },
    #[error("poset fails validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Face structure of a manifold with embedded corners.
///
/// Faces are stored in insertion order; within each codimension that order
/// is the chain basis order used by the conormal complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    hypersurfaces: Vec<Hypersurface>,
    faces: Vec<Face>,
    connected: bool,
    lookup: HashMap<FaceId, usize>,
}

impl FacePoset {
    /// Assembles a poset without checking it; run [`FacePoset::validate`]
    /// before relying on any invariant. Later duplicates of a face id are
    /// unreachable by lookup.
    pub fn new(hypersurfaces: Vec<Hypersurface>, faces: Vec<Face>, connected: bool) -> Self {
        let mut lookup = HashMap::with_capacity(faces.len());
        for (i, f) in faces.iter().enumerate() {
            lookup.entry(f.id.clone()).or_insert(i);
        }
        FacePoset {
            hypersurfaces,
            faces,
            connected,
            lookup,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new(), false)
    }

    pub fn hypersurfaces(&self) -> &[Hypersurface] {
        &self.hypersurfaces
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn face(&self, id: &FaceId) -> Option<&Face> {
        self.lookup.get(id).map(|&i| &self.faces[i])
    }

    pub fn position(&self, id: &FaceId) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    /// Faces of codimension `p` in basis order.
    pub fn faces_of_codim(&self, p: usize) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.codim == p).collect()
    }

    pub fn count_of_codim(&self, p: usize) -> usize {
        self.faces.iter().filter(|f| f.codim == p).count()
    }

    /// Codimension `d` of the poset (maximal face codimension), `-1` when
    /// there are no faces.
    pub fn codim(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| f.codim as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Checks every structural rule of an embedded-corner face poset and
    /// lists what is broken. An empty list means the poset is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |face: Option<&FaceId>, kind, detail: String| {
            out.push(Violation {
                face: face.cloned(),
                kind,
                detail,
            })
        };

        let mut seen_h = BTreeSet::new();
        for h in &self.hypersurfaces {
            if !seen_h.insert(h) {
                push(
                    None,
                    ViolationKind::DuplicateHypersurface,
                    format!("hypersurface {h} listed twice"),
                );
            }
        }
        let mut seen_f = BTreeSet::new();
        for f in &self.faces {
            if !seen_f.insert(&f.id) {
                push(
                    Some(&f.id),
                    ViolationKind::DuplicateFaceId,
                    "face id used more than once".into(),
                );
            }
        }

        let interiors = self.count_of_codim(0);
        if interiors == 0 {
            push(
                None,
                ViolationKind::MissingInterior,
                "no codimension-0 face".into(),
            );
        } else if self.connected && interiors > 1 {
            push(
                None,
                ViolationKind::MultipleInterior,
                format!("connected poset has {interiors} codimension-0 faces"),
            );
        }

        for f in &self.faces {
            let id = Some(&f.id);
            if f.index.len() != f.codim {
                push(
                    id,
                    ViolationKind::CodimMismatch,
                    format!(
                        "codim {} but index tuple of length {}",
                        f.codim,
                        f.index.len()
                    ),
                );
            }
            for h in &f.index {
                if !seen_h.contains(h) {
                    push(
                        id,
                        ViolationKind::UnknownHypersurface,
                        format!("{h} is not a declared hypersurface"),
                    );
                }
            }
            let distinct: BTreeSet<_> = f.index.iter().collect();
            if distinct.len() != f.index.len() {
                push(
                    id,
                    ViolationKind::DuplicateIndex,
                    "index tuple repeats a hypersurface".into(),
                );
            } else if f.index.windows(2).any(|w| w[0] >= w[1]) {
                push(
                    id,
                    ViolationKind::UnsortedTuple,
                    "index tuple is not increasing".into(),
                );
            }

            for h in &f.index {
                if !f.parents.contains_key(h) {
                    push(
                        id,
                        ViolationKind::MissingParent,
                        format!("no parent for dropping {h}"),
                    );
                }
            }
            for (h, pid) in &f.parents {
                if !f.index.contains(h) {
                    push(
                        id,
                        ViolationKind::ExtraParent,
                        format!("parent keyed by {h}, which is not in the tuple"),
                    );
                    continue;
                }
                let Some(parent) = self.face(pid) else {
                    push(
                        id,
                        ViolationKind::UnknownParent,
                        format!("parent {pid} does not exist"),
                    );
                    continue;
                };
                let expected: Vec<&Hypersurface> = f.index.iter().filter(|x| *x != h).collect();
                let actual: Vec<&Hypersurface> = parent.index.iter().collect();
                if parent.codim + 1 != f.codim || expected != actual {
                    push(
                        id,
                        ViolationKind::ParentMismatch,
                        format!("parent {pid} for dropping {h} does not carry the remaining tuple"),
                    );
                }
            }
        }

        // dropping i then j must reach the same face as dropping j then i
        for f in self.faces.iter().filter(|f| f.codim >= 2) {
            for (a, ha) in f.index.iter().enumerate() {
                for hb in &f.index[a + 1..] {
                    let via_a = self.grandparent(f, ha, hb);
                    let via_b = self.grandparent(f, hb, ha);
                    if let (Some(x), Some(y)) = (via_a, via_b) {
                        if x != y {
                            push(
                                Some(&f.id),
                                ViolationKind::NonCommutingParents,
                                format!("dropping {ha},{hb} reaches {x} but {hb},{ha} reaches {y}"),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    fn grandparent(&self, f: &Face, first: &Hypersurface, second: &Hypersurface) -> Option<FaceId> {
        let p = self.face(f.parents.get(first)?)?;
        p.parents.get(second).cloned()
    }

    pub fn ensure_valid(&self) -> Result<(), FaceError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(FaceError::Invalid(v))
        }
    }

    /// Sub-poset `X_k` of faces with codimension at most `k`; `k = -1`
    /// yields the empty poset.
    pub fn filtration(&self, k: i64) -> Result<FacePoset, FaceError> {
        let d = self.codim();
        if k < -1 || k > d {
            return Err(FaceError::LevelOutOfRange { level: k, max: d });
        }
        let faces = self
            .faces
            .iter()
            .filter(|f| (f.codim as i64) <= k)
            .cloned()
            .collect();
        Ok(FacePoset::new(
            self.hypersurfaces.clone(),
            faces,
            self.connected && k >= 0,
        ))
    }

    /// Relative sign `σ(f, g)`: `(-1)^(k-1)` when `g` is the parent of `f`
    /// obtained by dropping the `k`-th (1-based) entry of `I_f`, else `0`.
    pub fn incidence_sign(&self, f: &FaceId, g: &FaceId) -> Result<i8, FaceError> {
        let ff = self
            .face(f)
            .ok_or_else(|| FaceError::UnknownFace(f.clone()))?;
        let gf = self
            .face(g)
            .ok_or_else(|| FaceError::UnknownFace(g.clone()))?;
        if ff.codim != gf.codim + 1 {
            return Err(FaceError::CodimMismatch {
                f: f.clone(),
                f_codim: ff.codim,
                g: g.clone(),
                g_codim: gf.codim,
            });
        }
        Ok(ff
            .index
            .iter()
            .position(|h| ff.parents.get(h) == Some(g))
            .map_or(0, |k| if k % 2 == 0 { 1 } else { -1 }))
    }
}

/// Filtration pair `(X_high, X_low)` with `-1 <= low <= high <= d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPair {
    base: FacePoset,
    low: i64,
    high: i64,
}

impl FilteredPair {
    pub fn new(base: FacePoset, low: i64, high: i64) -> Result<Self, FaceError> {
        let max = base.codim();
        if !(-1 <= low && low <= high && high <= max.max(-1)) {
            return Err(FaceError::InvalidPair { low, high, max });
        }
        Ok(FilteredPair { base, low, high })
    }

    /// The absolute pair `(X, ∅)`.
    pub fn absolute(base: FacePoset) -> Self {
        let d = base.codim();
        FilteredPair {
            base,
            low: -1,
            high: d,
        }
    }

    pub fn base(&self) -> &FacePoset {
        &self.base
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.high
    }

    /// Whether chains of codimension `p` survive in the relative complex.
    pub fn contains_degree(&self, p: i64) -> bool {
        self.low < p && p <= self.high
    }
}
