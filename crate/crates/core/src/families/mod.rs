//! Families of manifolds with embedded corners, seen through their monodromy.
//!
//! Only the permutation action of the monodromy generators on fiber faces
//! and hypersurfaces enters: the total-space face poset is the orbit poset
//! of the group they generate.

mod gallery;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::faces::{Face, FaceId, FacePoset, Hypersurface, Violation};

pub use gallery::{gallery, gallery_names};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("fiber poset is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidFiber(Vec<Violation>),
    #[error("generator {generator} is not a fiber automorphism: {reason}")]
    BadGenerator { generator: usize, reason: String },
    #[error("unknown gallery entry `{name}`; available: {}", .available.join(", "))]
    UnknownGallery {
        name: String,
        available: Vec<String>,
    },
}

/// Combinatorial shadow of an oriented fiber automorphism: a bijection on
/// faces together with the hypersurface permutation it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberAutomorphism {
    pub face_map: BTreeMap<FaceId, FaceId>,
    pub hypersurface_map: BTreeMap<Hypersurface, Hypersurface>,
}

impl FiberAutomorphism {
    pub fn identity(fiber: &FacePoset) -> Self {
        FiberAutomorphism {
            face_map: fiber
                .faces()
                .iter()
                .map(|f| (f.id.clone(), f.id.clone()))
                .collect(),
            hypersurface_map: fiber
                .hypersurfaces()
                .iter()
                .map(|h| (h.clone(), h.clone()))
                .collect(),
        }
    }

    pub fn from_pairs(faces: &[(&str, &str)], hypersurfaces: &[(&str, &str)]) -> Self {
        FiberAutomorphism {
            face_map: faces.iter().map(|&(a, b)| (a.into(), b.into())).collect(),
            hypersurface_map: hypersurfaces
                .iter()
                .map(|&(a, b)| (a.into(), b.into()))
                .collect(),
        }
    }

    pub fn apply_face<'a>(&'a self, f: &'a FaceId) -> &'a FaceId {
        self.face_map.get(f).unwrap_or(f)
    }

    pub fn apply_hypersurface<'a>(&'a self, h: &'a Hypersurface) -> &'a Hypersurface {
        self.hypersurface_map.get(h).unwrap_or(h)
    }

    /// Checks that this is an automorphism of `fiber`: both maps are
    /// bijections, tuples are carried to tuples up to the hypersurface
    /// permutation, and parents commute with the action.
    pub fn check(&self, fiber: &FacePoset) -> Result<(), String> {
        let face_ids: BTreeSet<&FaceId> = fiber.faces().iter().map(|f| &f.id).collect();
        let hyps: BTreeSet<&Hypersurface> = fiber.hypersurfaces().iter().collect();

        let dom: BTreeSet<&FaceId> = self.face_map.keys().collect();
        let img: BTreeSet<&FaceId> = self.face_map.values().collect();
        if dom != face_ids || img != face_ids {
            return Err("face map is not a bijection of the fiber faces".into());
        }
        let hdom: BTreeSet<&Hypersurface> = self.hypersurface_map.keys().collect();
        let himg: BTreeSet<&Hypersurface> = self.hypersurface_map.values().collect();
        if hdom != hyps || himg != hyps {
            return Err("hypersurface map is not a bijection of the fiber hypersurfaces".into());
        }

        for f in fiber.faces() {
            let image = fiber
                .face(self.apply_face(&f.id))
                .expect("bijection checked");
            if image.codim != f.codim {
                return Err(format!(
                    "{} and its image {} differ in codimension",
                    f.id, image.id
                ));
            }
            let moved: BTreeSet<&Hypersurface> =
                f.index.iter().map(|h| self.apply_hypersurface(h)).collect();
            let target: BTreeSet<&Hypersurface> = image.index.iter().collect();
            if moved != target {
                return Err(format!(
                    "tuple of {} is not carried onto the tuple of its image {}",
                    f.id, image.id
                ));
            }
            for (h, parent) in &f.parents {
                let lhs = self.apply_face(parent);
                let rhs = image.parents.get(self.apply_hypersurface(h));
                if rhs != Some(lhs) {
                    return Err(format!(
                        "parent of {} across {} is not carried to the matching parent of {}",
                        f.id, h, image.id
                    ));
                }
            }
        }
        Ok(())
    }

    /// Order of the permutation on faces and hypersurfaces.
    pub fn order(&self) -> BigInt {
        fn cycle_lcm<K: Ord + Clone>(map: &BTreeMap<K, K>) -> BigInt {
            let mut seen = BTreeSet::new();
            let mut acc = BigInt::from(1);
            for start in map.keys() {
                if seen.contains(start) {
                    continue;
                }
                let mut len = 0u64;
                let mut cur = start.clone();
                loop {
                    seen.insert(cur.clone());
                    len += 1;
                    cur = map.get(&cur).cloned().unwrap_or_else(|| cur.clone());
                    if &cur == start || seen.contains(&cur) {
                        break;
                    }
                }
                acc = acc.lcm(&BigInt::from(len));
            }
            acc
        }
        cycle_lcm(&self.face_map).lcm(&cycle_lcm(&self.hypersurface_map))
    }
}

/// Fiber face poset together with monodromy generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub fiber: FacePoset,
    pub generators: Vec<FiberAutomorphism>,
    pub base_label: String,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<(), FamilyError> {
        let v = self.fiber.validate();
        if !v.is_empty() {
            return Err(FamilyError::InvalidFiber(v));
        }
        for (i, g) in self.generators.iter().enumerate() {
            g.check(&self.fiber)
                .map_err(|reason| FamilyError::BadGenerator {
                    generator: i,
                    reason,
                })?;
        }
        Ok(())
    }
}

/// Orbit data of a family: the total face structure and where each fiber
/// face and hypersurface went.
///
/// When the family is not globally embeddable some total index tuples
/// repeat a hypersurface; such a `total` fails [`FacePoset::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientResult {
    pub total: FacePoset,
    pub orbit_map: BTreeMap<FaceId, FaceId>,
    pub hypersurface_orbit_map: BTreeMap<Hypersurface, Hypersurface>,
}

impl QuotientResult {
    /// Sizes of the total face sets by codimension.
    pub fn orbit_counts(&self) -> Vec<usize> {
        let d = self.total.codim();
        (0..=d.max(-1))
            .map(|p| self.total.count_of_codim(p as usize))
            .collect()
    }
}

/// Orbits of a set of elements under a list of permutations, by closure.
/// Orbits are labeled by their first element in `elements` order.
fn orbits<K, F>(elements: &[K], generators: usize, step: F) -> BTreeMap<K, K>
where
    K: Ord + Clone,
    F: Fn(usize, &K) -> K,
{
    let mut label: BTreeMap<K, K> = BTreeMap::new();
    for e in elements {
        if label.contains_key(e) {
            continue;
        }
        let mut queue = vec![e.clone()];
        label.insert(e.clone(), e.clone());
        while let Some(x) = queue.pop() {
            for g in 0..generators {
                let y = step(g, &x);
                if !label.contains_key(&y) {
                    label.insert(y.clone(), e.clone());
                    queue.push(y);
                }
            }
        }
    }
    label
}

/// Quotients the fiber face poset by the monodromy group.
pub fn quotient_family(spec: &FamilySpec) -> Result<QuotientResult, FamilyError> {
    spec.validate()?;
    let fiber = &spec.fiber;
    let gens = &spec.generators;

    let face_ids: Vec<FaceId> = fiber.faces().iter().map(|f| f.id.clone()).collect();
    let orbit_map = orbits(&face_ids, gens.len(), |g, f| gens[g].apply_face(f).clone());

    let mut hyps: Vec<Hypersurface> = fiber.hypersurfaces().to_vec();
    hyps.sort();
    let hypersurface_orbit_map = orbits(&hyps, gens.len(), |g, h| {
        gens[g].apply_hypersurface(h).clone()
    });

    let mut total_hyps: Vec<Hypersurface> = hypersurface_orbit_map.values().cloned().collect();
    total_hyps.sort();
    total_hyps.dedup();

    let mut total_faces = Vec::new();
    for f in fiber.faces() {
        if orbit_map[&f.id] != f.id {
            continue;
        }
        let mut index: Vec<Hypersurface> = f
            .index
            .iter()
            .map(|h| hypersurface_orbit_map[h].clone())
            .collect();
        index.sort();
        let mut parents = BTreeMap::new();
        for (h, p) in &f.parents {
            parents
                .entry(hypersurface_orbit_map[h].clone())
                .or_insert_with(|| orbit_map[p].clone());
        }
        total_faces.push(Face {
            id: f.id.clone(),
            codim: f.codim,
            index,
            parents,
        });
    }
    let interiors = total_faces.iter().filter(|f| f.codim == 0).count();
    let total = FacePoset::new(total_hyps, total_faces, interiors == 1);
    log::debug!(
        "quotient: {} fiber faces -> {} total faces",
        fiber.faces().len(),
        total.faces().len()
    );
    Ok(QuotientResult {
        total,
        orbit_map,
        hypersurface_orbit_map,
    })
}

/// Outcome of the global embeddability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddabilityVerdict {
    pub embeddable: bool,
    pub witness: Option<FaceId>,
    /// The total poset with strictly increasing tuples, when embeddable.
    pub poset: Option<FacePoset>,
}

/// A total face of codimension `p` must meet `p` distinct total
/// hypersurfaces; a face cut out twice by one hypersurface orbit means that
/// hypersurface would have to self-intersect.
pub fn check_embeddable(q: &QuotientResult) -> EmbeddabilityVerdict {
    let witness = q
        .total
        .faces()
        .iter()
        .find(|f| f.index.windows(2).any(|w| w[0] == w[1]))
        .map(|f| f.id.clone());
    match witness {
        Some(w) => EmbeddabilityVerdict {
            embeddable: false,
            witness: Some(w),
            poset: None,
        },
        None => EmbeddabilityVerdict {
            embeddable: true,
            witness: None,
            poset: Some(q.total.clone()),
        },
    }
}
