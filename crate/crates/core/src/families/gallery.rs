//! Hand-built example families.
//!
//! Fibers are `[-1, 1]` and `[-1, 1]^2`. Hypersurface `1` is `{y_1 = 1}`,
//! `2` is `{y_1 = -1}`, `3` is `{y_2 = 1}`, `4` is `{y_2 = -1}`; edge `e<h>`
//! lies on hypersurface `h` and corner `c<a><b>` on `a` and `b`.

use crate::faces::{Face, FacePoset, Hypersurface};

use super::{FamilyError, FamilySpec, FiberAutomorphism};

const NAMES: [&str; 5] = [
    "trivial_interval",
    "trivial_square",
    "mobius",
    "half_twist_square",
    "quarter_twist_square",
];

pub fn gallery_names() -> &'static [&'static str] {
    &NAMES
}

pub(crate) fn interval() -> FacePoset {
    FacePoset::new(
        vec![Hypersurface::from("1"), Hypersurface::from("2")],
        vec![
            Face::interior("X"),
            Face::new("e1", &["1"], &[("1", "X")]),
            Face::new("e2", &["2"], &[("2", "X")]),
        ],
        true,
    )
}

pub(crate) fn square() -> FacePoset {
    let mut faces = vec![Face::interior("X")];
    for h in ["1", "2", "3", "4"] {
        faces.push(Face::new(format!("e{h}"), &[h], &[(h, "X")]));
    }
    for (a, b) in [("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")] {
        faces.push(Face::new(
            format!("c{a}{b}"),
            &[a, b],
            &[(a, format!("e{b}")), (b, format!("e{a}"))],
        ));
    }
    FacePoset::new(
        ["1", "2", "3", "4"].map(Hypersurface::from).to_vec(),
        faces,
        true,
    )
}

pub fn gallery(name: &str) -> Result<FamilySpec, FamilyError> {
    let spec = match name {
        "trivial_interval" => FamilySpec {
            fiber: interval(),
            generators: vec![],
            base_label: "S^1".into(),
        },
        "trivial_square" => FamilySpec {
            fiber: square(),
            generators: vec![],
            base_label: "S^1".into(),
        },
        // y -> -y
        "mobius" => FamilySpec {
            fiber: interval(),
            generators: vec![FiberAutomorphism::from_pairs(
                &[("X", "X"), ("e1", "e2"), ("e2", "e1")],
                &[("1", "2"), ("2", "1")],
            )],
            base_label: "S^1".into(),
        },
        // (y1, y2) -> (-y1, -y2)
        "half_twist_square" => FamilySpec {
            fiber: square(),
            generators: vec![FiberAutomorphism::from_pairs(
                &[
                    ("X", "X"),
                    ("e1", "e2"),
                    ("e2", "e1"),
                    ("e3", "e4"),
                    ("e4", "e3"),
                    ("c13", "c24"),
                    ("c24", "c13"),
                    ("c14", "c23"),
                    ("c23", "c14"),
                ],
                &[("1", "2"), ("2", "1"), ("3", "4"), ("4", "3")],
            )],
            base_label: "S^1".into(),
        },
        // (y1, y2) -> (-y2, y1)
        "quarter_twist_square" => FamilySpec {
            fiber: square(),
            generators: vec![FiberAutomorphism::from_pairs(
                &[
                    ("X", "X"),
                    ("e1", "e3"),
                    ("e3", "e2"),
                    ("e2", "e4"),
                    ("e4", "e1"),
                    ("c13", "c23"),
                    ("c23", "c24"),
                    ("c24", "c14"),
                    ("c14", "c13"),
                ],
                &[("1", "3"), ("3", "2"), ("2", "4"), ("4", "1")],
            )],
            base_label: "S^1".into(),
        },
        other => {
            return Err(FamilyError::UnknownGallery {
                name: other.to_string(),
                available: NAMES.iter().map(ToString::to_string).collect(),
            })
        }
    };
    Ok(spec)
}
