use std::path::{Path, PathBuf};

use corner_index::abelian::FGAbelianGroup;
use corner_index::conormal::{build_complex, homology};
use corner_index::faces::{FaceId, FacePoset, FilteredPair};
use corner_index::families::{check_embeddable, gallery, quotient_family, FamilyError, FamilySpec};
use corner_index::obstruction::{
    codim1_groups, codim1_vanishes, codim2_obstruction_space, codim2_vanishes, KTheoryInput,
    ObstructionError,
};
use serde_json::{json, Value};

use crate::documents::{self, expect_kind, int_value, read_document, Document};
use crate::report;
use crate::CliError;

/// Results of one command, and the exit code it asks for.
pub struct Outcome {
    pub results: Value,
    pub exit: i32,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome { results, exit: 0 }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn obstruction_error(e: ObstructionError) -> CliError {
    match e {
        ObstructionError::UnsupportedCodim(_) => CliError::Unsupported(e.to_string()),
        other => domain(other),
    }
}

fn read_poset_or_family(path: &Path) -> Result<FacePoset, CliError> {
    let doc = read_document(path)?;
    expect_kind(&doc, path, &["poset", "family"])?;
    match doc {
        Document::Poset(p) => Ok(p),
        Document::Family(spec) => total_poset(&spec),
        _ => unreachable!("kind checked"),
    }
}

fn total_poset(spec: &FamilySpec) -> Result<FacePoset, CliError> {
    let q = quotient_family(spec).map_err(domain)?;
    let v = check_embeddable(&q);
    v.poset.ok_or_else(|| {
        domain(format!(
            "family is not globally embeddable (face {} meets a hypersurface twice)",
            v.witness.map(|w| w.0).unwrap_or_default()
        ))
    })
}

fn require_valid(poset: &FacePoset) -> Result<(), CliError> {
    let v = poset.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(domain(format!(
            "poset is invalid: {}",
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        )))
    }
}

pub fn validate(path: &Path) -> Result<Outcome, CliError> {
    let doc = read_document(path)?;
    expect_kind(&doc, path, &["poset", "family"])?;
    let (violations, errors) = match &doc {
        Document::Poset(p) => (p.validate(), Vec::new()),
        Document::Family(spec) => match spec.validate() {
            Ok(()) => (Vec::new(), Vec::new()),
            Err(FamilyError::InvalidFiber(v)) => (v, Vec::new()),
            Err(e) => (Vec::new(), vec![e.to_string()]),
        },
        _ => unreachable!("kind checked"),
    };
    let valid = violations.is_empty() && errors.is_empty();
    Ok(Outcome {
        results: json!({
            "kind": doc.kind(),
            "valid": valid,
            "violations": report::violations(&violations),
            "errors": errors,
        }),
        exit: if valid { 0 } else { 1 },
    })
}

pub fn homology_cmd(
    path: &Path,
    pair: Option<(i64, i64)>,
    coeff: &FGAbelianGroup,
) -> Result<Outcome, CliError> {
    let poset = read_poset_or_family(path)?;
    require_valid(&poset)?;
    let (low, high) = pair.unwrap_or((-1, poset.codim()));
    let pair = FilteredPair::new(poset, low, high).map_err(domain)?;
    let complex = build_complex(&pair, coeff).map_err(domain)?;
    let h = homology(&complex).map_err(domain)?;
    let degrees: Vec<Value> = complex
        .degrees()
        .map(|p| {
            let basis = complex.basis(p);
            json!({
                "degree": p,
                "basis": report::ids(basis),
                "group": report::group(&h.group(p)),
                "generators": h.generators[&p]
                    .iter()
                    .map(|g| json!({"order": int_value(&g.order), "cycle": report::chain(basis, &g.cycle)}))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "pair": {"low": low, "high": high},
        "coefficient": report::group(coeff),
        "degrees": degrees,
        "periodized": {"H0": report::group(&h.periodized.0), "H1": report::group(&h.periodized.1)},
    })))
}

pub fn family(path: &Path, check: bool) -> Result<Outcome, CliError> {
    let doc = read_document(path)?;
    expect_kind(&doc, path, &["family"])?;
    let Document::Family(spec) = doc else {
        unreachable!("kind checked")
    };
    spec.validate().map_err(domain)?;
    let q = quotient_family(&spec).map_err(domain)?;
    let mut results = json!({
        "base": spec.base_label,
        "generators": spec.generators.iter().map(|g| json!({"order": int_value(&g.order())})).collect::<Vec<_>>(),
        "orbit_counts": q.orbit_counts(),
        "orbit_map": q.orbit_map.iter().map(|(f, o)| (f.0.clone(), Value::from(o.as_str()))).collect::<serde_json::Map<_, _>>(),
        "hypersurface_orbit_map": q.hypersurface_orbit_map.iter().map(|(h, o)| (h.0.clone(), Value::from(o.as_str()))).collect::<serde_json::Map<_, _>>(),
        "total": serde_json::to_value(documents::PosetDoc::from_poset(&q.total)).expect("serializable"),
    });
    if check {
        let v = check_embeddable(&q);
        let fields = results.as_object_mut().expect("object");
        fields.insert("embeddable".into(), v.embeddable.into());
        fields.insert(
            "witness".into(),
            v.witness.as_ref().map(FaceId::as_str).into(),
        );
        if let Some(p) = &v.poset {
            fields.insert("total_violations".into(), report::violations(&p.validate()));
        }
    }
    Ok(Outcome::ok(results))
}

pub fn obstruction(
    poset_path: &Path,
    k_path: &Path,
    symbol_path: Option<&Path>,
) -> Result<Outcome, CliError> {
    let poset = read_poset_or_family(poset_path)?;
    let kdoc = read_document(k_path)?;
    expect_kind(&kdoc, k_path, &["ktheory"])?;
    let Document::KTheory(k) = kdoc else {
        unreachable!("kind checked")
    };
    let symbol = match symbol_path {
        Some(sp) => {
            let doc = read_document(sp)?;
            expect_kind(&doc, sp, &["symbol"])?;
            let Document::Symbol(s) = doc else {
                unreachable!("kind checked")
            };
            Some(s.into_datum(&k)?)
        }
        None => None,
    };

    let d = poset.codim();
    if !(1..=2).contains(&d) {
        return Err(obstruction_error(ObstructionError::UnsupportedCodim(d)));
    }
    require_valid(&poset)?;
    let mut results = json!({"codim": d, "ktheory": ktheory(&k)});
    let fields = results.as_object_mut().expect("object");
    if d == 1 {
        let g = codim1_groups(&poset, &k).map_err(obstruction_error)?;
        let pair = |x: &[FGAbelianGroup; 2]| json!([report::group(&x[0]), report::group(&x[1])]);
        fields.insert(
            "groups".into(),
            json!({"KA0": pair(&g.ka0), "KA1_over_A0": pair(&g.ka1_over_a0), "KA1": pair(&g.ka1)}),
        );
        if let Some(s) = &symbol {
            let v = codim1_vanishes(&poset, &k, s).map_err(obstruction_error)?;
            fields.insert("verdict".into(), report::verdict(&v, &[]));
        }
    } else {
        let r = codim2_obstruction_space(&poset, &k).map_err(obstruction_error)?;
        fields.insert(
            "report".into(),
            json!({
                "left": report::group(&r.left),
                "right": report::group(&r.right),
                "middle": r.middle.as_ref().map(report::group),
                "middle_status": r.middle_status.as_str(),
            }),
        );
        if let Some(s) = &symbol {
            let v = codim2_vanishes(&poset, &k, s).map_err(obstruction_error)?;
            let basis: Vec<FaceId> = poset
                .faces_of_codim(2)
                .into_iter()
                .map(|f| f.id.clone())
                .collect();
            fields.insert("verdict".into(), report::verdict(&v, &basis));
        }
    }
    Ok(Outcome::ok(results))
}

fn ktheory(k: &KTheoryInput) -> Value {
    json!({"label": k.label, "k0": report::group(&k.k0), "k1": report::group(&k.k1)})
}

/// Writes the gallery family to `out`, or returns its document text when no
/// path is given.
pub fn gallery_cmd(
    name: &str,
    out: Option<&PathBuf>,
) -> Result<(Outcome, Option<String>), CliError> {
    let spec = gallery(name).map_err(domain)?;
    let text = documents::render_family(&spec);
    let results = json!({
        "name": name,
        "base": spec.base_label,
        "generators": spec.generators.iter().map(|g| json!({"order": int_value(&g.order())})).collect::<Vec<_>>(),
        "fiber_faces": spec.fiber.faces().len(),
        "out": out.map(|p| p.display().to_string()),
    });
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| domain(format!("cannot write {}: {e}", path.display())))?;
            Ok((Outcome::ok(results), None))
        }
        None => Ok((Outcome::ok(results), Some(text))),
    }
}
