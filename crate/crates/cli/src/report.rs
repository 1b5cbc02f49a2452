use corner_index::abelian::{FGAbelianGroup, GroupElement};
use corner_index::conormal::ChainVector;
use corner_index::faces::{FaceId, Violation};
use corner_index::obstruction::VanishingVerdict;
use serde_json::{json, Map, Value};

use crate::documents::int_value;

pub fn group(g: &FGAbelianGroup) -> Value {
    json!({
        "rank": g.rank(),
        "torsion": g.torsion().iter().map(int_value).collect::<Vec<_>>(),
    })
}

pub fn element(e: &GroupElement) -> Value {
    json!({
        "free": e.free_coords().iter().map(int_value).collect::<Vec<_>>(),
        "torsion": e.torsion_coords().iter().map(int_value).collect::<Vec<_>>(),
    })
}

/// Nonzero terms of a chain, in basis order.
pub fn chain(basis: &[FaceId], c: &ChainVector) -> Value {
    Value::Array(
        basis
            .iter()
            .zip(&c.coords)
            .filter(|(_, x)| !x.is_zero())
            .map(|(f, x)| json!({"face": f.as_str(), "coefficient": element(x)}))
            .collect(),
    )
}

pub fn violations(vs: &[Violation]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| {
                json!({
                    "face": v.face.as_ref().map(|f| f.as_str()),
                    "kind": v.kind.as_str(),
                    "detail": v.detail,
                })
            })
            .collect(),
    )
}

pub fn ids(fs: &[FaceId]) -> Value {
    Value::Array(fs.iter().map(|f| Value::from(f.as_str())).collect())
}

pub fn verdict(v: &VanishingVerdict, basis: &[FaceId]) -> Value {
    json!({
        "vanishes": v.vanishes,
        "failing_codim2": ids(&v.failing_codim2),
        "failing_codim1": ids(&v.failing_codim1),
        "codim1_class_vanishes": v.codim1_class_vanishes,
        "certificate": v.certificate.as_ref().map(|c| chain(basis, c)),
    })
}

/// Assembles the top-level report. `serde_json` maps are ordered by key,
/// so the output is deterministic apart from `timing`.
pub fn envelope(command: Value, results: Value, elapsed_ms: f64) -> Value {
    json!({
        "command": command,
        "results": results,
        "timing": {"elapsed_ms": elapsed_ms},
    })
}

fn as_group(m: &Map<String, Value>) -> Option<String> {
    if m.len() != 2 {
        return None;
    }
    let rank = m.get("rank")?.as_u64()?;
    let torsion = m.get("torsion")?.as_array()?;
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for t in torsion {
        let t = match t {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        parts.push(format!("Z/{t}"));
    }
    Some(if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            if let Some(g) = as_group(m) {
                out.push((prefix.to_string(), g));
                return;
            }
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two-column rendering of a results object; groups print in the
/// `Z^r + Z/d` notation.
pub fn table(results: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", results, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}
