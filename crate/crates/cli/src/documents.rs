//! On-disk JSON documents: `{"kind", "version": 1, "payload"}`.

use std::collections::BTreeMap;
use std::path::Path;

use corner_index::abelian::{FGAbelianGroup, GroupElement};
use corner_index::faces::{Face, FaceId, FacePoset, Hypersurface};
use corner_index::families::{FamilySpec, FiberAutomorphism};
use corner_index::obstruction::{KTheoryInput, SymbolDatum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: String,
    version: u32,
    payload: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub hypersurfaces: Vec<String>,
    pub connected: bool,
    pub faces: Vec<FaceDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub id: String,
    pub codim: usize,
    pub index: Vec<String>,
    #[serde(default)]
    pub parents: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub base: String,
    pub fiber: PosetDoc,
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    #[serde(default)]
    pub faces: BTreeMap<String, String>,
    #[serde(default)]
    pub hypersurfaces: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum GroupDoc {
    Spec(String),
    Parts {
        rank: usize,
        #[serde(default)]
        torsion: Vec<Value>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum KTheoryDoc {
    Preset {
        preset: String,
    },
    Explicit {
        #[serde(default)]
        label: Option<String>,
        k0: GroupDoc,
        k1: GroupDoc,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    #[serde(default)]
    free: Vec<Value>,
    #[serde(default)]
    torsion: Vec<Value>,
}

/// Symbol data as read, before it is attached to the K-groups of a base.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    #[serde(default)]
    codim2: BTreeMap<String, ElementDoc>,
    #[serde(default)]
    codim1: BTreeMap<String, ElementDoc>,
}

pub enum Document {
    Poset(FacePoset),
    Family(FamilySpec),
    KTheory(KTheoryInput),
    Symbol(SymbolDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Poset(_) => "poset",
            Document::Family(_) => "family",
            Document::KTheory(_) => "ktheory",
            Document::Symbol(_) => "symbol",
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn parse_int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap_or_default())),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| input(format!("not an integer: {s:?}"))),
        other => Err(input(format!("not an integer: {other}"))),
    }
}

pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

fn payload<T: for<'de> Deserialize<'de>>(kind: &str, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| input(format!("malformed {kind} payload: {e}")))
}

impl PosetDoc {
    pub fn into_poset(self) -> FacePoset {
        let faces = self
            .faces
            .into_iter()
            .map(|f| Face {
                id: FaceId(f.id),
                codim: f.codim,
                index: f.index.into_iter().map(Hypersurface).collect(),
                parents: f
                    .parents
                    .into_iter()
                    .map(|(h, p)| (Hypersurface(h), FaceId(p)))
                    .collect(),
            })
            .collect();
        FacePoset::new(
            self.hypersurfaces.into_iter().map(Hypersurface).collect(),
            faces,
            self.connected,
        )
    }

    pub fn from_poset(p: &FacePoset) -> Self {
        PosetDoc {
            hypersurfaces: p.hypersurfaces().iter().map(|h| h.0.clone()).collect(),
            connected: p.is_connected(),
            faces: p
                .faces()
                .iter()
                .map(|f| FaceDoc {
                    id: f.id.0.clone(),
                    codim: f.codim,
                    index: f.index.iter().map(|h| h.0.clone()).collect(),
                    parents: f
                        .parents
                        .iter()
                        .map(|(h, g)| (h.0.clone(), g.0.clone()))
                        .collect(),
                })
                .collect(),
        }
    }
}

impl FamilyDoc {
    pub fn into_spec(self) -> FamilySpec {
        FamilySpec {
            fiber: self.fiber.into_poset(),
            generators: self
                .generators
                .into_iter()
                .map(|g| FiberAutomorphism {
                    face_map: g
                        .faces
                        .into_iter()
                        .map(|(a, b)| (FaceId(a), FaceId(b)))
                        .collect(),
                    hypersurface_map: g
                        .hypersurfaces
                        .into_iter()
                        .map(|(a, b)| (Hypersurface(a), Hypersurface(b)))
                        .collect(),
                })
                .collect(),
            base_label: self.base,
        }
    }

    pub fn from_spec(s: &FamilySpec) -> Self {
        FamilyDoc {
            base: s.base_label.clone(),
            fiber: PosetDoc::from_poset(&s.fiber),
            generators: s
                .generators
                .iter()
                .map(|g| GeneratorDoc {
                    faces: g
                        .face_map
                        .iter()
                        .map(|(a, b)| (a.0.clone(), b.0.clone()))
                        .collect(),
                    hypersurfaces: g
                        .hypersurface_map
                        .iter()
                        .map(|(a, b)| (a.0.clone(), b.0.clone()))
                        .collect(),
                })
                .collect(),
        }
    }
}

impl GroupDoc {
    fn into_group(self) -> Result<FGAbelianGroup, CliError> {
        match self {
            GroupDoc::Spec(s) => s
                .parse()
                .map_err(|e| input(format!("bad group {s:?}: {e}"))),
            GroupDoc::Parts { rank, torsion } => {
                let torsion = torsion
                    .iter()
                    .map(parse_int)
                    .collect::<Result<Vec<_>, _>>()?;
                FGAbelianGroup::new(rank, torsion).map_err(|e| input(format!("bad group: {e}")))
            }
        }
    }
}

impl KTheoryDoc {
    fn into_input(self) -> Result<KTheoryInput, CliError> {
        match self {
            KTheoryDoc::Preset { preset } => KTheoryInput::preset(&preset).ok_or_else(|| {
                input(format!(
                    "unknown K-theory preset {preset:?}; available: point, circle"
                ))
            }),
            KTheoryDoc::Explicit { label, k0, k1 } => Ok(KTheoryInput::new(
                k0.into_group()?,
                k1.into_group()?,
                label.unwrap_or_default(),
            )),
        }
    }
}

impl SymbolDoc {
    /// Attaches the entries to `K^0(B)` (corners) and `K^1(B)`
    /// (hypersurface faces).
    pub fn into_datum(self, k: &KTheoryInput) -> Result<SymbolDatum, CliError> {
        fn convert(
            entries: BTreeMap<String, ElementDoc>,
            g: &FGAbelianGroup,
        ) -> Result<BTreeMap<FaceId, GroupElement>, CliError> {
            entries
                .into_iter()
                .map(|(id, e)| {
                    let free = e
                        .free
                        .iter()
                        .map(parse_int)
                        .collect::<Result<Vec<_>, _>>()?;
                    let torsion = e
                        .torsion
                        .iter()
                        .map(parse_int)
                        .collect::<Result<Vec<_>, _>>()?;
                    let elem = GroupElement::new(g, free, torsion).map_err(|err| {
                        input(format!("index of face {id:?} does not fit {g}: {err}"))
                    })?;
                    Ok((FaceId(id), elem))
                })
                .collect()
        }
        Ok(SymbolDatum {
            codim2_indices: convert(self.codim2, &k.k0)?,
            codim1_indices: convert(self.codim1, &k.k1)?,
        })
    }
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let env: Envelope =
        serde_json::from_str(text).map_err(|e| input(format!("not a valid document: {e}")))?;
    if env.version != VERSION {
        return Err(input(format!(
            "unsupported document version {}",
            env.version
        )));
    }
    let kind = env.kind.as_str();
    Ok(match kind {
        "poset" => Document::Poset(payload::<PosetDoc>(kind, env.payload)?.into_poset()),
        "family" => Document::Family(payload::<FamilyDoc>(kind, env.payload)?.into_spec()),
        "ktheory" => Document::KTheory(payload::<KTheoryDoc>(kind, env.payload)?.into_input()?),
        "symbol" => Document::Symbol(payload(kind, env.payload)?),
        other => return Err(input(format!("unknown document kind {other:?}"))),
    })
}

pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn expect_kind(doc: &Document, path: &Path, kinds: &[&str]) -> Result<(), CliError> {
    if kinds.contains(&doc.kind()) {
        Ok(())
    } else {
        Err(input(format!(
            "{}: expected a {} document, found {}",
            path.display(),
            kinds.join(" or "),
            doc.kind()
        )))
    }
}

fn render(kind: &str, payload: Value) -> String {
    let env = Envelope {
        kind: kind.into(),
        version: VERSION,
        payload,
    };
    let mut s = serde_json::to_string_pretty(&serde_json::to_value(env).expect("serializable"))
        .expect("serializable");
    s.push('\n');
    s
}

pub fn render_family(s: &FamilySpec) -> String {
    render(
        "family",
        serde_json::to_value(FamilyDoc::from_spec(s)).expect("serializable"),
    )
}
