//! JSON scene files: a complex, a sequence of fields and a seed.
//!
//! ```json
//! {
//!   "vertices": {"A": 0, "B": 1, "C": 2},
//!   "maximal_simplices": ["ABC"],
//!   "fields": [
//!     {"multivectors": [["A", "AB"]], "fill_singletons": true},
//!     {"op": "merge", "a": "C", "b": "BC"}
//!   ],
//!   "seed": ["ABC"]
//! }
//! ```
//!
//! A simplex is an array of vertex ids or, when `vertices` is given, a label
//! string. A field is either an array of multivectors, an object with
//! `multivectors` (and optional `fill_singletons`), or an operation record
//! applied to the previous field: `{"op": "split", "multivector": σ, "part":
//! [...]}` splits the multivector containing σ, `{"op": "merge", "a": σ, "b":
//! τ}` merges the multivectors containing σ and τ.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::complex::{Complex, ComplexError, Simplex, SimplexSet, VertexId, VertexLabels};
use crate::dynamics::IndexPair;
use crate::mvf::{classify_rearrangement, FieldError, MultivectorField};
use crate::zigzag::{PairZigzag, ZigzagError};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error("{context}: {source}")]
    Complex {
        context: String,
        #[source]
        source: ComplexError,
    },
    #[error("field {index}: {source}")]
    Field {
        index: usize,
        #[source]
        source: FieldError,
    },
    #[error("fields {index} and {next} are not atomic rearrangements: {source}")]
    NotAtomic {
        index: usize,
        next: usize,
        #[source]
        source: FieldError,
    },
    #[error("zigzag: {0}")]
    Zigzag(#[from] ZigzagError),
    #[error("pair {index}: {reason}")]
    Pair { index: usize, reason: String },
}

fn schema(msg: impl Into<String>) -> SceneError {
    SceneError::Schema(msg.into())
}

/// A loaded scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub name: Option<String>,
    pub labels: VertexLabels,
    pub complex: Arc<Complex>,
    pub fields: Vec<MultivectorField>,
    pub seed: Option<SimplexSet>,
}

impl PartialEq for Scene {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.labels == other.labels
            && *self.complex == *other.complex
            && self.fields == other.fields
            && self.seed == other.seed
    }
}

#[derive(Serialize, Deserialize)]
struct RawScene {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<BTreeMap<String, VertexId>>,
    maximal_simplices: Vec<Value>,
    #[serde(default)]
    fields: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<Vec<Value>>,
}

struct Reader {
    labels: VertexLabels,
}

impl Reader {
    fn new(vertices: &Option<BTreeMap<String, VertexId>>) -> Self {
        let mut labels = VertexLabels::new();
        if let Some(v) = vertices {
            for (name, &id) in v {
                labels.insert(name.clone(), id);
            }
        }
        Reader { labels }
    }

    fn simplex(&self, v: &Value, context: &str) -> Result<Simplex, SceneError> {
        let wrap = |source| SceneError::Complex {
            context: context.to_string(),
            source,
        };
        match v {
            Value::String(s) => self.labels.simplex(s).map_err(wrap),
            Value::Array(items) => {
                let ids = items
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|n| VertexId::try_from(n).ok())
                            .ok_or_else(|| schema(format!("{context}: vertex ids must be non-negative integers, got {x}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Simplex::new(ids).map_err(wrap)
            }
            other => Err(schema(format!(
                "{context}: a simplex must be an array of ids or a label string, got {other}"
            ))),
        }
    }

    fn simplices(&self, v: &Value, context: &str) -> Result<Vec<Simplex>, SceneError> {
        let items = v
            .as_array()
            .ok_or_else(|| schema(format!("{context}: expected an array of simplices")))?;
        items
            .iter()
            .enumerate()
            .map(|(i, x)| self.simplex(x, &format!("{context}, simplex {}", i + 1)))
            .collect()
    }

    fn set(&self, k: &Complex, v: &Value, context: &str) -> Result<SimplexSet, SceneError> {
        let simplices = self.simplices(v, context)?;
        k.set_from_simplices(&simplices)
            .map_err(|source| SceneError::Complex {
                context: context.to_string(),
                source,
            })
    }

    fn partition(&self, v: &Value, context: &str) -> Result<Vec<Vec<Simplex>>, SceneError> {
        let items = v
            .as_array()
            .ok_or_else(|| schema(format!("{context}: expected an array of multivectors")))?;
        items
            .iter()
            .enumerate()
            .map(|(i, m)| self.simplices(m, &format!("{context}, multivector {}", i + 1)))
            .collect()
    }

    fn field(
        &self,
        k: &Arc<Complex>,
        v: &Value,
        index: usize,
        previous: Option<&MultivectorField>,
    ) -> Result<MultivectorField, SceneError> {
        let context = format!("field {index}");
        let field_err = |source| SceneError::Field { index, source };
        let check = |parts: &[Vec<Simplex>]| -> Result<(), SceneError> {
            for p in parts {
                for s in p {
                    k.require(s).map_err(|source| SceneError::Complex {
                        context: context.clone(),
                        source,
                    })?;
                }
            }
            Ok(())
        };
        match v {
            Value::Array(_) => {
                let parts = self.partition(v, &context)?;
                check(&parts)?;
                MultivectorField::from_simplices(k.clone(), &parts).map_err(field_err)
            }
            Value::Object(obj) if obj.contains_key("op") => {
                let prev = previous
                    .ok_or_else(|| schema(format!("{context}: an operation needs a previous field")))?;
                let find = |key: &str| -> Result<_, SceneError> {
                    let val = obj
                        .get(key)
                        .ok_or_else(|| schema(format!("{context}: missing \"{key}\"")))?;
                    let s = self.simplex(val, &format!("{context}, \"{key}\""))?;
                    let id = k.require(&s).map_err(|source| SceneError::Complex {
                        context: context.clone(),
                        source,
                    })?;
                    Ok(prev.mv_of(id))
                };
                match obj["op"].as_str() {
                    Some("split") => {
                        let mv = find("multivector")?;
                        let part = obj
                            .get("part")
                            .ok_or_else(|| schema(format!("{context}: missing \"part\"")))?;
                        let part = self.set(k, part, &format!("{context}, \"part\""))?;
                        prev.split(mv, &part).map_err(field_err)
                    }
                    Some("merge") => prev.merge(find("a")?, find("b")?).map_err(field_err),
                    other => Err(schema(format!(
                        "{context}: unknown op {other:?}, expected \"split\" or \"merge\""
                    ))),
                }
            }
            Value::Object(obj) => {
                let mvs = obj
                    .get("multivectors")
                    .ok_or_else(|| schema(format!("{context}: missing \"multivectors\"")))?;
                let fill = match obj.get("fill_singletons") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(other) => {
                        return Err(schema(format!(
                            "{context}: \"fill_singletons\" must be a boolean, got {other}"
                        )))
                    }
                };
                let parts = self.partition(mvs, &context)?;
                check(&parts)?;
                if fill {
                    MultivectorField::from_simplices_filling(k.clone(), &parts)
                } else {
                    MultivectorField::from_simplices(k.clone(), &parts)
                }
                .map_err(field_err)
            }
            other => Err(schema(format!(
                "{context}: expected an array, an object with \"multivectors\", or an op record, got {other}"
            ))),
        }
    }

    fn complex(&self, raw: &[Value]) -> Result<Arc<Complex>, SceneError> {
        let tops = raw
            .iter()
            .enumerate()
            .map(|(i, v)| self.simplex(v, &format!("maximal simplex {}", i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(Complex::from_maximal(tops)))
    }
}

/// Parses a scene without checking that consecutive fields are atomic.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let raw: RawScene = serde_json::from_str(text)?;
    let reader = Reader::new(&raw.vertices);
    let complex = reader.complex(&raw.maximal_simplices)?;
    let mut fields: Vec<MultivectorField> = Vec::new();
    for (i, v) in raw.fields.iter().enumerate() {
        let f = reader.field(&complex, v, i + 1, fields.last())?;
        fields.push(f);
    }
    let seed = raw
        .seed
        .as_ref()
        .map(|s| reader.set(&complex, &Value::Array(s.clone()), "seed"))
        .transpose()?;
    Ok(Scene {
        name: raw.name,
        labels: reader.labels,
        complex,
        fields,
        seed,
    })
}

/// Parses a scene and checks that consecutive fields are atomic rearrangements.
pub fn load_scene(text: &str) -> Result<Scene, SceneError> {
    let scene = parse_scene(text)?;
    scene.check_atomic()?;
    Ok(scene)
}

impl Scene {
    pub fn check_atomic(&self) -> Result<(), SceneError> {
        for (i, w) in self.fields.windows(2).enumerate() {
            classify_rearrangement(&w[0], &w[1]).map_err(|source| SceneError::NotAtomic {
                index: i + 1,
                next: i + 2,
                source,
            })?;
        }
        Ok(())
    }

    /// Renders a simplex with the scene's labels.
    pub fn render(&self, s: &Simplex) -> String {
        self.labels.render(s)
    }

    pub fn render_set(&self, set: &SimplexSet) -> Vec<String> {
        self.complex
            .sorted_simplices(set)
            .iter()
            .map(|s| self.render(s))
            .collect()
    }

    /// Parses a simplex written as a label string or as comma-separated ids.
    pub fn parse_simplex(&self, spec: &str) -> Result<Simplex, ComplexError> {
        if !self.labels.is_empty() {
            if let Ok(s) = self.labels.simplex(spec) {
                return Ok(s);
            }
        }
        let ids = spec
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<VertexId>()
                    .map_err(|_| ComplexError::UnknownLabel(x.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Simplex::new(ids)
    }

    fn simplex_value(&self, s: &Simplex) -> Value {
        let labelled = !self.labels.is_empty()
            && s.vertices().iter().all(|&v| self.labels.name(v).is_some());
        if labelled {
            Value::String(self.render(s))
        } else {
            Value::from(s.vertices().to_vec())
        }
    }

    fn set_value(&self, set: &SimplexSet) -> Value {
        Value::Array(
            self.complex
                .sorted_simplices(set)
                .iter()
                .map(|s| self.simplex_value(s))
                .collect(),
        )
    }

    /// Serializes with explicit partitions; `parse_scene` inverts it.
    pub fn to_json(&self) -> Value {
        let tops: Vec<Value> = self
            .complex
            .ids()
            .filter(|&id| self.complex.cofacets(id).is_empty())
            .map(|id| self.simplex_value(self.complex.simplex(id)))
            .collect();
        let fields: Vec<Value> = self
            .fields
            .iter()
            .map(|f| Value::Array(f.multivectors().iter().map(|m| self.set_value(m)).collect()))
            .collect();
        let raw = RawScene {
            name: self.name.clone(),
            vertices: (!self.labels.is_empty()).then(|| {
                self.labels
                    .iter()
                    .map(|(n, id)| (n.to_string(), id))
                    .collect()
            }),
            maximal_simplices: tops,
            fields,
            seed: self.seed.as_ref().map(|s| match self.set_value(s) {
                Value::Array(v) => v,
                _ => unreachable!(),
            }),
        };
        serde_json::to_value(raw).expect("scene serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("scene serializes")
    }
}

#[derive(Deserialize)]
struct RawPair {
    p: Vec<Value>,
    #[serde(default)]
    e: Vec<Value>,
}

#[derive(Deserialize)]
struct RawZigzag {
    #[serde(default)]
    vertices: Option<BTreeMap<String, VertexId>>,
    maximal_simplices: Vec<Value>,
    pairs: Vec<RawPair>,
}

/// A standalone zigzag file: a complex and a list of pairs `{"p": [...], "e": [...]}`.
/// Both sets are closed before use; consecutive pairs must be nested.
#[derive(Clone, Debug)]
pub struct ZigzagScene {
    pub labels: VertexLabels,
    pub complex: Arc<Complex>,
    pub zigzag: PairZigzag,
}

pub fn parse_zigzag(text: &str) -> Result<ZigzagScene, SceneError> {
    let raw: RawZigzag = serde_json::from_str(text)?;
    let reader = Reader::new(&raw.vertices);
    let complex = reader.complex(&raw.maximal_simplices)?;
    let mut pairs = Vec::new();
    for (i, rp) in raw.pairs.iter().enumerate() {
        let ctx = format!("pair {}", i + 1);
        let p = reader.set(&complex, &Value::Array(rp.p.clone()), &format!("{ctx}, P"))?;
        let e = reader.set(&complex, &Value::Array(rp.e.clone()), &format!("{ctx}, E"))?;
        let pair = IndexPair::new(&complex, complex.closure(&p), complex.closure(&e)).map_err(|err| {
            SceneError::Pair {
                index: i + 1,
                reason: err.to_string(),
            }
        })?;
        pairs.push(pair);
    }
    let zigzag = PairZigzag::new(pairs)?;
    Ok(ZigzagScene {
        labels: reader.labels,
        complex,
        zigzag,
    })
}
