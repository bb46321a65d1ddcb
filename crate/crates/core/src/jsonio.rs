//! Canonical JSON: sorted object keys, floats at 17 significant digits, so
//! that identical data always serializes to identical bytes. Frame documents
//! use this writer; reports reuse it through [`to_canonical_string`].

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frames::{FusionFrame, Subspace};
use crate::matcore::{orthonormalize, Matrix, Tolerances};

/// 17 significant digits, scientific: round-trips any finite f64 exactly.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&format_f64(n.as_f64().expect("finite number")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push(':');
                write_value(out, &map[*k]);
            }
            out.push('}');
        }
    }
}

/// Serialize a JSON value canonically (sorted keys, 17-digit floats).
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out.push('\n');
    out
}

#[derive(Deserialize)]
struct SubspaceDoc {
    basis: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct FrameDoc {
    ambient_dim: usize,
    subspaces: Vec<SubspaceDoc>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// Canonical frame-file text for a fusion frame plus free-form metadata.
pub fn frame_to_json(frame: &FusionFrame, metadata: &BTreeMap<String, String>) -> String {
    let subspaces: Vec<Value> = frame
        .subspaces()
        .iter()
        .map(|s| {
            let rows: Vec<Value> = (0..s.basis().rows())
                .map(|i| Value::Array(s.basis().row(i).iter().map(|&x| x.into()).collect()))
                .collect();
            let mut obj = serde_json::Map::new();
            obj.insert("basis".into(), Value::Array(rows));
            Value::Object(obj)
        })
        .collect();
    let mut doc = serde_json::Map::new();
    doc.insert("ambient_dim".into(), Value::from(frame.ambient_dim() as u64));
    doc.insert(
        "metadata".into(),
        Value::Object(
            metadata
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        ),
    );
    doc.insert("subspaces".into(), Value::Array(subspaces));
    to_canonical_string(&Value::Object(doc))
}

/// Parse a frame file. Bases are re-orthonormalized; the correction norm is
/// recorded under the `load_correction_norm` metadata key and the file is
/// rejected if it exceeds `load_reject`.
pub fn frame_from_json(
    text: &str,
    tol: &Tolerances,
) -> Result<(FusionFrame, BTreeMap<String, String>)> {
    let doc: FrameDoc = serde_json::from_str(text)
        .map_err(|e| Error::InvalidFrameFile(format!("malformed JSON: {e}")))?;
    if doc.subspaces.is_empty() {
        return Err(Error::InvalidFrameFile("no subspaces".into()));
    }
    let mut correction_sq = 0.0f64;
    let mut subspaces = Vec::with_capacity(doc.subspaces.len());
    for (idx, s) in doc.subspaces.iter().enumerate() {
        let raw = Matrix::from_rows(&s.basis)
            .map_err(|e| Error::InvalidFrameFile(format!("subspace {idx}: {e}")))?;
        if raw.cols() != doc.ambient_dim {
            return Err(Error::InvalidFrameFile(format!(
                "subspace {idx} has ambient dimension {} but the document says {}",
                raw.cols(),
                doc.ambient_dim
            )));
        }
        let ortho = orthonormalize(&raw, tol)
            .map_err(|e| Error::InvalidFrameFile(format!("subspace {idx}: {e}")))?;
        correction_sq += ortho.sub(&raw).frobenius_norm().powi(2);
        subspaces.push(
            Subspace::from_orthonormal_basis(ortho)
                .map_err(|e| Error::InvalidFrameFile(format!("subspace {idx}: {e}")))?,
        );
    }
    let correction = correction_sq.sqrt();
    if correction > tol.load_reject {
        return Err(Error::InvalidFrameFile(format!(
            "bases too far from orthonormal: correction norm {correction:.3e} exceeds {:.3e}",
            tol.load_reject
        )));
    }
    let mut metadata = doc.metadata;
    metadata.insert("load_correction_norm".into(), format_f64(correction));
    let frame = FusionFrame::new(subspaces, tol)?;
    Ok((frame, metadata))
}
