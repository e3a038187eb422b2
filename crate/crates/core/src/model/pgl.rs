//! Line-delimited property-graph format (`.pgl`).
//!
//! One JSON object per line:
//! `{"type":"v","id":1,"label":"person","props":{"name":"marko"}}` or
//! `{"type":"e","id":7,"label":"knows","src":1,"dst":2,"props":{"weight":0.5}}`.
//! The serializer writes vertices then edges, each ascending by id, with fields in
//! the order shown and property keys sorted.

use std::str::FromStr;

use rust_decimal::Decimal;
use serde_json::Value as Json;

use super::pg::{Edge, Properties, PropertyGraph, PropertyValue, Vertex};
use super::rdf::{canonical_decimal, is_numeral};
use super::LoadError;

pub fn load_pg(text: &str) -> Result<PropertyGraph, LoadError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| LoadError::Syntax {
            line: line_no,
            col: 1,
            message,
        };
        let record: Json = serde_json::from_str(line).map_err(|e| LoadError::Syntax {
            line: line_no,
            col: e.column(),
            message: e.to_string(),
        })?;
        let obj = record
            .as_object()
            .ok_or_else(|| syntax("record must be a JSON object".into()))?;
        let int_field = |name: &str| -> Result<u64, LoadError> {
            obj.get(name)
                .and_then(Json::as_u64)
                .ok_or_else(|| syntax(format!("missing or non-integer field {name:?}")))
        };
        let id = int_field("id")?;
        let label = match obj.get("label") {
            Some(Json::String(s)) if !s.is_empty() => s.clone(),
            Some(Json::String(_)) | None | Some(Json::Null) => {
                let kind = if obj.get("type").and_then(Json::as_str) == Some("e") {
                    "edge"
                } else {
                    "vertex"
                };
                return Err(LoadError::MissingLabel { kind, id });
            }
            Some(_) => return Err(syntax("label must be a string".into())),
        };
        let props = match obj.get("props") {
            None => Properties::new(),
            Some(Json::Object(map)) => {
                let mut props = Properties::new();
                for (k, v) in map {
                    props.insert(k.clone(), json_to_value(v).map_err(&syntax)?);
                }
                props
            }
            Some(_) => return Err(syntax("props must be an object".into())),
        };
        match obj.get("type").and_then(Json::as_str) {
            Some("v") => vertices.push(Vertex { id, label, props }),
            Some("e") => edges.push(Edge {
                id,
                src: int_field("src")?,
                label,
                dst: int_field("dst")?,
                props,
            }),
            _ => return Err(syntax("type must be \"v\" or \"e\"".into())),
        }
    }
    PropertyGraph::new(vertices, edges)
}

fn json_to_value(v: &Json) -> Result<PropertyValue, String> {
    match v {
        Json::String(s) => Ok(PropertyValue::string(s.clone())),
        Json::Number(n) => {
            let text = n.to_string();
            if !is_numeral(&text) {
                return Err(format!("unsupported number syntax {text:?}"));
            }
            Decimal::from_str(&text)
                .map(PropertyValue::number)
                .map_err(|e| format!("number {text:?}: {e}"))
        }
        other => Err(format!("property values must be strings or numbers, found {other}")),
    }
}

fn write_props(out: &mut String, props: &Properties) {
    out.push('{');
    for (i, (k, v)) in props.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_string(k));
        out.push(':');
        match v {
            PropertyValue::Str(s) => out.push_str(&json_string(s)),
            PropertyValue::Num(d) => out.push_str(&canonical_decimal(*d)),
        }
    }
    out.push('}');
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

pub fn serialize_pg(graph: &PropertyGraph) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        out.push_str(&format!(
            "{{\"type\":\"v\",\"id\":{},\"label\":{},\"props\":",
            v.id,
            json_string(&v.label)
        ));
        write_props(&mut out, &v.props);
        out.push_str("}\n");
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "{{\"type\":\"e\",\"id\":{},\"label\":{},\"src\":{},\"dst\":{},\"props\":",
            e.id,
            json_string(&e.label),
            e.src,
            e.dst
        ));
        write_props(&mut out, &e.props);
        out.push_str("}\n");
    }
    out
}
