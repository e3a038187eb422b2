//! Predicate naming convention pairing an RDF dataset with its property-graph form.
//!
//! A predicate's local name carries a marker: `v:label` assigns a vertex label,
//! `v:<key>` a vertex property, `e:<label>` an edge hop. Keys listed in
//! `edge_property_keys` under the edge prefix denote edge properties instead.

use std::collections::BTreeSet;

use thiserror::Error;

use super::rdf::local_name;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("prefix {0:?} must end with ':'")]
    PrefixSuffix(String),
    #[error("registry markers must be pairwise distinct")]
    NotDistinct,
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixRegistry {
    vertex_prop_prefix: String,
    edge_prop_prefix: String,
    vertex_label_key: String,
    edge_label_key: String,
    edge_property_keys: BTreeSet<String>,
    id_property: String,
}

impl Default for PrefixRegistry {
    fn default() -> Self {
        Self {
            vertex_prop_prefix: "v:".into(),
            edge_prop_prefix: "e:".into(),
            vertex_label_key: "v:label".into(),
            edge_label_key: "e:label".into(),
            edge_property_keys: BTreeSet::from(["weight".to_string()]),
            id_property: "iri".into(),
        }
    }
}

/// What a predicate denotes under the registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredicateRole {
    VertexLabel,
    EdgeLabel,
    VertexProperty(String),
    EdgeProperty(String),
    /// Edge hop with this label.
    EdgeHop(String),
}

impl PrefixRegistry {
    pub fn new(
        vertex_prop_prefix: &str,
        edge_prop_prefix: &str,
        vertex_label_key: &str,
        edge_label_key: &str,
        edge_property_keys: impl IntoIterator<Item = String>,
    ) -> Result<Self, RegistryError> {
        let reg = Self {
            vertex_prop_prefix: vertex_prop_prefix.into(),
            edge_prop_prefix: edge_prop_prefix.into(),
            vertex_label_key: vertex_label_key.into(),
            edge_label_key: edge_label_key.into(),
            edge_property_keys: edge_property_keys.into_iter().collect(),
            id_property: "iri".into(),
        };
        reg.validate()?;
        Ok(reg)
    }

    fn validate(&self) -> Result<(), RegistryError> {
        for p in [&self.vertex_prop_prefix, &self.edge_prop_prefix] {
            if !p.ends_with(':') {
                return Err(RegistryError::PrefixSuffix(p.clone()));
            }
        }
        let markers = [
            &self.vertex_prop_prefix,
            &self.edge_prop_prefix,
            &self.vertex_label_key,
            &self.edge_label_key,
        ];
        let distinct: BTreeSet<_> = markers.iter().collect();
        if distinct.len() != markers.len() {
            return Err(RegistryError::NotDistinct);
        }
        Ok(())
    }

    /// Parses `key=value` lines; unknown keys are errors, missing keys keep defaults.
    pub fn from_config(text: &str) -> Result<Self, RegistryError> {
        let mut reg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(RegistryError::Config {
                    line: i + 1,
                    message: format!("expected key=value, found {line:?}"),
                });
            };
            let value = value.trim().to_string();
            match key.trim() {
                "vertex_prefix" => reg.vertex_prop_prefix = value,
                "edge_prefix" => reg.edge_prop_prefix = value,
                "vertex_label_key" => reg.vertex_label_key = value,
                "edge_label_key" => reg.edge_label_key = value,
                "edge_property_keys" => {
                    reg.edge_property_keys = value
                        .split(',')
                        .map(str::trim)
                        .filter(|k| !k.is_empty())
                        .map(String::from)
                        .collect()
                }
                "id_property" => reg.id_property = value,
                other => {
                    return Err(RegistryError::Config {
                        line: i + 1,
                        message: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        reg.validate()?;
        Ok(reg)
    }

    pub fn vertex_prop_prefix(&self) -> &str {
        &self.vertex_prop_prefix
    }

    pub fn edge_prop_prefix(&self) -> &str {
        &self.edge_prop_prefix
    }

    pub fn vertex_label_key(&self) -> &str {
        &self.vertex_label_key
    }

    pub fn edge_label_key(&self) -> &str {
        &self.edge_label_key
    }

    pub fn edge_property_keys(&self) -> &BTreeSet<String> {
        &self.edge_property_keys
    }

    /// Vertex property holding the originating IRI of converted vertices.
    pub fn id_property(&self) -> &str {
        &self.id_property
    }

    /// Prefix names (without the colon) that queries may use undeclared.
    pub fn implicit_prefixes(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in [&self.vertex_prop_prefix, &self.edge_prop_prefix] {
            let name = p.trim_end_matches(':');
            if !name.contains(':') && !out.iter().any(|n| n == name) {
                out.push(name.to_string());
            }
        }
        out
    }

    /// Classifies a predicate IRI by its local name; `None` when no marker applies.
    pub fn role(&self, predicate: &str) -> Option<PredicateRole> {
        let local = local_name(predicate);
        if local == self.vertex_label_key {
            return Some(PredicateRole::VertexLabel);
        }
        if local == self.edge_label_key {
            return Some(PredicateRole::EdgeLabel);
        }
        if let Some(key) = local.strip_prefix(self.vertex_prop_prefix.as_str()) {
            return (!key.is_empty()).then(|| PredicateRole::VertexProperty(key.to_string()));
        }
        if let Some(key) = local.strip_prefix(self.edge_prop_prefix.as_str()) {
            if key.is_empty() {
                return None;
            }
            return Some(if self.edge_property_keys.contains(key) {
                PredicateRole::EdgeProperty(key.to_string())
            } else {
                PredicateRole::EdgeHop(key.to_string())
            });
        }
        None
    }
}
