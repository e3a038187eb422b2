//! RDF to property-graph conversion under a [`PrefixRegistry`].

use std::collections::BTreeMap;

use super::pg::{Edge, Properties, PropertyGraph, PropertyValue, Vertex};
use super::prefix::{PredicateRole, PrefixRegistry};
use super::rdf::{RdfGraph, RdfTerm};
use super::ConvertError;

/// Label given to vertices without a label triple.
pub const DEFAULT_VERTEX_LABEL: &str = "vertex";

/// Converts `graph` into a property graph.
///
/// Every subject or IRI object becomes a vertex carrying its IRI under the
/// registry's id property. Vertex ids count from 1 in order of first
/// appearance while walking triples in (subject, predicate, object) order;
/// edge ids continue after the last vertex id in the same walk order.
pub fn rdf_to_pg(graph: &RdfGraph, registry: &PrefixRegistry) -> Result<PropertyGraph, ConvertError> {
    let mut ids: BTreeMap<&str, u64> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    let mut labels: BTreeMap<&str, String> = BTreeMap::new();
    let mut props: BTreeMap<&str, Properties> = BTreeMap::new();
    let mut hops: Vec<(&str, String, &str)> = Vec::new();

    for t in graph.iter() {
        let subject = t.subject.as_str();
        if !ids.contains_key(subject) {
            ids.insert(subject, order.len() as u64 + 1);
            order.push(subject);
        }
        if let RdfTerm::Iri(o) = &t.object {
            if !ids.contains_key(o.as_str()) {
                ids.insert(o.as_str(), order.len() as u64 + 1);
                order.push(o.as_str());
            }
        }
        let role = registry
            .role(&t.predicate)
            .ok_or_else(|| ConvertError::Classification {
                predicate: t.predicate.clone(),
            })?;
        match role {
            PredicateRole::VertexLabel => {
                let label = match &t.object {
                    RdfTerm::Str(s) if !s.is_empty() => s.clone(),
                    _ => {
                        return Err(ConvertError::BadLabel {
                            subject: t.subject.clone(),
                            object: t.object.to_string(),
                        })
                    }
                };
                if let Some(prev) = labels.insert(subject, label.clone()) {
                    if prev != label {
                        return Err(ConvertError::MultipleLabels {
                            subject: t.subject.clone(),
                        });
                    }
                }
            }
            PredicateRole::VertexProperty(key) => {
                if key == registry.id_property() {
                    return Err(ConvertError::ReservedKey { key });
                }
                let value = match &t.object {
                    RdfTerm::Str(s) => PropertyValue::string(s.clone()),
                    RdfTerm::Num(n) => PropertyValue::number(n.value()),
                    RdfTerm::Iri(_) => {
                        return Err(ConvertError::IriPropertyValue {
                            predicate: t.predicate.clone(),
                        })
                    }
                };
                let entry = props.entry(subject).or_default();
                if let Some(prev) = entry.get(&key) {
                    if *prev != value {
                        return Err(ConvertError::MultiValued {
                            subject: t.subject.clone(),
                            key,
                        });
                    }
                }
                entry.insert(key, value);
            }
            PredicateRole::EdgeHop(label) => match &t.object {
                RdfTerm::Iri(o) => hops.push((subject, label, o.as_str())),
                _ => {
                    return Err(ConvertError::NeedsReification {
                        predicate: t.predicate.clone(),
                    })
                }
            },
            PredicateRole::EdgeLabel | PredicateRole::EdgeProperty(_) => {
                return Err(ConvertError::NeedsReification {
                    predicate: t.predicate.clone(),
                })
            }
        }
    }

    let vertices: Vec<Vertex> = order
        .iter()
        .map(|iri| {
            let mut p = props.remove(iri).unwrap_or_default();
            p.insert(
                registry.id_property().to_string(),
                PropertyValue::string(*iri),
            );
            Vertex {
                id: ids[iri],
                label: labels
                    .get(iri)
                    .cloned()
                    .unwrap_or_else(|| DEFAULT_VERTEX_LABEL.to_string()),
                props: p,
            }
        })
        .collect();
    let first_edge = vertices.len() as u64 + 1;
    let edges = hops.into_iter().enumerate().map(|(i, (s, label, o))| Edge {
        id: first_edge + i as u64,
        src: ids[s],
        label,
        dst: ids[o],
        props: Properties::new(),
    });
    PropertyGraph::new(vertices, edges).map_err(ConvertError::Graph)
}
