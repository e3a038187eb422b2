//! Data models: the RDF graph, the property graph, their loaders and the
//! prefix-convention converter between them.

mod convert;
mod ntriples;
mod pg;
mod pgl;
mod prefix;
mod rdf;

use thiserror::Error;

pub use convert::{rdf_to_pg, DEFAULT_VERTEX_LABEL};
pub use ntriples::load_ntriples;
pub use pg::{Direction, Edge, Properties, PropertyGraph, PropertyValue, Vertex};
pub use pgl::{load_pg, serialize_pg};
pub use prefix::{PredicateRole, PrefixRegistry, RegistryError};
pub use rdf::{canonical_decimal, is_numeral, local_name, NumericLiteral, RdfGraph, RdfTerm, Triple};

pub(crate) use rdf::escape_string;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error("line {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: unsupported feature: {feature}")]
    Unsupported { line: usize, feature: String },
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: u64 },
    #[error("edge {edge} references missing vertex {vertex}")]
    DanglingEndpoint { edge: u64, vertex: u64 },
    #[error("{kind} {id} has no label")]
    MissingLabel { kind: &'static str, id: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("predicate <{predicate}> carries no recognized prefix marker")]
    Classification { predicate: String },
    #[error("predicate <{predicate}> needs edge reification, which is not supported")]
    NeedsReification { predicate: String },
    #[error("vertex property <{predicate}> has an IRI value")]
    IriPropertyValue { predicate: String },
    #[error("subject <{subject}> has several values for property {key:?}")]
    MultiValued { subject: String, key: String },
    #[error("subject <{subject}> has more than one label")]
    MultipleLabels { subject: String },
    #[error("subject <{subject}> has a non-string label {object}")]
    BadLabel { subject: String, object: String },
    #[error("property key {key:?} is reserved for the vertex IRI")]
    ReservedKey { key: String },
    #[error(transparent)]
    Graph(LoadError),
}
