//! Property graph: labeled vertices and directed labeled edges carrying key/value properties.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rust_decimal::Decimal;

use super::rdf::canonical_decimal;
use super::LoadError;

/// A property value. Numbers order numerically and sort before strings;
/// strings order by their bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropertyValue {
    Num(Decimal),
    Str(String),
}

impl PropertyValue {
    pub fn number(value: Decimal) -> Self {
        PropertyValue::Num(value.normalize())
    }

    pub fn string(s: impl Into<String>) -> Self {
        PropertyValue::Str(s.into())
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropertyValue::Str(s) => Some(s),
            PropertyValue::Num(_) => None,
        }
    }
}

impl Ord for PropertyValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PropertyValue::Num(a), PropertyValue::Num(b)) => a.cmp(b),
            (PropertyValue::Num(_), PropertyValue::Str(_)) => Ordering::Less,
            (PropertyValue::Str(_), PropertyValue::Num(_)) => Ordering::Greater,
            (PropertyValue::Str(a), PropertyValue::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
        }
    }
}

impl PartialOrd for PropertyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Num(d) => f.write_str(&canonical_decimal(*d)),
            PropertyValue::Str(s) => f.write_str(s),
        }
    }
}

pub type Properties = BTreeMap<String, PropertyValue>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: u64,
    pub label: String,
    pub props: Properties,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: u64,
    pub src: u64,
    pub label: String,
    pub dst: u64,
    pub props: Properties,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }
}

/// Immutable, referentially checked property graph with per-vertex adjacency.
#[derive(Debug, Clone, Default)]
pub struct PropertyGraph {
    vertices: BTreeMap<u64, Vertex>,
    edges: BTreeMap<u64, Edge>,
    out_edges: HashMap<u64, Vec<u64>>,
    in_edges: HashMap<u64, Vec<u64>>,
}

impl PartialEq for PropertyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for PropertyGraph {}

impl PropertyGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, LoadError> {
        let mut vmap = BTreeMap::new();
        for v in vertices {
            if v.label.is_empty() {
                return Err(LoadError::MissingLabel { kind: "vertex", id: v.id });
            }
            let id = v.id;
            if vmap.insert(id, v).is_some() {
                return Err(LoadError::DuplicateId { kind: "vertex", id });
            }
        }
        let mut emap = BTreeMap::new();
        for e in edges {
            if e.label.is_empty() {
                return Err(LoadError::MissingLabel { kind: "edge", id: e.id });
            }
            for end in [e.src, e.dst] {
                if !vmap.contains_key(&end) {
                    return Err(LoadError::DanglingEndpoint { edge: e.id, vertex: end });
                }
            }
            let id = e.id;
            if emap.insert(id, e).is_some() {
                return Err(LoadError::DuplicateId { kind: "edge", id });
            }
        }
        let mut out_edges: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut in_edges: HashMap<u64, Vec<u64>> = HashMap::new();
        // BTreeMap iteration keeps each adjacency list in ascending edge id.
        for e in emap.values() {
            out_edges.entry(e.src).or_default().push(e.id);
            in_edges.entry(e.dst).or_default().push(e.id);
        }
        Ok(Self {
            vertices: vmap,
            edges: emap,
            out_edges,
            in_edges,
        })
    }

    pub fn vertex(&self, id: u64) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: u64) -> Option<&Edge> {
        self.edges.get(&id)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incident edges of `vertex` in the given direction, ascending by edge id.
    pub fn incident(&self, vertex: u64, dir: Direction) -> impl Iterator<Item = &Edge> {
        let ids = match dir {
            Direction::Out => self.out_edges.get(&vertex),
            Direction::In => self.in_edges.get(&vertex),
        };
        ids.into_iter()
            .flatten()
            .map(move |id| &self.edges[id])
    }
}
