//! Traversal interpreter over a property graph with bag semantics.
//!
//! The traverser stream is processed one step at a time. Before any step
//! whose result depends on stream order (Dedup, Order, Range, Group and the
//! final projection) the stream is put into canonical order, bindings first
//! and location second, unless an Order step has already fixed it.

mod steps;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ir::{first_unproduced, visible, IrStep};
use crate::model::{PropertyGraph, PropertyValue};
use crate::solution::{SolutionMultiset, Value};
use crate::sst::is_hidden_var;

/// What a variable is bound to. Ordering: UNBOUND, vertices, edges, values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binding {
    Unbound,
    Vertex(u64),
    Edge(u64),
    Value(PropertyValue),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    None,
    Vertex(u64),
    Edge(u64),
    Value(PropertyValue),
}

impl Location {
    fn as_binding(&self) -> Binding {
        match self {
            Location::None => Binding::Unbound,
            Location::Vertex(v) => Binding::Vertex(*v),
            Location::Edge(e) => Binding::Edge(*e),
            Location::Value(p) => Binding::Value(p.clone()),
        }
    }

    fn from_binding(b: &Binding) -> Location {
        match b {
            Binding::Unbound => Location::None,
            Binding::Vertex(v) => Location::Vertex(*v),
            Binding::Edge(e) => Location::Edge(*e),
            Binding::Value(p) => Location::Value(p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Traverser {
    pub bindings: BTreeMap<String, Binding>,
    pub loc: Location,
    /// Set on traversers straight from the graph step: the first match start
    /// labels the current element instead of ranging over all vertices.
    pub fresh: bool,
    pub bulk: u64,
}

impl Traverser {
    pub fn at(loc: Location) -> Self {
        Self {
            bindings: BTreeMap::new(),
            loc,
            fresh: false,
            bulk: 1,
        }
    }

    pub fn binding(&self, var: &str) -> &Binding {
        self.bindings.get(var).unwrap_or(&Binding::Unbound)
    }

    fn same_state(&self, other: &Self) -> bool {
        self.bindings == other.bindings && self.loc == other.loc && self.fresh == other.fresh
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("type error: {0}")]
    Type(String),
    #[error("variable ?{0} is read before any step binds it")]
    UnboundKey(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecOptions {
    /// Vertex property holding the IRI a vertex was converted from.
    pub id_property: String,
    /// Merge equal traversers into one with a larger bulk.
    pub bulking: bool,
}

impl Default for ExecOptions {
    fn default() -> Self {
        Self {
            id_property: "iri".into(),
            bulking: true,
        }
    }
}

/// A traverser stream plus whether an Order step has fixed its order.
#[derive(Debug, Clone, Default)]
pub struct Stream {
    pub items: Vec<Traverser>,
    pub ordered: bool,
}

impl Stream {
    pub fn new(items: Vec<Traverser>) -> Self {
        Self { items, ordered: false }
    }

    pub fn size(&self) -> u64 {
        self.items.iter().map(|t| t.bulk).sum()
    }

    pub(crate) fn canonicalize(&mut self) {
        if !self.ordered {
            self.items.sort_by(|a, b| (&a.bindings, &a.loc).cmp(&(&b.bindings, &b.loc)));
        }
    }

    /// Sorts and merges equal traversers; a no-op on ordered streams.
    pub(crate) fn merge(&mut self) {
        if self.ordered {
            return;
        }
        self.canonicalize();
        let mut out: Vec<Traverser> = Vec::with_capacity(self.items.len());
        for t in self.items.drain(..) {
            match out.last_mut() {
                Some(last) if last.same_state(&t) => last.bulk += t.bulk,
                _ => out.push(t),
            }
        }
        self.items = out;
    }

    pub(crate) fn split(&mut self) {
        let mut out = Vec::with_capacity(self.items.len());
        for t in self.items.drain(..) {
            for _ in 0..t.bulk {
                out.push(Traverser { bulk: 1, ..t.clone() });
            }
        }
        self.items = out;
    }
}

pub struct Engine<'g> {
    pub graph: &'g PropertyGraph,
    pub opts: ExecOptions,
}

impl<'g> Engine<'g> {
    pub fn new(graph: &'g PropertyGraph, opts: ExecOptions) -> Self {
        Self { graph, opts }
    }

    /// Runs a traversal on a stream.
    pub fn run(&self, ir: &[IrStep], mut stream: Stream) -> Result<Stream, EvalError> {
        for step in ir {
            stream = self.step(step, stream)?;
            if self.opts.bulking {
                stream.merge();
            } else {
                stream.split();
            }
        }
        Ok(stream)
    }

    /// Converts a binding to a solution value.
    pub fn value(&self, b: &Binding) -> Value {
        match b {
            Binding::Unbound => Value::Unbound,
            Binding::Vertex(id) => Value::Vertex {
                id: *id,
                iri: self
                    .graph
                    .vertex(*id)
                    .and_then(|v| v.props.get(&self.opts.id_property))
                    .and_then(|p| p.as_str())
                    .map(String::from),
            },
            Binding::Edge(id) => Value::Edge { id: *id },
            Binding::Value(PropertyValue::Num(d)) => Value::Num(*d),
            Binding::Value(PropertyValue::Str(s)) => Value::Str(s.clone()),
        }
    }
}

/// Executes with default options.
pub fn execute(ir: &[IrStep], g: &PropertyGraph) -> Result<SolutionMultiset, EvalError> {
    execute_with(ir, g, &ExecOptions::default())
}

pub fn execute_with(ir: &[IrStep], g: &PropertyGraph, opts: &ExecOptions) -> Result<SolutionMultiset, EvalError> {
    if let Some(v) = first_unproduced(ir) {
        return Err(EvalError::UnboundKey(v));
    }
    let engine = Engine::new(g, opts.clone());
    let mut stream = engine.run(ir, Stream::default())?;
    stream.canonicalize();
    let columns: Vec<String> = match ir.iter().rev().find_map(|s| match s {
        IrStep::Select(k) => Some(k.clone()),
        _ => None,
    }) {
        Some(k) => k,
        None => visible(ir).into_iter().filter(|v| !is_hidden_var(v)).collect(),
    };
    let mut out = SolutionMultiset::new(columns);
    for t in &stream.items {
        let row: Vec<Value> = out.columns.iter().map(|c| engine.value(t.binding(c))).collect();
        for _ in 0..t.bulk {
            out.rows.push(row.clone());
        }
    }
    Ok(out)
}

/// Applies one step to a set of traversers.
pub fn execute_step(
    step: &IrStep,
    input: Vec<Traverser>,
    g: &PropertyGraph,
    opts: &ExecOptions,
) -> Result<Vec<Traverser>, EvalError> {
    Ok(Engine::new(g, opts.clone()).step(step, Stream::new(input))?.items)
}
