//! Traversal intermediate representation: the step vocabulary shared by the
//! translator, the emitters and the traversal engine.

use std::fmt;

use crate::model::{Direction, PropertyValue, RdfTerm};
use crate::sparql::{CompareOp, SortDir};
use crate::sst::{CoreStep, SstInstruction};

pub type Traversal = Vec<IrStep>;

/// A complete translated query; starts with [`IrStep::Graph`].
pub type TraversalIR = Traversal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WhereRhs {
    Var(String),
    Const(RdfTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredicateTree {
    Leaf {
        key: String,
        op: CompareOp,
        rhs: WhereRhs,
    },
    And(Vec<PredicateTree>),
    Or(Vec<PredicateTree>),
}

impl PredicateTree {
    pub fn variables(&self) -> Vec<&str> {
        match self {
            PredicateTree::Leaf { key, rhs, .. } => {
                let mut out = vec![key.as_str()];
                if let WhereRhs::Var(v) = rhs {
                    out.push(v);
                }
                out
            }
            PredicateTree::And(c) | PredicateTree::Or(c) => c.iter().flat_map(|t| t.variables()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrStep {
    /// `g.V()`: one traverser per vertex.
    Graph,
    MatchStart(String),
    Has { key: String, value: PropertyValue },
    HasLabel(String),
    Properties(String),
    Vertex { dir: Direction, label: String },
    MatchEnd(Option<String>),
    Match(Vec<Traversal>),
    Where(PredicateTree),
    /// Keeps a traverser when every sub-traversal yields a result.
    And(Vec<Traversal>),
    Union(Vec<Traversal>),
    Choose(Traversal),
    /// Output columns; bindings stay available to later steps.
    Select(Vec<String>),
    Dedup(Vec<String>),
    Range { low: u64, high: Option<u64> },
    Order(Vec<(String, SortDir)>),
    /// One row per distinct value of the key.
    Group(String),
    /// One row per distinct key with the number of rows (or of rows binding
    /// `counted`) in that group, bound to `alias`.
    GroupCount {
        key: String,
        counted: Option<String>,
        alias: String,
    },
    /// A single row holding the number of rows (or of rows binding `counted`).
    Count { counted: Option<String>, alias: String },
}

impl IrStep {
    /// Variables this step may bind.
    pub fn produces(&self) -> Vec<&str> {
        match self {
            IrStep::MatchStart(v) => vec![v],
            IrStep::MatchEnd(Some(v)) => vec![v],
            IrStep::Match(ts) | IrStep::Union(ts) => ts.iter().flat_map(|t| produced(t)).collect(),
            IrStep::Choose(t) => produced(t),
            IrStep::GroupCount { alias, .. } | IrStep::Count { alias, .. } => vec![alias],
            _ => Vec::new(),
        }
    }

    /// Variables this step reads and expects to be present.
    pub fn consumes(&self) -> Vec<&str> {
        match self {
            IrStep::Where(p) => p.variables(),
            IrStep::Select(k) | IrStep::Dedup(k) => k.iter().map(String::as_str).collect(),
            IrStep::Order(k) => k.iter().map(|(v, _)| v.as_str()).collect(),
            IrStep::Group(k) => vec![k],
            IrStep::GroupCount { key, counted, .. } => {
                std::iter::once(key.as_str()).chain(counted.as_deref()).collect()
            }
            IrStep::Count { counted, .. } => counted.as_deref().into_iter().collect(),
            _ => Vec::new(),
        }
    }
}

/// Every variable any step of `t` may bind, in order of first appearance.
pub fn produced(t: &[IrStep]) -> Vec<&str> {
    let mut out: Vec<&str> = Vec::new();
    for step in t {
        for v in step.produces() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// The first variable consumed before anything produces it, if any. A single
/// linear scan; aggregation steps replace the visible variable set.
pub fn first_unproduced(t: &[IrStep]) -> Option<String> {
    scan_visible(t).err()
}

/// Variables still visible after the last step, in order of first appearance.
pub fn visible(t: &[IrStep]) -> Vec<String> {
    match scan_visible(t) {
        Ok(v) => v,
        Err(_) => produced(t).into_iter().map(String::from).collect(),
    }
}

fn scan_visible(t: &[IrStep]) -> Result<Vec<String>, String> {
    let mut visible: Vec<String> = Vec::new();
    for step in t {
        for v in step.consumes() {
            if !visible.iter().any(|x| x == v) {
                return Err(v.to_string());
            }
        }
        match step {
            IrStep::Group(k) => visible = vec![k.clone()],
            IrStep::GroupCount { key, alias, .. } => visible = vec![key.clone(), alias.clone()],
            IrStep::Count { alias, .. } => visible = vec![alias.clone()],
            _ => {
                for v in step.produces() {
                    if !visible.iter().any(|x| x == v) {
                        visible.push(v.to_string());
                    }
                }
            }
        }
    }
    Ok(visible)
}

/// The three-step traversal for one SST instruction.
pub fn instruction_steps(ins: &SstInstruction) -> Traversal {
    let core = match &ins.core {
        CoreStep::Has { key, value } => IrStep::Has {
            key: key.clone(),
            value: value.clone(),
        },
        CoreStep::HasLabel(l) => IrStep::HasLabel(l.clone()),
        CoreStep::Properties(k) => IrStep::Properties(k.clone()),
        CoreStep::Vertex { dir, label } => IrStep::Vertex {
            dir: *dir,
            label: label.clone(),
        },
    };
    vec![IrStep::MatchStart(ins.start.clone()), core, IrStep::MatchEnd(ins.end.clone())]
}

fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_str("[")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str("]")
}

struct Steps<'a>(&'a [IrStep]);

impl fmt::Display for Steps<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        list(f, self.0)
    }
}

impl fmt::Display for WhereRhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhereRhs::Var(v) => write!(f, "select({v})"),
            WhereRhs::Const(RdfTerm::Iri(i)) => write!(f, "iri({i})"),
            WhereRhs::Const(c) => f.write_str(c.lexical()),
        }
    }
}

impl fmt::Display for PredicateTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredicateTree::Leaf { key, op, rhs } => {
                write!(f, "[WhereStartStep({key}), IsStep({}({rhs}))]", op.gremlin())
            }
            PredicateTree::And(c) => {
                f.write_str("AndStep")?;
                list(f, c)
            }
            PredicateTree::Or(c) => {
                f.write_str("OrStep")?;
                list(f, c)
            }
        }
    }
}

/// Step notation in the style `HasStep([name.eq(marko)])`.
impl fmt::Display for IrStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrStep::Graph => f.write_str("GraphStep(vertex)"),
            IrStep::MatchStart(v) => write!(f, "MatchStartStep({v})"),
            IrStep::Has { key, value } => write!(f, "HasStep([{key}.eq({value})])"),
            IrStep::HasLabel(l) => write!(f, "HasStep([~label.eq({l})])"),
            IrStep::Properties(k) => write!(f, "PropertiesStep([{k}],value)"),
            IrStep::Vertex { dir, label } => {
                let d = match dir {
                    Direction::Out => "OUT",
                    Direction::In => "IN",
                };
                write!(f, "VertexStep({d},[{label}],vertex)")
            }
            IrStep::MatchEnd(None) => f.write_str("MatchEndStep"),
            IrStep::MatchEnd(Some(v)) => write!(f, "MatchEndStep({v})"),
            IrStep::Match(ts) => {
                f.write_str("MatchStep(AND,")?;
                let inner: Vec<Steps> = ts.iter().map(|t| Steps(t)).collect();
                list(f, &inner)?;
                f.write_str(")")
            }
            IrStep::Where(p) => write!(f, "WhereTraversalStep({p})"),
            IrStep::And(ts) | IrStep::Union(ts) => {
                f.write_str(if matches!(self, IrStep::And(_)) { "AndStep(" } else { "UnionStep(" })?;
                let inner: Vec<Steps> = ts.iter().map(|t| Steps(t)).collect();
                list(f, &inner)?;
                f.write_str(")")
            }
            IrStep::Choose(t) => write!(f, "ChooseStep({})", Steps(t)),
            IrStep::Select(k) => {
                f.write_str("SelectStep(")?;
                list(f, k)?;
                f.write_str(")")
            }
            IrStep::Dedup(k) => {
                f.write_str("DedupStep(")?;
                list(f, k)?;
                f.write_str(")")
            }
            IrStep::Range { low, high } => match high {
                Some(h) => write!(f, "RangeStep({low},{h})"),
                None => write!(f, "RangeStep({low},-1)"),
            },
            IrStep::Order(keys) => {
                let inner: Vec<String> = keys.iter().map(|(k, d)| format!("[value({k}), {}]", d.name())).collect();
                f.write_str("OrderStep(")?;
                list(f, &inner)?;
                f.write_str(")")
            }
            IrStep::Group(k) => write!(f, "GroupStep(value({k}))"),
            IrStep::GroupCount { key, counted, alias } => write!(
                f,
                "GroupCountStep(value({key}),{},{alias})",
                counted.as_deref().unwrap_or("*")
            ),
            IrStep::Count { counted, alias } => {
                write!(f, "CountStep({},{alias})", counted.as_deref().unwrap_or("*"))
            }
        }
    }
}

/// Whole-traversal step notation.
pub fn describe(t: &[IrStep]) -> String {
    Steps(t).to_string()
}
