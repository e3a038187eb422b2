use std::fmt::{self, Write};
use std::str::FromStr;

use rust_decimal::Decimal;
use serde_json::Value;
use thiserror::Error;

use crate::ir::{IrStep, PredicateTree, WhereRhs};
use crate::model::{canonical_decimal, Direction, PropertyValue, RdfTerm};

/// Marker opening a nested traversal array.
const NESTED: &str = "__";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BcValue {
    Null,
    Str(String),
    /// Canonical decimal text.
    Num(String),
    Array(Vec<BcValue>),
    Traversal(BytecodeDoc),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcStep {
    pub op: String,
    pub args: Vec<BcValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BytecodeDoc {
    pub steps: Vec<BcStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BytecodeError {
    #[error("bytecode is not valid JSON: {0}")]
    Json(String),
    #[error("malformed bytecode: {0}")]
    Shape(String),
}

fn step(op: &str, args: Vec<BcValue>) -> BcStep {
    BcStep {
        op: op.to_string(),
        args,
    }
}

fn s(text: &str) -> BcValue {
    BcValue::Str(text.to_string())
}

fn num(d: Decimal) -> BcValue {
    BcValue::Num(canonical_decimal(d))
}

fn opt(v: &Option<String>) -> BcValue {
    v.as_deref().map_or(BcValue::Null, s)
}

fn nested(ir: &[IrStep]) -> BcValue {
    BcValue::Traversal(to_doc(ir))
}

fn property(v: &PropertyValue) -> BcValue {
    match v {
        PropertyValue::Num(d) => num(*d),
        PropertyValue::Str(t) => s(t),
    }
}

fn constant(t: &RdfTerm) -> BcValue {
    match t {
        RdfTerm::Iri(i) => BcValue::Array(vec![s("iri"), s(i)]),
        RdfTerm::Str(t) => s(t),
        RdfTerm::Num(n) => num(n.value()),
    }
}

fn predicate(p: &PredicateTree) -> BcValue {
    let body = match p {
        PredicateTree::Leaf { key, op, rhs } => vec![
            step("select", vec![s(key)]),
            match rhs {
                WhereRhs::Const(c) => step("is", vec![s(op.gremlin()), constant(c)]),
                WhereRhs::Var(v) => step("where", vec![s(op.gremlin()), s(v)]),
            },
        ],
        PredicateTree::And(c) => vec![step("and", c.iter().map(predicate).collect())],
        PredicateTree::Or(c) => vec![step("or", c.iter().map(predicate).collect())],
    };
    BcValue::Traversal(BytecodeDoc { steps: body })
}

/// Structured bytecode of a traversal. `MatchEnd` without a variable has no
/// instruction of its own.
pub fn to_doc(ir: &[IrStep]) -> BytecodeDoc {
    let mut steps = Vec::new();
    for st in ir {
        steps.push(match st {
            IrStep::Graph => step("V", vec![]),
            IrStep::MatchStart(v) => step("as", vec![s(v)]),
            IrStep::MatchEnd(None) => continue,
            IrStep::MatchEnd(Some(v)) => step("as", vec![s(v)]),
            IrStep::Has { key, value } => step("has", vec![s(key), s("eq"), property(value)]),
            IrStep::HasLabel(l) => step("hasLabel", vec![s(l)]),
            IrStep::Properties(k) => step("values", vec![s(k)]),
            IrStep::Vertex { dir: Direction::Out, label } => step("out", vec![s(label)]),
            IrStep::Vertex { dir: Direction::In, label } => step("in", vec![s(label)]),
            IrStep::Match(ts) => step("match", ts.iter().map(|t| nested(t)).collect()),
            IrStep::Where(p) => step("where", vec![predicate(p)]),
            IrStep::And(ts) => step("and", ts.iter().map(|t| nested(t)).collect()),
            IrStep::Union(ts) => step("union", ts.iter().map(|t| nested(t)).collect()),
            IrStep::Choose(t) => step("optional", vec![nested(t)]),
            IrStep::Select(k) => step("select", k.iter().map(|v| s(v)).collect()),
            IrStep::Dedup(k) => step("dedup", k.iter().map(|v| s(v)).collect()),
            IrStep::Range { low, high } => step(
                "range",
                vec![
                    num(Decimal::from(*low)),
                    high.map_or(BcValue::Num("-1".into()), |h| num(Decimal::from(h))),
                ],
            ),
            IrStep::Order(keys) => step(
                "order",
                keys.iter()
                    .map(|(k, d)| BcValue::Array(vec![s(k), s(d.name())]))
                    .collect(),
            ),
            IrStep::Group(k) => step("group", vec![s(k)]),
            IrStep::GroupCount { key, counted, alias } => {
                step("groupCount", vec![s(key), opt(counted), s(alias)])
            }
            IrStep::Count { counted, alias } => step("count", vec![opt(counted), s(alias)]),
        });
    }
    BytecodeDoc { steps }
}

fn write_value(out: &mut String, v: &BcValue) {
    match v {
        BcValue::Null => out.push_str("null"),
        BcValue::Str(t) => out.push_str(&Value::String(t.clone()).to_string()),
        BcValue::Num(n) => out.push_str(n),
        BcValue::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        BcValue::Traversal(doc) => write_doc(out, doc, true),
    }
}

fn write_doc(out: &mut String, doc: &BytecodeDoc, is_nested: bool) {
    out.push('[');
    let mut first = true;
    if is_nested {
        let _ = write!(out, "\"{NESTED}\"");
        first = false;
    }
    for st in &doc.steps {
        if !first {
            out.push(',');
        }
        first = false;
        out.push('[');
        out.push_str(&Value::String(st.op.clone()).to_string());
        for a in &st.args {
            out.push(',');
            write_value(out, a);
        }
        out.push(']');
    }
    out.push(']');
}

impl fmt::Display for BytecodeDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_doc(&mut out, self, false);
        f.write_str(&out)
    }
}

/// Compact single-line JSON text of the traversal.
pub fn emit_bytecode(ir: &[IrStep]) -> String {
    to_doc(ir).to_string()
}

fn shape(msg: impl Into<String>) -> BytecodeError {
    BytecodeError::Shape(msg.into())
}

fn read_value(v: &Value) -> Result<BcValue, BytecodeError> {
    Ok(match v {
        Value::Null => BcValue::Null,
        Value::String(t) => BcValue::Str(t.clone()),
        Value::Number(n) => {
            let d = Decimal::from_str(&n.to_string())
                .map_err(|_| shape(format!("number {n} out of range")))?;
            BcValue::Num(canonical_decimal(d))
        }
        Value::Array(items) if items.first() == Some(&Value::String(NESTED.into())) => {
            BcValue::Traversal(read_steps(&items[1..])?)
        }
        Value::Array(items) => BcValue::Array(items.iter().map(read_value).collect::<Result<_, _>>()?),
        Value::Bool(_) | Value::Object(_) => return Err(shape(format!("unexpected value {v}"))),
    })
}

fn read_steps(items: &[Value]) -> Result<BytecodeDoc, BytecodeError> {
    let mut steps = Vec::new();
    for item in items {
        let Value::Array(parts) = item else {
            return Err(shape(format!("step {item} is not an array")));
        };
        let Some(Value::String(op)) = parts.first() else {
            return Err(shape(format!("step {item} has no operator")));
        };
        if op == NESTED {
            return Err(shape("nested traversal in step position"));
        }
        steps.push(BcStep {
            op: op.clone(),
            args: parts[1..].iter().map(read_value).collect::<Result<_, _>>()?,
        });
    }
    Ok(BytecodeDoc { steps })
}

pub fn parse_bytecode(text: &str) -> Result<BytecodeDoc, BytecodeError> {
    let v: Value = serde_json::from_str(text).map_err(|e| BytecodeError::Json(e.to_string()))?;
    let Value::Array(items) = v else {
        return Err(shape("top level is not an array"));
    };
    read_steps(&items)
}
