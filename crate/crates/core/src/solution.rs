//! Query results shared by both evaluators: values, solution multisets, TSV
//! output and the normalization that makes the two sides comparable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rust_decimal::Decimal;
use thiserror::Error;

use crate::model::{canonical_decimal, local_name, RdfTerm};
use crate::sparql::CompareOp;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Unbound,
    Iri(String),
    /// A property-graph vertex; `iri` is its id-property value when present.
    Vertex { id: u64, iri: Option<String> },
    Edge { id: u64 },
    Str(String),
    Num(Decimal),
    /// Comparison key produced by [`normalize`].
    Key(String),
}

impl Value {
    pub fn is_bound(&self) -> bool {
        !matches!(self, Value::Unbound)
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Unbound => 0,
            Value::Iri(_) | Value::Vertex { .. } | Value::Edge { .. } => 1,
            Value::Num(_) => 2,
            Value::Str(_) | Value::Key(_) => 3,
        }
    }
}

/// Sort order used by ORDER BY on both sides: UNBOUND, then nodes by IRI text
/// (vertices without one by id, after those with one), then numbers, then
/// strings by bytes.
pub fn order_cmp(a: &Value, b: &Value) -> Ordering {
    a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
        (Value::Num(x), Value::Num(y)) => x.cmp(y),
        (Value::Str(x) | Value::Key(x), Value::Str(y) | Value::Key(y)) => x.as_bytes().cmp(y.as_bytes()),
        _ if a.rank() == 1 => node_key(a).cmp(&node_key(b)),
        _ => Ordering::Equal,
    })
}

fn node_key(v: &Value) -> (u8, &str, u64) {
    match v {
        Value::Iri(i) | Value::Vertex { iri: Some(i), .. } => (0, i, 0),
        Value::Vertex { id, iri: None } => (1, "", *id),
        Value::Edge { id } => (2, "", *id),
        _ => (3, "", 0),
    }
}

impl fmt::Display for Value {
    /// TSV cell text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unbound => Ok(()),
            Value::Iri(i) | Value::Vertex { iri: Some(i), .. } => write!(f, "<{}>", escape_cell(i)),
            Value::Vertex { id, iri: None } => write!(f, "v[{id}]"),
            Value::Edge { id } => write!(f, "e[{id}]"),
            Value::Str(s) | Value::Key(s) => f.write_str(&escape_cell(s)),
            Value::Num(d) => f.write_str(&canonical_decimal(*d)),
        }
    }
}

fn escape_cell(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

/// Result rows in stream order; duplicates are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionMultiset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl SolutionMultiset {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn counts(&self) -> BTreeMap<&[Value], usize> {
        let mut m = BTreeMap::new();
        for r in &self.rows {
            *m.entry(r.as_slice()).or_insert(0) += 1;
        }
        m
    }

    /// Equal columns and equal rows regardless of order.
    pub fn same_multiset(&self, other: &Self) -> bool {
        self.columns == other.columns && self.counts() == other.counts()
    }

    /// Equal columns and equal rows in the same order.
    pub fn same_sequence(&self, other: &Self) -> bool {
        self == other
    }

    /// Every row occurs in `other` at least as often as in `self`.
    pub fn is_sub_multiset_of(&self, other: &Self) -> bool {
        if self.columns != other.columns {
            return false;
        }
        let theirs = other.counts();
        self.counts()
            .iter()
            .all(|(row, n)| theirs.get(row).is_some_and(|m| m >= n))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::to_string).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("row {row}, column {column}: edge {edge} has no comparison key")]
    Unmappable { row: usize, column: String, edge: u64 },
}

/// Maps values to comparison keys: IRIs and vertices to the local name of
/// their IRI (a vertex without one to its id), numbers to canonical form.
pub fn normalize(ms: &SolutionMultiset) -> Result<SolutionMultiset, NormalizeError> {
    let mut rows = Vec::with_capacity(ms.rows.len());
    for (i, row) in ms.rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, v) in row.iter().enumerate() {
            out.push(match v {
                Value::Iri(iri) | Value::Vertex { iri: Some(iri), .. } => Value::Key(local_name(iri).to_string()),
                Value::Vertex { id, iri: None } => Value::Key(id.to_string()),
                Value::Edge { id } => {
                    return Err(NormalizeError::Unmappable {
                        row: i,
                        column: ms.columns.get(j).cloned().unwrap_or_default(),
                        edge: *id,
                    })
                }
                Value::Num(d) => Value::Num(d.normalize()),
                other => other.clone(),
            });
        }
        rows.push(out);
    }
    Ok(SolutionMultiset {
        columns: ms.columns.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot compare {lhs} with {rhs} using {op}")]
pub struct CompareError {
    pub op: &'static str,
    pub lhs: String,
    pub rhs: String,
}

fn category(v: &Value) -> u8 {
    match v {
        Value::Unbound => 0,
        Value::Iri(_) | Value::Vertex { .. } | Value::Edge { .. } => 1,
        Value::Num(_) => 2,
        Value::Str(_) | Value::Key(_) => 3,
    }
}

fn same_node(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Vertex { id: x, .. }, Value::Vertex { id: y, .. }) => x == y,
        (Value::Edge { id: x }, Value::Edge { id: y }) => x == y,
        (Value::Iri(x), Value::Iri(y)) => x == y,
        (Value::Iri(x), Value::Vertex { iri: Some(y), .. }) | (Value::Vertex { iri: Some(y), .. }, Value::Iri(x)) => x == y,
        _ => false,
    }
}

/// FILTER comparison shared by both evaluators. An UNBOUND operand makes the
/// comparison false. Numbers compare numerically and strings by bytes; nodes
/// support only `=` and `!=`, and differ from every literal. Comparing a
/// number with a string, or ordering nodes, is a type error.
pub fn compare(op: CompareOp, a: &Value, b: &Value) -> Result<bool, CompareError> {
    let err = || CompareError {
        op: op.symbol(),
        lhs: a.to_string(),
        rhs: b.to_string(),
    };
    let (ca, cb) = (category(a), category(b));
    if ca == 0 || cb == 0 {
        return Ok(false);
    }
    let ord = match (a, b) {
        (Value::Num(x), Value::Num(y)) => x.cmp(y),
        (Value::Str(x) | Value::Key(x), Value::Str(y) | Value::Key(y)) => x.as_bytes().cmp(y.as_bytes()),
        _ if op.is_ordering() => return Err(err()),
        _ if ca == 1 || cb == 1 => {
            let eq = same_node(a, b);
            return Ok(if op == CompareOp::Eq { eq } else { !eq });
        }
        _ => return Err(err()),
    };
    Ok(match op {
        CompareOp::Eq => ord == Ordering::Equal,
        CompareOp::Neq => ord != Ordering::Equal,
        CompareOp::Lt => ord == Ordering::Less,
        CompareOp::Lte => ord != Ordering::Greater,
        CompareOp::Gt => ord == Ordering::Greater,
        CompareOp::Gte => ord != Ordering::Less,
    })
}

/// Solution value of a query constant.
pub fn const_value(t: &RdfTerm) -> Value {
    match t {
        RdfTerm::Iri(i) => Value::Iri(i.clone()),
        RdfTerm::Str(s) => Value::Str(s.clone()),
        RdfTerm::Num(n) => Value::Num(n.value()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn ordering_ranks() {
        let mut v = [Value::Str("b".into()),
            Value::Num(dec("10")),
            Value::Iri("http://x/b".into()),
            Value::Unbound,
            Value::Num(dec("9.5")),
            Value::Vertex { id: 1, iri: Some("http://x/a".into()) },
            Value::Str("a".into())];
        v.sort_by(order_cmp);
        assert_eq!(v[0], Value::Unbound);
        assert_eq!(v[1], Value::Vertex { id: 1, iri: Some("http://x/a".into()) });
        assert_eq!(v[2], Value::Iri("http://x/b".into()));
        assert_eq!(v[3], Value::Num(dec("9.5")));
        assert_eq!(v[6], Value::Str("b".into()));
    }

    #[test]
    fn normalization_meets_in_the_middle() {
        let rdf = SolutionMultiset {
            columns: vec!["p".into(), "n".into()],
            rows: vec![vec![Value::Iri("http://example.org/inst/Product1636".into()), Value::Num(dec("0.50"))]],
        };
        let pg = SolutionMultiset {
            columns: vec!["p".into(), "n".into()],
            rows: vec![vec![
                Value::Vertex { id: 7, iri: Some("http://example.org/inst/Product1636".into()) },
                Value::Num(dec("0.5")),
            ]],
        };
        assert!(normalize(&rdf).unwrap().same_multiset(&normalize(&pg).unwrap()));
        assert_eq!(normalize(&rdf).unwrap().rows[0][1].to_string(), "0.5");
        let empty = SolutionMultiset::new(vec!["x".into()]);
        assert!(normalize(&empty).unwrap().same_multiset(&empty));
        let edge = SolutionMultiset {
            columns: vec!["e".into()],
            rows: vec![vec![Value::Edge { id: 3 }]],
        };
        assert!(matches!(normalize(&edge), Err(NormalizeError::Unmappable { row: 0, .. })));
    }

    #[test]
    fn multiset_relations() {
        let a = SolutionMultiset {
            columns: vec!["x".into()],
            rows: vec![vec![Value::Str("a".into())], vec![Value::Str("a".into())], vec![Value::Unbound]],
        };
        let mut b = a.clone();
        b.rows.reverse();
        assert!(a.same_multiset(&b));
        assert!(!a.same_sequence(&b));
        let c = SolutionMultiset {
            columns: vec!["x".into()],
            rows: vec![vec![Value::Str("a".into())]],
        };
        assert!(c.is_sub_multiset_of(&a));
        assert!(!a.is_sub_multiset_of(&c));
    }

    #[test]
    fn comparisons() {
        let n = |s: &str| Value::Num(dec(s));
        let st = |s: &str| Value::Str(s.into());
        assert!(compare(CompareOp::Lt, &n("27"), &n("30")).unwrap());
        assert!(compare(CompareOp::Eq, &n("0.50"), &n("0.5")).unwrap());
        assert!(compare(CompareOp::Gte, &st("b"), &st("a")).unwrap());
        assert!(!compare(CompareOp::Eq, &Value::Unbound, &n("1")).unwrap());
        assert!(!compare(CompareOp::Neq, &Value::Unbound, &n("1")).unwrap());
        assert!(compare(CompareOp::Lt, &n("1"), &st("a")).is_err());
        assert!(compare(CompareOp::Eq, &n("1"), &st("1")).is_err());
        let v = Value::Vertex { id: 1, iri: Some("http://x/a".into()) };
        assert!(compare(CompareOp::Eq, &v, &Value::Iri("http://x/a".into())).unwrap());
        assert!(compare(CompareOp::Neq, &v, &st("a")).unwrap());
        assert!(compare(CompareOp::Lt, &v, &v).is_err());
    }

    #[test]
    fn tsv_format() {
        let ms = SolutionMultiset {
            columns: vec!["x".into(), "y".into()],
            rows: vec![
                vec![Value::Str("a\tb".into()), Value::Unbound],
                vec![Value::Vertex { id: 2, iri: None }, Value::Num(dec("1.50"))],
            ],
        };
        assert_eq!(ms.to_tsv(), "x\ty\na\\tb\t\nv[2]\t1.5\n");
    }
}
