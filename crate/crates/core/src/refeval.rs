//! Reference SPARQL evaluator over an RDF graph: index scans and hash joins
//! on the variables both sides always bind, bag semantics, OPTIONAL as left join with the optional group's filters as the
//! join condition.

use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;
use thiserror::Error;

use crate::model::{RdfGraph, RdfTerm, Triple};
use crate::solution::{compare, const_value, order_cmp, SolutionMultiset, Value};
use crate::sparql::{FilterExpr, GroupPattern, Operand, PatternTerm, Projection, SortDir, SparqlAst, TriplePattern};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RefError {
    #[error("type error: {0}")]
    Type(String),
}

/// A solution mapping; absent variables are unbound.
type Row = BTreeMap<String, RdfTerm>;

struct Index<'g> {
    by_predicate: BTreeMap<&'g str, Vec<&'g Triple>>,
    by_predicate_subject: BTreeMap<&'g str, BTreeMap<&'g str, Vec<&'g Triple>>>,
    /// Only IRI objects are indexed.
    by_predicate_object: BTreeMap<&'g str, BTreeMap<&'g str, Vec<&'g Triple>>>,
}

impl<'g> Index<'g> {
    fn new(g: &'g RdfGraph) -> Self {
        let mut by_predicate: BTreeMap<&str, Vec<&Triple>> = BTreeMap::new();
        let mut by_predicate_subject: BTreeMap<&str, BTreeMap<&str, Vec<&Triple>>> = BTreeMap::new();
        let mut by_predicate_object: BTreeMap<&str, BTreeMap<&str, Vec<&Triple>>> = BTreeMap::new();
        for t in g.iter() {
            if let RdfTerm::Iri(o) = &t.object {
                by_predicate_object
                    .entry(t.predicate.as_str())
                    .or_default()
                    .entry(o.as_str())
                    .or_default()
                    .push(t);
            }
            by_predicate.entry(t.predicate.as_str()).or_default().push(t);
            by_predicate_subject
                .entry(t.predicate.as_str())
                .or_default()
                .entry(t.subject.as_str())
                .or_default()
                .push(t);
        }
        Self {
            by_predicate,
            by_predicate_subject,
            by_predicate_object,
        }
    }

    /// Triples that can match `tp` under `row`.
    fn candidates<'s>(&'s self, tp: &TriplePattern, row: &Row) -> &'s [&'g Triple] {
        let subject = match &tp.subject {
            PatternTerm::Const(c) => Some(c),
            PatternTerm::Var(v) => row.get(v),
        };
        let object = match &tp.object {
            PatternTerm::Const(c) => Some(c),
            PatternTerm::Var(v) => row.get(v),
        };
        match (subject, object) {
            (None, Some(RdfTerm::Iri(o))) => self
                .by_predicate_object
                .get(tp.predicate.as_str())
                .and_then(|m| m.get(o.as_str()))
                .map_or(&[], |v| v.as_slice()),
            (None, _) => self.by_predicate.get(tp.predicate.as_str()).map_or(&[], |v| v.as_slice()),
            (Some(RdfTerm::Iri(s)), _) => self
                .by_predicate_subject
                .get(tp.predicate.as_str())
                .and_then(|m| m.get(s.as_str()))
                .map_or(&[], |v| v.as_slice()),
            (Some(_), _) => &[],
        }
    }
}

fn term_value(t: Option<&RdfTerm>) -> Value {
    t.map_or(Value::Unbound, const_value)
}

/// Tries to extend `row` so that `pt` denotes `actual`.
fn unify(row: &mut Row, pt: &PatternTerm, actual: &RdfTerm) -> bool {
    match pt {
        PatternTerm::Const(c) => c.same_value(actual),
        PatternTerm::Var(v) => match row.get(v) {
            Some(bound) => bound.same_value(actual),
            None => {
                row.insert(v.clone(), actual.clone());
                true
            }
        },
    }
}

fn scan(idx: &Index, rows: Vec<Row>, tp: &TriplePattern) -> Vec<Row> {
    let mut out = Vec::new();
    for row in &rows {
        for t in idx.candidates(tp, row) {
            let mut r = row.clone();
            if unify(&mut r, &tp.subject, &RdfTerm::Iri(t.subject.clone())) && unify(&mut r, &tp.object, &t.object) {
                out.push(r);
            }
        }
    }
    out
}

fn compatible(a: &Row, b: &Row) -> bool {
    b.iter().all(|(k, v)| a.get(k).is_none_or(|w| w.same_value(v)))
}

fn merge(a: &Row, b: &Row) -> Row {
    let mut r = a.clone();
    for (k, v) in b {
        r.entry(k.clone()).or_insert_with(|| v.clone());
    }
    r
}

/// Variables bound in every row of both sides; rows can only be compatible
/// when they agree on these.
fn shared_vars(left: &[Row], right: &[Row]) -> Vec<String> {
    let (Some(l0), Some(r0)) = (left.first(), right.first()) else {
        return Vec::new();
    };
    l0.keys()
        .filter(|k| r0.contains_key(*k))
        .filter(|k| left.iter().chain(right).all(|r| r.contains_key(*k)))
        .cloned()
        .collect()
}

/// Right-hand rows bucketed by their values on `vars`.
fn buckets<'r>(right: &'r [Row], vars: &[String]) -> BTreeMap<Vec<Value>, Vec<&'r Row>> {
    let mut out: BTreeMap<Vec<Value>, Vec<&Row>> = BTreeMap::new();
    for r in right {
        out.entry(row_key(r, vars)).or_default().push(r);
    }
    out
}

fn row_key(row: &Row, vars: &[String]) -> Vec<Value> {
    vars.iter().map(|v| term_key(row.get(v))).collect()
}

fn join(left: Vec<Row>, right: &[Row]) -> Vec<Row> {
    let vars = shared_vars(&left, right);
    let index = buckets(right, &vars);
    let mut out = Vec::new();
    for a in &left {
        for b in index.get(&row_key(a, &vars)).into_iter().flatten() {
            if compatible(a, b) {
                out.push(merge(a, b));
            }
        }
    }
    out
}

fn holds(f: &FilterExpr, row: &Row) -> Result<bool, RefError> {
    match f {
        FilterExpr::Compare { op, lhs, rhs } => {
            let a = term_value(row.get(lhs));
            let b = match rhs {
                Operand::Var(v) => term_value(row.get(v)),
                Operand::Const(c) => const_value(c),
            };
            compare(*op, &a, &b).map_err(|e| RefError::Type(e.to_string()))
        }
        // Both sides are always evaluated so that type errors are not masked.
        FilterExpr::And(x, y) => {
            let (p, q) = (holds(x, row)?, holds(y, row)?);
            Ok(p && q)
        }
        FilterExpr::Or(x, y) => {
            let (p, q) = (holds(x, row)?, holds(y, row)?);
            Ok(p || q)
        }
    }
}

fn all_hold(filters: &[FilterExpr], row: &Row) -> Result<bool, RefError> {
    let mut ok = true;
    for f in filters {
        ok &= holds(f, row)?;
    }
    Ok(ok)
}

/// The group without its own filters applied.
fn eval_core(idx: &Index, g: &GroupPattern) -> Result<Vec<Row>, RefError> {
    let mut rows = vec![Row::new()];
    for tp in &g.patterns {
        rows = scan(idx, rows, tp);
    }
    for (a, b) in &g.unions {
        let mut branch = eval_group(idx, a)?;
        branch.extend(eval_group(idx, b)?);
        rows = join(rows, &branch);
    }
    for opt in &g.optionals {
        let right = eval_core(idx, opt)?;
        let vars = shared_vars(&rows, &right);
        let index = buckets(&right, &vars);
        let mut out = Vec::new();
        for a in &rows {
            let mut matched = false;
            for b in index.get(&row_key(a, &vars)).into_iter().flatten() {
                if compatible(a, b) {
                    let m = merge(a, b);
                    if all_hold(&opt.filters, &m)? {
                        out.push(m);
                        matched = true;
                    }
                }
            }
            if !matched {
                out.push(a.clone());
            }
        }
        rows = out;
    }
    Ok(rows)
}

fn eval_group(idx: &Index, g: &GroupPattern) -> Result<Vec<Row>, RefError> {
    let mut out = Vec::new();
    for row in eval_core(idx, g)? {
        if all_hold(&g.filters, &row)? {
            out.push(row);
        }
    }
    Ok(out)
}

fn count_term(n: usize) -> RdfTerm {
    RdfTerm::Num(crate::model::NumericLiteral::from_decimal(Decimal::from(n as u64)))
}

/// Canonical form of a bound term for grouping and DISTINCT.
fn term_key(t: Option<&RdfTerm>) -> Value {
    match term_value(t) {
        Value::Num(d) => Value::Num(d.normalize()),
        v => v,
    }
}

fn aggregate(ast: &SparqlAst, rows: Vec<Row>) -> Vec<Row> {
    let count = ast.count_projection();
    if count.is_none() && ast.group_by.is_none() {
        return rows;
    }
    let key = ast.group_by.as_deref();
    // Group key value (None when there is no GROUP BY) to member rows.
    let mut groups: BTreeMap<Value, (Option<RdfTerm>, Vec<Row>)> = BTreeMap::new();
    if key.is_none() {
        groups.insert(Value::Unbound, (None, Vec::new()));
    }
    for row in rows {
        let k = key.and_then(|k| row.get(k));
        groups
            .entry(term_key(k))
            .or_insert_with(|| (k.cloned(), Vec::new()))
            .1
            .push(row);
    }
    let all_vars = ast.where_clause.variables();
    let mut out = Vec::new();
    for (_, (kv, members)) in groups {
        let mut r = Row::new();
        if let (Some(k), Some(v)) = (key, kv) {
            r.insert(k.to_string(), v);
        }
        if let Some(Projection::Count { var, distinct, alias }) = count {
            let n = match (var, distinct) {
                (Some(v), false) => members.iter().filter(|m| m.contains_key(v)).count(),
                (Some(v), true) => members
                    .iter()
                    .filter_map(|m| m.get(v))
                    .map(|t| term_key(Some(t)))
                    .collect::<BTreeSet<_>>()
                    .len(),
                (None, false) => members.len(),
                (None, true) => members
                    .iter()
                    .map(|m| all_vars.iter().map(|v| term_key(m.get(v))).collect::<Vec<_>>())
                    .collect::<BTreeSet<_>>()
                    .len(),
            };
            r.insert(alias.clone(), count_term(n));
        }
        out.push(r);
    }
    out
}

pub fn ref_evaluate(ast: &SparqlAst, g: &RdfGraph) -> Result<SolutionMultiset, RefError> {
    let idx = Index::new(g);
    let rows = eval_group(&idx, &ast.where_clause)?;
    let mut rows = aggregate(ast, rows);
    if !ast.order_by.is_empty() {
        rows.sort_by(|a, b| {
            for k in &ast.order_by {
                let o = order_cmp(&term_value(a.get(&k.var)), &term_value(b.get(&k.var)));
                let o = if k.dir == SortDir::Desc { o.reverse() } else { o };
                if o.is_ne() {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        });
    }
    let columns = ast.columns();
    let mut projected: Vec<Vec<Value>> = rows
        .iter()
        .map(|r| columns.iter().map(|c| term_value(r.get(c))).collect())
        .collect();
    if ast.distinct {
        let mut seen = BTreeSet::new();
        projected.retain(|r| {
            let key: Vec<Value> = r
                .iter()
                .map(|v| match v {
                    Value::Num(d) => Value::Num(d.normalize()),
                    other => other.clone(),
                })
                .collect();
            seen.insert(key)
        });
    }
    let offset = ast.offset.unwrap_or(0) as usize;
    let limit = ast.limit.map_or(usize::MAX, |l| l as usize);
    let rows = projected.into_iter().skip(offset).take(limit).collect();
    Ok(SolutionMultiset { columns, rows })
}
