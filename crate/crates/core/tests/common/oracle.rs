//! Exhaustive assignment enumeration for match-only traversals: every
//! variable ranges over every vertex (or every property value), and an
//! assignment counts once per combination of edges realizing its hops.

use std::collections::BTreeSet;

use s2g_core::engine::execute;
use s2g_core::ir::{produced, IrStep, Traversal};
use s2g_core::model::{Direction, PropertyGraph, PropertyValue};
use s2g_core::solution::{SolutionMultiset, Value};

use super::{random_patterns, random_pg, rng, VALUE_VARS};

#[derive(Clone, PartialEq)]
enum Elem {
    Vertex(u64),
    Value(PropertyValue),
}

/// How many ways `pattern` holds under `assign`.
fn ways(g: &PropertyGraph, pattern: &Traversal, assign: &dyn Fn(&str) -> Elem) -> usize {
    let [IrStep::MatchStart(x), core, IrStep::MatchEnd(end)] = pattern.as_slice() else {
        panic!("not a single-step pattern");
    };
    let Elem::Vertex(v) = assign(x) else {
        return 0;
    };
    let vertex = g.vertex(v).unwrap();
    match (core, end) {
        (IrStep::Has { key, value }, None) => usize::from(vertex.props.get(key) == Some(value)),
        (IrStep::HasLabel(l), None) => usize::from(vertex.label == *l),
        (IrStep::Properties(key), Some(y)) => match (vertex.props.get(key), assign(y)) {
            (Some(p), Elem::Value(q)) => usize::from(*p == q),
            _ => 0,
        },
        (IrStep::Vertex { dir, label }, Some(y)) => {
            let Elem::Vertex(w) = assign(y) else {
                return 0;
            };
            g.edges()
                .filter(|e| e.label == *label)
                .filter(|e| match dir {
                    Direction::Out => (e.src, e.dst) == (v, w),
                    Direction::In => (e.dst, e.src) == (v, w),
                })
                .count()
        }
        _ => panic!("unexpected pattern {pattern:?}"),
    }
}

pub fn oracle(g: &PropertyGraph, patterns: &[Traversal], columns: &[String]) -> SolutionMultiset {
    let vertices: Vec<Elem> = g.vertices().map(|v| Elem::Vertex(v.id)).collect();
    let values: Vec<Elem> = g
        .vertices()
        .flat_map(|v| v.props.values().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(Elem::Value)
        .collect();
    let domain = |var: &str| if VALUE_VARS.contains(&var) { &values } else { &vertices };
    let mut out = SolutionMultiset::new(columns.to_vec());
    let mut counters = vec![0usize; columns.len()];
    'outer: loop {
        if columns.iter().zip(&counters).all(|(c, &i)| i < domain(c).len()) {
            let assign = |var: &str| {
                let i = columns.iter().position(|c| c == var).unwrap();
                domain(var)[counters[i]].clone()
            };
            let n: usize = patterns.iter().map(|p| ways(g, p, &assign)).product();
            let row: Vec<Value> = columns
                .iter()
                .map(|c| match assign(c) {
                    Elem::Vertex(id) => Value::Vertex { id, iri: None },
                    Elem::Value(PropertyValue::Num(d)) => Value::Num(d),
                    Elem::Value(PropertyValue::Str(s)) => Value::Str(s),
                })
                .collect();
            for _ in 0..n {
                out.rows.push(row.clone());
            }
        }
        // Odometer increment; an empty domain ends the enumeration at once.
        for (i, c) in columns.iter().enumerate() {
            counters[i] += 1;
            if counters[i] < domain(c).len() {
                continue 'outer;
            }
            counters[i] = 0;
        }
        break;
    }
    out
}

/// One brute-force case: a random graph of at most 12 vertices and at most
/// four patterns. Returns whether the expected result was non-empty.
pub fn check_seed(seed: u64) -> Result<bool, String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 12);
    let patterns = random_patterns(&mut r, 4);
    let ir = vec![IrStep::Graph, IrStep::Match(patterns.clone())];
    let columns: Vec<String> = produced(&ir).into_iter().map(String::from).collect();
    let got = execute(&ir, &g).map_err(|e| format!("seed {seed}: {e}"))?;
    let want = oracle(&g, &patterns, &columns);
    if got.columns != columns || !got.same_multiset(&want) {
        return Err(format!("seed {seed}: {patterns:?}\ngot {got:?}\nwant {want:?}"));
    }
    Ok(!want.is_empty())
}
