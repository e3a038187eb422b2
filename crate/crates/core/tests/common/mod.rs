//! Random small property graphs and match-only traversals for engine tests.
#![allow(dead_code)]

pub mod laws;
pub mod oracle;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

use s2g_core::ir::{IrStep, Traversal};
use s2g_core::model::{Direction, Edge, Properties, PropertyGraph, PropertyValue, Vertex};
use s2g_core::solution::{SolutionMultiset, Value};

pub const VERTEX_VARS: [&str; 3] = ["x", "y", "z"];
pub const VALUE_VARS: [&str; 2] = ["v", "w"];
pub const KEYS: [&str; 2] = ["p", "q"];
pub const EDGE_LABELS: [&str; 2] = ["r", "s"];
pub const VERTEX_LABELS: [&str; 2] = ["a", "b"];

pub fn num(n: i64) -> PropertyValue {
    PropertyValue::number(Decimal::from(n))
}

/// Up to `max_vertices` vertices with small integer properties and up to
/// three edges per vertex, parallel edges and self-loops included.
pub fn random_pg(rng: &mut ChaCha8Rng, max_vertices: u64) -> PropertyGraph {
    let n = rng.gen_range(1..=max_vertices);
    let vertices: Vec<Vertex> = (1..=n)
        .map(|id| {
            let mut props = Properties::new();
            for k in KEYS {
                if rng.gen_bool(0.7) {
                    props.insert(k.to_string(), num(rng.gen_range(0..3)));
                }
            }
            Vertex {
                id,
                label: VERTEX_LABELS.choose(rng).unwrap().to_string(),
                props,
            }
        })
        .collect();
    let edge_count = rng.gen_range(0..=3 * n);
    let edges: Vec<Edge> = (0..edge_count)
        .map(|i| Edge {
            id: 100 + i,
            src: rng.gen_range(1..=n),
            label: EDGE_LABELS.choose(rng).unwrap().to_string(),
            dst: rng.gen_range(1..=n),
            props: Properties::new(),
        })
        .collect();
    PropertyGraph::new(vertices, edges).unwrap()
}

/// One single-step pattern over the fixed variable pool.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> Traversal {
    let start = VERTEX_VARS.choose(rng).unwrap().to_string();
    let (core, end) = match rng.gen_range(0..4) {
        0 => (
            IrStep::Vertex {
                dir: if rng.gen_bool(0.5) { Direction::Out } else { Direction::In },
                label: EDGE_LABELS.choose(rng).unwrap().to_string(),
            },
            Some(VERTEX_VARS.choose(rng).unwrap().to_string()),
        ),
        1 => (
            IrStep::Has {
                key: KEYS.choose(rng).unwrap().to_string(),
                value: num(rng.gen_range(0..3)),
            },
            None,
        ),
        2 => (IrStep::HasLabel(VERTEX_LABELS.choose(rng).unwrap().to_string()), None),
        _ => (
            IrStep::Properties(KEYS.choose(rng).unwrap().to_string()),
            Some(VALUE_VARS.choose(rng).unwrap().to_string()),
        ),
    };
    vec![IrStep::MatchStart(start), core, IrStep::MatchEnd(end)]
}

pub fn random_patterns(rng: &mut ChaCha8Rng, max: usize) -> Vec<Traversal> {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| random_pattern(rng)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `rows` restricted to `columns`, duplicates kept.
pub fn project(ms: &SolutionMultiset, columns: &[String]) -> SolutionMultiset {
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| ms.columns.iter().position(|x| x == c).unwrap())
        .collect();
    SolutionMultiset {
        columns: columns.to_vec(),
        rows: ms.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()).collect(),
    }
}

pub fn distinct_rows(ms: &SolutionMultiset) -> BTreeSet<Vec<Value>> {
    ms.rows.iter().cloned().collect()
}
