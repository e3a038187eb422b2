//! Compiles SPARQL 1.0 SELECT queries into Gremlin match-traversals and checks
//! the translation by running both sides: a reference SPARQL evaluator over an
//! RDF graph and a traversal interpreter over the paired property graph.

pub mod model;
pub mod sparql;
pub mod sst;
pub mod ir;
pub mod translate;
pub mod emit;
pub mod solution;
pub mod engine;
pub mod refeval;
pub mod synth;
pub mod verify;
