//! SPARQL 1.0 SELECT front-end: lexer, recursive-descent parser, scope
//! validation and a pretty printer whose output parses back to the same AST.

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

use thiserror::Error;

pub use ast::{
    CompareOp, FilterExpr, GroupPattern, Operand, OrderKey, PatternTerm, Pos, Projection, SortDir,
    SparqlAst, TriplePattern,
};

/// Prefixes that expand to themselves when a query uses them without a
/// declaration, so `v:name` denotes the IRI `v:name`.
pub const DEFAULT_IMPLICIT_PREFIXES: [&str; 2] = ["v", "e"];

/// A SPARQL construct outside the supported fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feature {
    QueryForm(String),
    Base,
    NamedGraph,
    GraphPattern(String),
    VariablePredicate,
    PropertyPath,
    BlankNode,
    LanguageTag,
    DatatypedLiteral,
    Regex,
    Function(String),
    Negation,
    Having,
    Aggregate(String),
    ExpressionProjection,
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::QueryForm(q) => write!(f, "{q} queries"),
            Feature::Base => f.write_str("BASE declaration"),
            Feature::NamedGraph => f.write_str("FROM / FROM NAMED"),
            Feature::GraphPattern(k) => write!(f, "{k} graph pattern"),
            Feature::VariablePredicate => f.write_str("variable predicate"),
            Feature::PropertyPath => f.write_str("property path"),
            Feature::BlankNode => f.write_str("blank node"),
            Feature::LanguageTag => f.write_str("language-tagged literal"),
            Feature::DatatypedLiteral => f.write_str("datatyped literal"),
            Feature::Regex => f.write_str("REGEX"),
            Feature::Function(name) => write!(f, "filter function {name}"),
            Feature::Negation => f.write_str("filter negation"),
            Feature::Having => f.write_str("HAVING"),
            Feature::Aggregate(name) => write!(f, "aggregate {name}"),
            Feature::ExpressionProjection => f.write_str("expression in projection"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SparqlError {
    #[error("syntax error at {line}:{col}: {message}{}", expected_suffix(expected))]
    Syntax {
        line: usize,
        col: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("unsupported at {line}:{col}: {feature}")]
    Unsupported {
        line: usize,
        col: usize,
        feature: Feature,
    },
    #[error("scope error at {line}:{col}: {message}")]
    Scope {
        line: usize,
        col: usize,
        message: String,
    },
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(" or "))
    }
}

/// Parses a query with the default implicit prefixes `v:` and `e:`.
pub fn parse(text: &str) -> Result<SparqlAst, SparqlError> {
    parse_with_prefixes(text, &DEFAULT_IMPLICIT_PREFIXES)
}

/// Parses a query; `implicit` lists prefixes usable without declaration.
pub fn parse_with_prefixes<S: AsRef<str>>(
    text: &str,
    implicit: &[S],
) -> Result<SparqlAst, SparqlError> {
    let tokens = lexer::tokenize(text)?;
    let implicit: Vec<String> = implicit.iter().map(|s| s.as_ref().to_string()).collect();
    parser::Parser::new(tokens, implicit).query()
}
