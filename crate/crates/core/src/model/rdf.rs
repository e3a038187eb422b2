//! Edge-labeled (RDF) graph over IRIs and literals.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;

/// A numeric literal, keeping the lexical form it was read from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumericLiteral {
    lexical: String,
    value: Decimal,
}

impl NumericLiteral {
    /// Parses an integer or decimal numeral (`-12`, `0.50`, `.5`).
    pub fn parse(lexical: &str) -> Option<Self> {
        if !is_numeral(lexical) {
            return None;
        }
        let value = Decimal::from_str(lexical.trim_start_matches('+')).ok()?;
        Some(Self {
            lexical: lexical.to_string(),
            value,
        })
    }

    pub fn from_decimal(value: Decimal) -> Self {
        Self {
            lexical: canonical_decimal(value),
            value,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn value(&self) -> Decimal {
        self.value
    }
}

/// True when `s` matches `[+-]?(digits(.digits)?|.digits)`.
pub fn is_numeral(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match frac {
        None => digits(int),
        Some(f) => (int.is_empty() || digits(int)) && digits(f),
    }
}

/// Canonical decimal text: no trailing fractional zeros, no `-0`.
pub fn canonical_decimal(value: Decimal) -> String {
    let n = value.normalize();
    if n.is_zero() {
        "0".to_string()
    } else {
        n.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RdfTerm {
    Iri(String),
    Str(String),
    Num(NumericLiteral),
}

impl RdfTerm {
    pub fn iri(s: impl Into<String>) -> Self {
        RdfTerm::Iri(s.into())
    }

    pub fn string(s: impl Into<String>) -> Self {
        RdfTerm::Str(s.into())
    }

    /// Numeric literal from its lexical form. Panics on a malformed numeral.
    pub fn number(lexical: &str) -> Self {
        RdfTerm::Num(NumericLiteral::parse(lexical).expect("malformed numeral"))
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, RdfTerm::Iri(_))
    }

    pub fn lexical(&self) -> &str {
        match self {
            RdfTerm::Iri(s) | RdfTerm::Str(s) => s,
            RdfTerm::Num(n) => n.lexical(),
        }
    }

    /// Value equality: numbers compare numerically, everything else by kind and text.
    pub fn same_value(&self, other: &RdfTerm) -> bool {
        match (self, other) {
            (RdfTerm::Num(a), RdfTerm::Num(b)) => a.value() == b.value(),
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for RdfTerm {
    /// N-Triples token form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdfTerm::Iri(s) => write!(f, "<{s}>"),
            RdfTerm::Str(s) => write!(f, "\"{}\"", escape_string(s)),
            RdfTerm::Num(n) => f.write_str(n.lexical()),
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// Substring after the final `/` or `#`; the whole IRI when neither occurs.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['/', '#']) {
        Some(i) => &iri[i + 1..],
        None => iri,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: RdfTerm,
}

impl Triple {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: RdfTerm) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            object,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples. Subjects and predicates are IRIs by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RdfGraph {
    triples: BTreeSet<Triple>,
}

impl RdfGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in ascending (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Triple> for RdfGraph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Self {
            triples: iter.into_iter().collect(),
        }
    }
}
