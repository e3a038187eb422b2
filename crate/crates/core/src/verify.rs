//! Cross-checks translated traversals against the reference evaluator over a
//! corpus of queries.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::engine::{execute_with, EvalError, ExecOptions};
use crate::model::{PrefixRegistry, PropertyGraph, RdfGraph};
use crate::refeval::{ref_evaluate, RefError};
use crate::solution::{normalize, NormalizeError, SolutionMultiset};
use crate::sparql::{parse_with_prefixes, SparqlAst, SparqlError};
use crate::translate::{translate, TranslateError};

/// How the two result sets are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Comparison {
    /// Same rows with the same multiplicities.
    Multiset,
    /// Same rows in the same order (ORDER BY queries).
    Sequence,
    /// LIMIT/OFFSET without ORDER BY: any slice of the right size is allowed,
    /// so both sides must have equal size and be drawn from the full result.
    Unordered,
}

impl Comparison {
    pub fn name(self) -> &'static str {
        match self {
            Comparison::Multiset => "multiset",
            Comparison::Sequence => "sequence",
            Comparison::Unordered => "unordered",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Comparison::Multiset, Comparison::Sequence, Comparison::Unordered]
            .into_iter()
            .find(|c| c.name() == s)
    }
}

pub fn comparison_for(ast: &SparqlAst) -> Comparison {
    if !ast.order_by.is_empty() {
        Comparison::Sequence
    } else if ast.limit.is_some() || ast.offset.is_some() {
        Comparison::Unordered
    } else {
        Comparison::Multiset
    }
}

/// Feature tags of the query families, keyed by id prefix.
pub const FEATURES: [(&str, &str); 10] = [
    ("C", "CGP"),
    ("F", "CONDITION"),
    ("L", "RESTRICTION"),
    ("G", "GROUP BY"),
    ("Gc", "GROUP COUNT"),
    ("O", "ORDER BY"),
    ("U", "UNION"),
    ("Op", "OPTIONAL"),
    ("M", "MIXED"),
    ("S", "STAR"),
];

/// Feature tag for an id such as `Gc2`; `OTHER` when the prefix is unknown.
pub fn feature_for_id(id: &str) -> &'static str {
    let prefix = id.trim_end_matches(|c: char| c.is_ascii_digit());
    FEATURES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map_or("OTHER", |(_, f)| f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub feature: String,
    pub comparison: Comparison,
}

/// Parses `id<TAB>feature<TAB>comparison` lines; `#` starts a comment.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, ManifestEntry>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [id, feature, comparison] = cols[..] else {
            return Err(format!("manifest line {}: expected 3 tab-separated fields", i + 1));
        };
        let comparison = Comparison::from_name(comparison)
            .ok_or_else(|| format!("manifest line {}: unknown comparison {comparison:?}", i + 1))?;
        out.insert(
            id.to_string(),
            ManifestEntry {
                feature: feature.to_string(),
                comparison,
            },
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub id: String,
    pub feature: String,
    pub comparison: Comparison,
    pub translate_micros: u128,
    pub rdf_rows: usize,
    pub pg_rows: usize,
    pub equivalent: bool,
    /// Why the query is not equivalent, when it is not.
    pub detail: Option<String>,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{id}: {source}")]
    Parse { id: String, source: SparqlError },
    #[error("{id}: {source}")]
    Translate { id: String, source: TranslateError },
}

/// A graph in both forms.
pub struct GraphPair<'a> {
    pub rdf: &'a RdfGraph,
    pub pg: &'a PropertyGraph,
}

enum Side {
    Rows(SolutionMultiset),
    Failed(String),
}

fn run_both(ast: &SparqlAst, pair: &GraphPair, reg: &PrefixRegistry) -> Result<(Side, Side, u128), TranslateError> {
    let start = Instant::now();
    let ir = translate(ast, reg)?;
    let micros = start.elapsed().as_micros();
    let opts = ExecOptions {
        id_property: reg.id_property().to_string(),
        bulking: true,
    };
    let norm = |r: Result<SolutionMultiset, String>| match r.and_then(|m| normalize(&m).map_err(|e: NormalizeError| e.to_string())) {
        Ok(m) => Side::Rows(m),
        Err(e) => Side::Failed(e),
    };
    let rdf = norm(ref_evaluate(ast, pair.rdf).map_err(|e: RefError| e.to_string()));
    let pg = norm(execute_with(&ir, pair.pg, &opts).map_err(|e: EvalError| e.to_string()));
    Ok((rdf, pg, micros))
}

/// Runs one query on both sides and compares.
pub fn verify_query(
    id: &str,
    text: &str,
    pair: &GraphPair,
    reg: &PrefixRegistry,
    entry: Option<&ManifestEntry>,
) -> Result<RunReport, VerifyError> {
    let ast = parse_with_prefixes(text, &reg.implicit_prefixes()).map_err(|source| VerifyError::Parse {
        id: id.to_string(),
        source,
    })?;
    let translate_err = |source| VerifyError::Translate {
        id: id.to_string(),
        source,
    };
    let comparison = entry.map_or_else(|| comparison_for(&ast), |e| e.comparison);
    let feature = entry.map_or_else(|| feature_for_id(id).to_string(), |e| e.feature.clone());
    let (rdf, pg, micros) = run_both(&ast, pair, reg).map_err(translate_err)?;
    let mut report = RunReport {
        id: id.to_string(),
        feature,
        comparison,
        translate_micros: micros,
        rdf_rows: 0,
        pg_rows: 0,
        equivalent: false,
        detail: None,
    };
    let (rdf, pg) = match (rdf, pg) {
        (Side::Rows(a), Side::Rows(b)) => (a, b),
        (Side::Failed(a), Side::Failed(b)) => {
            report.equivalent = true;
            report.detail = Some(format!("both sides failed: {a} / {b}"));
            return Ok(report);
        }
        (Side::Failed(e), _) => {
            report.detail = Some(format!("reference side failed: {e}"));
            return Ok(report);
        }
        (_, Side::Failed(e)) => {
            report.detail = Some(format!("traversal side failed: {e}"));
            return Ok(report);
        }
    };
    report.rdf_rows = rdf.len();
    report.pg_rows = pg.len();
    report.equivalent = match comparison {
        Comparison::Multiset => rdf.same_multiset(&pg),
        Comparison::Sequence => rdf.same_sequence(&pg),
        Comparison::Unordered => {
            let full_ast = SparqlAst {
                limit: None,
                offset: None,
                ..ast.clone()
            };
            match run_both(&full_ast, pair, reg).map_err(translate_err)? {
                (Side::Rows(full_rdf), Side::Rows(full_pg), _) => {
                    full_rdf.same_multiset(&full_pg)
                        && rdf.len() == pg.len()
                        && rdf.is_sub_multiset_of(&full_rdf)
                        && pg.is_sub_multiset_of(&full_rdf)
                }
                _ => false,
            }
        }
    };
    if !report.equivalent && report.detail.is_none() {
        report.detail = Some(format!("results differ ({} vs {} rows)", report.rdf_rows, report.pg_rows));
    }
    Ok(report)
}

/// Verifies every query, in the given order.
pub fn verify_corpus(
    queries: &[(String, String)],
    pair: &GraphPair,
    reg: &PrefixRegistry,
    manifest: &BTreeMap<String, ManifestEntry>,
) -> Result<Vec<RunReport>, VerifyError> {
    queries
        .iter()
        .map(|(id, text)| verify_query(id, text, pair, reg, manifest.get(id)))
        .collect()
}

/// Sort key putting `C2` before `C10`.
pub fn id_sort_key(id: &str) -> (String, u64, String) {
    let digits_at = id.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let n = id[digits_at..].parse().unwrap_or(0);
    (id[..digits_at].to_string(), n, id.to_string())
}

/// Report table; deliberately free of timings so repeated runs match byte for byte.
pub struct Report<'a> {
    pub runs: &'a [RunReport],
    pub pretty: bool,
}

impl fmt::Display for Report<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["query", "feature", "comparison", "rdf_rows", "pg_rows", "equivalent"];
        let rows: Vec<[String; 6]> = self
            .runs
            .iter()
            .map(|r| {
                [
                    r.id.clone(),
                    r.feature.clone(),
                    r.comparison.name().to_string(),
                    r.rdf_rows.to_string(),
                    r.pg_rows.to_string(),
                    if r.equivalent { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect();
        let ok = self.runs.iter().filter(|r| r.equivalent).count();
        if self.pretty {
            let mut widths = header.map(str::len);
            for r in &rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(f, "{}", line(header.to_vec()))?;
            for r in &rows {
                writeln!(f, "{}", line(r.iter().map(String::as_str).collect()))?;
            }
            writeln!(f, "{ok}/{} equivalent", self.runs.len())
        } else {
            writeln!(f, "{}", header.join("\t"))?;
            for r in &rows {
                writeln!(f, "{}", r.join("\t"))?;
            }
            writeln!(f, "# {ok}/{} equivalent", self.runs.len())
        }
    }
}
