//! Canonical query text. Parsing the output yields an AST equal to the input.

use std::fmt::{self, Write};

use super::ast::*;
use crate::model::{escape_string, RdfTerm};

fn term(t: &RdfTerm) -> String {
    match t {
        RdfTerm::Iri(i) => format!("<{i}>"),
        RdfTerm::Str(s) => format!("\"{}\"", escape_string(s)),
        RdfTerm::Num(n) => n.lexical().to_string(),
    }
}

fn pattern_term(t: &PatternTerm) -> String {
    match t {
        PatternTerm::Var(v) => format!("?{v}"),
        PatternTerm::Const(c) => term(c),
    }
}

impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterExpr::Compare { op, lhs, rhs } => {
                let rhs = match rhs {
                    Operand::Var(v) => format!("?{v}"),
                    Operand::Const(c) => term(c),
                };
                write!(f, "(?{lhs} {} {rhs})", op.symbol())
            }
            FilterExpr::And(a, b) => write!(f, "({a} && {b})"),
            FilterExpr::Or(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

fn write_group(out: &mut String, g: &GroupPattern, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    out.push_str("{\n");
    for tp in &g.patterns {
        let _ = writeln!(
            out,
            "{pad}{} <{}> {} .",
            pattern_term(&tp.subject),
            tp.predicate,
            pattern_term(&tp.object)
        );
    }
    for opt in &g.optionals {
        out.push_str(&pad);
        out.push_str("OPTIONAL ");
        write_group(out, opt, depth + 1);
        out.push('\n');
    }
    for (a, b) in &g.unions {
        out.push_str(&pad);
        write_group(out, a, depth + 1);
        out.push_str(" UNION ");
        write_group(out, b, depth + 1);
        out.push('\n');
    }
    for filter in &g.filters {
        let _ = writeln!(out, "{pad}FILTER {filter}");
    }
    out.push_str(&"  ".repeat(depth));
    out.push('}');
}

impl fmt::Display for SparqlAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (prefix, iri) in &self.prefixes {
            writeln!(f, "PREFIX {prefix}: <{iri}>")?;
        }
        f.write_str("SELECT")?;
        if self.distinct {
            f.write_str(" DISTINCT")?;
        }
        for p in &self.projection {
            match p {
                Projection::Var(v) => write!(f, " ?{v}")?,
                Projection::Count { var, distinct, alias } => {
                    let d = if *distinct { "DISTINCT " } else { "" };
                    let arg = var.as_ref().map_or("*".to_string(), |v| format!("?{v}"));
                    write!(f, " (COUNT({d}{arg}) AS ?{alias})")?;
                }
            }
        }
        let mut body = String::new();
        write_group(&mut body, &self.where_clause, 0);
        write!(f, "\nWHERE {body}")?;
        if let Some(k) = &self.group_by {
            write!(f, "\nGROUP BY ?{k}")?;
        }
        if !self.order_by.is_empty() {
            f.write_str("\nORDER BY")?;
            for key in &self.order_by {
                match key.dir {
                    SortDir::Asc => write!(f, " ASC(?{})", key.var)?,
                    SortDir::Desc => write!(f, " DESC(?{})", key.var)?,
                }
            }
        }
        if let Some(l) = self.limit {
            write!(f, "\nLIMIT {l}")?;
        }
        if let Some(o) = self.offset {
            write!(f, "\nOFFSET {o}")?;
        }
        writeln!(f)
    }
}
