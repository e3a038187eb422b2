use std::collections::BTreeMap;

use super::ast::*;
use super::lexer::{Tok, Token};
use super::{Feature, SparqlError};
use crate::model::{NumericLiteral, RdfTerm};

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

pub(crate) struct Parser {
    tokens: Vec<Token>,
    at: usize,
    implicit: Vec<String>,
    prefixes: BTreeMap<String, String>,
}

/// Positions of names that are checked after the whole query is read.
#[derive(Default)]
struct Spots {
    projection: Vec<Pos>,
    group_by: Pos,
    order_by: Vec<Pos>,
    where_clause: Pos,
}

type PResult<T> = Result<T, SparqlError>;

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>, implicit: Vec<String>) -> Self {
        Self {
            tokens,
            at: 0,
            implicit,
            prefixes: BTreeMap::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> SparqlError {
        let pos = self.pos();
        SparqlError::Syntax {
            line: pos.line,
            col: pos.col,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SparqlError {
        self.error(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn unsupported(&self, feature: Feature) -> SparqlError {
        unsupported_at(self.pos(), feature)
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        if self.peek().is_word(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.peek().is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &'static str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("'{p}'")]))
        }
    }

    fn expect_var(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected(&["variable"])),
        }
    }

    fn expect_integer(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Num(n) => match n.parse::<u64>() {
                Ok(v) if !n.starts_with('+') => {
                    self.bump();
                    Ok(v)
                }
                _ => Err(self.error(format!("{n} is not a non-negative integer"), &[])),
            },
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn expand(&self, prefix: &str, local: &str) -> PResult<String> {
        if let Some(ns) = self.prefixes.get(prefix) {
            Ok(format!("{ns}{local}"))
        } else if self.implicit.iter().any(|p| p == prefix) {
            Ok(format!("{prefix}:{local}"))
        } else {
            Err(self.error(format!("undeclared prefix '{prefix}:'"), &[]))
        }
    }

    pub(crate) fn query(mut self) -> PResult<SparqlAst> {
        loop {
            if self.eat_word("PREFIX") {
                let Tok::PName { prefix, local } = self.peek().clone() else {
                    return Err(self.unexpected(&["prefix name"]));
                };
                if !local.is_empty() {
                    return Err(self.unexpected(&["prefix name"]));
                }
                self.bump();
                let Tok::Iri(iri) = self.peek().clone() else {
                    return Err(self.unexpected(&["IRI"]));
                };
                self.bump();
                self.prefixes.insert(prefix, iri);
            } else if self.peek().is_word("BASE") {
                return Err(self.unsupported(Feature::Base));
            } else {
                break;
            }
        }
        for form in ["ASK", "CONSTRUCT", "DESCRIBE"] {
            if self.peek().is_word(form) {
                return Err(self.unsupported(Feature::QueryForm(form.into())));
            }
        }
        if !self.eat_word("SELECT") {
            return Err(self.unexpected(&["SELECT", "PREFIX"]));
        }
        let mut spots = Spots::default();
        let distinct = self.eat_word("DISTINCT");
        let (mut projection, star) = self.projection(&mut spots)?;
        if self.peek().is_word("FROM") {
            return Err(self.unsupported(Feature::NamedGraph));
        }
        self.eat_word("WHERE");
        spots.where_clause = self.pos();
        let where_clause = self.group()?;
        if star {
            projection = where_clause.variables().into_iter().map(Projection::Var).collect();
        }

        let mut group_by = None;
        if self.peek().is_word("GROUP") {
            self.bump();
            if !self.eat_word("BY") {
                return Err(self.unexpected(&["BY"]));
            }
            spots.group_by = self.pos();
            let paren = self.eat_punct("(");
            group_by = Some(self.expect_var()?);
            if paren {
                self.expect_punct(")")?;
            }
            if matches!(self.peek(), Tok::Var(_)) || self.peek().is_punct("(") {
                return Err(self.unsupported(Feature::Aggregate("GROUP BY over several keys".into())));
            }
        }
        if self.peek().is_word("HAVING") {
            return Err(self.unsupported(Feature::Having));
        }
        let mut order_by = Vec::new();
        if self.peek().is_word("ORDER") {
            self.bump();
            if !self.eat_word("BY") {
                return Err(self.unexpected(&["BY"]));
            }
            loop {
                let pos = self.pos();
                let key = if self.peek().is_word("ASC") || self.peek().is_word("DESC") {
                    let dir = if self.bump().tok.is_word("ASC") { SortDir::Asc } else { SortDir::Desc };
                    self.expect_punct("(")?;
                    let var = self.expect_var()?;
                    self.expect_punct(")")?;
                    OrderKey { var, dir }
                } else if self.eat_punct("(") {
                    let var = self.expect_var()?;
                    self.expect_punct(")")?;
                    OrderKey { var, dir: SortDir::Asc }
                } else if let Tok::Var(var) = self.peek().clone() {
                    self.bump();
                    OrderKey { var, dir: SortDir::Asc }
                } else {
                    break;
                };
                order_by.push(key);
                spots.order_by.push(pos);
            }
            if order_by.is_empty() {
                return Err(self.unexpected(&["order condition"]));
            }
        }
        let (mut limit, mut offset) = (None, None);
        loop {
            if limit.is_none() && self.eat_word("LIMIT") {
                limit = Some(self.expect_integer()?);
            } else if offset.is_none() && self.eat_word("OFFSET") {
                offset = Some(self.expect_integer()?);
            } else {
                break;
            }
        }
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected(&["end of query"]));
        }
        let ast = SparqlAst {
            prefixes: self.prefixes,
            projection,
            distinct,
            where_clause,
            group_by,
            order_by,
            limit,
            offset,
        };
        validate(&ast, &spots, star)?;
        Ok(ast)
    }

    fn projection(&mut self, spots: &mut Spots) -> PResult<(Vec<Projection>, bool)> {
        if self.eat_punct("*") {
            return Ok((Vec::new(), true));
        }
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Var(v) => {
                    self.bump();
                    out.push(Projection::Var(v));
                }
                Tok::Punct("(") => {
                    self.bump();
                    if !self.peek().is_word("COUNT") {
                        return Err(self.aggregate_or_expression());
                    }
                    out.push(self.count()?);
                    self.expect_punct(")")?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("COUNT") => out.push(self.count()?),
                Tok::Word(_) if self.peek_at(1).is_punct("(") => {
                    return Err(self.aggregate_or_expression());
                }
                _ => break,
            }
            spots.projection.push(pos);
        }
        if out.is_empty() {
            return Err(self.unexpected(&["variable", "'*'", "COUNT"]));
        }
        Ok((out, false))
    }

    fn aggregate_or_expression(&self) -> SparqlError {
        match self.peek() {
            Tok::Word(w)
                if ["SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT"]
                    .iter()
                    .any(|a| a.eq_ignore_ascii_case(w)) =>
            {
                self.unsupported(Feature::Aggregate(w.to_ascii_uppercase()))
            }
            _ => self.unsupported(Feature::ExpressionProjection),
        }
    }

    /// `COUNT ( [DISTINCT] (?v | (?v) | *) ) AS ?alias`
    fn count(&mut self) -> PResult<Projection> {
        self.bump();
        self.expect_punct("(")?;
        let distinct = self.eat_word("DISTINCT");
        let var = if self.eat_punct("*") {
            None
        } else if self.eat_punct("(") {
            let v = self.expect_var()?;
            self.expect_punct(")")?;
            Some(v)
        } else {
            Some(self.expect_var()?)
        };
        self.expect_punct(")")?;
        if !self.eat_word("AS") {
            return Err(self.unexpected(&["AS"]));
        }
        let alias = self.expect_var()?;
        Ok(Projection::Count { var, distinct, alias })
    }

    fn group(&mut self) -> PResult<GroupPattern> {
        self.expect_punct("{")?;
        let mut g = GroupPattern::default();
        let mut filter_spots: Vec<Pos> = Vec::new();
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Punct("}") => {
                    self.bump();
                    break;
                }
                Tok::Punct(".") => {
                    self.bump();
                }
                Tok::Punct("{") => {
                    let first = self.group()?;
                    if self.peek().is_word("UNION") {
                        let mut acc = first;
                        while self.eat_word("UNION") {
                            let next = self.group()?;
                            acc = GroupPattern {
                                unions: vec![(acc, next)],
                                ..GroupPattern::default()
                            };
                        }
                        g.unions.extend(acc.unions);
                    } else {
                        g.patterns.extend(first.patterns);
                        g.filters.extend(first.filters);
                        g.optionals.extend(first.optionals);
                        g.unions.extend(first.unions);
                    }
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("FILTER") => {
                    self.bump();
                    let f = self.filter_constraint()?;
                    g.filters.push(f);
                    filter_spots.push(pos);
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("OPTIONAL") => {
                    self.bump();
                    let opt = self.group()?;
                    if opt.is_empty() {
                        return Err(SparqlError::Syntax {
                            line: pos.line,
                            col: pos.col,
                            message: "empty OPTIONAL group".into(),
                            expected: Vec::new(),
                        });
                    }
                    g.optionals.push(opt);
                }
                Tok::Word(w)
                    if ["GRAPH", "MINUS", "BIND", "VALUES", "SERVICE", "EXISTS", "NOT"]
                        .iter()
                        .any(|k| k.eq_ignore_ascii_case(&w)) =>
                {
                    return Err(self.unsupported(Feature::GraphPattern(w.to_ascii_uppercase())));
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("UNION") => {
                    return Err(self.unexpected(&["'{' before UNION"]));
                }
                _ => self.triples_block(&mut g)?,
            }
        }
        let declared = g.variables();
        for (f, pos) in g.filters.iter().zip(&filter_spots) {
            for v in f.variables() {
                if !declared.iter().any(|d| d == v) {
                    return Err(scope_at(*pos, format!("FILTER uses ?{v}, which no pattern of its group binds")));
                }
            }
        }
        Ok(g)
    }

    fn triples_block(&mut self, g: &mut GroupPattern) -> PResult<()> {
        let pos = self.pos();
        let subject = match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                PatternTerm::Var(v)
            }
            Tok::Iri(_) | Tok::PName { .. } => PatternTerm::Const(RdfTerm::Iri(self.iri()?)),
            Tok::BlankNode | Tok::Punct("[") => return Err(self.unsupported(Feature::BlankNode)),
            Tok::Punct("(") => return Err(self.unsupported(Feature::PropertyPath)),
            _ => return Err(self.unexpected(&["triple pattern", "FILTER", "OPTIONAL", "'{'", "'}'"])),
        };
        loop {
            let predicate = self.predicate()?;
            loop {
                let object = self.object()?;
                g.patterns.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                    pos,
                });
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                break;
            }
            while self.eat_punct(";") {}
            if self.peek().is_punct(".") || self.peek().is_punct("}") {
                break;
            }
        }
        if !self.eat_punct(".") && !self.peek().is_punct("}") {
            // Another item may follow directly when it is not a triple.
            let ok = matches!(self.peek(), Tok::Word(w) if w != "a") || self.peek().is_punct("{");
            if !ok {
                return Err(self.unexpected(&["'.'", "';'", "','", "'}'"]));
            }
        }
        Ok(())
    }

    fn iri(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Iri(i) => {
                self.bump();
                Ok(i)
            }
            Tok::PName { prefix, local } => {
                let iri = self.expand(&prefix, &local)?;
                self.bump();
                Ok(iri)
            }
            _ => Err(self.unexpected(&["IRI"])),
        }
    }

    fn predicate(&mut self) -> PResult<String> {
        let iri = match self.peek().clone() {
            Tok::Var(_) => return Err(self.unsupported(Feature::VariablePredicate)),
            Tok::Word(w) if w == "a" => {
                self.bump();
                RDF_TYPE.to_string()
            }
            Tok::Iri(_) | Tok::PName { .. } => self.iri()?,
            Tok::Punct("^" | "(" | "!") => return Err(self.unsupported(Feature::PropertyPath)),
            _ => return Err(self.unexpected(&["predicate"])),
        };
        if ["/", "|", "*", "+", "?", "^"].iter().any(|p| self.peek().is_punct(p)) {
            return Err(self.unsupported(Feature::PropertyPath));
        }
        Ok(iri)
    }

    fn object(&mut self) -> PResult<PatternTerm> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(PatternTerm::Var(v))
            }
            Tok::BlankNode | Tok::Punct("[") => Err(self.unsupported(Feature::BlankNode)),
            Tok::Punct("(") => Err(self.unsupported(Feature::PropertyPath)),
            _ => Ok(PatternTerm::Const(self.constant()?)),
        }
    }

    /// IRI, string or numeric constant.
    fn constant(&mut self) -> PResult<RdfTerm> {
        let term = match self.peek().clone() {
            Tok::Iri(_) | Tok::PName { .. } => RdfTerm::Iri(self.iri()?),
            Tok::Str(s) => {
                self.bump();
                RdfTerm::Str(s)
            }
            Tok::Num(n) => {
                let lit = NumericLiteral::parse(&n)
                    .ok_or_else(|| self.error(format!("malformed number {n}"), &[]))?;
                self.bump();
                RdfTerm::Num(lit)
            }
            Tok::Word(w) if w == "true" || w == "false" => {
                return Err(self.unsupported(Feature::DatatypedLiteral))
            }
            _ => return Err(self.unexpected(&["IRI", "literal", "variable"])),
        };
        if self.peek().is_punct("@") {
            return Err(self.unsupported(Feature::LanguageTag));
        }
        if self.peek().is_punct("^^") {
            return Err(self.unsupported(Feature::DatatypedLiteral));
        }
        Ok(term)
    }

    fn filter_constraint(&mut self) -> PResult<FilterExpr> {
        if self.peek().is_punct("(") {
            self.bump();
            let e = self.or_expr()?;
            self.expect_punct(")")?;
            Ok(e)
        } else if matches!(self.peek(), Tok::Word(_)) {
            Err(self.function_call())
        } else {
            Err(self.unexpected(&["'('"]))
        }
    }

    fn function_call(&self) -> SparqlError {
        match self.peek() {
            Tok::Word(w) if w.eq_ignore_ascii_case("REGEX") => self.unsupported(Feature::Regex),
            Tok::Word(w) => self.unsupported(Feature::Function(w.to_ascii_uppercase())),
            _ => self.unsupported(Feature::Function(self.peek().describe())),
        }
    }

    fn or_expr(&mut self) -> PResult<FilterExpr> {
        let mut e = self.and_expr()?;
        while self.eat_punct("||") {
            let rhs = self.and_expr()?;
            e = FilterExpr::Or(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> PResult<FilterExpr> {
        let mut e = self.primary()?;
        while self.eat_punct("&&") {
            let rhs = self.primary()?;
            e = FilterExpr::And(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<FilterExpr> {
        match self.peek().clone() {
            Tok::Punct("(") => {
                self.bump();
                let e = self.or_expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Tok::Punct("!") => Err(self.unsupported(Feature::Negation)),
            Tok::Word(w) if self.peek_at(1).is_punct("(") || w.eq_ignore_ascii_case("REGEX") => {
                Err(self.function_call())
            }
            _ => self.comparison(),
        }
    }

    fn operand(&mut self) -> PResult<Operand> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Operand::Var(v))
            }
            Tok::Word(_) if self.peek_at(1).is_punct("(") => Err(self.function_call()),
            _ => Ok(Operand::Const(self.constant()?)),
        }
    }

    fn comparison(&mut self) -> PResult<FilterExpr> {
        let start = self.pos();
        let lhs = self.operand()?;
        let op = match self.peek() {
            Tok::Punct("=") => CompareOp::Eq,
            Tok::Punct("!=") => CompareOp::Neq,
            Tok::Punct("<") => CompareOp::Lt,
            Tok::Punct("<=") => CompareOp::Lte,
            Tok::Punct(">") => CompareOp::Gt,
            Tok::Punct(">=") => CompareOp::Gte,
            _ => return Err(self.unexpected(&["comparison operator"])),
        };
        self.bump();
        let rhs = self.operand()?;
        match (lhs, rhs) {
            (Operand::Var(lhs), rhs) => Ok(FilterExpr::Compare { op, lhs, rhs }),
            (lhs @ Operand::Const(_), Operand::Var(v)) => Ok(FilterExpr::Compare {
                op: op.flipped(),
                lhs: v,
                rhs: lhs,
            }),
            _ => Err(SparqlError::Syntax {
                line: start.line,
                col: start.col,
                message: "a comparison needs at least one variable".into(),
                expected: Vec::new(),
            }),
        }
    }
}

fn unsupported_at(pos: Pos, feature: Feature) -> SparqlError {
    SparqlError::Unsupported {
        line: pos.line,
        col: pos.col,
        feature,
    }
}

fn scope_at(pos: Pos, message: String) -> SparqlError {
    SparqlError::Scope {
        line: pos.line,
        col: pos.col,
        message,
    }
}

fn validate(ast: &SparqlAst, spots: &Spots, star: bool) -> PResult<()> {
    if ast.where_clause.is_empty() {
        return Err(scope_at(spots.where_clause, "the WHERE clause has no triple patterns".into()));
    }
    let declared = ast.where_clause.variables();
    let is_declared = |v: &str| declared.iter().any(|d| d == v);
    let proj_pos = |i: usize| spots.projection.get(i).copied().unwrap_or(spots.where_clause);

    if let Some(k) = &ast.group_by {
        if !is_declared(k) {
            return Err(scope_at(spots.group_by, format!("GROUP BY key ?{k} is not bound by the WHERE clause")));
        }
        if star {
            return Err(scope_at(spots.group_by, "SELECT * cannot be combined with GROUP BY".into()));
        }
    }
    let mut counts = 0;
    let mut columns: Vec<&str> = Vec::new();
    for (i, p) in ast.projection.iter().enumerate() {
        let pos = proj_pos(i);
        match p {
            Projection::Var(v) => {
                if !is_declared(v) {
                    return Err(scope_at(pos, format!("projected ?{v} is not bound by the WHERE clause")));
                }
            }
            Projection::Count { var, alias, .. } => {
                counts += 1;
                if counts > 1 {
                    return Err(unsupported_at(pos, Feature::Aggregate("more than one COUNT".into())));
                }
                if let Some(v) = var {
                    if !is_declared(v) {
                        return Err(scope_at(pos, format!("counted ?{v} is not bound by the WHERE clause")));
                    }
                }
                if is_declared(alias) {
                    return Err(scope_at(pos, format!("alias ?{alias} is already bound by the WHERE clause")));
                }
            }
        }
        if columns.contains(&p.column()) {
            return Err(scope_at(pos, format!("?{} is projected twice", p.column())));
        }
        columns.push(p.column());
    }
    let aggregated = counts > 0 || ast.group_by.is_some();
    if aggregated {
        for (i, p) in ast.projection.iter().enumerate() {
            if let Projection::Var(v) = p {
                if ast.group_by.as_deref() != Some(v.as_str()) {
                    return Err(scope_at(proj_pos(i), format!("?{v} must be the GROUP BY key or be aggregated")));
                }
            }
        }
    }
    for (key, pos) in ast.order_by.iter().zip(&spots.order_by) {
        let ok = if aggregated {
            ast.group_by.as_deref() == Some(key.var.as_str())
                || ast.projection.iter().any(|p| matches!(p, Projection::Count { alias, .. } if *alias == key.var))
        } else {
            is_declared(&key.var)
        };
        if !ok {
            return Err(scope_at(*pos, format!("ORDER BY key ?{} is not in scope", key.var)));
        }
    }
    Ok(())
}
