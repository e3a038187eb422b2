use std::collections::BTreeMap;
use std::fmt;

use crate::model::RdfTerm;

/// Source position. Compares equal to every other position so that ASTs built
/// from different text layouts stay comparable.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Subject or object position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Const(RdfTerm),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }
}

/// A triple pattern. The predicate is always a constant IRI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: String,
    pub object: PatternTerm,
    pub pos: Pos,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: impl Into<String>, object: PatternTerm) -> Self {
        Self {
            subject,
            predicate: predicate.into(),
            object,
            pos: Pos::default(),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.subject.var().into_iter().chain(self.object.var())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Eq,
    Neq,
    Lt,
    Lte,
    Gt,
    Gte,
}

impl CompareOp {
    pub const ALL: [CompareOp; 6] = [
        CompareOp::Eq,
        CompareOp::Neq,
        CompareOp::Lt,
        CompareOp::Lte,
        CompareOp::Gt,
        CompareOp::Gte,
    ];

    /// The operator with its operands swapped: `a < b` iff `b > a`.
    pub fn flipped(self) -> Self {
        match self {
            CompareOp::Lt => CompareOp::Gt,
            CompareOp::Lte => CompareOp::Gte,
            CompareOp::Gt => CompareOp::Lt,
            CompareOp::Gte => CompareOp::Lte,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Neq => "!=",
            CompareOp::Lt => "<",
            CompareOp::Lte => "<=",
            CompareOp::Gt => ">",
            CompareOp::Gte => ">=",
        }
    }

    /// Gremlin predicate name (`eq`, `neq`, `lt`, ...).
    pub fn gremlin(self) -> &'static str {
        match self {
            CompareOp::Eq => "eq",
            CompareOp::Neq => "neq",
            CompareOp::Lt => "lt",
            CompareOp::Lte => "lte",
            CompareOp::Gt => "gt",
            CompareOp::Gte => "gte",
        }
    }

    pub fn from_gremlin(name: &str) -> Option<Self> {
        CompareOp::ALL.into_iter().find(|op| op.gremlin() == name)
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CompareOp::Eq | CompareOp::Neq)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Const(RdfTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterExpr {
    Compare {
        op: CompareOp,
        lhs: String,
        rhs: Operand,
    },
    And(Box<FilterExpr>, Box<FilterExpr>),
    Or(Box<FilterExpr>, Box<FilterExpr>),
}

impl FilterExpr {
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            FilterExpr::Compare { lhs, rhs, .. } => {
                out.push(lhs);
                if let Operand::Var(v) = rhs {
                    out.push(v);
                }
            }
            FilterExpr::And(a, b) | FilterExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupPattern {
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
    pub optionals: Vec<GroupPattern>,
    pub unions: Vec<(GroupPattern, GroupPattern)>,
}

impl GroupPattern {
    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty() && self.optionals.is_empty() && self.unions.is_empty()
    }

    /// Variables mentioned by triple patterns here or in nested groups, in
    /// order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        for tp in &self.patterns {
            for v in tp.variables() {
                if !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        }
        for (a, b) in &self.unions {
            a.collect_vars(out);
            b.collect_vars(out);
        }
        for o in &self.optionals {
            o.collect_vars(out);
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.variables().iter().any(|v| v == var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    /// `COUNT(?var)`, `COUNT(DISTINCT ?var)` or `COUNT(*)` when `var` is `None`.
    Count {
        var: Option<String>,
        distinct: bool,
        alias: String,
    },
}

impl Projection {
    /// Output column name.
    pub fn column(&self) -> &str {
        match self {
            Projection::Var(v) => v,
            Projection::Count { alias, .. } => alias,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SortDir {
    Asc,
    Desc,
}

impl SortDir {
    pub fn name(self) -> &'static str {
        match self {
            SortDir::Asc => "asc",
            SortDir::Desc => "desc",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderKey {
    pub var: String,
    pub dir: SortDir,
}

/// A parsed SELECT query. Prefixed names are already expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparqlAst {
    pub prefixes: BTreeMap<String, String>,
    pub projection: Vec<Projection>,
    pub distinct: bool,
    pub where_clause: GroupPattern,
    pub group_by: Option<String>,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<u64>,
    pub offset: Option<u64>,
}

impl SparqlAst {
    pub fn columns(&self) -> Vec<String> {
        self.projection.iter().map(|p| p.column().to_string()).collect()
    }

    pub fn count_projection(&self) -> Option<&Projection> {
        self.projection
            .iter()
            .find(|p| matches!(p, Projection::Count { .. }))
    }

    /// Triple patterns of the top-level group in source order; patterns inside
    /// OPTIONAL and UNION sub-groups are not included.
    pub fn get_all_bgps(&self) -> Vec<TriplePattern> {
        self.where_clause.patterns.clone()
    }
}
