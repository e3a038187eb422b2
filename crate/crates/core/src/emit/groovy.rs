use rust_decimal::Decimal;

use crate::ir::{IrStep, PredicateTree, WhereRhs};
use crate::model::{canonical_decimal, Direction, PropertyValue, RdfTerm};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '$' => out.push_str("\\$"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

fn quoted_list(keys: &[String]) -> String {
    keys.iter().map(|k| quote(k)).collect::<Vec<_>>().join(",")
}

fn number(d: Decimal) -> String {
    canonical_decimal(d)
}

fn property(v: &PropertyValue) -> String {
    match v {
        PropertyValue::Num(d) => number(*d),
        PropertyValue::Str(s) => quote(s),
    }
}

fn constant(t: &RdfTerm) -> String {
    match t {
        RdfTerm::Iri(i) => format!("iri({})", quote(i)),
        RdfTerm::Str(s) => quote(s),
        RdfTerm::Num(n) => number(n.value()),
    }
}

fn predicate(p: &PredicateTree) -> String {
    match p {
        PredicateTree::Leaf { key, op, rhs } => match rhs {
            WhereRhs::Const(c) => format!("__.select({}).is({}({}))", quote(key), op.gremlin(), constant(c)),
            WhereRhs::Var(v) => format!("__.select({}).where({}({}))", quote(key), op.gremlin(), quote(v)),
        },
        PredicateTree::And(c) => format!("__.and({})", c.iter().map(predicate).collect::<Vec<_>>().join(", ")),
        PredicateTree::Or(c) => format!("__.or({})", c.iter().map(predicate).collect::<Vec<_>>().join(", ")),
    }
}

fn nested(t: &[IrStep]) -> String {
    let mut out = String::from("__");
    write_steps(&mut out, t);
    out
}

fn nested_list(ts: &[Vec<IrStep>]) -> String {
    ts.iter().map(|t| nested(t)).collect::<Vec<_>>().join(", ")
}

fn write_steps(out: &mut String, t: &[IrStep]) {
    for st in t {
        let text = match st {
            IrStep::Graph => "g.V()".to_string(),
            IrStep::MatchStart(v) | IrStep::MatchEnd(Some(v)) => format!(".as({})", quote(v)),
            IrStep::MatchEnd(None) => continue,
            IrStep::Has { key, value } => format!(".has({},{})", quote(key), property(value)),
            IrStep::HasLabel(l) => format!(".hasLabel({})", quote(l)),
            IrStep::Properties(k) => format!(".values({})", quote(k)),
            IrStep::Vertex { dir: Direction::Out, label } => format!(".out({})", quote(label)),
            IrStep::Vertex { dir: Direction::In, label } => format!(".in({})", quote(label)),
            IrStep::Match(ts) => format!(".match({})", nested_list(ts)),
            IrStep::Where(p) => format!(".where({})", predicate(p)),
            IrStep::And(ts) => format!(".and({})", nested_list(ts)),
            IrStep::Union(ts) => format!(".union({})", nested_list(ts)),
            IrStep::Choose(t) => format!(".optional({})", nested(t)),
            IrStep::Select(k) => format!(".select({})", quoted_list(k)),
            IrStep::Dedup(k) => format!(".dedup({})", quoted_list(k)),
            IrStep::Range { low, high } => match high {
                Some(h) => format!(".range({low},{h})"),
                None => format!(".range({low},-1)"),
            },
            IrStep::Order(keys) => {
                let mut s = String::from(".order()");
                for (k, d) in keys {
                    s.push_str(&format!(".by({},{})", quote(k), d.name()));
                }
                s
            }
            IrStep::Group(k) => format!(".group().by({})", quote(k)),
            IrStep::GroupCount { key, counted, alias } => match counted {
                Some(c) => format!(".groupCount().by({}).by({}).as({})", quote(key), quote(c), quote(alias)),
                None => format!(".groupCount().by({}).as({})", quote(key), quote(alias)),
            },
            IrStep::Count { counted, alias } => match counted {
                Some(c) => format!(".count({}).as({})", quote(c), quote(alias)),
                None => format!(".count().as({})", quote(alias)),
            },
        };
        out.push_str(&text);
    }
}

/// Single-line Gremlin-Groovy text. A traversal without a leading graph step
/// renders as an anonymous `__` traversal.
pub fn emit_groovy(ir: &[IrStep]) -> String {
    if matches!(ir.first(), Some(IrStep::Graph)) {
        let mut out = String::new();
        write_steps(&mut out, ir);
        out
    } else {
        nested(ir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparql::CompareOp;

    #[test]
    fn quoting_escapes_groovy_specials() {
        assert_eq!(quote("it's"), r"'it\'s'");
        assert_eq!(quote("a\\b"), r"'a\\b'");
        assert_eq!(quote("$x"), r"'\$x'");
        assert_eq!(quote("a\tb\nc"), r"'a\tb\nc'");
    }

    #[test]
    fn numbers_are_canonical() {
        let ir = [
            IrStep::Graph,
            IrStep::Has {
                key: "w".into(),
                value: PropertyValue::number("0.50".parse().unwrap()),
            },
        ];
        assert_eq!(emit_groovy(&ir), "g.V().has('w',0.5)");
    }

    #[test]
    fn predicates_and_unbounded_range() {
        let leaf = |op, rhs| PredicateTree::Leaf {
            key: "a".into(),
            op,
            rhs,
        };
        let ir = [
            IrStep::Graph,
            IrStep::Where(PredicateTree::Or(vec![
                leaf(CompareOp::Gte, WhereRhs::Const(RdfTerm::number("3"))),
                leaf(CompareOp::Neq, WhereRhs::Var("b".into())),
            ])),
            IrStep::Range { low: 3, high: None },
        ];
        assert_eq!(
            emit_groovy(&ir),
            "g.V().where(__.or(__.select('a').is(gte(3)), __.select('a').where(neq('b')))).range(3,-1)"
        );
    }
}
