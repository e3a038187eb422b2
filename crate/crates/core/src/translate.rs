//! SPARQL AST to traversal IR.

use thiserror::Error;

use crate::ir::{first_unproduced, instruction_steps, IrStep, PredicateTree, Traversal, TraversalIR, WhereRhs};
use crate::model::PrefixRegistry;
use crate::sparql::{FilterExpr, GroupPattern, Operand, Projection, SparqlAst};
use crate::sst::{anchor_instruction, anchored_iris, classify, map_to_instruction, ClassifyError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("scope error: {0}")]
    Scope(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub fn translate(ast: &SparqlAst, reg: &PrefixRegistry) -> Result<TraversalIR, TranslateError> {
    if ast.where_clause.is_empty() {
        return Err(TranslateError::Scope("the WHERE clause has no triple patterns".into()));
    }
    let mut ir = vec![IrStep::Graph];
    ir.extend(translate_group(&ast.where_clause, reg)?);
    let ir = apply_modifiers(ir, ast);
    if let Some(v) = first_unproduced(&ir) {
        return Err(TranslateError::Scope(format!("?{v} is used but never bound")));
    }
    Ok(ir)
}

/// Pattern stage, unions, optionals and filters of one group.
pub fn translate_group(g: &GroupPattern, reg: &PrefixRegistry) -> Result<Traversal, TranslateError> {
    if g.patterns.is_empty() && g.unions.is_empty() {
        return Err(TranslateError::Unsupported(
            "a group made only of OPTIONAL parts has nothing to extend".into(),
        ));
    }
    let mut anchors: Vec<String> = Vec::new();
    for tp in &g.patterns {
        for iri in anchored_iris(tp, reg) {
            if !anchors.contains(&iri) {
                anchors.push(iri);
            }
        }
    }
    let mut instructions: Vec<Traversal> = anchors
        .iter()
        .map(|iri| instruction_steps(&anchor_instruction(iri, reg)))
        .collect();
    for tp in &g.patterns {
        instructions.push(instruction_steps(&map_to_instruction(&classify(tp, reg)?)));
    }

    let mut out: Traversal = Vec::new();
    match instructions.len() {
        0 => {}
        1 => out.extend(instructions.pop().unwrap_or_default()),
        _ => out.push(IrStep::Match(instructions)),
    }
    for (a, b) in &g.unions {
        out.push(IrStep::Union(vec![translate_group(a, reg)?, translate_group(b, reg)?]));
    }
    for opt in &g.optionals {
        out.push(IrStep::Choose(translate_group(opt, reg)?));
    }
    if let Some(pred) = conjoin(&g.filters) {
        out.push(IrStep::Where(pred));
    }
    Ok(out)
}

/// All filters of a group as one predicate tree; `None` when there are none.
pub fn conjoin(filters: &[FilterExpr]) -> Option<PredicateTree> {
    let mut trees: Vec<PredicateTree> = filters.iter().map(predicate_tree).collect();
    match trees.len() {
        0 => None,
        1 => trees.pop(),
        _ => Some(flatten_and(trees)),
    }
}

fn flatten_and(children: Vec<PredicateTree>) -> PredicateTree {
    let mut out = Vec::new();
    for c in children {
        match c {
            PredicateTree::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    PredicateTree::And(out)
}

fn flatten_or(children: Vec<PredicateTree>) -> PredicateTree {
    let mut out = Vec::new();
    for c in children {
        match c {
            PredicateTree::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    PredicateTree::Or(out)
}

pub fn predicate_tree(f: &FilterExpr) -> PredicateTree {
    match f {
        FilterExpr::Compare { op, lhs, rhs } => PredicateTree::Leaf {
            key: lhs.clone(),
            op: *op,
            rhs: match rhs {
                Operand::Var(v) => WhereRhs::Var(v.clone()),
                Operand::Const(c) => WhereRhs::Const(c.clone()),
            },
        },
        FilterExpr::And(a, b) => flatten_and(vec![predicate_tree(a), predicate_tree(b)]),
        FilterExpr::Or(a, b) => flatten_or(vec![predicate_tree(a), predicate_tree(b)]),
    }
}

/// Appends aggregation, projection and solution modifiers in the fixed order
/// aggregate, Select, Order, Dedup, Range.
pub fn apply_modifiers(mut ir: TraversalIR, ast: &SparqlAst) -> TraversalIR {
    match (ast.count_projection(), &ast.group_by) {
        (Some(Projection::Count { var, distinct, alias }), group) => {
            if *distinct {
                let mut keys: Vec<String> = group.iter().cloned().collect();
                match var {
                    Some(v) => keys.push(v.clone()),
                    None => keys.extend(ast.where_clause.variables()),
                }
                keys.dedup();
                ir.push(IrStep::Dedup(keys));
            }
            ir.push(match group {
                Some(key) => IrStep::GroupCount {
                    key: key.clone(),
                    counted: var.clone(),
                    alias: alias.clone(),
                },
                None => IrStep::Count {
                    counted: var.clone(),
                    alias: alias.clone(),
                },
            });
        }
        (_, Some(key)) => ir.push(IrStep::Group(key.clone())),
        _ => {}
    }
    let columns = ast.columns();
    ir.push(IrStep::Select(columns.clone()));
    if !ast.order_by.is_empty() {
        ir.push(IrStep::Order(ast.order_by.iter().map(|k| (k.var.clone(), k.dir)).collect()));
    }
    if ast.distinct {
        ir.push(IrStep::Dedup(columns));
    }
    match (ast.limit, ast.offset) {
        (None, None) => {}
        (limit, offset) => {
            let low = offset.unwrap_or(0);
            ir.push(IrStep::Range {
                low,
                high: limit.map(|c| c + low),
            });
        }
    }
    ir
}
