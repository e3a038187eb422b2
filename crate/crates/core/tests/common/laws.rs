//! Engine laws as seeded checks, each returning a description of the first
//! violation found.

use rust_decimal::Decimal;

use s2g_core::engine::{execute, execute_with, ExecOptions};
use s2g_core::ir::{IrStep, Traversal};
use s2g_core::model::PropertyGraph;
use s2g_core::solution::{SolutionMultiset, Value};

use super::{distinct_rows, project, random_patterns, random_pg, rng};

pub type Law = fn(u64) -> Result<(), String>;

pub const LAWS: [(&str, Law); 7] = [
    ("bulking on and off agree", bulking),
    ("union adds branch sizes", union),
    ("dedup removes only duplicates", dedup),
    ("range keeps the requested window", range),
    ("count is one row with the stream size", count),
    ("optional keeps every required row", optional),
    ("hops read from either end agree", reversal),
];

fn ensure(ok: bool, seed: u64, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("seed {seed}: {}", what()))
    }
}

fn base(patterns: &[Traversal]) -> Vec<IrStep> {
    vec![IrStep::Graph, IrStep::Match(patterns.to_vec())]
}

fn with(mut ir: Vec<IrStep>, step: IrStep) -> Vec<IrStep> {
    ir.push(step);
    ir
}

fn run(ir: &[IrStep], g: &PropertyGraph) -> Result<SolutionMultiset, String> {
    execute(ir, g).map_err(|e| e.to_string())
}

pub fn reverse_hops(patterns: &[Traversal]) -> Vec<Traversal> {
    patterns
        .iter()
        .map(|p| match p.as_slice() {
            [IrStep::MatchStart(x), IrStep::Vertex { dir, label }, IrStep::MatchEnd(Some(y))] => vec![
                IrStep::MatchStart(y.clone()),
                IrStep::Vertex {
                    dir: dir.reverse(),
                    label: label.clone(),
                },
                IrStep::MatchEnd(Some(x.clone())),
            ],
            _ => p.clone(),
        })
        .collect()
}

pub fn bulking(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let ir = base(&random_patterns(&mut r, 3));
    let opts = |bulking| ExecOptions {
        bulking,
        ..ExecOptions::default()
    };
    let on = execute_with(&ir, &g, &opts(true)).map_err(|e| e.to_string())?;
    let off = execute_with(&ir, &g, &opts(false)).map_err(|e| e.to_string())?;
    ensure(on.same_sequence(&off), seed, || format!("{on:?} vs {off:?}"))
}

pub fn union(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let a = vec![IrStep::Match(random_patterns(&mut r, 2))];
    let b = vec![IrStep::Match(random_patterns(&mut r, 2))];
    let size = |t: &Traversal| run(&[vec![IrStep::Graph], t.clone()].concat(), &g).map(|m| m.len());
    let both = run(&[IrStep::Graph, IrStep::Union(vec![a.clone(), b.clone()])], &g)?;
    let (na, nb) = (size(&a)?, size(&b)?);
    ensure(both.len() == na + nb, seed, || format!("{} != {na} + {nb}", both.len()))
}

pub fn dedup(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let ir = base(&random_patterns(&mut r, 3));
    let plain = run(&ir, &g)?;
    let deduped = run(&with(ir, IrStep::Dedup(plain.columns.clone())), &g)?;
    ensure(
        deduped.len() <= plain.len()
            && deduped.len() == distinct_rows(&deduped).len()
            && distinct_rows(&deduped) == distinct_rows(&plain),
        seed,
        || format!("{plain:?} deduped to {deduped:?}"),
    )
}

pub fn range(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let ir = base(&random_patterns(&mut r, 3));
    let low = seed % 6;
    let high = (!seed.is_multiple_of(7)).then_some(low + (seed / 7) % 6);
    let plain = run(&ir, &g)?;
    let ranged = run(&with(ir, IrStep::Range { low, high }), &g)?;
    let n = plain.len() as u64;
    let expected = high.unwrap_or(n).min(n).saturating_sub(low);
    let start = low.min(n) as usize;
    ensure(
        ranged.len() as u64 == expected && ranged.rows[..] == plain.rows[start..start + expected as usize],
        seed,
        || format!("range({low},{high:?}) of {n} rows gave {}", ranged.len()),
    )
}

pub fn count(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let ir = base(&random_patterns(&mut r, 3));
    let plain = run(&ir, &g)?;
    let counted = run(
        &with(
            ir,
            IrStep::Count {
                counted: None,
                alias: "n".into(),
            },
        ),
        &g,
    )?;
    ensure(
        counted.columns == ["n"] && counted.rows == vec![vec![Value::Num(Decimal::from(plain.len() as u64))]],
        seed,
        || format!("{counted:?} for {} rows", plain.len()),
    )
}

pub fn optional(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let ir = base(&random_patterns(&mut r, 2));
    let plain = run(&ir, &g)?;
    let opt = vec![IrStep::Match(random_patterns(&mut r, 2))];
    let restricted = project(&run(&with(ir, IrStep::Choose(opt)), &g)?, &plain.columns);
    ensure(
        plain.is_sub_multiset_of(&restricted) && distinct_rows(&plain) == distinct_rows(&restricted),
        seed,
        || format!("{plain:?} not kept in {restricted:?}"),
    )
}

pub fn reversal(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let g = random_pg(&mut r, 8);
    let patterns = random_patterns(&mut r, 3);
    let forward = run(&base(&patterns), &g)?;
    let backward = project(&run(&base(&reverse_hops(&patterns)), &g)?, &forward.columns);
    ensure(forward.same_multiset(&backward), seed, || format!("{forward:?} vs {backward:?}"))
}
