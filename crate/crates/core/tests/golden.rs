//! Golden translations for every single-step case and every operator mapping.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p s2g-core --test golden`.

use std::path::{Path, PathBuf};

use s2g_core::emit::{emit_bytecode, emit_groovy, parse_bytecode, to_doc};
use s2g_core::ir::{instruction_steps, IrStep, TraversalIR};
use s2g_core::model::{Direction, PrefixRegistry};
use s2g_core::sparql::parse;
use s2g_core::sst::{classify, map_to_instruction, SstTag};
use s2g_core::translate::translate;

/// Single-step cases and the tag each query's pattern must classify as.
/// Every case has a `<stem>.rq` query next to its golden files; the reversed
/// hop `sst_ein` is derived from `sst_eout`.
const SST_CASES: &[(&str, SstTag)] = &[
    ("sst_lv", SstTag::Lv),
    ("sst_le", SstTag::Le),
    ("sst_pv1", SstTag::Pv1),
    ("sst_pe1", SstTag::Pe1),
    ("sst_pe2", SstTag::Pe2),
    ("sst_pv2", SstTag::Pv2),
    ("sst_eout", SstTag::Eout),
];

/// Operator mappings, one query each.
const OPERATOR_CASES: &[&str] = &[
    "op_pattern",
    "op_match",
    "op_filter",
    "op_join",
    "op_select",
    "op_union",
    "op_distinct",
    "op_limit",
    "op_offset",
    "op_order",
    "op_group",
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn query(stem: &str) -> String {
    std::fs::read_to_string(golden_dir().join(format!("{stem}.rq"))).unwrap()
}

fn ir_of(stem: &str) -> TraversalIR {
    translate(&parse(&query(stem)).unwrap(), &PrefixRegistry::default()).unwrap()
}

/// The Eout golden query with its hop read from the far end.
fn ein_ir() -> TraversalIR {
    let ast = parse(&query("sst_eout")).unwrap();
    let case = classify(&ast.where_clause.patterns[0], &PrefixRegistry::default()).unwrap();
    let reversed = case.reversed().unwrap();
    assert_eq!(reversed.tag, SstTag::Ein);
    let mut ir = ir_of("sst_eout");
    ir.splice(1..4, instruction_steps(&map_to_instruction(&reversed)));
    ir
}

fn check(stem: &str, ir: &TraversalIR, failures: &mut Vec<String>) {
    let bytecode = emit_bytecode(ir);
    let groovy = emit_groovy(ir) + "\n";
    let dir = golden_dir();
    for (ext, text) in [("gbc.json", &bytecode), ("groovy", &groovy)] {
        let path = dir.join(format!("{stem}.{ext}"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, text).unwrap();
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if &expected == text => {}
            Ok(_) => failures.push(format!("{stem}.{ext} differs")),
            Err(e) => failures.push(format!("{stem}.{ext}: {e}")),
        }
    }
    // The bytecode on disk is also a faithful encoding of the IR.
    assert_eq!(parse_bytecode(&bytecode).unwrap(), to_doc(ir), "{stem}");
}

#[test]
fn single_step_cases_match_golden_files() {
    let mut failures = Vec::new();
    for (stem, tag) in SST_CASES {
        let ast = parse(&query(stem)).unwrap();
        let case = classify(&ast.where_clause.patterns[0], &PrefixRegistry::default()).unwrap();
        assert_eq!(case.tag, *tag, "{stem}");
        check(stem, &ir_of(stem), &mut failures);
    }
    check("sst_ein", &ein_ir(), &mut failures);
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn operator_cases_match_golden_files() {
    let mut failures = Vec::new();
    for stem in OPERATOR_CASES {
        check(stem, &ir_of(stem), &mut failures);
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn single_step_core_steps_have_the_expected_shape() {
    let core = |ir: &TraversalIR| ir[2].clone();
    assert_eq!(core(&ir_of("sst_lv")), IrStep::HasLabel("person".into()));
    assert_eq!(core(&ir_of("sst_le")), IrStep::HasLabel("knows".into()));
    assert!(matches!(core(&ir_of("sst_pv1")), IrStep::Has { key, .. } if key == "name"));
    assert!(matches!(core(&ir_of("sst_pe1")), IrStep::Has { key, .. } if key == "weight"));
    assert_eq!(core(&ir_of("sst_pe2")), IrStep::Properties("weight".into()));
    assert_eq!(core(&ir_of("sst_pv2")), IrStep::Properties("name".into()));
    let out = ir_of("sst_eout");
    assert_eq!(
        out[1..4],
        [
            IrStep::MatchStart("x".into()),
            IrStep::Vertex { dir: Direction::Out, label: "knows".into() },
            IrStep::MatchEnd(Some("y".into())),
        ]
    );
    assert_eq!(
        ein_ir()[1..4],
        [
            IrStep::MatchStart("y".into()),
            IrStep::Vertex { dir: Direction::In, label: "knows".into() },
            IrStep::MatchEnd(Some("x".into())),
        ]
    );
}

#[test]
fn golden_directory_has_no_strays() {
    let stems: Vec<&str> = SST_CASES.iter().map(|c| c.0).chain(OPERATOR_CASES.iter().copied()).collect();
    let mut expected: Vec<String> = stems
        .iter()
        .flat_map(|s| [format!("{s}.rq"), format!("{s}.gbc.json"), format!("{s}.groovy")])
        .chain(["sst_ein.gbc.json".to_string(), "sst_ein.groovy".to_string()])
        .collect();
    expected.sort();
    let mut found: Vec<String> = std::fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    found.sort();
    assert_eq!(found, expected);
    assert_eq!(stems.len() + 1, 8 + 11);
}
