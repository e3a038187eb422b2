//! Properties of the reference evaluator, and agreement with the translated
//! traversal on randomly generated queries.

use proptest::prelude::*;

use s2g_core::model::{rdf_to_pg, PrefixRegistry, RdfGraph};
use s2g_core::refeval::ref_evaluate;
use s2g_core::solution::{const_value, SolutionMultiset, Value};
use s2g_core::sparql::parse;
use s2g_core::synth::random_graph;
use s2g_core::verify::{verify_query, GraphPair};

const PERSONS: [&str; 2] = ["a", "b"];
const SOFTWARE: [&str; 1] = ["c"];
const VALUES: [&str; 2] = ["n", "m"];

/// Patterns over a typed variable pool, so that most conjunctions can match:
/// ?a ?b stand for persons, ?c for software, ?n ?m for literals.
fn pattern() -> impl Strategy<Value = String> {
    let person = || prop::sample::select(PERSONS.to_vec());
    let value = || prop::sample::select(VALUES.to_vec());
    let any_vertex = || prop::sample::select([PERSONS.as_slice(), SOFTWARE.as_slice()].concat());
    prop_oneof![
        (person(), person()).prop_map(|(s, o)| format!("?{s} e:knows ?{o} .")),
        person().prop_map(|s| format!("?{s} e:created ?c .")),
        (any_vertex(), value()).prop_map(|(s, o)| format!("?{s} v:name ?{o} .")),
        (person(), value()).prop_map(|(s, o)| format!("?{s} v:age ?{o} .")),
        value().prop_map(|o| format!("?c v:lang ?{o} .")),
        person().prop_map(|s| format!("?{s} v:label \"person\" .")),
        Just("?c v:lang \"java\" .".to_string()),
    ]
}

fn bgp(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(pattern(), 1..=max)
}

fn vars_of(patterns: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for p in patterns {
        for w in p.split_whitespace().filter(|w| w.starts_with('?')) {
            if !out.iter().any(|v| v == &w[1..]) {
                out.push(w[1..].to_string());
            }
        }
    }
    out
}

fn graph(seed: u64) -> RdfGraph {
    random_graph(15, seed)
}

fn eval(query: &str, g: &RdfGraph) -> SolutionMultiset {
    ref_evaluate(&parse(query).unwrap(), g).unwrap()
}

fn project(ms: &SolutionMultiset, columns: &[String]) -> SolutionMultiset {
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| ms.columns.iter().position(|x| x == c).unwrap())
        .collect();
    SolutionMultiset {
        columns: columns.to_vec(),
        rows: ms.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()).collect(),
    }
}

fn select(patterns: &[String], tail: &str) -> String {
    format!("SELECT * WHERE {{ {} {tail} }}", patterns.join(" "))
}

#[test]
fn single_pattern_is_a_predicate_scan() {
    let g = graph(3);
    for p in ["v:name", "v:age", "e:knows", "e:created", "v:label", "v:lang"] {
        let got = eval(&format!("SELECT ?s ?o WHERE {{ ?s {p} ?o . }}"), &g);
        let mut want = SolutionMultiset::new(vec!["s".into(), "o".into()]);
        for t in g.iter().filter(|t| t.predicate == p) {
            want.rows.push(vec![Value::Iri(t.subject.clone()), const_value(&t.object)]);
        }
        assert!(!want.is_empty(), "{p}");
        assert!(got.same_multiset(&want), "{p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pattern_order_does_not_matter(seed in 0u64..50, patterns in bgp(3), rotate in 0usize..3) {
        let g = graph(seed);
        let columns = vars_of(&patterns);
        let mut shuffled = patterns.clone();
        shuffled.rotate_left(rotate % patterns.len());
        shuffled.reverse();
        let a = project(&eval(&select(&patterns, ""), &g), &columns);
        let b = project(&eval(&select(&shuffled, ""), &g), &columns);
        prop_assert!(a.same_multiset(&b));
    }

    #[test]
    fn optional_keeps_every_required_row(seed in 0u64..50, required in bgp(2), optional in bgp(2)) {
        let g = graph(seed);
        let columns = vars_of(&required);
        let plain = project(&eval(&select(&required, ""), &g), &columns);
        let tail = format!("OPTIONAL {{ {} }}", optional.join(" "));
        let with_optional = project(&eval(&select(&required, &tail), &g), &columns);
        prop_assert!(plain.is_sub_multiset_of(&with_optional));
        let distinct = |m: &SolutionMultiset| m.rows.iter().cloned().collect::<std::collections::BTreeSet<_>>();
        prop_assert_eq!(distinct(&plain), distinct(&with_optional));
    }

    #[test]
    fn union_adds_branch_sizes(seed in 0u64..50, left in bgp(2), right in bgp(2)) {
        let g = graph(seed);
        let n = |ps: &[String]| eval(&select(ps, ""), &g).len();
        let union = format!("SELECT * WHERE {{ {{ {} }} UNION {{ {} }} }}", left.join(" "), right.join(" "));
        prop_assert_eq!(eval(&union, &g).len(), n(&left) + n(&right));
    }

    /// Translation agrees with the reference evaluator beyond the corpus.
    #[test]
    fn translated_queries_agree_with_the_reference(
        seed in 0u64..50,
        required in bgp(3),
        optional in prop::option::of(bgp(2)),
        union in prop::option::of((bgp(2), bgp(2))),
        distinct in any::<bool>(),
        filter in prop::option::of((prop::sample::select(vec!["<", ">=", "=", "!="]), prop::sample::select(vec!["40", "\"p3\""]))),
    ) {
        let g = graph(seed);
        let reg = PrefixRegistry::default();
        let pg = rdf_to_pg(&g, &reg).unwrap();
        let mut body = required.join(" ");
        if let Some((l, r)) = &union {
            body += &format!(" {{ {} }} UNION {{ {} }}", l.join(" "), r.join(" "));
        }
        if let Some(o) = &optional {
            body += &format!(" OPTIONAL {{ {} }}", o.join(" "));
        }
        let columns = vars_of(&required);
        // Comparing a name with a number is a type error, which both sides
        // must then report.
        if let (Some((op, rhs)), Some(v)) = (filter, columns.iter().find(|c| VALUES.contains(&c.as_str()))) {
            body += &format!(" FILTER (?{v} {op} {rhs})");
        }
        let query = format!(
            "SELECT {}{} WHERE {{ {body} }}",
            if distinct { "DISTINCT " } else { "" },
            columns.iter().map(|c| format!("?{c}")).collect::<Vec<_>>().join(" ")
        );
        let report = verify_query("random", &query, &GraphPair { rdf: &g, pg: &pg }, &reg, None).unwrap();
        prop_assert!(report.equivalent, "{}\n{:?}", query, report);
    }
}
