//! Single-step traversal (SST) classification: each triple pattern becomes one
//! label check, property access or vertex hop framed by match start/end steps.

use std::fmt;

use thiserror::Error;

use crate::model::{Direction, PredicateRole, PrefixRegistry, PropertyValue, RdfTerm};
use crate::sparql::{PatternTerm, TriplePattern};

/// Prefix of variables standing in for constant IRIs. Not a legal SPARQL
/// variable character, so it cannot clash with user variables.
pub const HIDDEN_VAR_PREFIX: char = '~';

/// Hidden variable bound to the vertex whose id property equals `iri`.
pub fn hidden_var(iri: &str) -> String {
    format!("{HIDDEN_VAR_PREFIX}{iri}")
}

pub fn is_hidden_var(var: &str) -> bool {
    var.starts_with(HIDDEN_VAR_PREFIX)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SstTag {
    Lv,
    Le,
    Pv1,
    Pe1,
    Pv2,
    Pe2,
    Eout,
    Ein,
}

impl SstTag {
    pub const ALL: [SstTag; 8] = [
        SstTag::Lv,
        SstTag::Le,
        SstTag::Pv1,
        SstTag::Pe1,
        SstTag::Pv2,
        SstTag::Pe2,
        SstTag::Eout,
        SstTag::Ein,
    ];
}

impl fmt::Display for SstTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SstTag::Lv => "Lv",
            SstTag::Le => "Le",
            SstTag::Pv1 => "Pv1",
            SstTag::Pe1 => "Pe1",
            SstTag::Pv2 => "Pv2",
            SstTag::Pe2 => "Pe2",
            SstTag::Eout => "Eout",
            SstTag::Ein => "Ein",
        };
        f.write_str(s)
    }
}

/// What the object position of a classified pattern holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SstObject {
    /// Label or property value (Lv, Le, Pv1, Pe1).
    Value(PropertyValue),
    /// Variable receiving a property value or the far end of a hop.
    Var(String),
}

/// A classified pattern. `subject` is the start variable, hidden when the
/// pattern had a constant subject; `key` is the property key or edge label
/// (for Lv/Le it is the label key itself).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstCase {
    pub tag: SstTag,
    pub subject: String,
    pub key: String,
    pub object: SstObject,
}

impl SstCase {
    /// The same hop read from the other end: Eout(x→y) becomes Ein(y←x).
    /// Other cases have no reversed form.
    pub fn reversed(&self) -> Option<SstCase> {
        let SstObject::Var(far) = &self.object else {
            return None;
        };
        let tag = match self.tag {
            SstTag::Eout => SstTag::Ein,
            SstTag::Ein => SstTag::Eout,
            _ => return None,
        };
        Some(SstCase {
            tag,
            subject: far.clone(),
            key: self.key.clone(),
            object: SstObject::Var(self.subject.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreStep {
    Has { key: String, value: PropertyValue },
    HasLabel(String),
    Properties(String),
    Vertex { dir: Direction, label: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstInstruction {
    pub start: String,
    pub core: CoreStep,
    pub end: Option<String>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("predicate <{predicate}> carries no recognized prefix marker")]
    Unprefixed { predicate: String },
    #[error("<{predicate}> needs a constant string label, found {found}")]
    LabelNotConstant { predicate: String, found: String },
    #[error("vertex property <{predicate}> cannot hold the IRI {iri}")]
    IriPropertyValue { predicate: String, iri: String },
}

fn to_value(term: &RdfTerm) -> PropertyValue {
    match term {
        RdfTerm::Num(n) => PropertyValue::number(n.value()),
        RdfTerm::Str(s) | RdfTerm::Iri(s) => PropertyValue::string(s.clone()),
    }
}

fn subject_var(t: &PatternTerm) -> String {
    match t {
        PatternTerm::Var(v) => v.clone(),
        PatternTerm::Const(c) => hidden_var(c.lexical()),
    }
}

pub fn classify(tp: &TriplePattern, reg: &PrefixRegistry) -> Result<SstCase, ClassifyError> {
    let role = reg.role(&tp.predicate).ok_or_else(|| ClassifyError::Unprefixed {
        predicate: tp.predicate.clone(),
    })?;
    let subject = subject_var(&tp.subject);
    let case = |tag, key: &str, object| SstCase {
        tag,
        subject: subject.clone(),
        key: key.to_string(),
        object,
    };
    let label = |tag| match &tp.object {
        PatternTerm::Const(RdfTerm::Str(s)) => Ok(case(tag, &tp.predicate, SstObject::Value(PropertyValue::string(s.clone())))),
        other => Err(ClassifyError::LabelNotConstant {
            predicate: tp.predicate.clone(),
            found: match other {
                PatternTerm::Var(v) => format!("?{v}"),
                PatternTerm::Const(c) => c.to_string(),
            },
        }),
    };
    match role {
        PredicateRole::VertexLabel => label(SstTag::Lv),
        PredicateRole::EdgeLabel => label(SstTag::Le),
        PredicateRole::VertexProperty(key) => match &tp.object {
            PatternTerm::Var(v) => Ok(case(SstTag::Pv2, &key, SstObject::Var(v.clone()))),
            PatternTerm::Const(RdfTerm::Iri(iri)) => Err(ClassifyError::IriPropertyValue {
                predicate: tp.predicate.clone(),
                iri: iri.clone(),
            }),
            PatternTerm::Const(c) => Ok(case(SstTag::Pv1, &key, SstObject::Value(to_value(c)))),
        },
        PredicateRole::EdgeProperty(key) | PredicateRole::EdgeHop(key) => match &tp.object {
            PatternTerm::Var(v) if reg.edge_property_keys().contains(&key) => {
                Ok(case(SstTag::Pe2, &key, SstObject::Var(v.clone())))
            }
            PatternTerm::Var(v) => Ok(case(SstTag::Eout, &key, SstObject::Var(v.clone()))),
            PatternTerm::Const(RdfTerm::Iri(iri)) => {
                Ok(case(SstTag::Eout, &key, SstObject::Var(hidden_var(iri))))
            }
            PatternTerm::Const(c) => Ok(case(SstTag::Pe1, &key, SstObject::Value(to_value(c)))),
        },
    }
}

pub fn map_to_instruction(c: &SstCase) -> SstInstruction {
    let (core, end) = match (&c.tag, &c.object) {
        (SstTag::Lv | SstTag::Le, SstObject::Value(v)) => (CoreStep::HasLabel(v.to_string()), None),
        (SstTag::Pv1 | SstTag::Pe1, SstObject::Value(v)) => (
            CoreStep::Has {
                key: c.key.clone(),
                value: v.clone(),
            },
            None,
        ),
        (SstTag::Pv2 | SstTag::Pe2, SstObject::Var(v)) => {
            (CoreStep::Properties(c.key.clone()), Some(v.clone()))
        }
        (SstTag::Eout, SstObject::Var(v)) => (
            CoreStep::Vertex {
                dir: Direction::Out,
                label: c.key.clone(),
            },
            Some(v.clone()),
        ),
        (SstTag::Ein, SstObject::Var(v)) => (
            CoreStep::Vertex {
                dir: Direction::In,
                label: c.key.clone(),
            },
            Some(v.clone()),
        ),
        (tag, object) => unreachable!("malformed SST case {tag} with {object:?}"),
    };
    SstInstruction {
        start: c.subject.clone(),
        core,
        end,
    }
}

/// The instruction pinning a hidden variable to the vertex named by `iri`.
pub fn anchor_instruction(iri: &str, reg: &PrefixRegistry) -> SstInstruction {
    SstInstruction {
        start: hidden_var(iri),
        core: CoreStep::Has {
            key: reg.id_property().to_string(),
            value: PropertyValue::string(iri),
        },
        end: None,
    }
}

/// Constant IRIs a pattern refers to as vertices (subject, or hop target).
pub fn anchored_iris(tp: &TriplePattern, reg: &PrefixRegistry) -> Vec<String> {
    let mut out = Vec::new();
    if let PatternTerm::Const(c) = &tp.subject {
        out.push(c.lexical().to_string());
    }
    if let PatternTerm::Const(RdfTerm::Iri(iri)) = &tp.object {
        if matches!(
            reg.role(&tp.predicate),
            Some(PredicateRole::EdgeHop(_) | PredicateRole::EdgeProperty(_))
        ) {
            out.push(iri.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparql::PatternTerm::{Const, Var};

    fn tp(s: PatternTerm, p: &str, o: PatternTerm) -> TriplePattern {
        TriplePattern::new(s, p, o)
    }

    fn v(name: &str) -> PatternTerm {
        Var(name.into())
    }

    fn tag(s: PatternTerm, p: &str, o: PatternTerm) -> SstTag {
        classify(&tp(s, p, o), &PrefixRegistry::default()).unwrap().tag
    }

    #[test]
    fn decision_table() {
        assert_eq!(tag(v("x"), "v:label", Const(RdfTerm::string("person"))), SstTag::Lv);
        assert_eq!(tag(v("x"), "e:label", Const(RdfTerm::string("knows"))), SstTag::Le);
        assert_eq!(tag(v("x"), "v:name", Const(RdfTerm::string("marko"))), SstTag::Pv1);
        assert_eq!(tag(v("x"), "v:age", v("d")), SstTag::Pv2);
        assert_eq!(tag(v("x"), "e:weight", Const(RdfTerm::number("0.8"))), SstTag::Pe1);
        assert_eq!(tag(v("x"), "e:weight", v("w")), SstTag::Pe2);
        assert_eq!(tag(v("x"), "e:knows", v("y")), SstTag::Eout);
        assert_eq!(tag(v("x"), "e:knows", Const(RdfTerm::iri("http://ex/v"))), SstTag::Eout);
    }

    #[test]
    fn classification_errors() {
        let reg = PrefixRegistry::default();
        let err = classify(&tp(v("m"), "x:foo", Const(RdfTerm::string("bar"))), &reg).unwrap_err();
        assert_eq!(err, ClassifyError::Unprefixed { predicate: "x:foo".into() });
        assert!(err.to_string().contains("x:foo"));
        assert!(matches!(
            classify(&tp(v("x"), "v:label", v("l")), &reg),
            Err(ClassifyError::LabelNotConstant { .. })
        ));
        assert!(matches!(
            classify(&tp(v("x"), "v:name", Const(RdfTerm::iri("http://a"))), &reg),
            Err(ClassifyError::IriPropertyValue { .. })
        ));
    }

    #[test]
    fn instructions() {
        let reg = PrefixRegistry::default();
        let ins = |p: TriplePattern| map_to_instruction(&classify(&p, &reg).unwrap());
        assert_eq!(
            ins(tp(v("x"), "v:name", Const(RdfTerm::string("marko")))),
            SstInstruction {
                start: "x".into(),
                core: CoreStep::Has { key: "name".into(), value: PropertyValue::string("marko") },
                end: None,
            }
        );
        let knows = classify(&tp(v("x"), "e:knows", v("y")), &reg).unwrap();
        assert_eq!(
            map_to_instruction(&knows),
            SstInstruction {
                start: "x".into(),
                core: CoreStep::Vertex { dir: Direction::Out, label: "knows".into() },
                end: Some("y".into()),
            }
        );
        assert_eq!(
            map_to_instruction(&knows.reversed().unwrap()),
            SstInstruction {
                start: "y".into(),
                core: CoreStep::Vertex { dir: Direction::In, label: "knows".into() },
                end: Some("x".into()),
            }
        );
        let weight = ins(tp(v("x"), "e:weight", Const(RdfTerm::number("0.80"))));
        assert_eq!(
            weight.core,
            CoreStep::Has { key: "weight".into(), value: PropertyValue::number("0.8".parse().unwrap()) }
        );
        assert_eq!(ins(tp(v("x"), "v:age", v("d"))).end.as_deref(), Some("d"));
        assert_eq!(
            ins(tp(v("x"), "v:label", Const(RdfTerm::string("person")))).core,
            CoreStep::HasLabel("person".into())
        );
    }

    #[test]
    fn constant_subjects_use_hidden_variables() {
        let reg = PrefixRegistry::default();
        let p = tp(Const(RdfTerm::iri("http://ex/marko")), "e:knows", Const(RdfTerm::iri("http://ex/josh")));
        let c = classify(&p, &reg).unwrap();
        assert_eq!(c.subject, hidden_var("http://ex/marko"));
        assert_eq!(c.object, SstObject::Var(hidden_var("http://ex/josh")));
        assert!(is_hidden_var(&c.subject));
        assert_eq!(anchored_iris(&p, &reg), vec!["http://ex/marko", "http://ex/josh"]);
        let a = anchor_instruction("http://ex/marko", &reg);
        assert_eq!(a.core, CoreStep::Has { key: "iri".into(), value: PropertyValue::string("http://ex/marko") });
    }
}
