//! Seeded random RDF graphs in the toy vocabulary, for scale tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{RdfGraph, RdfTerm, Triple};

pub const SYNTH_BASE: &str = "http://example.org/synth/";

const LANGS: [&str; 3] = ["java", "python", "rust"];

/// A graph with `vertices` vertices, a fifth of them software and the rest
/// persons. Persons have a unique name and an age, software a unique name and
/// a language; each person knows about two persons and created one or two
/// pieces of software.
pub fn random_graph(vertices: usize, seed: u64) -> RdfGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let software = (vertices / 5).max(1);
    let persons = vertices.saturating_sub(software).max(1);
    let person = |i: usize| format!("{SYNTH_BASE}p{i}");
    let soft = |i: usize| format!("{SYNTH_BASE}s{i}");
    let mut g = RdfGraph::new();
    for i in 0..persons {
        g.insert(Triple::new(person(i), "v:label", RdfTerm::string("person")));
        g.insert(Triple::new(person(i), "v:name", RdfTerm::string(format!("p{i}"))));
        let age: u32 = rng.gen_range(18..80);
        g.insert(Triple::new(person(i), "v:age", RdfTerm::number(&age.to_string())));
    }
    for i in 0..software {
        g.insert(Triple::new(soft(i), "v:label", RdfTerm::string("software")));
        g.insert(Triple::new(soft(i), "v:name", RdfTerm::string(format!("s{i}"))));
        let lang = LANGS.choose(&mut rng).copied().unwrap_or("java");
        g.insert(Triple::new(soft(i), "v:lang", RdfTerm::string(lang)));
    }
    for i in 0..persons {
        for _ in 0..2 {
            let j = rng.gen_range(0..persons);
            if j != i {
                g.insert(Triple::new(person(i), "e:knows", RdfTerm::iri(person(j))));
            }
        }
        let made = if rng.gen_bool(0.5) { 1 } else { 2 };
        for _ in 0..made {
            let j = rng.gen_range(0..software);
            g.insert(Triple::new(person(i), "e:created", RdfTerm::iri(soft(j))));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rdf_to_pg, PrefixRegistry};

    #[test]
    fn deterministic_and_convertible() {
        let a = random_graph(1000, 7);
        assert_eq!(a, random_graph(1000, 7));
        assert_ne!(a, random_graph(1000, 8));
        let pg = rdf_to_pg(&a, &PrefixRegistry::default()).unwrap();
        assert_eq!(pg.vertex_count(), 1000);
        assert!(pg.edge_count() > 2000);
    }
}
