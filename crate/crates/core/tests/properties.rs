use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use proofforge_core::corpus::{random_axiom, random_concept, random_pool, GenConfig};
use proofforge_core::dl::{parse_axiom, parse_concept, parse_unicode_axiom, Concept, Ontology};
use proofforge_core::extract::{extract_optimal, ExtractionRequest};
use proofforge_core::forget::{beautify, simplify};
use proofforge_core::proof::{read_json, write_json, Measure};
use proofforge_core::tableau::is_entailed;

fn concept(seed: u64) -> Concept {
    random_concept(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::alch(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ascii_print_parses_back(seed in any::<u64>()) {
        let c = concept(seed);
        prop_assert_eq!(parse_concept(&c.to_ascii()).unwrap(), c);
    }

    #[test]
    fn axiom_prints_parse_back(seed in any::<u64>()) {
        let a = random_axiom(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::alch());
        prop_assert_eq!(parse_axiom(&a.to_ascii()).unwrap(), a.clone());
        let roles = a.signature().roles;
        prop_assert_eq!(parse_unicode_axiom(&a.to_unicode(), &roles).unwrap(), a);
    }

    #[test]
    fn nnf_and_simplify_preserve_meaning(seed in any::<u64>()) {
        let c = concept(seed);
        let o = Ontology::new();
        for d in [c.nnf(), simplify(&c)] {
            prop_assert!(is_entailed(&o, &proofforge_core::dl::Axiom::equiv(c.clone(), d)).unwrap());
        }
    }

    #[test]
    fn beautify_preserves_meaning(seed in any::<u64>()) {
        let a = random_axiom(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::alch());
        let single: Ontology = [a.clone()].into_iter().collect();
        match beautify(&a) {
            None => prop_assert!(is_entailed(&Ontology::new(), &a).unwrap()),
            Some(b) => {
                let other: Ontology = [b.clone()].into_iter().collect();
                prop_assert!(is_entailed(&single, &b).unwrap());
                prop_assert!(is_entailed(&other, &a).unwrap());
            }
        }
    }

    #[test]
    fn extracted_proofs_round_trip_through_json(seed in 0u64..5000) {
        let (pool, goal, asserted) = random_pool(seed, 6, 8);
        if let Ok(p) = extract_optimal(&ExtractionRequest::new(&pool, goal, &asserted, Measure::Size)) {
            prop_assert_eq!(read_json(&write_json(&p)).unwrap(), p);
        }
    }
}
