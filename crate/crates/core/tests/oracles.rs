use std::collections::BTreeSet;

use proofforge_core::corpus::{random_ontology, random_pool, random_task, GenConfig};
use proofforge_core::dl::{Axiom, Ontology};
use proofforge_core::el::classify;
use proofforge_core::extract::{extract_optimal, ExtractionRequest};
use proofforge_core::justify::{compute_all_justifications, compute_justification};
use proofforge_core::proof::{measure_proof, InferencePool, Measure, RecursiveMeasure};
use proofforge_core::tableau::{is_entailed, Reasoner};

/// Least measure over tree proofs, by exhaustive recursion with path exclusion.
fn brute_optimum(pool: &InferencePool, a: &Axiom, asserted: &Ontology, m: Measure, path: &mut Vec<Axiom>) -> Option<u64> {
    let mut best = asserted.contains(a).then(|| m.leaf_value(a));
    path.push(a.clone());
    for s in pool.steps_concluding(a) {
        if s.premises.iter().any(|p| path.contains(p)) {
            continue;
        }
        let kids: Option<Vec<u64>> = s.premises.iter().map(|p| brute_optimum(pool, p, asserted, m, path)).collect();
        if let Some(kids) = kids {
            let v = m.combine(a, &kids);
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    }
    path.pop();
    best
}

#[test]
fn extraction_matches_brute_force_on_300_pools() {
    for seed in 0..300 {
        let (pool, goal, asserted) = random_pool(seed, 10, 15);
        for m in Measure::ALL {
            let expected = brute_optimum(&pool, &goal, &asserted, m, &mut Vec::new());
            let got = extract_optimal(&ExtractionRequest::new(&pool, goal.clone(), &asserted, m));
            match (expected, got) {
                (None, Err(_)) => {}
                (Some(v), Ok(p)) => assert_eq!(measure_proof(&p, &m), v, "seed {seed} measure {m}"),
                (e, g) => panic!("seed {seed} measure {m}: oracle {e:?}, extraction {:?}", g.map(|p| p.vertices.len())),
            }
        }
    }
}

#[test]
fn tableau_agrees_with_el_saturation_on_500_elh() {
    let cfg = GenConfig::elh();
    for seed in 0..500 {
        let o = random_ontology(seed, &cfg);
        let el: BTreeSet<Axiom> = classify(&o).unwrap().into_iter().collect();
        let reasoner = Reasoner::new(&o);
        let names: Vec<String> = o.signature().concepts.into_iter().collect();
        let mut tab = BTreeSet::new();
        for a in &names {
            for b in &names {
                let g = Axiom::gci(a.as_str(), b.as_str());
                if a != b && reasoner.is_entailed(&g).unwrap() {
                    tab.insert(g);
                }
            }
        }
        assert_eq!(el, tab, "seed {seed}\n{}", o.to_text());
    }
}

/// All subset-minimal entailing subsets, by enumeration of every subset.
fn brute_justifications(o: &Ontology, goal: &Axiom) -> BTreeSet<BTreeSet<Axiom>> {
    let axioms: Vec<&Axiom> = o.iter().collect();
    let n = axioms.len();
    let mut entailing: Vec<u32> = Vec::new();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        if entailing.iter().any(|e| e & mask == *e) {
            continue;
        }
        let sub: Ontology = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| axioms[i].clone()).collect();
        if is_entailed(&sub, goal).unwrap() {
            entailing.push(mask);
        }
    }
    entailing.iter().map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| axioms[i].clone()).collect()).collect()
}

#[test]
fn justifications_match_brute_force() {
    let cfg = GenConfig { max_axioms: 7, ..GenConfig::alch() };
    let mut checked = 0;
    for seed in 0..400 {
        let Some(t) = random_task(seed, &cfg) else { continue };
        if t.ontology.len() > 8 {
            continue;
        }
        let expected = brute_justifications(&t.ontology, &t.goal);
        let one: BTreeSet<Axiom> = compute_justification(&t.ontology, &t.goal).unwrap().axioms.iter().cloned().collect();
        assert!(expected.contains(&one), "seed {seed}");
        let all: BTreeSet<BTreeSet<Axiom>> = compute_all_justifications(&t.ontology, &t.goal, 1000)
            .unwrap()
            .into_iter()
            .map(|j| j.axioms.iter().cloned().collect())
            .collect();
        assert_eq!(all, expected, "seed {seed}\n{}", t.ontology.to_text());
        checked += 1;
        if checked == 60 {
            break;
        }
    }
    assert!(checked >= 30);
}
