use proofforge_core::corpus::{random_tasks, GenConfig};
use proofforge_core::detailed::{generate_detailed_proof, DetailedOptions, CONCLUSION};
use proofforge_core::dl::Signature;
use proofforge_core::proof::check_proof;

const RULES: [&str; 9] = [
    "Resolution",
    "ExistsRoleHier",
    "ForallRoleHier",
    "ExistsForallCombine",
    "ForallForallCombine",
    "ExistsElim",
    "DefinerIntro",
    "Normalize",
    CONCLUSION,
];

#[test]
fn detailed_proofs_check_on_random_alch() {
    for t in random_tasks(60, 0, &GenConfig::alch()) {
        let d = generate_detailed_proof(&t.ontology, &t.goal, &DetailedOptions::default())
            .unwrap_or_else(|e| panic!("seed {}: {e}\n{}", t.seed, t.ontology.to_text()));
        let p = d.proof;
        let report = check_proof(&p, &t.ontology, &t.goal, &Signature::new());
        assert!(report.is_valid(), "seed {}: {:?}\n{}", t.seed, report.violations, t.ontology.to_text());
        for s in &p.steps {
            assert!(RULES.contains(&s.rule.as_str()), "seed {}: rule {}", t.seed, s.rule);
        }
        for v in &p.vertices {
            assert!(!v.axiom.to_unicode().contains("_D"), "seed {}: definer in {}", t.seed, v.axiom.to_unicode());
        }
    }
}
