use proofforge_core::corpus::{random_tasks, GenConfig};
use proofforge_core::dl::Signature;
use proofforge_core::elim::{elimination_sequence, generate_elimination_proof, EliminationTask, Strategy};
use proofforge_core::proof::{check_proof_with, CheckOptions};

#[test]
fn every_strategy_yields_checked_proofs() {
    let tasks = random_tasks(40, 0, &GenConfig::alch());
    for t in &tasks {
        for strategy in [Strategy::Heuristic, Strategy::NameOptimized, Strategy::SizeOptimized] {
            let task = EliminationTask::new(t.ontology.clone(), t.goal.clone(), strategy);
            let p = generate_elimination_proof(&task).unwrap_or_else(|e| panic!("seed {} {strategy}: {e}", t.seed));
            let opts = CheckOptions { elimination_conditions: true, ..CheckOptions::default() };
            let report = check_proof_with(&p, &t.ontology, &t.goal, &Signature::new(), opts);
            assert!(report.is_valid(), "seed {} {strategy}: {:?}\n{}", t.seed, report.violations, t.ontology.to_text());
        }
    }
}

#[test]
fn name_optimized_is_never_longer() {
    for t in random_tasks(40, 100, &GenConfig::alch()) {
        let heur = elimination_sequence(&EliminationTask::new(t.ontology.clone(), t.goal.clone(), Strategy::Heuristic)).unwrap();
        let opt = elimination_sequence(&EliminationTask::new(t.ontology.clone(), t.goal.clone(), Strategy::NameOptimized)).unwrap();
        assert!(opt.eliminations() <= heur.eliminations(), "seed {}", t.seed);
    }
}
