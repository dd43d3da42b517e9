use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use proofforge_core::corpus::{random_ontology, random_tasks, GenConfig};
use proofforge_core::dl::{Ontology, Signature};
use proofforge_core::el::classify_with;
use proofforge_core::elim::{generate_elimination_proof, EliminationTask, Strategy};
use proofforge_core::proof::{check_proof_with, CheckOptions};
use proofforge_core::Exec;

fn ontologies() -> Vec<Ontology> {
    let cfg = GenConfig { max_axioms: 12, concept_names: 8, ..GenConfig::alch() };
    (0..20).map(|s| random_ontology(s, &cfg)).collect()
}

fn bench_classify(c: &mut Criterion) {
    let os = ontologies();
    let mut g = c.benchmark_group("classify");
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| os.iter().map(|o| classify_with(o, exec).unwrap().len()).sum::<usize>())
        });
    }
    g.finish();
}

fn bench_check(c: &mut Criterion) {
    let tasks = random_tasks(10, 0, &GenConfig::alch());
    let proofs: Vec<_> = tasks
        .iter()
        .filter_map(|t| generate_elimination_proof(&EliminationTask::new(t.ontology.clone(), t.goal.clone(), Strategy::Heuristic)).ok().map(|p| (t, p)))
        .collect();
    let mut g = c.benchmark_group("check_proof");
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = CheckOptions { elimination_conditions: true, exec };
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, &opts| {
            b.iter(|| proofs.iter().filter(|(t, p)| check_proof_with(p, &t.ontology, &t.goal, &Signature::new(), opts).is_valid()).count())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_classify, bench_check);
criterion_main!(benches);
