//! Seeded generators for ontologies, proof tasks and inference pools.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dl::{Axiom, Concept, Ontology, Role};
use crate::proof::{InferencePool, PoolStep};
use crate::tableau::Reasoner;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_axioms: usize,
    pub concept_names: usize,
    pub role_names: usize,
    pub max_depth: usize,
    /// Allow `¬`, `⊔`, `∀` and `⊥`; otherwise only ELH constructors.
    pub alch: bool,
    pub role_inclusion_rate: f64,
}

impl GenConfig {
    pub fn elh() -> Self {
        GenConfig { max_axioms: 12, concept_names: 6, role_names: 2, max_depth: 3, alch: false, role_inclusion_rate: 0.1 }
    }

    pub fn alch() -> Self {
        GenConfig { max_axioms: 8, concept_names: 5, role_names: 2, max_depth: 2, alch: true, role_inclusion_rate: 0.1 }
    }
}

fn concept_name(i: usize) -> String {
    ((b'A' + i as u8) as char).to_string()
}

fn role_name(i: usize) -> String {
    ["r", "s", "t", "u"][i % 4].to_string()
}

pub fn random_concept(rng: &mut impl Rng, cfg: &GenConfig, depth: usize) -> Concept {
    let atom = |rng: &mut dyn rand::RngCore| Concept::name(concept_name(rng.gen_range(0..cfg.concept_names)));
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.05) { Concept::Top } else { atom(rng) };
    }
    let role = |rng: &mut dyn rand::RngCore| Role::new(role_name(rng.gen_range(0..cfg.role_names.max(1))));
    let kinds = if cfg.alch { 6 } else { 2 };
    match rng.gen_range(0..kinds) {
        0 => Concept::and((0..2).map(|_| random_concept(rng, cfg, depth - 1))),
        1 => Concept::exists(role(rng), random_concept(rng, cfg, depth - 1)),
        2 => Concept::not(atom(rng)),
        3 => Concept::or((0..2).map(|_| random_concept(rng, cfg, depth - 1))),
        4 => Concept::forall(role(rng), random_concept(rng, cfg, depth - 1)),
        _ => Concept::not(random_concept(rng, cfg, depth - 1)),
    }
}

pub fn random_axiom(rng: &mut impl Rng, cfg: &GenConfig) -> Axiom {
    if cfg.role_names > 1 && rng.gen_bool(cfg.role_inclusion_rate) {
        let r = rng.gen_range(0..cfg.role_names);
        let s = (r + rng.gen_range(1..cfg.role_names)) % cfg.role_names;
        return Axiom::role_inclusion(Role::new(role_name(r)), Role::new(role_name(s)));
    }
    let lhs = random_concept(rng, cfg, cfg.max_depth);
    let rhs = random_concept(rng, cfg, cfg.max_depth);
    if rng.gen_bool(0.1) {
        Axiom::equiv(lhs, rhs)
    } else {
        Axiom::gci(lhs, rhs)
    }
}

pub fn random_ontology(seed: u64, cfg: &GenConfig) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=cfg.max_axioms);
    let mut o = Ontology::new();
    for _ in 0..n * 4 {
        if o.len() >= n {
            break;
        }
        o.insert(random_axiom(&mut rng, cfg));
    }
    o
}

/// Atomic inclusions `A ⊑ B` (including `A ⊑ ⊥`) over the concept names of `o`
/// that `o` entails.
pub fn entailed_atomic(o: &Ontology) -> crate::Result<Vec<Axiom>> {
    let names: Vec<String> = o.signature().concepts.into_iter().collect();
    let reasoner = Reasoner::new(o);
    let mut out = Vec::new();
    for a in &names {
        if reasoner.is_entailed(&Axiom::gci(Concept::name(a.as_str()), Concept::Bottom))? {
            out.push(Axiom::gci(Concept::name(a.as_str()), Concept::Bottom));
        }
        for b in &names {
            if a != b && reasoner.is_entailed(&Axiom::gci(Concept::name(a.as_str()), Concept::name(b.as_str())))? {
                out.push(Axiom::gci(Concept::name(a.as_str()), Concept::name(b.as_str())));
            }
        }
    }
    Ok(out)
}

/// A consistent ontology and an entailed, non-asserted inclusion between two
/// satisfiable concept names.
#[derive(Clone, Debug)]
pub struct Task {
    pub seed: u64,
    pub ontology: Ontology,
    pub goal: Axiom,
}

pub fn random_task(seed: u64, cfg: &GenConfig) -> Option<Task> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for attempt in 0..64u64 {
        let o = random_ontology(seed.wrapping_mul(1000).wrapping_add(attempt), cfg);
        let reasoner = Reasoner::new(&o);
        if !reasoner.is_satisfiable(&Concept::Top).ok()? {
            continue;
        }
        let mut goals: Vec<Axiom> = entailed_atomic(&o)
            .ok()?
            .into_iter()
            .filter(|g| !o.contains(g))
            .filter(|g| match g {
                Axiom::Gci(Concept::Name(a), Concept::Name(_)) => reasoner.is_satisfiable(&Concept::name(a.as_str())).unwrap_or(false),
                _ => false,
            })
            .collect();
        if goals.is_empty() {
            continue;
        }
        goals.shuffle(&mut rng);
        return Some(Task { seed, ontology: o, goal: goals.swap_remove(0) });
    }
    None
}

pub fn random_tasks(count: usize, first_seed: u64, cfg: &GenConfig) -> Vec<Task> {
    (first_seed..).filter_map(|s| random_task(s, cfg)).take(count).collect()
}

/// A random pool over placeholder axioms `Xᵢ ⊑ Yᵢ`, its goal and its asserted axioms.
/// Steps need not be sound; only the hypergraph shape matters.
pub fn random_pool(seed: u64, max_axioms: usize, max_steps: usize) -> (InferencePool, Axiom, Ontology) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_axioms.max(2));
    let axioms: Vec<Axiom> = (0..n).map(|i| Axiom::gci(Concept::name(format!("X{i}")), Concept::name(format!("Y{i}")))).collect();
    let asserted: Ontology = axioms.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    let goal = axioms[0].clone();
    let mut pool = InferencePool::new();
    for a in &axioms {
        pool.add_axiom(a.clone());
    }
    let steps = rng.gen_range(1..=max_steps.max(1));
    for _ in 0..steps {
        let c = rng.gen_range(0..n);
        let k = rng.gen_range(0..=3.min(n - 1));
        let mut others: Vec<usize> = (0..n).filter(|&i| i != c).collect();
        others.shuffle(&mut rng);
        let premises = others[..k].iter().map(|&i| axioms[i].clone());
        pool.add_step(PoolStep::new(axioms[c].clone(), premises, "r", Vec::new()));
    }
    (pool, goal, asserted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        assert_eq!(random_ontology(7, &GenConfig::alch()), random_ontology(7, &GenConfig::alch()));
        let t = random_task(3, &GenConfig::alch()).unwrap();
        assert!(crate::tableau::is_entailed(&t.ontology, &t.goal).unwrap());
    }

    #[test]
    fn elh_generator_is_elh() {
        for s in 0..50 {
            assert!(crate::el::is_elh(&random_ontology(s, &GenConfig::elh())));
        }
    }
}
