//! Detailed proofs: the calculus inferences behind forgetting, rendered as
//! axioms and linked back to the input.

use std::collections::{HashMap, HashSet};
use std::time::Duration;

use crate::cancel::CancelToken;
use crate::dl::{Axiom, Concept, Ontology, Signature};
use crate::error::{Error, Result};
use crate::extract::{extract_optimal, ExtractionRequest};
use crate::forget::{beautify, clause_axiom, default_order, forget_signature, ClauseSet, ForgetOptions, Literal, LogPremise, Rule};
use crate::justify::compute_justification;
use crate::proof::{InferencePool, Measure, PoolStep, Proof};

pub const CONCLUSION: &str = "conclusion";
/// Justification signatures above this size tend to exhaust the forgetting budget.
pub const SIGNATURE_WARN: usize = 18;

#[derive(Clone, Debug)]
pub struct DetailedOptions {
    pub measure: Measure,
    pub per_name: Duration,
    /// Substitute definers before beautifying instead of after.
    pub substitute_first: bool,
    pub cancel: Option<CancelToken>,
}

impl Default for DetailedOptions {
    fn default() -> Self {
        DetailedOptions { measure: Measure::Size, per_name: ForgetOptions::default().per_name, substitute_first: false, cancel: None }
    }
}

#[derive(Clone, Debug)]
pub struct DetailedProof {
    pub proof: Proof,
    pub warnings: Vec<String>,
}

fn atomic_sides(goal: &Axiom) -> Result<(String, Option<String>)> {
    match goal {
        Axiom::Gci(Concept::Name(a), Concept::Name(b)) => Ok((a.clone(), Some(b.clone()))),
        Axiom::Gci(Concept::Name(a), Concept::Bottom) => Ok((a.clone(), None)),
        other => Err(Error::NotAtomicGoal(other.to_unicode())),
    }
}

fn render(cs: &ClauseSet, id: usize, substitute_first: bool) -> Option<Axiom> {
    if !substitute_first {
        return cs.render(id);
    }
    let defs = &cs.definers;
    let a = clause_axiom(defs, cs.clause(id)).substitute(&|n: &str| defs.by_name(n).map(|d| d.represents.clone()));
    beautify(&a)
}

/// The clause from which `goal` follows directly: `¬A ⊔ B`, `¬A` or the empty clause.
pub fn final_clause(cs: &ClauseSet, goal: &Axiom) -> Result<usize> {
    let (a, b) = atomic_sides(goal)?;
    let neg = Literal::Neg(a);
    let fits = |id: usize| {
        let c = cs.clause(id);
        c.key.is_none() && c.literals.iter().all(|l| *l == neg || matches!((l, &b), (Literal::Pos(x), Some(y)) if x == y))
    };
    let mut ids: Vec<usize> = (0..cs.len()).filter(|&id| fits(id)).collect();
    ids.sort_by_key(|&id| (!cs.is_alive(id), cs.clause(id).literals.len()));
    ids.first().copied().ok_or_else(|| Error::GoalNotDerived(goal.to_unicode()))
}

/// The step from the final clause to `goal`, or `None` if the clause already reads as `goal`.
pub fn final_clause_to_goal(cs: &ClauseSet, id: usize, goal: &Axiom, substitute_first: bool) -> Option<PoolStep> {
    let shown = render(cs, id, substitute_first);
    if shown.as_ref() == Some(goal) {
        return None;
    }
    Some(PoolStep::new(goal.clone(), shown, CONCLUSION, Vec::new()))
}

/// Turns the inference log into candidate steps over rendered axioms.
fn logged_steps(cs: &ClauseSet, j: &Ontology, substitute_first: bool) -> Result<Vec<PoolStep>> {
    let mut shown: HashMap<usize, Option<Axiom>> = HashMap::new();
    let mut shown_of = |id: usize| shown.entry(id).or_insert_with(|| render(cs, id, substitute_first)).clone();
    let mut linked: HashSet<Axiom> = HashSet::new();
    let mut out = Vec::new();
    for e in cs.log.iter().flatten() {
        let Some(conclusion) = shown_of(e.conclusion) else { continue };
        if matches!(e.rule, Rule::Normalize | Rule::DefinerIntro) {
            if j.contains(&conclusion) || !linked.insert(conclusion.clone()) {
                continue;
            }
            let just = compute_justification(j, &conclusion)?;
            out.push(PoolStep::new(conclusion, just.axioms.iter().cloned(), Rule::Normalize.name(), Vec::new()));
            continue;
        }
        let mut premises = Vec::new();
        for p in &e.premises {
            match p {
                LogPremise::Clause(id) => premises.extend(shown_of(*id)),
                LogPremise::Axiom(a) => premises.push(a.clone()),
            }
        }
        if premises.contains(&conclusion) {
            continue;
        }
        out.push(PoolStep::new(conclusion, premises, e.rule.name(), Vec::new()));
    }
    Ok(out)
}

/// Explains an atomic entailment `A ⊑ B` or `A ⊑ ⊥` by the inferences of
/// forgetting every other name of a justification.
pub fn generate_detailed_proof(o: &Ontology, goal: &Axiom, opts: &DetailedOptions) -> Result<DetailedProof> {
    atomic_sides(goal)?;
    if o.contains(goal) {
        return Ok(DetailedProof { proof: Proof::asserted(goal.clone()), warnings: Vec::new() });
    }
    let j = compute_justification(o, goal)?.axioms;
    let mut warnings = Vec::new();
    let sig = j.signature();
    if sig.len() > SIGNATURE_WARN {
        warnings.push(format!("justification signature has {} names (more than {SIGNATURE_WARN}); forgetting may time out", sig.len()));
    }
    let keep: Signature = goal.signature();
    let fopts = ForgetOptions { logging: true, per_name: opts.per_name, cancel: opts.cancel.clone(), cache: None };
    let forgot = forget_signature(&j, &keep, &default_order(&sig), &fopts)?;
    if !forgot.failed.is_empty() {
        let names: Vec<&str> = forgot.failed.iter().map(|s| s.name()).collect();
        warnings.push(format!("could not eliminate {}", names.join(", ")));
    }
    let cs = forgot.log.ok_or_else(|| Error::GoalNotDerived(goal.to_unicode()))?;

    let mut pool = InferencePool::new();
    for a in j.iter() {
        pool.add_axiom(a.clone());
    }
    for s in logged_steps(&cs, &j, opts.substitute_first)? {
        pool.add_step(s);
    }
    let last = final_clause(&cs, goal)?;
    if let Some(s) = final_clause_to_goal(&cs, last, goal, opts.substitute_first) {
        pool.add_step(s);
    }
    let mut req = ExtractionRequest::new(&pool, goal.clone(), &j, opts.measure);
    if let Some(c) = &opts.cancel {
        req = req.with_cancel(c);
    }
    let proof = extract_optimal(&req)?;
    Ok(DetailedProof { proof, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_axiom, parse_ontology};
    use crate::proof::check_proof;

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    fn case_split() -> Ontology {
        parse_ontology("sub(C1, or(C3, C2))\nsub(C2, C3)\nsub(A, only(r, C1))\nsub(only(r, C3), B)").unwrap()
    }

    #[test]
    fn case_split_detailed_shape() {
        let o = case_split();
        let goal = ax("sub(A, B)");
        let d = generate_detailed_proof(&o, &goal, &DetailedOptions::default()).unwrap();
        let p = d.proof;
        assert!(check_proof(&p, &o, &goal, &Signature::new()).is_valid());
        let shown: Vec<String> = p.vertices.iter().map(|v| v.axiom.to_unicode()).collect();
        assert_eq!(p.vertices.len(), 10, "{shown:#?}");
        assert!(shown.contains(&"C3 ⊓ ¬C3 ⊑ ⊥".to_string()) || shown.contains(&"¬C3 ⊓ C3 ⊑ ⊥".to_string()), "{shown:#?}");
        let c1c3 = p.vertices.iter().position(|v| v.axiom == ax("sub(C1, C3)")).expect("C1 ⊑ C3");
        let s = p.step_for(c1c3).unwrap();
        let mut premises: Vec<&Axiom> = s.premises.iter().map(|&q| &p.vertices[q].axiom).collect();
        premises.sort();
        let mut expected = vec![o.get(0).unwrap(), o.get(1).unwrap()];
        expected.sort();
        assert_eq!(premises, expected);
        let target = ax("sub(A, or(B, some(r, and(C1, not(C3)))))");
        assert!(p.vertices.iter().any(|v| crate::tableau::is_entailed(&[v.axiom.clone()].into_iter().collect(), &target).unwrap()
            && crate::tableau::is_entailed(&[target.clone()].into_iter().collect(), &v.axiom).unwrap()));
    }

    #[test]
    fn linear_chain() {
        let o = parse_ontology("sub(A, C)\nsub(C, B)").unwrap();
        let p = generate_detailed_proof(&o, &ax("sub(A, B)"), &DetailedOptions::default()).unwrap().proof;
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.steps[0].rule, "Resolution");
    }

    #[test]
    fn asserted_and_non_atomic() {
        let o = case_split();
        assert_eq!(generate_detailed_proof(&o, &ax("sub(C2, C3)"), &DetailedOptions::default()).unwrap().proof.vertices.len(), 1);
        assert!(matches!(
            generate_detailed_proof(&o, &ax("sub(A, only(r, C3))"), &DetailedOptions::default()),
            Err(Error::NotAtomicGoal(_))
        ));
    }

    #[test]
    fn unsatisfiable_goal() {
        let o = parse_ontology("sub(A, C)\nsub(C, bot)").unwrap();
        let goal = ax("sub(A, bot)");
        let p = generate_detailed_proof(&o, &goal, &DetailedOptions::default()).unwrap().proof;
        assert!(check_proof(&p, &o, &goal, &Signature::new()).is_valid());
    }
}
