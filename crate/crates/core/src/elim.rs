//! Elimination proofs: ontology sequences obtained by forgetting one name at a
//! time, turned into inference steps through justifications.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Duration;

use crate::cancel::CancelToken;
use crate::dl::{Axiom, Concept, Ontology, Signature};
use crate::error::{Error, Result};
use crate::extract::{extract_optimal, ExtractionRequest};
use crate::forget::{forget_name, ForgetCache, ForgetOptions, Symbol};
use crate::justify::compute_justification;
use crate::par::Exec;
use crate::proof::{InferencePool, Measure, PoolStep, Proof};
use crate::tableau::is_entailed;

pub const NORMALIZATION: &str = "normalization";
/// Expansions of the best-first searches before they settle for what they have.
pub const SEARCH_BUDGET: usize = 400;
/// Complete sequences pooled by the size-optimized search.
const POOLED_SEQUENCES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    #[default]
    Heuristic,
    NameOptimized,
    SizeOptimized,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Heuristic => "heuristic",
            Strategy::NameOptimized => "nameOptimized",
            Strategy::SizeOptimized => "sizeOptimized",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heuristic" | "heur" => Ok(Strategy::Heuristic),
            "nameOptimized" | "name-opt" | "name" => Ok(Strategy::NameOptimized),
            "sizeOptimized" | "size-opt" | "size" => Ok(Strategy::SizeOptimized),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EliminationTask {
    pub ontology: Ontology,
    pub goal: Axiom,
    pub strategy: Strategy,
    pub measure: Measure,
    pub per_name: Duration,
    pub known: Signature,
    pub cancel: Option<CancelToken>,
    pub cache: Option<Arc<ForgetCache>>,
}

impl EliminationTask {
    pub fn new(ontology: Ontology, goal: Axiom, strategy: Strategy) -> Self {
        EliminationTask {
            ontology,
            goal,
            strategy,
            measure: Measure::Size,
            per_name: ForgetOptions::default().per_name,
            known: Signature::new(),
            cancel: None,
            cache: None,
        }
    }

    fn forget_options(&self) -> ForgetOptions {
        ForgetOptions { logging: false, per_name: self.per_name, cancel: self.cancel.clone(), cache: self.cache.clone() }
    }

    fn cancelled(&self) -> bool {
        self.cancel.as_ref().is_some_and(CancelToken::is_cancelled)
    }
}

/// `stages[0]` is the justification; `eliminated_at[i]` lists the names that
/// disappear between `stages[i - 1]` and `stages[i]` (empty for `i = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologySequence {
    pub stages: Vec<Ontology>,
    pub eliminated_at: Vec<Vec<Symbol>>,
    pub failed: Vec<Symbol>,
}

impl OntologySequence {
    pub fn new(first: Ontology) -> Self {
        OntologySequence { stages: vec![first], eliminated_at: vec![Vec::new()], failed: Vec::new() }
    }

    pub fn last(&self) -> &Ontology {
        self.stages.last().unwrap()
    }

    /// Number of successful eliminations.
    pub fn eliminations(&self) -> usize {
        self.stages.len() - 1
    }

    fn push(&mut self, next: Ontology) {
        let gone = symbols(&self.last().signature()).into_iter().filter(|s| !s.occurs_in(&next.signature())).collect();
        self.stages.push(next);
        self.eliminated_at.push(gone);
    }
}

fn symbols(sig: &Signature) -> Vec<Symbol> {
    sig.concepts.iter().cloned().map(Symbol::Concept).chain(sig.roles.iter().cloned().map(Symbol::Role)).collect()
}

/// True if every occurrence of `r` in `c` is `∃r.⊤` or `∀r.⊥`.
fn role_only_trivial(c: &Concept, r: &str) -> bool {
    match c {
        Concept::Top | Concept::Bottom | Concept::Name(_) => true,
        Concept::Not(x) => role_only_trivial(x, r),
        Concept::And(cs) | Concept::Or(cs) => cs.iter().all(|x| role_only_trivial(x, r)),
        Concept::Exists(s, f) => {
            if s.as_str() == r {
                **f == Concept::Top
            } else {
                role_only_trivial(f, r)
            }
        }
        Concept::Forall(s, f) => {
            if s.as_str() == r {
                **f == Concept::Bottom
            } else {
                role_only_trivial(f, r)
            }
        }
    }
}

/// Concept names outside `goal_sig`, then role names outside `goal_sig`
/// occurring only as `∃r.⊤` or `∀r.⊥`.
pub fn eligible_names(stage: &Ontology, goal_sig: &Signature) -> Vec<Symbol> {
    let sig = stage.signature();
    let mut out: Vec<Symbol> = sig.concepts.iter().filter(|n| !goal_sig.concepts.contains(*n)).cloned().map(Symbol::Concept).collect();
    for r in sig.roles.iter().filter(|r| !goal_sig.roles.contains(*r)) {
        let trivial = stage.iter().all(|a| match a {
            Axiom::RoleInclusion(..) => !a.signature().roles.contains(r),
            _ => a.gcis().iter().all(|(l, rr)| role_only_trivial(l, r) && role_only_trivial(rr, r)),
        });
        if trivial {
            out.push(Symbol::Role(r.clone()));
        }
    }
    out
}

/// Occurrences of `sym` in `c`, and how many of them sit below a role restriction.
fn count_in(c: &Concept, sym: &Symbol, nested: bool, acc: &mut (usize, usize)) {
    let hit = |acc: &mut (usize, usize)| {
        acc.0 += 1;
        acc.1 += usize::from(nested);
    };
    match c {
        Concept::Top | Concept::Bottom => {}
        Concept::Name(n) => {
            if matches!(sym, Symbol::Concept(x) if x == n) {
                hit(acc);
            }
        }
        Concept::Not(x) => count_in(x, sym, nested, acc),
        Concept::And(cs) | Concept::Or(cs) => cs.iter().for_each(|x| count_in(x, sym, nested, acc)),
        Concept::Exists(r, f) | Concept::Forall(r, f) => {
            if matches!(sym, Symbol::Role(x) if x == r.as_str()) {
                hit(acc);
            }
            count_in(f, sym, true, acc);
        }
    }
}

fn occurrences(stage: &Ontology, sym: &Symbol) -> (usize, usize) {
    let mut acc = (0, 0);
    for a in stage.iter() {
        match a {
            Axiom::Gci(l, r) | Axiom::Equiv(l, r) => {
                count_in(l, sym, false, &mut acc);
                count_in(r, sym, false, &mut acc);
            }
            Axiom::RoleInclusion(r, s) => {
                if let Symbol::Role(x) = sym {
                    acc.0 += usize::from(r.as_str() == x) + usize::from(s.as_str() == x);
                }
            }
        }
    }
    acc
}

/// Fewest occurrences first; ties go to the name with fewer occurrences below
/// role restrictions, then concepts before roles, then by name.
pub fn heuristic_pick(stage: &Ontology, candidates: &[Symbol]) -> Option<Symbol> {
    candidates
        .iter()
        .min_by_key(|s| {
            let (n, nested) = occurrences(stage, s);
            (n, nested, s.is_role(), s.name().to_string())
        })
        .cloned()
}

fn open_candidates(stage: &Ontology, goal_sig: &Signature, failed: &[Symbol]) -> Vec<Symbol> {
    eligible_names(stage, goal_sig).into_iter().filter(|s| !failed.contains(s)).collect()
}

/// `Ok(None)` when forgetting fails for a reason other than cancellation.
fn try_forget(stage: &Ontology, sym: &Symbol, opts: &ForgetOptions) -> Result<Option<Ontology>> {
    match forget_name(stage, sym, opts) {
        Ok(next) => Ok(Some(next)),
        Err(e @ Error::Cancelled { .. }) => Err(e),
        Err(_) => Ok(None),
    }
}

/// Outcome of a sequence search: the sequence and whether it was cut short.
struct Searched {
    seqs: Vec<OntologySequence>,
    interrupted: bool,
}

fn heuristic_sequence(task: &EliminationTask, first: Ontology) -> Result<Searched> {
    let goal_sig = task.goal.signature();
    let opts = task.forget_options();
    let mut seq = OntologySequence::new(first);
    loop {
        if task.cancelled() {
            return Ok(Searched { seqs: vec![seq], interrupted: true });
        }
        let cands = open_candidates(seq.last(), &goal_sig, &seq.failed);
        let Some(sym) = heuristic_pick(seq.last(), &cands) else { break };
        match try_forget(seq.last(), &sym, &opts) {
            Ok(Some(next)) => seq.push(next),
            Ok(None) => seq.failed.push(sym),
            Err(Error::Cancelled { .. }) => return Ok(Searched { seqs: vec![seq], interrupted: true }),
            Err(e) => return Err(e),
        }
    }
    Ok(Searched { seqs: vec![seq], interrupted: false })
}

/// Search state of the best-first strategies.
struct Node {
    seq: OntologySequence,
    steps: Vec<PoolStep>,
}

fn state_key(seq: &OntologySequence) -> String {
    let mut failed: Vec<&str> = seq.failed.iter().map(Symbol::name).collect();
    failed.sort_unstable();
    format!("{}#{}", seq.last().canonical_key(), failed.join(","))
}

/// Best-first search over elimination orders. `cost` must not decrease along
/// a path; the cheapest complete sequences are returned first.
fn best_first(
    task: &EliminationTask,
    first: Ontology,
    wanted: usize,
    bound: Option<u64>,
    cost: &dyn Fn(&Node) -> u64,
    with_steps: bool,
) -> Result<Searched> {
    let goal_sig = task.goal.signature();
    let opts = task.forget_options();
    let mut nodes: Vec<Node> = vec![Node { seq: OntologySequence::new(first), steps: Vec::new() }];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((cost(&nodes[0]), 0usize)));
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(state_key(&nodes[0].seq));
    let mut found = Vec::new();
    let mut expansions = 0;
    while let Some(Reverse((c, id))) = heap.pop() {
        if task.cancelled() {
            return Ok(Searched { seqs: found, interrupted: true });
        }
        if let Some(d) = task.cancel.as_ref().and_then(CancelToken::expansion_delay) {
            std::thread::sleep(d);
        }
        let cands = open_candidates(nodes[id].seq.last(), &goal_sig, &nodes[id].seq.failed);
        if cands.is_empty() {
            found.push(nodes[id].seq.clone());
            if found.len() >= wanted {
                break;
            }
            continue;
        }
        expansions += 1;
        if expansions > SEARCH_BUDGET {
            break;
        }
        for sym in cands {
            let mut seq = nodes[id].seq.clone();
            let mut steps = nodes[id].steps.clone();
            match try_forget(seq.last(), &sym, &opts) {
                Ok(Some(next)) => {
                    if with_steps {
                        steps.extend(stage_steps(seq.last(), &next)?);
                    }
                    seq.push(next);
                }
                Ok(None) => seq.failed.push(sym),
                Err(Error::Cancelled { .. }) => return Ok(Searched { seqs: found, interrupted: true }),
                Err(e) => return Err(e),
            }
            if !seen.insert(state_key(&seq)) {
                continue;
            }
            let node = Node { seq, steps };
            let nc = cost(&node).max(c);
            if bound.is_some_and(|b| nc > b) {
                continue;
            }
            nodes.push(node);
            heap.push(Reverse((nc, nodes.len() - 1)));
        }
    }
    Ok(Searched { seqs: found, interrupted: false })
}

/// Labels a step by the names of its premises that its conclusion lacks.
pub fn labeled_step(conclusion: Axiom, premises: Vec<Axiom>) -> PoolStep {
    let mut gone = Signature::new();
    for p in &premises {
        p.collect_signature(&mut gone);
    }
    let kept = conclusion.signature();
    let names: Vec<String> = gone
        .roles
        .iter()
        .filter(|r| !kept.roles.contains(*r))
        .chain(gone.concepts.iter().filter(|c| !kept.concepts.contains(*c)))
        .cloned()
        .collect();
    let rule = if names.is_empty() { NORMALIZATION.to_string() } else { format!("eliminate {}", names.join(", ")) };
    PoolStep::new(conclusion, premises, rule, names)
}

fn justified_step(from: &Ontology, conclusion: &Axiom) -> Result<PoolStep> {
    let j = compute_justification(from, conclusion)?;
    Ok(labeled_step(conclusion.clone(), j.axioms.iter().cloned().collect()))
}

fn stage_steps(prev: &Ontology, next: &Ontology) -> Result<Vec<PoolStep>> {
    let new: Vec<&Axiom> = next.iter().filter(|a| !prev.contains(a)).collect();
    Exec::default().map(&new, |a| justified_step(prev, a)).into_iter().collect()
}

/// One step per new axiom per stage, plus a final step to `goal` when the
/// last stage does not contain it.
pub fn build_steps(seq: &OntologySequence, goal: &Axiom) -> Result<Vec<PoolStep>> {
    let mut out = Vec::new();
    for w in seq.stages.windows(2) {
        out.extend(stage_steps(&w[0], &w[1])?);
    }
    out.extend(final_step(seq.last(), goal)?);
    Ok(out)
}

fn final_step(last: &Ontology, goal: &Axiom) -> Result<Option<PoolStep>> {
    if last.contains(goal) {
        return Ok(None);
    }
    justified_step(last, goal).map(Some)
}

/// Replaces a premise by the premises of the step producing it whenever the
/// premise count does not grow. Premise sets are re-minimized after each merge.
pub fn merge_steps(steps: Vec<PoolStep>, asserted: &Ontology, goal: &Axiom) -> Result<Vec<PoolStep>> {
    let mut steps: Vec<Option<PoolStep>> = steps.into_iter().map(Some).collect();
    let producer = |steps: &[Option<PoolStep>], i: usize, a: &Axiom| -> Option<usize> {
        (0..i).rev().find(|&j| steps[j].as_ref().is_some_and(|s| &s.conclusion == a))
    };
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..steps.len() {
            let Some(s) = steps[i].clone() else { continue };
            for a in &s.premises {
                if asserted.contains(a) {
                    continue;
                }
                let Some(j) = producer(&steps, i, a) else { continue };
                let inner = steps[j].as_ref().unwrap();
                let merged: BTreeSet<Axiom> = s.premises.iter().filter(|p| *p != a).chain(&inner.premises).cloned().collect();
                if merged.len() > s.premises.len() || merged.contains(&s.conclusion) {
                    continue;
                }
                let from: Ontology = merged.into_iter().collect();
                steps[i] = Some(justified_step(&from, &s.conclusion)?);
                changed = true;
                break;
            }
        }
        loop {
            let used: HashSet<Axiom> = steps.iter().flatten().flat_map(|s| s.premises.iter().cloned()).collect();
            let mut dropped = false;
            for slot in steps.iter_mut() {
                if slot.as_ref().is_some_and(|s| &s.conclusion != goal && !used.contains(&s.conclusion)) {
                    *slot = None;
                    dropped = true;
                }
            }
            if !dropped {
                break;
            }
        }
    }
    Ok(steps.into_iter().flatten().collect())
}

fn steps_of(seq: &OntologySequence, goal: &Axiom, asserted: &Ontology) -> Result<Vec<PoolStep>> {
    merge_steps(build_steps(seq, goal)?, asserted, goal)
}

fn pooled_cost(measure: Measure) -> impl Fn(&Node) -> u64 {
    move |n: &Node| match measure {
        Measure::Depth => n.seq.eliminations() as u64,
        Measure::Size | Measure::WeightedSize => {
            let axioms: HashSet<&Axiom> = n.steps.iter().flat_map(|s| s.premises.iter().chain(std::iter::once(&s.conclusion))).collect();
            match measure {
                Measure::Size => axioms.len() as u64,
                _ => axioms.iter().map(|a| a.size() as u64).sum(),
            }
        }
    }
}

/// Sequences for `task`, starting from the justification `j`.
fn sequences(task: &EliminationTask, j: &Ontology) -> Result<Searched> {
    let heur = heuristic_sequence(task, j.clone())?;
    if heur.interrupted || task.strategy == Strategy::Heuristic {
        return Ok(heur);
    }
    let baseline = heur.seqs[0].clone();
    let mut searched = match task.strategy {
        Strategy::NameOptimized => {
            let bound = baseline.eliminations() as u64;
            best_first(task, j.clone(), 1, Some(bound), &|n: &Node| n.seq.eliminations() as u64, false)?
        }
        _ => best_first(task, j.clone(), POOLED_SEQUENCES, None, &pooled_cost(task.measure), true)?,
    };
    let better = searched.seqs.first().is_some_and(|s| s.eliminations() <= baseline.eliminations());
    match task.strategy {
        Strategy::NameOptimized if better => searched.seqs.truncate(1),
        Strategy::NameOptimized => searched.seqs = vec![baseline],
        _ => searched.seqs.push(baseline),
    }
    Ok(searched)
}

/// Generates an elimination proof of `task.goal`. On cancellation the proof
/// built from the best sequence so far is returned inside the error.
pub fn generate_elimination_proof(task: &EliminationTask) -> Result<Proof> {
    if task.ontology.contains(&task.goal) {
        return Ok(Proof::asserted(task.goal.clone()));
    }
    if let Some(c) = &task.cancel {
        c.report("justification", 0.0);
    }
    let j = compute_justification(&task.ontology, &task.goal)?.axioms;
    if let Some(c) = &task.cancel {
        c.report("sequence-search", 0.1);
    }
    let searched = sequences(task, &j)?;
    if let Some(c) = &task.cancel {
        c.report("step-construction", 0.5);
    }
    let seqs = if searched.seqs.is_empty() { vec![OntologySequence::new(j.clone())] } else { searched.seqs };
    let mut pool = InferencePool::new();
    for a in j.iter() {
        pool.add_axiom(a.clone());
    }
    for seq in &seqs {
        for s in steps_of(seq, &task.goal, &j)? {
            pool.add_step(s);
        }
    }
    if let Some(c) = &task.cancel {
        c.report("extraction", 0.8);
    }
    let check = |a: &Axiom| is_entailed(&task.ontology, a).unwrap_or(false);
    let req = ExtractionRequest::new(&pool, task.goal.clone(), &j, task.measure).with_known(task.known.clone(), &check);
    let mut proof = extract_optimal(&req)?;
    if let Some(c) = &task.cancel {
        c.report("done", 1.0);
    }
    if searched.interrupted {
        proof.suboptimal = true;
        return Err(Error::cancelled(Some(proof)));
    }
    Ok(proof)
}

/// The sequence a strategy settles on, for inspection and tests.
pub fn elimination_sequence(task: &EliminationTask) -> Result<OntologySequence> {
    let j = compute_justification(&task.ontology, &task.goal)?.axioms;
    let mut s = sequences(task, &j)?;
    Ok(if s.seqs.is_empty() { OntologySequence::new(j) } else { s.seqs.swap_remove(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_axiom, parse_ontology};

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    const CASE_SPLIT: &str = "sub(C1, or(C3, C2))\nsub(C2, C3)\nsub(A, only(r, C1))\nsub(only(r, C3), B)";

    fn case_split() -> Ontology {
        parse_ontology(CASE_SPLIT).unwrap()
    }

    #[test]
    fn eligibility() {
        let goal_sig = ax("sub(A, B)").signature();
        let names: Vec<String> = eligible_names(&case_split(), &goal_sig).iter().map(|s| s.name().to_string()).collect();
        assert_eq!(names, vec!["C1", "C2", "C3"]);
        let o = parse_ontology("sub(A, some(r, top))\nsub(some(r, top), B)").unwrap();
        assert_eq!(eligible_names(&o, &goal_sig), vec![Symbol::Role("r".into())]);
        assert!(eligible_names(&case_split(), &case_split().signature()).is_empty());
    }

    #[test]
    fn case_split_heuristic() {
        let task = EliminationTask::new(case_split(), ax("sub(A, B)"), Strategy::Heuristic);
        let p = generate_elimination_proof(&task).unwrap();
        let rules: Vec<&str> = p.steps.iter().map(|s| s.rule.as_str()).collect();
        assert_eq!(rules, vec!["eliminate C2", "eliminate C1", "eliminate r, C3"]);
        assert_eq!(p.vertices.len(), 7);
    }

    #[test]
    fn normalization_label() {
        let o = parse_ontology("equiv(A, B)").unwrap();
        let seq = OntologySequence::new(o);
        let steps = build_steps(&seq, &ax("sub(A, B)")).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].rule, NORMALIZATION);
    }

    #[test]
    fn merged_display() {
        let o = parse_ontology("sub(A, only(r, and(B1, B2, B3)))\nsub(some(r, and(B1, B2, B3)), B)").unwrap();
        let goal = ax("sub(and(A, some(r, top)), B)");
        for strategy in [Strategy::Heuristic, Strategy::NameOptimized, Strategy::SizeOptimized] {
            let p = generate_elimination_proof(&EliminationTask::new(o.clone(), goal.clone(), strategy)).unwrap();
            assert_eq!(p.vertices.len(), 3, "{strategy}");
            assert_eq!(p.steps[0].rule, "eliminate B1, B2, B3");
        }
    }

    #[test]
    fn merge_guard() {
        let s1 = PoolStep::new(ax("sub(X, Y)"), [ax("sub(X, P)"), ax("sub(P, Q)"), ax("sub(Q, Y)")], "r", vec![]);
        let s2 = PoolStep::new(ax("sub(X, Z)"), [ax("sub(X, Y)"), ax("sub(Y, Z)")], "r", vec![]);
        let asserted: Ontology = [ax("sub(X, P)"), ax("sub(P, Q)"), ax("sub(Q, Y)"), ax("sub(Y, Z)")].into_iter().collect();
        let out = merge_steps(vec![s1.clone(), s2.clone()], &asserted, &ax("sub(X, Z)")).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn unary_chain_collapses() {
        let asserted: Ontology = [ax("equiv(A, B)")].into_iter().collect();
        let s1 = labeled_step(ax("sub(A, B)"), vec![ax("equiv(A, B)")]);
        let s2 = labeled_step(ax("sub(A, or(B, C))"), vec![ax("sub(A, B)")]);
        let out = merge_steps(vec![s1, s2], &asserted, &ax("sub(A, or(B, C))")).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].premises, vec![ax("equiv(A, B)")]);
    }

    #[test]
    fn asserted_goal() {
        let p = generate_elimination_proof(&EliminationTask::new(case_split(), ax("sub(C2, C3)"), Strategy::Heuristic)).unwrap();
        assert_eq!(p.vertices.len(), 1);
    }
}
