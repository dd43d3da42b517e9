//! Measure-optimal tree proofs from an inference pool.

use std::cell::RefCell;
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use crate::cancel::CancelToken;
use crate::dl::{Axiom, Ontology, Signature};
use crate::error::{Error, Result};
use crate::proof::{InferencePool, Proof, ProofTree, RecursiveMeasure};

pub struct ExtractionRequest<'a, M: RecursiveMeasure> {
    pub pool: &'a InferencePool,
    pub goal: Axiom,
    pub asserted: &'a Ontology,
    pub known: Signature,
    /// Decides whether a candidate known leaf is entailed. Called at most once per axiom.
    pub known_check: Option<&'a dyn Fn(&Axiom) -> bool>,
    pub measure: M,
    pub cancel: Option<&'a CancelToken>,
}

impl<'a, M: RecursiveMeasure> ExtractionRequest<'a, M> {
    pub fn new(pool: &'a InferencePool, goal: Axiom, asserted: &'a Ontology, measure: M) -> Self {
        ExtractionRequest { pool, goal, asserted, known: Signature::new(), known_check: None, measure, cancel: None }
    }

    pub fn with_known(mut self, known: Signature, check: &'a dyn Fn(&Axiom) -> bool) -> Self {
        self.known = known;
        self.known_check = Some(check);
        self
    }

    pub fn with_cancel(mut self, cancel: &'a CancelToken) -> Self {
        self.cancel = Some(cancel);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Choice {
    Asserted,
    Known,
    Step(usize),
}

struct Best {
    value: u64,
    choice: Choice,
    premises: usize,
}

/// Dijkstra-style search over the pool: the axiom with the least tentative
/// value is finalized first; a step fires once all its premises are final.
pub fn extract_optimal<M: RecursiveMeasure>(req: &ExtractionRequest<'_, M>) -> Result<Proof> {
    let pool = req.pool;
    let mut ids: HashMap<&Axiom, usize> = HashMap::new();
    let mut axioms: Vec<&Axiom> = Vec::new();
    for a in std::iter::once(&req.goal).chain(pool.axioms()) {
        ids.entry(a).or_insert_with(|| {
            axioms.push(a);
            axioms.len() - 1
        });
    }
    let goal_id = 0;
    let n = axioms.len();
    let keys: Vec<String> = axioms.iter().map(|a| a.to_unicode()).collect();

    let steps: Vec<(usize, Vec<usize>)> = pool
        .steps()
        .map(|s| (ids[&s.conclusion], s.premises.iter().map(|p| ids[p]).collect()))
        .collect();
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut waiting: Vec<usize> = Vec::with_capacity(steps.len());
    for (si, (_, ps)) in steps.iter().enumerate() {
        for &p in ps {
            uses[p].push(si);
        }
        waiting.push(ps.len());
    }

    let memo: RefCell<HashMap<usize, bool>> = RefCell::new(HashMap::new());
    let known_ok = |i: usize| -> bool {
        if req.known.is_empty() || !axioms[i].signature().is_subset(&req.known) {
            return false;
        }
        *memo.borrow_mut().entry(i).or_insert_with(|| req.known_check.is_none_or(|f| f(axioms[i])))
    };

    let mut best: Vec<Option<Best>> = (0..n).map(|_| None).collect();
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(u64, &str, usize)>> = BinaryHeap::new();

    let better = |cur: &Option<Best>, value: u64, premises: usize, choice: Choice| -> bool {
        match cur {
            None => true,
            Some(b) => match value.cmp(&b.value).then(premises.cmp(&b.premises)) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match (choice, b.choice) {
                    (Choice::Step(x), Choice::Step(y)) => x < y,
                    _ => false,
                },
            },
        }
    };

    for i in 0..n {
        let choice = if req.asserted.contains(axioms[i]) {
            Some(Choice::Asserted)
        } else if known_ok(i) {
            Some(Choice::Known)
        } else {
            None
        };
        if let Some(choice) = choice {
            let value = req.measure.leaf_value(axioms[i]);
            best[i] = Some(Best { value, choice, premises: 0 });
            heap.push(Reverse((value, &keys[i], i)));
        }
    }
    for (si, (c, ps)) in steps.iter().enumerate() {
        if ps.is_empty() {
            let value = req.measure.combine(axioms[*c], &[]);
            if better(&best[*c], value, 0, Choice::Step(si)) {
                best[*c] = Some(Best { value, choice: Choice::Step(si), premises: 0 });
                heap.push(Reverse((value, &keys[*c], *c)));
            }
        }
    }

    while let Some(Reverse((value, _, a))) = heap.pop() {
        if req.cancel.is_some_and(CancelToken::is_cancelled) {
            let partial = best[goal_id].as_ref().map(|_| {
                let mut p = Proof::from_tree(req.goal.clone(), &unfold(goal_id, &best, &steps, &axioms, pool));
                p.suboptimal = true;
                p
            });
            return Err(Error::cancelled(partial));
        }
        if done[a] || best[a].as_ref().is_none_or(|b| b.value != value) {
            continue;
        }
        done[a] = true;
        if a == goal_id {
            break;
        }
        for &si in &uses[a] {
            waiting[si] -= 1;
            if waiting[si] > 0 {
                continue;
            }
            let (c, ps) = &steps[si];
            if done[*c] {
                continue;
            }
            let vals: Vec<u64> = ps.iter().map(|&p| best[p].as_ref().unwrap().value).collect();
            let v = req.measure.combine(axioms[*c], &vals);
            if better(&best[*c], v, ps.len(), Choice::Step(si)) {
                best[*c] = Some(Best { value: v, choice: Choice::Step(si), premises: ps.len() });
                heap.push(Reverse((v, &keys[*c], *c)));
            }
        }
    }

    if !done[goal_id] {
        return Err(Error::NoProof(req.goal.to_unicode()));
    }
    Ok(Proof::from_tree(req.goal.clone(), &unfold(goal_id, &best, &steps, &axioms, pool)))
}

fn unfold(a: usize, best: &[Option<Best>], steps: &[(usize, Vec<usize>)], axioms: &[&Axiom], pool: &InferencePool) -> ProofTree {
    let axiom = axioms[a].clone();
    match best[a].as_ref().expect("unfolding an axiom without a derivation").choice {
        Choice::Asserted => ProofTree::Leaf { axiom, asserted: true, known: false },
        Choice::Known => ProofTree::Leaf { axiom, asserted: false, known: true },
        Choice::Step(si) => {
            let s = pool.step(si);
            ProofTree::Node {
                axiom,
                rule: s.rule.clone(),
                eliminated: s.eliminated.clone(),
                premises: steps[si].1.iter().map(|&p| unfold(p, best, steps, axioms, pool)).collect(),
            }
        }
    }
}

/// Every tree proof of `goal` with at most `bound` vertices. Exponential; meant as a test oracle.
pub fn enumerate_all_proofs(pool: &InferencePool, goal: &Axiom, asserted: &Ontology, bound: usize) -> Result<Vec<Proof>> {
    const MAX_PROOFS: usize = 200_000;
    let mut count = 0usize;
    let mut path = Vec::new();
    let trees = enumerate(pool, goal, asserted, bound, &mut path, &mut count, MAX_PROOFS)?;
    Ok(trees.into_iter().map(|(t, _)| Proof::from_tree(goal.clone(), &t)).collect())
}

fn enumerate(
    pool: &InferencePool,
    a: &Axiom,
    asserted: &Ontology,
    bound: usize,
    path: &mut Vec<Axiom>,
    count: &mut usize,
    cap: usize,
) -> Result<Vec<(ProofTree, usize)>> {
    let mut out = Vec::new();
    if bound == 0 {
        return Ok(out);
    }
    if asserted.contains(a) {
        out.push((ProofTree::asserted(a.clone()), 1));
    }
    path.push(a.clone());
    for s in pool.steps_concluding(a) {
        if s.premises.iter().any(|p| path.contains(p)) {
            continue;
        }
        // partial combinations: (premise trees, total size)
        let mut partial: Vec<(Vec<ProofTree>, usize)> = vec![(Vec::new(), 1)];
        for p in &s.premises {
            let mut next = Vec::new();
            for (trees, used) in &partial {
                if *used >= bound {
                    continue;
                }
                for (t, sz) in enumerate(pool, p, asserted, bound - used, path, count, cap)? {
                    let mut ts = trees.clone();
                    ts.push(t);
                    next.push((ts, used + sz));
                }
            }
            partial = next;
            if partial.len() > cap {
                path.pop();
                return Err(Error::ResourceLimit { limit: cap });
            }
        }
        for (premises, size) in partial {
            if size <= bound {
                out.push((
                    ProofTree::Node { axiom: a.clone(), rule: s.rule.clone(), eliminated: s.eliminated.clone(), premises },
                    size,
                ));
            }
        }
    }
    path.pop();
    *count += out.len();
    if *count > cap {
        return Err(Error::ResourceLimit { limit: cap });
    }
    Ok(out)
}
