//! Tree-shaped proofs, inference pools, measures, checking and serialization.

mod check;
mod dot;
mod json;
mod measure;

use std::collections::HashSet;

use indexmap::IndexSet;

use crate::dl::Axiom;

pub use check::{check_proof, check_proof_with, CheckOptions, CheckReport, Violation};
pub use dot::write_dot;
pub use json::{read_json, write_json};
pub use measure::{measure_proof, Measure, RecursiveMeasure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub axiom: Axiom,
    pub asserted: bool,
    pub known: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub conclusion: usize,
    pub premises: Vec<usize>,
    pub rule: String,
    pub eliminated: Vec<String>,
}

/// A proof whose vertices are numbered premises-first; `vertices[i].id == i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub goal: Axiom,
    pub vertices: Vec<Vertex>,
    pub steps: Vec<Step>,
    pub root: usize,
    pub suboptimal: bool,
}

/// Nested form used to assemble proofs before numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofTree {
    Leaf { axiom: Axiom, asserted: bool, known: bool },
    Node { axiom: Axiom, rule: String, eliminated: Vec<String>, premises: Vec<ProofTree> },
}

impl ProofTree {
    pub fn asserted(axiom: Axiom) -> Self {
        ProofTree::Leaf { axiom, asserted: true, known: false }
    }

    pub fn axiom(&self) -> &Axiom {
        match self {
            ProofTree::Leaf { axiom, .. } | ProofTree::Node { axiom, .. } => axiom,
        }
    }

    fn key(&self) -> String {
        match self {
            ProofTree::Leaf { axiom, asserted, known } => {
                format!("{}|{}{}", axiom.to_unicode(), u8::from(*asserted), u8::from(*known))
            }
            ProofTree::Node { axiom, rule, eliminated, premises } => {
                let mut ks: Vec<String> = premises.iter().map(ProofTree::key).collect();
                ks.sort();
                format!("{}|{}|{}[{}]", axiom.to_unicode(), rule, eliminated.join(","), ks.join(";"))
            }
        }
    }
}

impl Proof {
    /// Numbers the tree premises-first, visiting siblings in printed-axiom order.
    pub fn from_tree(goal: Axiom, tree: &ProofTree) -> Proof {
        let mut p = Proof { goal, vertices: Vec::new(), steps: Vec::new(), root: 0, suboptimal: false };
        p.root = p.number(tree);
        p.steps.sort_by_key(|s| s.conclusion);
        p
    }

    fn number(&mut self, t: &ProofTree) -> usize {
        match t {
            ProofTree::Leaf { axiom, asserted, known } => self.push_vertex(axiom, *asserted, *known),
            ProofTree::Node { axiom, rule, eliminated, premises } => {
                let mut kids: Vec<(String, &ProofTree)> = premises.iter().map(|c| (c.key(), c)).collect();
                kids.sort_by(|a, b| a.1.axiom().to_unicode().cmp(&b.1.axiom().to_unicode()).then(a.0.cmp(&b.0)));
                let ids: Vec<usize> = kids.into_iter().map(|(_, c)| self.number(c)).collect();
                let id = self.push_vertex(axiom, false, false);
                self.steps.push(Step { conclusion: id, premises: ids, rule: rule.clone(), eliminated: eliminated.clone() });
                id
            }
        }
    }

    fn push_vertex(&mut self, axiom: &Axiom, asserted: bool, known: bool) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, axiom: axiom.clone(), asserted, known });
        id
    }

    /// Single-vertex proof of an asserted axiom.
    pub fn asserted(goal: Axiom) -> Proof {
        Proof::from_tree(goal.clone(), &ProofTree::asserted(goal))
    }

    pub fn step_for(&self, vertex: usize) -> Option<&Step> {
        self.steps.iter().find(|s| s.conclusion == vertex)
    }

    pub fn root_axiom(&self) -> &Axiom {
        &self.vertices[self.root].axiom
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Vertex> {
        let concl: HashSet<usize> = self.steps.iter().map(|s| s.conclusion).collect();
        self.vertices.iter().filter(move |v| !concl.contains(&v.id))
    }

    /// Rebuilds the nested form rooted at `vertex`. Assumes a well-formed proof.
    pub fn subtree(&self, vertex: usize) -> ProofTree {
        let v = &self.vertices[vertex];
        match self.step_for(vertex) {
            None => ProofTree::Leaf { axiom: v.axiom.clone(), asserted: v.asserted, known: v.known },
            Some(s) => ProofTree::Node {
                axiom: v.axiom.clone(),
                rule: s.rule.clone(),
                eliminated: s.eliminated.clone(),
                premises: s.premises.iter().map(|&p| self.subtree(p)).collect(),
            },
        }
    }

    pub fn to_tree(&self) -> ProofTree {
        self.subtree(self.root)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoolStep {
    pub conclusion: Axiom,
    pub premises: Vec<Axiom>,
    pub rule: String,
    pub eliminated: Vec<String>,
}

impl PoolStep {
    /// Premises are stored deduplicated in printed order.
    pub fn new(conclusion: Axiom, premises: impl IntoIterator<Item = Axiom>, rule: impl Into<String>, eliminated: Vec<String>) -> Self {
        let mut ps: Vec<Axiom> = premises.into_iter().collect();
        ps.sort_by_cached_key(Axiom::to_unicode);
        ps.dedup();
        PoolStep { conclusion, premises: ps, rule: rule.into(), eliminated }
    }
}

/// Candidate inference steps over a set of axioms, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct InferencePool {
    axioms: IndexSet<Axiom>,
    steps: IndexSet<PoolStep>,
}

impl InferencePool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_axiom(&mut self, a: Axiom) {
        self.axioms.insert(a);
    }

    /// Adds a step and its axioms. Identical steps are kept once.
    pub fn add_step(&mut self, s: PoolStep) -> bool {
        self.axioms.insert(s.conclusion.clone());
        for p in &s.premises {
            self.axioms.insert(p.clone());
        }
        self.steps.insert(s)
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn steps(&self) -> impl ExactSizeIterator<Item = &PoolStep> {
        self.steps.iter()
    }

    pub fn step(&self, i: usize) -> &PoolStep {
        &self.steps[i]
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains_axiom(&self, a: &Axiom) -> bool {
        self.axioms.contains(a)
    }

    pub fn steps_concluding<'a>(&'a self, a: &Axiom) -> impl Iterator<Item = &'a PoolStep> + 'a {
        let a = a.clone();
        self.steps.iter().filter(move |s| s.conclusion == a)
    }
}

impl FromIterator<PoolStep> for InferencePool {
    fn from_iter<T: IntoIterator<Item = PoolStep>>(iter: T) -> Self {
        let mut p = InferencePool::new();
        for s in iter {
            p.add_step(s);
        }
        p
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::dl::parse_axiom;

    pub fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    /// The three-step elimination proof of `A ⊑ B`.
    pub fn case_split_tree() -> ProofTree {
        let leaf = |s: &str| ProofTree::asserted(ax(s));
        let node = |s: &str, rule: &str, elim: &[&str], ps: Vec<ProofTree>| ProofTree::Node {
            axiom: ax(s),
            rule: rule.into(),
            eliminated: elim.iter().map(|x| x.to_string()).collect(),
            premises: ps,
        };
        let c1c3 = node("sub(C1, C3)", "eliminate C2", &["C2"], vec![leaf("sub(C1, or(C3, C2))"), leaf("sub(C2, C3)")]);
        let arc3 = node("sub(A, only(r, C3))", "eliminate C1", &["C1"], vec![leaf("sub(A, only(r, C1))"), c1c3]);
        node("sub(A, B)", "eliminate r, C3", &["r", "C3"], vec![arc3, leaf("sub(only(r, C3), B)")])
    }

    pub fn case_split_proof() -> Proof {
        Proof::from_tree(ax("sub(A, B)"), &case_split_tree())
    }
}
