use std::collections::BTreeMap;
use std::fmt;

use crate::dl::{Axiom, Ontology, Signature};
use crate::par::Exec;
use crate::tableau::Reasoner;

use super::Proof;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadVertexId { index: usize, id: usize },
    DanglingReference { step: usize, vertex: usize },
    Cycle { vertex: usize },
    NotATree { vertex: usize },
    MultipleSteps { vertex: usize },
    RootMismatch { expected: String, found: String },
    RootUsedAsPremise { vertex: usize },
    Unreachable { vertex: usize },
    LeafNotAdmissible { vertex: usize },
    AssertedNotInOntology { vertex: usize },
    KnownOutsideSignature { vertex: usize },
    KnownNotEntailed { vertex: usize },
    UnsoundStep { step: usize },
    NonMinimalPremises { step: usize, redundant: usize },
    EliminatedNameInConclusion { step: usize, name: String },
    ReasonerLimit { step: Option<usize>, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadVertexId { index, id } => write!(f, "vertex at index {index} has id {id}"),
            Violation::DanglingReference { step, vertex } => write!(f, "step {step} references missing vertex {vertex}"),
            Violation::Cycle { vertex } => write!(f, "vertex {vertex} is derivable from itself"),
            Violation::NotATree { vertex } => write!(f, "vertex {vertex} is a premise of more than one step"),
            Violation::MultipleSteps { vertex } => write!(f, "vertex {vertex} is the conclusion of more than one step"),
            Violation::RootMismatch { expected, found } => write!(f, "root is {found}, expected {expected}"),
            Violation::RootUsedAsPremise { vertex } => write!(f, "root vertex {vertex} is used as a premise"),
            Violation::Unreachable { vertex } => write!(f, "vertex {vertex} is not connected to the root"),
            Violation::LeafNotAdmissible { vertex } => write!(f, "leaf {vertex} is neither asserted nor known"),
            Violation::AssertedNotInOntology { vertex } => write!(f, "leaf {vertex} is marked asserted but is not in the ontology"),
            Violation::KnownOutsideSignature { vertex } => write!(f, "known leaf {vertex} uses names outside the known signature"),
            Violation::KnownNotEntailed { vertex } => write!(f, "known leaf {vertex} is not entailed by the ontology"),
            Violation::UnsoundStep { step } => write!(f, "premises of step {step} do not entail its conclusion"),
            Violation::NonMinimalPremises { step, redundant } => {
                write!(f, "step {step} still entails its conclusion without premise {redundant}")
            }
            Violation::EliminatedNameInConclusion { step, name } => {
                write!(f, "step {step} eliminates {name} but its conclusion mentions it")
            }
            Violation::ReasonerLimit { step: Some(s), message } => write!(f, "could not check step {s}: {message}"),
            Violation::ReasonerLimit { step: None, message } => write!(f, "reasoner failure: {message}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Also require every premise of a step to be necessary and every
    /// eliminated name to be absent from the step's conclusion.
    pub elimination_conditions: bool,
    pub exec: Exec,
}

pub fn check_proof(p: &Proof, o: &Ontology, goal: &Axiom, known: &Signature) -> CheckReport {
    check_proof_with(p, o, goal, known, CheckOptions::default())
}

pub fn check_proof_with(p: &Proof, o: &Ontology, goal: &Axiom, known: &Signature, opts: CheckOptions) -> CheckReport {
    let mut out = Vec::new();
    let n = p.vertices.len();
    for (i, v) in p.vertices.iter().enumerate() {
        if v.id != i {
            out.push(Violation::BadVertexId { index: i, id: v.id });
        }
    }
    let mut ok_refs = p.root < n;
    if !ok_refs {
        out.push(Violation::DanglingReference { step: usize::MAX, vertex: p.root });
    }
    for (si, s) in p.steps.iter().enumerate() {
        for &v in s.premises.iter().chain(std::iter::once(&s.conclusion)) {
            if v >= n {
                out.push(Violation::DanglingReference { step: si, vertex: v });
                ok_refs = false;
            }
        }
    }
    if !ok_refs {
        return CheckReport { violations: out };
    }

    let mut producer: BTreeMap<usize, usize> = BTreeMap::new();
    let mut uses = vec![0usize; n];
    for (si, s) in p.steps.iter().enumerate() {
        if producer.insert(s.conclusion, si).is_some() {
            out.push(Violation::MultipleSteps { vertex: s.conclusion });
        }
        for &q in &s.premises {
            uses[q] += 1;
        }
    }
    for (v, &u) in uses.iter().enumerate() {
        if u > 1 {
            out.push(Violation::NotATree { vertex: v });
        }
    }
    if uses[p.root] > 0 {
        out.push(Violation::RootUsedAsPremise { vertex: p.root });
    }

    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    let mut stack = vec![(p.root, 0usize)];
    color[p.root] = 1;
    while let Some((v, i)) = stack.pop() {
        let premises = producer.get(&v).map(|&s| p.steps[s].premises.as_slice()).unwrap_or(&[]);
        if i < premises.len() {
            stack.push((v, i + 1));
            let q = premises[i];
            match color[q] {
                0 => {
                    color[q] = 1;
                    stack.push((q, 0));
                }
                1 => out.push(Violation::Cycle { vertex: q }),
                _ => {}
            }
        } else {
            color[v] = 2;
        }
    }
    for (v, &c) in color.iter().enumerate() {
        if c == 0 {
            out.push(Violation::Unreachable { vertex: v });
        }
    }

    let root_axiom = &p.vertices[p.root].axiom;
    if root_axiom != goal || &p.goal != goal {
        let found = if root_axiom != goal { root_axiom } else { &p.goal };
        out.push(Violation::RootMismatch { expected: goal.to_unicode(), found: found.to_unicode() });
    }

    let reasoner = Reasoner::new(o);
    for v in &p.vertices {
        if producer.contains_key(&v.id) {
            continue;
        }
        if v.asserted {
            if !o.contains(&v.axiom) {
                out.push(Violation::AssertedNotInOntology { vertex: v.id });
            }
        } else if v.known {
            if !v.axiom.signature().is_subset(known) {
                out.push(Violation::KnownOutsideSignature { vertex: v.id });
            }
            match reasoner.is_entailed(&v.axiom) {
                Ok(true) => {}
                Ok(false) => out.push(Violation::KnownNotEntailed { vertex: v.id }),
                Err(e) => out.push(Violation::ReasonerLimit { step: None, message: e.to_string() }),
            }
        } else {
            out.push(Violation::LeafNotAdmissible { vertex: v.id });
        }
    }

    let per_step = opts.exec.map(&p.steps, |s| check_step(p, s, opts.elimination_conditions));
    for (si, vs) in per_step.into_iter().enumerate() {
        for v in vs {
            out.push(match v {
                StepIssue::Unsound => Violation::UnsoundStep { step: si },
                StepIssue::Redundant(q) => Violation::NonMinimalPremises { step: si, redundant: q },
                StepIssue::Eliminated(name) => Violation::EliminatedNameInConclusion { step: si, name },
                StepIssue::Limit(message) => Violation::ReasonerLimit { step: Some(si), message },
            });
        }
    }
    CheckReport { violations: out }
}

enum StepIssue {
    Unsound,
    Redundant(usize),
    Eliminated(String),
    Limit(String),
}

fn check_step(p: &Proof, s: &super::Step, elimination: bool) -> Vec<StepIssue> {
    let mut issues = Vec::new();
    let conclusion = &p.vertices[s.conclusion].axiom;
    let premises: Ontology = s.premises.iter().map(|&q| p.vertices[q].axiom.clone()).collect();
    match Reasoner::new(&premises).is_entailed(conclusion) {
        Ok(true) => {}
        Ok(false) => return vec![StepIssue::Unsound],
        Err(e) => return vec![StepIssue::Limit(e.to_string())],
    }
    if elimination {
        for &q in &s.premises {
            let rest = premises.without(&p.vertices[q].axiom);
            match Reasoner::new(&rest).is_entailed(conclusion) {
                Ok(true) => issues.push(StepIssue::Redundant(q)),
                Ok(false) => {}
                Err(e) => issues.push(StepIssue::Limit(e.to_string())),
            }
        }
        let sig = conclusion.signature();
        for name in &s.eliminated {
            if sig.contains(name) {
                issues.push(StepIssue::Eliminated(name.clone()));
            }
        }
    }
    issues
}
