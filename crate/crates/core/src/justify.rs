//! Black-box justifications over the tableau oracle.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::dl::{Axiom, Ontology};
use crate::error::{Error, Result};
use crate::tableau::Reasoner;

pub const DEFAULT_UNION_CAP: usize = 64;

/// A subset-minimal set of axioms entailing `goal`, in source-ontology order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub axioms: Ontology,
    pub goal: Axiom,
}

fn entails(axioms: &Ontology, goal: &Axiom) -> Result<bool> {
    Reasoner::new(axioms).is_entailed(goal)
}

/// Expand by shared signature, then contract in reverse insertion order.
pub fn compute_justification(o: &Ontology, goal: &Axiom) -> Result<Justification> {
    if o.contains(goal) {
        return Ok(Justification { axioms: [goal.clone()].into_iter().collect(), goal: goal.clone() });
    }
    if !entails(o, goal)? {
        return Err(Error::NotEntailed(goal.to_unicode()));
    }

    let mut chosen = vec![false; o.len()];
    let mut sig = goal.signature();
    loop {
        let mut grew = false;
        for (i, a) in o.iter().enumerate() {
            if !chosen[i] && a.signature().intersects(&sig) {
                chosen[i] = true;
                grew = true;
            }
        }
        let current: Ontology = o.iter().enumerate().filter(|(i, _)| chosen[*i]).map(|(_, a)| a.clone()).collect();
        if !grew {
            chosen.iter_mut().for_each(|c| *c = true);
            break;
        }
        if entails(&current, goal)? {
            break;
        }
        sig = current.signature();
    }

    for i in (0..o.len()).rev() {
        if !chosen[i] {
            continue;
        }
        chosen[i] = false;
        let rest: Ontology = o.iter().enumerate().filter(|(j, _)| chosen[*j]).map(|(_, a)| a.clone()).collect();
        if !entails(&rest, goal)? {
            chosen[i] = true;
        }
    }
    let axioms = o.iter().enumerate().filter(|(i, _)| chosen[*i]).map(|(_, a)| a.clone()).collect();
    Ok(Justification { axioms, goal: goal.clone() })
}

/// Up to `limit` justifications by hitting-set-tree search.
pub fn compute_all_justifications(o: &Ontology, goal: &Axiom, limit: usize) -> Result<Vec<Justification>> {
    if !entails(o, goal)? {
        return Err(Error::NotEntailed(goal.to_unicode()));
    }
    let limit = limit.max(1);
    let mut found: Vec<Justification> = Vec::new();
    let mut closed: Vec<BTreeSet<usize>> = Vec::new();
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::from([BTreeSet::new()]);
    let axioms: Vec<&Axiom> = o.iter().collect();

    while let Some(path) = queue.pop_front() {
        if closed.iter().any(|c| c.is_subset(&path)) {
            continue;
        }
        let reuse = found.iter().find(|j| j.axioms.iter().all(|a| !path.contains(&o.position(a).unwrap()))).cloned();
        let j = match reuse {
            Some(j) => j,
            None => {
                let rest: Ontology =
                    axioms.iter().enumerate().filter(|(i, _)| !path.contains(i)).map(|(_, a)| (*a).clone()).collect();
                if !entails(&rest, goal)? {
                    closed.push(path);
                    continue;
                }
                let j = compute_justification(&rest, goal)?;
                found.push(j.clone());
                if found.len() >= limit {
                    return Ok(found);
                }
                j
            }
        };
        for a in &j.axioms {
            let mut next = path.clone();
            next.insert(o.position(a).unwrap());
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JustificationUnion {
    pub ontology: Ontology,
    pub justifications: usize,
    /// Set when the cap was reached, so further justifications may exist.
    pub warning: Option<String>,
}

pub fn justification_union(o: &Ontology, goal: &Axiom) -> Result<JustificationUnion> {
    justification_union_capped(o, goal, DEFAULT_UNION_CAP)
}

pub fn justification_union_capped(o: &Ontology, goal: &Axiom, cap: usize) -> Result<JustificationUnion> {
    let all = compute_all_justifications(o, goal, cap)?;
    let members: HashSet<&Axiom> = all.iter().flat_map(|j| j.axioms.iter()).collect();
    let ontology = o.iter().filter(|a| members.contains(a)).cloned().collect();
    let warning = (all.len() >= cap).then(|| format!("stopped after {cap} justifications; the union may be incomplete"));
    Ok(JustificationUnion { ontology, justifications: all.len(), warning })
}
