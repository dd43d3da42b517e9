//! ELH completion with full inference tracing, and classification.

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexSet;

use crate::dl::{Axiom, Concept, Ontology, Role, RoleHierarchy, Signature};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::proof::{InferencePool, PoolStep};
use crate::tableau::Reasoner;

fn is_el_concept(c: &Concept) -> bool {
    match c {
        Concept::Top | Concept::Name(_) => true,
        Concept::And(cs) => cs.iter().all(is_el_concept),
        Concept::Exists(_, f) => is_el_concept(f),
        _ => false,
    }
}

/// Every axiom is an ELH axiom: ⊤, names, ⊓ and ∃ under ⊑/≡, or a role inclusion.
pub fn is_elh(o: &Ontology) -> bool {
    o.iter().all(|a| match a {
        Axiom::Gci(l, r) | Axiom::Equiv(l, r) => is_el_concept(l) && is_el_concept(r),
        Axiom::RoleInclusion(..) => true,
    })
}

#[derive(Clone, Debug, Default)]
pub struct TracedDerivation {
    /// Every derived `X ⊑ Y`, reflexive ones excluded.
    pub conclusions: IndexSet<Axiom>,
    pub pool: InferencePool,
}

impl TracedDerivation {
    pub fn derives(&self, a: &Axiom) -> bool {
        self.conclusions.contains(a)
    }

    /// Derived `A ⊑ B` between concept names, sorted by printed form.
    pub fn atomic_subsumptions(&self) -> Vec<Axiom> {
        let mut out: Vec<Axiom> = self
            .conclusions
            .iter()
            .filter(|a| matches!(a, Axiom::Gci(Concept::Name(x), Concept::Name(y)) if x != y))
            .cloned()
            .collect();
        out.sort_by_cached_key(Axiom::to_unicode);
        out
    }
}

struct Saturator<'o> {
    o: &'o Ontology,
    hierarchy: RoleHierarchy,
    top_occurs: bool,
    gci_by_lhs: HashMap<Concept, Vec<(Concept, Axiom)>>,
    conj_containing: HashMap<Concept, Vec<Concept>>,
    exists_by_filler: HashMap<Concept, Vec<Role>>,
    contexts: HashSet<Concept>,
    processed: HashSet<(Concept, Concept)>,
    subsumers: HashMap<Concept, Vec<Concept>>,
    links_by_filler: HashMap<Concept, Vec<(Concept, Role)>>,
    queue: VecDeque<(Concept, Concept)>,
    queued: HashSet<(Concept, Concept)>,
    out: TracedDerivation,
}

fn gci(x: &Concept, y: &Concept) -> Axiom {
    Axiom::Gci(x.clone(), y.clone())
}

impl<'o> Saturator<'o> {
    fn new(o: &'o Ontology) -> Self {
        let mut s = Saturator {
            o,
            hierarchy: o.role_hierarchy(),
            top_occurs: false,
            gci_by_lhs: HashMap::new(),
            conj_containing: HashMap::new(),
            exists_by_filler: HashMap::new(),
            contexts: HashSet::new(),
            processed: HashSet::new(),
            subsumers: HashMap::new(),
            links_by_filler: HashMap::new(),
            queue: VecDeque::new(),
            queued: HashSet::new(),
            out: TracedDerivation::default(),
        };
        let mut occurring = IndexSet::new();
        for a in o {
            for (l, r) in a.gcis() {
                s.gci_by_lhs.entry(l.clone()).or_default().push((r.clone(), a.clone()));
                for c in l.subconcepts().into_iter().chain(r.subconcepts()) {
                    occurring.insert(c.clone());
                }
            }
        }
        for c in &occurring {
            match c {
                Concept::Top => s.top_occurs = true,
                Concept::And(cs) => {
                    for x in cs {
                        s.conj_containing.entry(x.clone()).or_default().push(c.clone());
                    }
                }
                Concept::Exists(r, f) => s.exists_by_filler.entry((**f).clone()).or_default().push(r.clone()),
                _ => {}
            }
        }
        s
    }

    fn init_context(&mut self, x: &Concept) {
        if !self.contexts.insert(x.clone()) {
            return;
        }
        self.enqueue(x.clone(), x.clone());
        if self.top_occurs && *x != Concept::Top {
            self.derive(x, &Concept::Top, Vec::new(), "RTop");
        }
    }

    fn enqueue(&mut self, x: Concept, y: Concept) {
        if self.queued.insert((x.clone(), y.clone())) {
            self.queue.push_back((x, y));
        }
    }

    /// Records one rule instance. Reflexive premises are implicit and dropped.
    fn derive(&mut self, x: &Concept, y: &Concept, premises: Vec<Axiom>, rule: &str) {
        if x == y {
            return;
        }
        let conclusion = gci(x, y);
        if !self.o.contains(&conclusion) {
            let premises = premises.into_iter().filter(|p| !matches!(p, Axiom::Gci(l, r) if l == r));
            self.out.pool.add_step(PoolStep::new(conclusion.clone(), premises, rule, Vec::new()));
        }
        self.out.conclusions.insert(conclusion);
        self.enqueue(x.clone(), y.clone());
    }

    fn run(mut self, extra: &Signature) -> TracedDerivation {
        let mut names = self.o.signature().concepts;
        names.extend(extra.concepts.iter().cloned());
        for n in names.iter().map(Concept::name) {
            self.init_context(&n);
        }
        while let Some((x, y)) = self.queue.pop_front() {
            self.processed.insert((x.clone(), y.clone()));
            self.subsumers.entry(x.clone()).or_default().push(y.clone());
            self.process(&x, &y);
        }
        self.out
    }

    fn has(&self, x: &Concept, y: &Concept) -> bool {
        self.processed.contains(&(x.clone(), y.clone()))
    }

    fn process(&mut self, x: &Concept, y: &Concept) {
        let fact = gci(x, y);

        if let Concept::And(cs) = y {
            for c in cs.clone() {
                self.derive(x, &c, vec![fact.clone()], "RAndMinus");
            }
        }

        for conj in self.conj_containing.get(y).cloned().unwrap_or_default() {
            let Concept::And(cs) = &conj else { continue };
            if cs.iter().all(|c| self.has(x, c)) {
                let premises = cs.iter().map(|c| gci(x, c)).collect();
                self.derive(x, &conj, premises, "RAndPlus");
            }
        }

        for (d, src) in self.gci_by_lhs.get(y).cloned().unwrap_or_default() {
            self.derive(x, &d, vec![fact.clone(), src], "RGci");
        }

        // x ⊑ ∃r.z combined with every known subsumer of z
        if let Concept::Exists(r, z) = y {
            let z = (**z).clone();
            self.links_by_filler.entry(z.clone()).or_default().push((x.clone(), r.clone()));
            self.init_context(&z);
            for w in self.subsumers.get(&z).cloned().unwrap_or_default() {
                self.exists_step(x, r, &z, &w);
            }
        }

        // x plays the filler: every v ⊑ ∃r.x gains v ⊑ ∃s.y
        for (v, r) in self.links_by_filler.get(x).cloned().unwrap_or_default() {
            self.exists_step(&v, &r, x, y);
        }
    }

    fn exists_step(&mut self, v: &Concept, r: &Role, z: &Concept, w: &Concept) {
        let roles = self.exists_by_filler.get(w).cloned().unwrap_or_default();
        for s in roles {
            if !self.hierarchy.subsumes(r.as_str(), s.as_str()) || (z == w && r == &s) {
                continue;
            }
            let mut premises = vec![gci(v, &Concept::Exists(r.clone(), Box::new(z.clone()))), gci(z, w)];
            premises.extend(self.hierarchy.chain(r.as_str(), s.as_str()).unwrap_or_default());
            let rule = if z == w { "RRole" } else { "RExists" };
            self.derive(v, &Concept::Exists(s, Box::new(w.clone())), premises, rule);
        }
    }
}

/// Saturates an ELH ontology, recording every rule instance.
pub fn saturate(o: &Ontology) -> Result<TracedDerivation> {
    saturate_for(o, &Signature::new())
}

/// Like [`saturate`], also deriving the subsumers of names in `extra` that `o` does not mention.
pub fn saturate_for(o: &Ontology, extra: &Signature) -> Result<TracedDerivation> {
    if !is_elh(o) {
        return Err(Error::Precondition("ontology is not in ELH".into()));
    }
    Ok(Saturator::new(o).run(extra))
}

/// Entailed atomic inclusions `A ⊑ B` (A ≠ B) and `A ⊑ ⊥` over the concept names of `o`.
/// An unsatisfiable name only contributes `A ⊑ ⊥`.
pub fn classify(o: &Ontology) -> Result<Vec<Axiom>> {
    classify_with(o, Exec::default())
}

pub fn classify_with(o: &Ontology, exec: Exec) -> Result<Vec<Axiom>> {
    if is_elh(o) {
        return Ok(saturate(o)?.atomic_subsumptions());
    }
    let names: Vec<String> = o.signature().concepts.into_iter().collect();
    let reasoner = Reasoner::new(o);
    let unsat: Vec<Result<bool>> = exec.map(&names, |a| Ok(!reasoner.is_satisfiable(&Concept::name(a.as_str()))?));
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    for (a, u) in names.iter().zip(unsat) {
        if u? {
            out.push(Axiom::gci(Concept::name(a.as_str()), Concept::Bottom));
            continue;
        }
        for b in &names {
            if a != b {
                pairs.push(Axiom::gci(Concept::name(a.as_str()), Concept::name(b.as_str())));
            }
        }
    }
    let verdicts = exec.map(&pairs, |ax| reasoner.is_entailed(ax));
    for (ax, v) in pairs.into_iter().zip(verdicts) {
        if v? {
            out.push(ax);
        }
    }
    out.sort_by_cached_key(Axiom::to_unicode);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_axiom, parse_ontology};

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    #[test]
    fn elh_detection() {
        assert!(is_elh(&parse_ontology("sub(A, some(r, B))\nsubrole(r, s)").unwrap()));
        assert!(!is_elh(&parse_ontology("sub(A, only(r, C1))").unwrap()));
        assert!(is_elh(&Ontology::new()));
    }

    #[test]
    fn chain_and_conjunction() {
        let d = saturate(&parse_ontology("sub(A, B)\nsub(B, C)").unwrap()).unwrap();
        assert!(d.derives(&ax("sub(A, C)")));
        let step = d.pool.steps_concluding(&ax("sub(A, C)")).next().unwrap();
        assert_eq!(step.premises.len(), 2);
        let d = saturate(&parse_ontology("sub(A, and(B, C))").unwrap()).unwrap();
        assert!(d.derives(&ax("sub(A, B)")) && d.derives(&ax("sub(A, C)")));
    }

    #[test]
    fn existential_introduction() {
        let o = parse_ontology("sub(A, some(r, B))\nsub(B, C)\nsub(some(r, C), D)").unwrap();
        let d = saturate(&o).unwrap();
        assert!(d.derives(&ax("sub(A, D)")));
        assert!(crate::tableau::is_entailed(&o, &ax("sub(A, D)")).unwrap());
    }

    #[test]
    fn role_hierarchy_steps() {
        let o = parse_ontology("sub(A, some(r, B))\nsubrole(r, s)\nsub(some(s, B), C)").unwrap();
        let d = saturate(&o).unwrap();
        assert!(d.derives(&ax("sub(A, C)")));
        let s = d.pool.steps_concluding(&ax("sub(A, some(s, B))")).next().unwrap();
        assert_eq!(s.rule, "RRole");
        assert!(s.premises.contains(&ax("subrole(r, s)")));
    }

    #[test]
    fn no_step_concludes_an_input_axiom() {
        let o = parse_ontology("sub(A, B)\nequiv(B, C)\nsub(A, C)").unwrap();
        let d = saturate(&o).unwrap();
        assert!(d.pool.steps().all(|s| !o.contains(&s.conclusion)));
    }

    #[test]
    fn classification() {
        let case_split = parse_ontology("sub(A, only(r, C1))\nsub(C1, or(C3, C2))\nsub(C2, C3)\nsub(only(r, C3), B)").unwrap();
        let c = classify(&case_split).unwrap();
        for g in ["sub(A, B)", "sub(C1, C3)", "sub(C2, C3)"] {
            assert!(c.contains(&ax(g)), "{g}");
        }
        assert!(classify(&Ontology::new()).unwrap().is_empty());
        assert_eq!(classify(&parse_ontology("equiv(A, B)").unwrap()).unwrap(), vec![ax("sub(A, B)"), ax("sub(B, A)")]);
        let unsat = classify(&parse_ontology("sub(A, not(A))\nsub(B, C)").unwrap()).unwrap();
        assert_eq!(unsat, vec![ax("sub(A, bot)"), ax("sub(B, C)")]);
    }
}
