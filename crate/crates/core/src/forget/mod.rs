//! Resolution-based forgetting of concept and role names over ALCH clauses.

mod beautify;
mod calculus;
mod clause;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub use beautify::{beautify, simplify};
pub use calculus::{ClauseSet, Limits, DEFINER_CAP};
pub use clause::{clause_axiom, clause_concept, Clause, Definer, DefinerId, Definers, Literal, LogEntry, LogPremise, Origin, Rule};

use crate::cancel::CancelToken;
use crate::dl::{Axiom, Ontology, Signature};
use crate::error::{Error, Result};

pub const DEFAULT_NAME_BUDGET: Duration = Duration::from_secs(10);
pub const TIMEOUT_ENV: &str = "PROOFFORGE_TIMEOUT_SECS";

/// A concept or role name to forget.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Concept(String),
    Role(String),
}

impl Symbol {
    pub fn name(&self) -> &str {
        match self {
            Symbol::Concept(n) | Symbol::Role(n) => n,
        }
    }

    pub fn is_role(&self) -> bool {
        matches!(self, Symbol::Role(_))
    }

    pub fn occurs_in(&self, sig: &Signature) -> bool {
        match self {
            Symbol::Concept(n) => sig.concepts.contains(n),
            Symbol::Role(n) => sig.roles.contains(n),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Concept names in sorted order, then role names in sorted order.
pub fn default_order(sig: &Signature) -> Vec<Symbol> {
    sig.concepts.iter().cloned().map(Symbol::Concept).chain(sig.roles.iter().cloned().map(Symbol::Role)).collect()
}

type CacheKey = (String, Symbol);

/// Shared results of single-name forgetting, keyed by the canonical input and the name.
#[derive(Debug, Default)]
pub struct ForgetCache {
    map: Mutex<HashMap<CacheKey, std::result::Result<Vec<Axiom>, String>>>,
}

impl ForgetCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct ForgetOptions {
    pub logging: bool,
    pub per_name: Duration,
    pub cancel: Option<CancelToken>,
    pub cache: Option<Arc<ForgetCache>>,
}

impl Default for ForgetOptions {
    fn default() -> Self {
        let per_name = std::env::var(TIMEOUT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|s| *s > 0.0)
            .map(Duration::from_secs_f64)
            .unwrap_or(DEFAULT_NAME_BUDGET);
        ForgetOptions { logging: false, per_name, cancel: None, cache: None }
    }
}

impl ForgetOptions {
    fn limits(&self) -> Limits {
        Limits { deadline: Some(Instant::now() + self.per_name), cancel: self.cancel.clone(), ..Limits::default() }
    }
}

fn forget_in(cs: &mut ClauseSet, sym: &Symbol) -> Result<()> {
    match sym {
        Symbol::Concept(n) => cs.forget_concept(n),
        Symbol::Role(n) => cs.forget_role(n),
    }
}

/// Forgets one name. The whole ontology is saturated, but axioms not
/// mentioning the name are returned verbatim.
pub fn forget_name(o: &Ontology, sym: &Symbol, opts: &ForgetOptions) -> Result<Ontology> {
    let mentions: Vec<bool> = o.iter().map(|a| sym.occurs_in(&a.signature())).collect();
    if !mentions.iter().any(|m| *m) {
        return Ok(o.clone());
    }
    let key = (o.canonical_key(), sym.clone());
    let cached = opts.cache.as_ref().and_then(|c| c.map.lock().unwrap().get(&key).cloned());
    let produced = match cached {
        Some(Ok(axioms)) => axioms,
        Some(Err(msg)) => return Err(Error::BudgetExceeded(msg)),
        None => {
            let run = || -> Result<Vec<Axiom>> {
                let mut cs = ClauseSet::normalize(o, false, opts.limits())?;
                forget_in(&mut cs, sym)?;
                let mut out = cs.roles.clone();
                out.extend(cs.denormalize_except(|c| matches!(c.origin, Origin::Input(i) if !mentions[i]))?);
                Ok(out)
            };
            let r = run();
            if let Some(c) = &opts.cache {
                match &r {
                    Ok(v) => {
                        c.map.lock().unwrap().insert(key, Ok(v.clone()));
                    }
                    Err(Error::Cancelled { .. }) => {}
                    Err(e) => {
                        c.map.lock().unwrap().insert(key, Err(e.to_string()));
                    }
                }
            }
            r?
        }
    };
    let mut result: Ontology =
        o.iter().zip(&mentions).filter(|(a, m)| !**m && !matches!(a, Axiom::RoleInclusion(..))).map(|(a, _)| a.clone()).collect();
    for a in produced {
        result.insert(a);
    }
    Ok(result)
}

#[derive(Clone, Debug)]
pub struct ForgetResult {
    pub result: Ontology,
    pub failed: Vec<Symbol>,
    /// The saturated clause set with its inference log, in logging mode.
    pub log: Option<ClauseSet>,
}

/// Forgets the names of `order` not in `keep` one after another. A name whose
/// forgetting fails is kept and recorded in `failed`.
///
/// Only cancellation is reported as an error.
pub fn forget_signature(o: &Ontology, keep: &Signature, order: &[Symbol], opts: &ForgetOptions) -> Result<ForgetResult> {
    let names: Vec<&Symbol> = order.iter().filter(|s| !s.occurs_in(keep)).collect();
    if opts.logging {
        return forget_logged(o, &names, opts);
    }
    let mut current = o.clone();
    let mut failed = Vec::new();
    for sym in names {
        match forget_name(&current, sym, opts) {
            Ok(next) => current = next,
            Err(e @ Error::Cancelled { .. }) => return Err(e),
            Err(_) => failed.push(sym.clone()),
        }
    }
    Ok(ForgetResult { result: current, failed, log: None })
}

fn forget_logged(o: &Ontology, names: &[&Symbol], opts: &ForgetOptions) -> Result<ForgetResult> {
    let mut cs = match ClauseSet::normalize(o, true, opts.limits()) {
        Ok(cs) => cs,
        Err(e @ Error::Cancelled { .. }) => return Err(e),
        Err(_) => return Ok(ForgetResult { result: o.clone(), failed: names.iter().map(|s| (*s).clone()).collect(), log: None }),
    };
    if names.is_empty() {
        return Ok(ForgetResult { result: o.clone(), failed: Vec::new(), log: Some(cs) });
    }
    let mut failed = Vec::new();
    for sym in names {
        cs.set_deadline(Some(Instant::now() + opts.per_name));
        match forget_in(&mut cs, sym) {
            Ok(()) => {}
            Err(e @ Error::Cancelled { .. }) => return Err(e),
            Err(_) => failed.push((*sym).clone()),
        }
    }
    let result = match cs.denormalize() {
        Ok(axioms) => cs.roles.iter().cloned().chain(axioms).collect(),
        Err(_) => {
            failed = names.iter().map(|s| (*s).clone()).collect();
            o.clone()
        }
    };
    Ok(ForgetResult { result, failed, log: Some(cs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{parse_axiom, parse_ontology};
    use crate::tableau::{entails_all, is_entailed};

    fn onto(s: &str) -> Ontology {
        parse_ontology(s).unwrap()
    }

    fn concept(n: &str) -> Symbol {
        Symbol::Concept(n.into())
    }

    fn forget(o: &Ontology, s: Symbol) -> Ontology {
        forget_name(o, &s, &ForgetOptions::default()).unwrap()
    }

    fn printed(o: &Ontology) -> Vec<String> {
        let mut v: Vec<String> = o.iter().map(Axiom::to_unicode).collect();
        v.sort();
        v
    }

    #[test]
    fn normalize_introduces_definers() {
        let cs = ClauseSet::normalize(&onto("sub(A, only(r, C1))"), false, Limits::default()).unwrap();
        let shown: Vec<String> = cs.alive_ids().iter().map(|&i| clause_axiom(&cs.definers, cs.clause(i)).to_unicode()).collect();
        assert_eq!(shown, vec!["⊤ ⊑ C1 ⊔ ¬_D1", "⊤ ⊑ ¬A ⊔ ∀r._D1"]);
        assert_eq!(cs.definers.get(0).represents, crate::dl::Concept::name("C1"));
    }

    #[test]
    fn case_split_single_eliminations() {
        assert_eq!(printed(&forget(&onto("sub(C1, or(C3, C2))\nsub(C2, C3)"), concept("C2"))), vec!["C1 ⊑ C3"]);
        assert_eq!(printed(&forget(&onto("sub(A, only(r, C1))\nsub(C1, C3)"), concept("C1"))), vec!["A ⊑ ∀r.C3"]);
        assert_eq!(printed(&forget(&onto("sub(B, A)\nsub(A, C)"), concept("A"))), vec!["B ⊑ C"]);
    }

    #[test]
    fn role_forgetting() {
        let r = Symbol::Role("r".into());
        assert_eq!(printed(&forget(&onto("sub(A, some(r, top))\nsub(some(r, top), B)"), r.clone())), vec!["A ⊑ B"]);
        assert!(forget(&onto("sub(A, some(r, B))"), r.clone()).is_empty());
        let o = onto("sub(A, some(r, B))\nsub(A, only(r, C))\nsubrole(r, s)");
        let out = forget(&o, r);
        assert!(is_entailed(&out, &parse_axiom("sub(A, some(s, and(B, C)))").unwrap()).unwrap());
    }

    #[test]
    fn case_split_signature() {
        let o = onto("sub(A, only(r, C1))\nsub(C1, or(C3, C2))\nsub(C2, C3)\nsub(only(r, C3), B)");
        let keep = Signature::with_concepts(["A", "B"]);
        let r = forget_signature(&o, &keep, &default_order(&o.signature()), &ForgetOptions::default()).unwrap();
        assert!(r.failed.is_empty());
        assert_eq!(printed(&r.result), vec!["A ⊑ B"]);
    }

    #[test]
    fn cyclic_definer_fails() {
        let o = onto("sub(A, some(r, A))\nsub(B, A)");
        let keep = Signature::with_concepts(["B"]);
        let r = forget_signature(&o, &keep, &default_order(&o.signature()), &ForgetOptions::default()).unwrap();
        assert!(r.failed.contains(&concept("A")));
        assert!(entails_all(&o, &r.result.iter().cloned().collect::<Vec<_>>()).unwrap());
    }

    #[test]
    fn keep_everything() {
        let o = onto("sub(A, B)");
        let opts = ForgetOptions { logging: true, ..Default::default() };
        let r = forget_signature(&o, &o.signature(), &default_order(&o.signature()), &opts).unwrap();
        assert_eq!(r.result, o);
        assert!(r.failed.is_empty());
    }

    #[test]
    fn logged_case_split() {
        let o = onto("sub(A, only(r, C1))\nsub(C1, or(C3, C2))\nsub(C2, C3)\nsub(only(r, C3), B)");
        let keep = Signature::with_concepts(["A", "B"]);
        let opts = ForgetOptions { logging: true, ..Default::default() };
        let r = forget_signature(&o, &keep, &default_order(&o.signature()), &opts).unwrap();
        let cs = r.log.unwrap();
        let rendered: Vec<String> = cs.alive_ids().iter().filter_map(|&i| cs.render(i)).map(|a| a.to_unicode()).collect();
        assert!(rendered.contains(&"A ⊑ B".to_string()), "{rendered:?}");
        let log = cs.log.as_ref().unwrap();
        for (i, e) in log.iter().enumerate() {
            assert!(e.premises.iter().all(|p| match p {
                LogPremise::Clause(c) => *c < e.conclusion,
                LogPremise::Axiom(_) => true,
            }));
            assert!(i == 0 || log[i - 1].conclusion < e.conclusion);
        }
        assert!(log.iter().any(|e| e.rule == Rule::ExistsForallCombine));
        assert!(log.iter().any(|e| e.rule == Rule::ExistsElim));
    }

    #[test]
    fn cache_hits() {
        let cache = Arc::new(ForgetCache::new());
        let opts = ForgetOptions { cache: Some(cache.clone()), ..Default::default() };
        let o = onto("sub(B, A)\nsub(A, C)");
        let a = forget_name(&o, &concept("A"), &opts).unwrap();
        let b = forget_name(&o, &concept("A"), &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
