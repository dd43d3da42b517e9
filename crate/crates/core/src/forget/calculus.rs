use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use super::beautify::beautify;
use super::clause::*;
use crate::cancel::CancelToken;
use crate::dl::{Axiom, Concept, Ontology, Role, RoleHierarchy};
use crate::error::{Error, Result};
use crate::justify::compute_justification;
use crate::tableau::Reasoner;

pub const DEFINER_CAP: usize = 1024;
const PARTNER_CAP: usize = 12;

#[derive(Clone, Debug)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub max_clauses: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { deadline: None, max_clauses: 20_000, cancel: None }
    }
}

type Tried = (Rule, usize, Option<Literal>, usize, Option<Literal>);
type Entry = (Rule, Vec<LogPremise>, Option<String>);

/// A normalized clause set under saturation.
#[derive(Clone, Debug)]
pub struct ClauseSet {
    clauses: Vec<Clause>,
    alive: Vec<bool>,
    index: HashMap<(Option<DefinerId>, BTreeSet<Literal>), usize>,
    pub definers: Definers,
    /// Role inclusions currently in force.
    pub roles: Vec<Axiom>,
    pub log: Option<Vec<LogEntry>>,
    limits: Limits,
    tried: HashSet<Tried>,
}

impl ClauseSet {
    /// Clausifies `o`, introducing one definer per role filler.
    ///
    /// With `logging`, every clause gets a log entry.
    pub fn normalize(o: &Ontology, logging: bool, limits: Limits) -> Result<ClauseSet> {
        let mut cs = ClauseSet {
            clauses: Vec::new(),
            alive: Vec::new(),
            index: HashMap::new(),
            definers: Definers::new(DEFINER_CAP),
            roles: Vec::new(),
            log: logging.then(Vec::new),
            limits,
            tried: HashSet::new(),
        };
        for (i, a) in o.iter().enumerate() {
            if let Axiom::RoleInclusion(..) = a {
                if !cs.roles.contains(a) {
                    cs.roles.push(a.clone());
                }
                continue;
            }
            for (l, r) in a.gcis() {
                let e = Concept::or([l.negated_nnf(), r.nnf()]);
                for lits in cs.clausify(&e, a)? {
                    cs.add(None, lits, Origin::Input(i), Some((Rule::Normalize, vec![LogPremise::Axiom(a.clone())], None)))?;
                }
            }
        }
        Ok(cs)
    }

    fn clausify(&mut self, e: &Concept, source: &Axiom) -> Result<Vec<BTreeSet<Literal>>> {
        Ok(match e {
            Concept::Top => Vec::new(),
            Concept::Bottom => vec![BTreeSet::new()],
            Concept::Name(a) => vec![BTreeSet::from([Literal::Pos(a.clone())])],
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Name(a) => vec![BTreeSet::from([Literal::Neg(a.clone())])],
                other => self.clausify(&other.negated_nnf(), source)?,
            },
            Concept::And(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    out.extend(self.clausify(c, source)?);
                }
                out
            }
            Concept::Or(cs) => {
                let mut acc = vec![BTreeSet::new()];
                for c in cs {
                    let part = self.clausify(c, source)?;
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &part {
                            let u: BTreeSet<Literal> = a.union(b).cloned().collect();
                            if !Clause::is_tautology(None, &u) {
                                next.push(u);
                            }
                        }
                    }
                    if next.len() > self.limits.max_clauses {
                        return Err(Error::BudgetExceeded("clause normal form too large".into()));
                    }
                    acc = next;
                }
                acc
            }
            Concept::Exists(r, f) => vec![BTreeSet::from([Literal::Exists(r.clone(), self.definer(f, source)?)])],
            Concept::Forall(r, f) => vec![BTreeSet::from([Literal::Forall(r.clone(), self.definer(f, source)?)])],
        })
    }

    fn definer(&mut self, filler: &Concept, source: &Axiom) -> Result<DefinerId> {
        let f = filler.nnf();
        let (d, fresh) = self.definers.for_filler(&f)?;
        if fresh {
            for lits in self.clausify(&f, source)? {
                let entry = (Rule::DefinerIntro, vec![LogPremise::Axiom(source.clone())], None);
                self.add(Some(d), lits, Origin::Definer(d), Some(entry))?;
            }
        }
        Ok(d)
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.limits.deadline = deadline;
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, id: usize) -> &Clause {
        &self.clauses[id]
    }

    pub fn is_alive(&self, id: usize) -> bool {
        self.alive[id]
    }

    pub fn alive_ids(&self) -> Vec<usize> {
        (0..self.clauses.len()).filter(|&i| self.alive[i]).collect()
    }

    /// Clauses with key `small` constrain everything clauses with key `big` do.
    fn key_subsumes(&self, small: Option<DefinerId>, big: Option<DefinerId>) -> bool {
        match (small, big) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a == b || self.definers.get(a).members.is_subset(&self.definers.get(b).members),
        }
    }

    fn check(&self) -> Result<()> {
        if self.limits.cancel.as_ref().is_some_and(CancelToken::is_cancelled) {
            return Err(Error::cancelled(None));
        }
        if self.limits.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::BudgetExceeded("time budget exhausted".into()));
        }
        Ok(())
    }

    fn add(&mut self, key: Option<DefinerId>, lits: BTreeSet<Literal>, origin: Origin, entry: Option<Entry>) -> Result<Option<usize>> {
        if Clause::is_tautology(key, &lits) || self.index.contains_key(&(key, lits.clone())) {
            return Ok(None);
        }
        {
            let subsumed = (0..self.clauses.len()).any(|i| {
                self.alive[i] && self.key_subsumes(self.clauses[i].key, key) && self.clauses[i].literals.is_subset(&lits)
            });
            if subsumed {
                return Ok(None);
            }
            for i in 0..self.clauses.len() {
                if self.alive[i] && self.key_subsumes(key, self.clauses[i].key) && lits.is_subset(&self.clauses[i].literals) {
                    self.alive[i] = false;
                }
            }
        }
        if self.clauses.len() >= self.limits.max_clauses {
            return Err(Error::BudgetExceeded(format!("more than {} clauses", self.limits.max_clauses)));
        }
        let id = self.clauses.len();
        let mut origin = origin;
        if let (Some(log), Some((rule, premises, side_condition))) = (self.log.as_mut(), entry) {
            if let Origin::Inference(_) = origin {
                origin = Origin::Inference(Some(log.len()));
            }
            log.push(LogEntry { rule, premises, conclusion: id, side_condition });
        }
        self.index.insert((key, lits.clone()), id);
        self.clauses.push(Clause { key, literals: lits, origin });
        self.alive.push(true);
        Ok(Some(id))
    }

    fn infer(&mut self, key: Option<DefinerId>, lits: BTreeSet<Literal>, entry: Entry) -> Result<bool> {
        Ok(self.add(key, lits, Origin::Inference(None), Some(entry))?.is_some())
    }

    fn without(&self, id: usize, lit: &Literal) -> BTreeSet<Literal> {
        let mut s = self.clauses[id].literals.clone();
        s.remove(lit);
        s
    }

    fn hierarchy(&self) -> RoleHierarchy {
        RoleHierarchy::from_axioms(&self.roles)
    }

    fn role_literals(&self) -> Vec<(usize, Literal)> {
        let mut out = Vec::new();
        for id in self.alive_ids() {
            for l in &self.clauses[id].literals {
                if l.role().is_some() {
                    out.push((id, l.clone()));
                }
            }
        }
        out
    }

    /// An alive empty clause whose key applies to `members`.
    fn empty_witness(&self, members: &BTreeSet<DefinerId>) -> Option<usize> {
        self.alive_ids().into_iter().find(|&i| {
            let c = &self.clauses[i];
            c.literals.is_empty() && c.key.is_none_or(|k| self.definers.get(k).members.is_subset(members))
        })
    }

    /// Per definer, whether `x` is reachable positively and negatively.
    fn reach(&self, x: &str) -> Vec<(bool, bool)> {
        let n = self.definers.len();
        let mut reach = vec![(false, false); n];
        let mut edges: Vec<Vec<DefinerId>> = vec![Vec::new(); n];
        let pos = Literal::Pos(x.to_string());
        let neg = Literal::Neg(x.to_string());
        for d in 0..n as DefinerId {
            for id in self.alive_ids() {
                let c = &self.clauses[id];
                if c.key.is_none() || !self.key_subsumes(c.key, Some(d)) {
                    continue;
                }
                let r = &mut reach[d as usize];
                r.0 |= c.literals.contains(&pos);
                r.1 |= c.literals.contains(&neg);
                edges[d as usize].extend(c.literals.iter().filter_map(Literal::filler));
            }
        }
        loop {
            let mut changed = false;
            for d in 0..n {
                for &f in &edges[d] {
                    let (p, q) = reach[f as usize];
                    let r = reach[d];
                    let next = (r.0 | p, r.1 | q);
                    if next != r {
                        reach[d] = next;
                        changed = true;
                    }
                }
            }
            if !changed {
                return reach;
            }
        }
    }

    fn chain_premises(h: &RoleHierarchy, r: &str, s: &str) -> Vec<LogPremise> {
        h.chain(r, s).unwrap_or_default().into_iter().map(LogPremise::Axiom).collect()
    }

    /// Applies the rules on concept name `x` until nothing new is derived.
    pub fn saturate_concept(&mut self, x: &str) -> Result<()> {
        let pos_lit = Literal::Pos(x.to_string());
        let neg_lit = Literal::Neg(x.to_string());
        loop {
            self.check()?;
            let mut new = false;
            let ids = self.alive_ids();
            let pos: Vec<usize> = ids.iter().copied().filter(|&i| self.clauses[i].literals.contains(&pos_lit)).collect();
            let neg: Vec<usize> = ids.iter().copied().filter(|&i| self.clauses[i].literals.contains(&neg_lit)).collect();
            for &p in &pos {
                for &n in &neg {
                    if !self.alive[p] || !self.alive[n] {
                        continue;
                    }
                    let Some(key) = self.definers.union_key(self.clauses[p].key, self.clauses[n].key) else { continue };
                    if !self.tried.insert((Rule::Resolution, p, None, n, None)) {
                        continue;
                    }
                    let lits: BTreeSet<Literal> = self.without(p, &pos_lit).union(&self.without(n, &neg_lit)).cloned().collect();
                    let side = Some(format!("resolution on {x}"));
                    new |= self.infer(key, lits, (Rule::Resolution, vec![LogPremise::Clause(p), LogPremise::Clause(n)], side))?;
                }
            }

            let reach = self.reach(x);
            let opposite = |a: DefinerId, b: DefinerId| {
                let (ra, rb) = (reach[a as usize], reach[b as usize]);
                (ra.0 && rb.1) || (ra.1 && rb.0)
            };
            let h = self.hierarchy();
            let lits = self.role_literals();
            let exists: Vec<&(usize, Literal)> = lits.iter().filter(|(_, l)| matches!(l, Literal::Exists(..))).collect();
            let foralls: Vec<&(usize, Literal)> = lits.iter().filter(|(_, l)| matches!(l, Literal::Forall(..))).collect();

            for (c1, e) in &exists {
                let Literal::Exists(r, d1) = e else { unreachable!() };
                for (c2, f) in &foralls {
                    let Literal::Forall(s, d2) = f else { unreachable!() };
                    if c1 == c2 || !h.subsumes(r.as_str(), s.as_str()) || !opposite(*d1, *d2) {
                        continue;
                    }
                    if !self.alive[*c1] || !self.alive[*c2] {
                        continue;
                    }
                    let Some(key) = self.definers.union_key(self.clauses[*c1].key, self.clauses[*c2].key) else { continue };
                    if !self.tried.insert((Rule::ExistsForallCombine, *c1, Some(e.clone()), *c2, Some(f.clone()))) {
                        continue;
                    }
                    let d = self.definers.combine(*d1, *d2)?;
                    let mut out: BTreeSet<Literal> = self.without(*c1, e).union(&self.without(*c2, f)).cloned().collect();
                    out.insert(Literal::Exists(r.clone(), d));
                    let mut premises = vec![LogPremise::Clause(*c1), LogPremise::Clause(*c2)];
                    premises.extend(Self::chain_premises(&h, r.as_str(), s.as_str()));
                    new |= self.infer(key, out, (Rule::ExistsForallCombine, premises, Some(format!("{r} ⊑ {s}"))))?;
                }
            }

            let role_names: BTreeSet<String> = self
                .roles
                .iter()
                .flat_map(|a| match a {
                    Axiom::RoleInclusion(r, s) => vec![r.0.clone(), s.0.clone()],
                    _ => Vec::new(),
                })
                .chain(lits.iter().filter_map(|(_, l)| l.role().map(|r| r.0.clone())))
                .collect();
            for (i, (c1, f1)) in foralls.iter().enumerate() {
                let Literal::Forall(r1, d1) = f1 else { unreachable!() };
                for (c2, f2) in &foralls[i + 1..] {
                    let Literal::Forall(r2, d2) = f2 else { unreachable!() };
                    if c1 == c2 || !opposite(*d1, *d2) || !self.alive[*c1] || !self.alive[*c2] {
                        continue;
                    }
                    let Some(key) = self.definers.union_key(self.clauses[*c1].key, self.clauses[*c2].key) else { continue };
                    let common: Vec<&String> = role_names
                        .iter()
                        .filter(|s| h.subsumes(s, r1.as_str()) && h.subsumes(s, r2.as_str()))
                        .collect();
                    let maximal: Vec<&String> = common
                        .iter()
                        .copied()
                        .filter(|s| !common.iter().any(|t| h.subsumes(s, t) && !h.subsumes(t, s)))
                        .collect();
                    if maximal.is_empty() || !self.tried.insert((Rule::ForallForallCombine, *c1, Some(f1.clone()), *c2, Some(f2.clone()))) {
                        continue;
                    }
                    let d = self.definers.combine(*d1, *d2)?;
                    for s in maximal {
                        let mut out: BTreeSet<Literal> = self.without(*c1, f1).union(&self.without(*c2, f2)).cloned().collect();
                        out.insert(Literal::Forall(Role::new(s.as_str()), d));
                        let mut premises = vec![LogPremise::Clause(*c1), LogPremise::Clause(*c2)];
                        premises.extend(Self::chain_premises(&h, s, r1.as_str()));
                        premises.extend(Self::chain_premises(&h, s, r2.as_str()));
                        new |= self.infer(key, out, (Rule::ForallForallCombine, premises, None))?;
                    }
                }
            }

            for (c, e) in self.role_literals() {
                let Literal::Exists(_, d) = &e else { continue };
                if !self.alive[c] {
                    continue;
                }
                let members = self.definers.get(*d).members.clone();
                let Some(w) = self.empty_witness(&members) else { continue };
                if !self.tried.insert((Rule::ExistsElim, c, Some(e.clone()), 0, None)) {
                    continue;
                }
                let side = Some(format!("{} ⊑ ⊥", self.definers.get(*d).name));
                let out = self.without(c, &e);
                new |= self.infer(self.clauses[c].key, out, (Rule::ExistsElim, vec![LogPremise::Clause(c), LogPremise::Clause(w)], side))?;
            }

            if !new {
                return Ok(());
            }
        }
    }

    /// Saturates on `x`, then drops every clause mentioning it.
    pub fn forget_concept(&mut self, x: &str) -> Result<()> {
        self.saturate_concept(x)?;
        for i in 0..self.clauses.len() {
            if self.clauses[i].mentions_concept(x) {
                self.alive[i] = false;
            }
        }
        Ok(())
    }

    pub fn forget_role(&mut self, r: &str) -> Result<()> {
        let h = self.hierarchy();
        let ups: Vec<String> = h.supers(r).filter(|s| s.as_str() != r).cloned().collect();
        let downs: Vec<String> = h.subs(r).filter(|s| s.as_str() != r).cloned().collect();
        let strictly_below = |a: &str, b: &str| h.subsumes(a, b) && !h.subsumes(b, a);
        let ups_min: Vec<&String> = ups.iter().filter(|u| !ups.iter().any(|v| strictly_below(v, u))).collect();
        let downs_max: Vec<&String> = downs.iter().filter(|u| !downs.iter().any(|v| strictly_below(u, v))).collect();
        let is_partner = |q: &Role| q.as_str() == r || ups.iter().any(|u| u == q.as_str());

        loop {
            self.check()?;
            let mut new = false;
            let lits = self.role_literals();
            let exists: Vec<(usize, Literal, DefinerId)> = lits
                .iter()
                .filter_map(|(c, l)| match l {
                    Literal::Exists(q, d) if q.as_str() == r => Some((*c, l.clone(), *d)),
                    _ => None,
                })
                .collect();
            let partners: Vec<(usize, Literal, Role, DefinerId)> = lits
                .iter()
                .filter_map(|(c, l)| match l {
                    Literal::Forall(q, d) if is_partner(q) => Some((*c, l.clone(), q.clone(), *d)),
                    _ => None,
                })
                .collect();

            if !ups.is_empty() {
                for (c1, e, d1) in &exists {
                    for (c2, f, q, d2) in &partners {
                        if c1 == c2 || !self.alive[*c1] || !self.alive[*c2] {
                            continue;
                        }
                        let Some(key) = self.definers.union_key(self.clauses[*c1].key, self.clauses[*c2].key) else { continue };
                        if !self.tried.insert((Rule::ExistsForallCombine, *c1, Some(e.clone()), *c2, Some(f.clone()))) {
                            continue;
                        }
                        let d = self.definers.combine(*d1, *d2)?;
                        let mut out: BTreeSet<Literal> = self.without(*c1, e).union(&self.without(*c2, f)).cloned().collect();
                        out.insert(Literal::Exists(Role::new(r), d));
                        let mut premises = vec![LogPremise::Clause(*c1), LogPremise::Clause(*c2)];
                        premises.extend(Self::chain_premises(&h, r, q.as_str()));
                        new |= self.infer(key, out, (Rule::ExistsForallCombine, premises, None))?;
                    }
                }
            }

            for (c, e, d) in &exists {
                for (si, s) in ups_min.iter().enumerate() {
                    if !self.alive[*c] || !self.tried.insert((Rule::ExistsRoleHier, *c, Some(e.clone()), si, None)) {
                        continue;
                    }
                    let mut out = self.without(*c, e);
                    out.insert(Literal::Exists(Role::new(s.as_str()), *d));
                    let mut premises = vec![LogPremise::Clause(*c)];
                    premises.extend(Self::chain_premises(&h, r, s));
                    new |= self.infer(self.clauses[*c].key, out, (Rule::ExistsRoleHier, premises, Some(format!("{r} ⊑ {s}"))))?;
                }
            }
            for (c, f, q, d) in &partners {
                if q.as_str() != r {
                    continue;
                }
                for (si, s) in downs_max.iter().enumerate() {
                    if !self.alive[*c] || !self.tried.insert((Rule::ForallRoleHier, *c, Some(f.clone()), si, None)) {
                        continue;
                    }
                    let mut out = self.without(*c, f);
                    out.insert(Literal::Forall(Role::new(s.as_str()), *d));
                    let mut premises = vec![LogPremise::Clause(*c)];
                    premises.extend(Self::chain_premises(&h, s, r));
                    new |= self.infer(self.clauses[*c].key, out, (Rule::ForallRoleHier, premises, Some(format!("{s} ⊑ {r}"))))?;
                }
            }

            for (c1, e, d1) in &exists {
                let ps: Vec<&(usize, Literal, Role, DefinerId)> = partners.iter().filter(|p| p.0 != *c1 && self.alive[p.0]).collect();
                if !self.alive[*c1] || !self.tried.insert((Rule::ExistsElim, *c1, Some(e.clone()), ps.len(), None)) {
                    continue;
                }
                for (subset, witness) in self.unsat_subsets(*d1, &ps.iter().map(|p| p.3).collect::<Vec<_>>())? {
                    let mut key = Some(self.clauses[*c1].key);
                    let mut out = self.without(*c1, e);
                    let mut premises = vec![LogPremise::Clause(*c1)];
                    for &i in &subset {
                        let (c2, f, q, _) = ps[i];
                        key = key.and_then(|k| self.definers.union_key(k, self.clauses[*c2].key));
                        out.extend(self.without(*c2, f));
                        premises.push(LogPremise::Clause(*c2));
                        premises.extend(Self::chain_premises(&h, r, q.as_str()));
                    }
                    let Some(key) = key else { continue };
                    premises.extend(witness);
                    new |= self.infer(key, out, (Rule::ExistsElim, premises, None))?;
                }
            }

            if !new {
                break;
            }
        }

        for i in 0..self.clauses.len() {
            if self.clauses[i].mentions_role(r) {
                self.alive[i] = false;
            }
        }
        let mut folded = Vec::new();
        for a in &self.roles {
            if let Axiom::RoleInclusion(q, x) = a {
                if x.as_str() != r {
                    continue;
                }
                for b in &self.roles {
                    if let Axiom::RoleInclusion(y, s) = b {
                        if y.as_str() == r && q.as_str() != r && s.as_str() != r && q != s {
                            folded.push(Axiom::RoleInclusion(q.clone(), s.clone()));
                        }
                    }
                }
            }
        }
        self.roles.retain(|a| !a.signature().roles.contains(r));
        for a in folded {
            if !self.roles.contains(&a) {
                self.roles.push(a);
            }
        }
        Ok(())
    }

    /// Subset-minimal sets of partner fillers whose conjunction with `d1` is unsatisfiable,
    /// each with the clauses witnessing it.
    fn unsat_subsets(&mut self, d1: DefinerId, partners: &[DefinerId]) -> Result<Vec<(Vec<usize>, Vec<LogPremise>)>> {
        if partners.len() > PARTNER_CAP {
            return Err(Error::BudgetExceeded(format!("more than {PARTNER_CAP} universal partners")));
        }
        let mut masks: Vec<u32> = (0..1u32 << partners.len()).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut found: Vec<(u32, Vec<LogPremise>)> = Vec::new();
        let mut semantic: Option<(Ontology, HashMap<Axiom, usize>)> = None;
        let mut full_unsat: Option<bool> = None;
        for m in masks {
            if found.iter().any(|(f, _)| f & m == *f) {
                continue;
            }
            let ds: Vec<DefinerId> =
                std::iter::once(d1).chain((0..partners.len()).filter(|i| m & (1 << i) != 0).map(|i| partners[i])).collect();
            let members: BTreeSet<DefinerId> = ds.iter().flat_map(|d| self.definers.get(*d).members.iter().copied()).collect();
            if let Some(w) = self.empty_witness(&members) {
                found.push((m, vec![LogPremise::Clause(w)]));
                continue;
            }
            if semantic.is_none() {
                semantic = Some(self.clause_ontology());
            }
            let (onto, back) = semantic.as_ref().unwrap();
            let conj = Concept::and(ds.iter().map(|d| Concept::name(self.definers.get(*d).name.as_str())));
            if full_unsat.is_none() {
                let all = Concept::and(
                    std::iter::once(d1).chain(partners.iter().copied()).map(|d| Concept::name(self.definers.get(d).name.as_str())),
                );
                full_unsat = Some(!Reasoner::new(onto).is_satisfiable(&all)?);
            }
            if full_unsat == Some(false) {
                break;
            }
            self.check()?;
            if Reasoner::new(onto).is_satisfiable(&conj)? {
                continue;
            }
            let mut witness = Vec::new();
            if self.log.is_some() {
                let j = compute_justification(onto, &Axiom::Gci(conj, Concept::Bottom))?;
                for a in j.axioms.iter() {
                    match back.get(a) {
                        Some(&id) => witness.push(LogPremise::Clause(id)),
                        None if matches!(a, Axiom::RoleInclusion(..)) => witness.push(LogPremise::Axiom(a.clone())),
                        None => {}
                    }
                }
            }
            found.push((m, witness));
        }
        Ok(found
            .into_iter()
            .map(|(m, w)| ((0..partners.len()).filter(|i| m & (1 << i) != 0).collect(), w))
            .collect())
    }

    /// Alive clauses as GCIs over definer names, plus the role inclusions and
    /// the definitions of combined definers.
    fn clause_ontology(&self) -> (Ontology, HashMap<Axiom, usize>) {
        let mut o = Ontology::new();
        let mut back = HashMap::new();
        for id in self.alive_ids() {
            let a = clause_axiom(&self.definers, &self.clauses[id]);
            back.insert(a.clone(), id);
            o.insert(a);
        }
        for r in &self.roles {
            o.insert(r.clone());
        }
        for d in self.definers.iter().filter(|d| d.members.len() > 1) {
            let parts = d.members.iter().map(|m| Concept::name(self.definers.get(*m).name.as_str()));
            o.insert(Axiom::Equiv(Concept::name(d.name.as_str()), Concept::and(parts)));
        }
        (o, back)
    }

    /// Eliminates definers by substituting the conjunction of their bodies.
    pub fn denormalize(&self) -> Result<Vec<Axiom>> {
        self.denormalize_except(|_| false)
    }

    /// As [`ClauseSet::denormalize`], leaving out the global clauses selected by `skip`.
    pub fn denormalize_except(&self, skip: impl Fn(&Clause) -> bool) -> Result<Vec<Axiom>> {
        let mut memo: HashMap<DefinerId, Concept> = HashMap::new();
        let mut out: Vec<Axiom> = Vec::new();
        for id in self.alive_ids() {
            let c = &self.clauses[id];
            if c.key.is_some() || skip(c) {
                continue;
            }
            let mut stack = Vec::new();
            let concept = self.lits_concept(&c.literals, &mut memo, &mut stack)?;
            if let Some(a) = beautify(&Axiom::Gci(Concept::Top, concept)) {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        Ok(out)
    }

    fn lits_concept(&self, lits: &BTreeSet<Literal>, memo: &mut HashMap<DefinerId, Concept>, stack: &mut Vec<DefinerId>) -> Result<Concept> {
        let mut parts = Vec::new();
        for l in lits {
            parts.push(match l {
                Literal::Pos(a) => Concept::name(a.as_str()),
                Literal::Neg(a) => Concept::not(Concept::name(a.as_str())),
                Literal::Exists(r, d) => Concept::exists(r.clone(), self.definer_concept(*d, memo, stack)?),
                Literal::Forall(r, d) => Concept::forall(r.clone(), self.definer_concept(*d, memo, stack)?),
            });
        }
        Ok(Concept::or(parts))
    }

    fn definer_concept(&self, d: DefinerId, memo: &mut HashMap<DefinerId, Concept>, stack: &mut Vec<DefinerId>) -> Result<Concept> {
        if let Some(c) = memo.get(&d) {
            return Ok(c.clone());
        }
        if let Some(pos) = stack.iter().position(|x| *x == d) {
            return Err(Error::CyclicDefiner(stack[pos..].iter().map(|x| self.definers.get(*x).name.clone()).collect()));
        }
        stack.push(d);
        let mut bodies = Vec::new();
        for id in self.alive_ids() {
            let c = &self.clauses[id];
            if c.key.is_some() && self.key_subsumes(c.key, Some(d)) {
                bodies.push(self.lits_concept(&c.literals, memo, stack)?);
            }
        }
        stack.pop();
        let c = Concept::and(bodies);
        memo.insert(d, c.clone());
        Ok(c)
    }

    /// Beautified clause with definers replaced by the fillers they stand for.
    /// `None` for clauses that read as tautologies.
    pub fn render(&self, id: usize) -> Option<Axiom> {
        let a = beautify(&clause_axiom(&self.definers, &self.clauses[id]))?;
        let defs = &self.definers;
        Some(a.substitute(&|n: &str| defs.by_name(n).map(|d| d.represents.clone())))
    }
}
