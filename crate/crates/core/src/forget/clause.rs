use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::dl::{Axiom, Concept, Role, DEFINER_PREFIX};
use crate::error::{Error, Result};

pub type DefinerId = u32;

/// A clause literal. Role fillers are always definers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Neg(String),
    Pos(String),
    Exists(Role, DefinerId),
    Forall(Role, DefinerId),
}

impl Literal {
    pub fn role(&self) -> Option<&Role> {
        match self {
            Literal::Exists(r, _) | Literal::Forall(r, _) => Some(r),
            _ => None,
        }
    }

    pub fn filler(&self) -> Option<DefinerId> {
        match self {
            Literal::Exists(_, d) | Literal::Forall(_, d) => Some(*d),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Clause of the normalized input axiom with this index.
    Input(usize),
    /// Defining clause of a definer.
    Definer(DefinerId),
    /// Conclusion of the log entry with this index (or an unlogged inference).
    Inference(Option<usize>),
}

/// `⊤ ⊑ ¬D ⊔ L₁ ⊔ … ⊔ Lₙ`, where `D` is the optional key definer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub key: Option<DefinerId>,
    pub literals: BTreeSet<Literal>,
    pub origin: Origin,
}

impl Clause {
    pub fn is_tautology(key: Option<DefinerId>, lits: &BTreeSet<Literal>) -> bool {
        let _ = key;
        lits.iter().any(|l| matches!(l, Literal::Pos(a) if lits.contains(&Literal::Neg(a.clone()))))
    }

    pub fn mentions_concept(&self, name: &str) -> bool {
        self.literals.contains(&Literal::Pos(name.to_string())) || self.literals.contains(&Literal::Neg(name.to_string()))
    }

    pub fn mentions_role(&self, role: &str) -> bool {
        self.literals.iter().any(|l| l.role().is_some_and(|r| r.as_str() == role))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definer {
    pub id: DefinerId,
    pub name: String,
    /// Base definers this one is the conjunction of (itself, for a base definer).
    pub members: BTreeSet<DefinerId>,
    pub represents: Concept,
}

#[derive(Clone, Debug, Default)]
pub struct Definers {
    list: Vec<Definer>,
    by_members: HashMap<BTreeSet<DefinerId>, DefinerId>,
    by_filler: HashMap<Concept, DefinerId>,
    cap: usize,
}

impl Definers {
    pub fn new(cap: usize) -> Self {
        Definers { cap, ..Default::default() }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, id: DefinerId) -> &Definer {
        &self.list[id as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Definer> {
        self.list.iter()
    }

    pub fn by_name(&self, name: &str) -> Option<&Definer> {
        let n: usize = name.strip_prefix(DEFINER_PREFIX)?.parse().ok()?;
        self.list.get(n.checked_sub(1)?)
    }

    fn push(&mut self, members: Option<BTreeSet<DefinerId>>, represents: Concept) -> Result<DefinerId> {
        if self.list.len() >= self.cap {
            return Err(Error::BudgetExceeded(format!("more than {} definers", self.cap)));
        }
        let id = self.list.len() as DefinerId;
        let members = members.unwrap_or_else(|| BTreeSet::from([id]));
        self.by_members.insert(members.clone(), id);
        self.list.push(Definer { id, name: format!("{DEFINER_PREFIX}{}", id + 1), members, represents });
        Ok(id)
    }

    /// The base definer for `filler`, and whether it was just created.
    pub fn for_filler(&mut self, filler: &Concept) -> Result<(DefinerId, bool)> {
        if let Some(&d) = self.by_filler.get(filler) {
            return Ok((d, false));
        }
        let d = self.push(None, filler.clone())?;
        self.by_filler.insert(filler.clone(), d);
        Ok((d, true))
    }

    /// The definer standing for `a ⊓ b`, created on demand.
    pub fn combine(&mut self, a: DefinerId, b: DefinerId) -> Result<DefinerId> {
        let members: BTreeSet<DefinerId> = self.get(a).members.union(&self.get(b).members).copied().collect();
        if let Some(&d) = self.by_members.get(&members) {
            return Ok(d);
        }
        let represents = Concept::and(members.iter().map(|m| self.get(*m).represents.clone()));
        self.push(Some(members), represents)
    }

    pub fn members(&self, key: Option<DefinerId>) -> BTreeSet<DefinerId> {
        key.map(|k| self.get(k).members.clone()).unwrap_or_default()
    }

    /// Key of a conclusion drawn from clauses with keys `a` and `b`, if such a definer exists.
    pub fn union_key(&self, a: Option<DefinerId>, b: Option<DefinerId>) -> Option<Option<DefinerId>> {
        match (a, b) {
            (None, k) | (k, None) => Some(k),
            (Some(x), Some(y)) if x == y => Some(Some(x)),
            (Some(x), Some(y)) => {
                let m: BTreeSet<DefinerId> = self.get(x).members.union(&self.get(y).members).copied().collect();
                self.by_members.get(&m).map(|&d| Some(d))
            }
        }
    }

    /// Clauses keyed by `k` constrain every definer whose members include those of `k`.
    pub fn key_applies(&self, k: Option<DefinerId>, to: DefinerId) -> bool {
        match k {
            None => true,
            Some(k) => k == to || self.get(k).members.is_subset(&self.get(to).members),
        }
    }

    pub fn is_combined(&self, d: DefinerId) -> bool {
        self.get(d).members.len() > 1
    }
}

/// Renders a clause as a concept, with definers kept as opaque names.
pub fn clause_concept(defs: &Definers, key: Option<DefinerId>, lits: &BTreeSet<Literal>) -> Concept {
    let mut parts = Vec::with_capacity(lits.len() + 1);
    if let Some(k) = key {
        parts.push(Concept::not(Concept::name(defs.get(k).name.as_str())));
    }
    for l in lits {
        parts.push(match l {
            Literal::Pos(a) => Concept::name(a.as_str()),
            Literal::Neg(a) => Concept::not(Concept::name(a.as_str())),
            Literal::Exists(r, d) => Concept::exists(r.clone(), Concept::name(defs.get(*d).name.as_str())),
            Literal::Forall(r, d) => Concept::forall(r.clone(), Concept::name(defs.get(*d).name.as_str())),
        });
    }
    Concept::or(parts)
}

/// `⊤ ⊑ clause`, definers opaque.
pub fn clause_axiom(defs: &Definers, c: &Clause) -> Axiom {
    Axiom::Gci(Concept::Top, clause_concept(defs, c.key, &c.literals))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Resolution,
    ExistsRoleHier,
    ForallRoleHier,
    ExistsForallCombine,
    ForallForallCombine,
    ExistsElim,
    DefinerIntro,
    Normalize,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Resolution => "Resolution",
            Rule::ExistsRoleHier => "ExistsRoleHier",
            Rule::ForallRoleHier => "ForallRoleHier",
            Rule::ExistsForallCombine => "ExistsForallCombine",
            Rule::ForallForallCombine => "ForallForallCombine",
            Rule::ExistsElim => "ExistsElim",
            Rule::DefinerIntro => "DefinerIntro",
            Rule::Normalize => "Normalize",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogPremise {
    Clause(usize),
    Axiom(Axiom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub rule: Rule,
    pub premises: Vec<LogPremise>,
    pub conclusion: usize,
    pub side_condition: Option<String>,
}
