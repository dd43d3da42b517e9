use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A role (binary relation) name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Role(pub String);

impl Role {
    pub fn new(name: impl Into<String>) -> Self {
        Role(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Role {
    fn from(s: &str) -> Self {
        Role(s.to_string())
    }
}

/// An ALC concept expression.
///
/// Build compound concepts through [`Concept::and`] and [`Concept::or`]: they
/// flatten nested operands, drop duplicates and sort the operands by their
/// ascii rendering, so that structural equality ignores operand order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Concept {
    Top,
    Bottom,
    Name(String),
    Not(Box<Concept>),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    Exists(Role, Box<Concept>),
    Forall(Role, Box<Concept>),
}

impl Concept {
    pub fn name(n: impl Into<String>) -> Self {
        Concept::Name(n.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn exists(r: impl Into<Role>, c: Concept) -> Self {
        Concept::Exists(r.into(), Box::new(c))
    }

    pub fn forall(r: impl Into<Role>, c: Concept) -> Self {
        Concept::Forall(r.into(), Box::new(c))
    }

    /// Canonical conjunction. Zero operands give `⊤`, one operand is returned as is.
    pub fn and(operands: impl IntoIterator<Item = Concept>) -> Self {
        let mut flat = Vec::new();
        for c in operands {
            match c {
                Concept::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match canonical_operands(flat) {
            mut v if v.len() == 1 => v.pop().unwrap(),
            v if v.is_empty() => Concept::Top,
            v => Concept::And(v),
        }
    }

    /// Canonical disjunction. Zero operands give `⊥`, one operand is returned as is.
    pub fn or(operands: impl IntoIterator<Item = Concept>) -> Self {
        let mut flat = Vec::new();
        for c in operands {
            match c {
                Concept::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match canonical_operands(flat) {
            mut v if v.len() == 1 => v.pop().unwrap(),
            v if v.is_empty() => Concept::Bottom,
            v => Concept::Or(v),
        }
    }

    pub fn is_name(&self) -> bool {
        matches!(self, Concept::Name(_))
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Concept::Name(n) => Some(n),
            _ => None,
        }
    }

    /// Negation normal form: negation only occurs directly in front of concept names.
    pub fn nnf(&self) -> Concept {
        match self {
            Concept::Top | Concept::Bottom | Concept::Name(_) => self.clone(),
            Concept::And(cs) => Concept::and(cs.iter().map(Concept::nnf)),
            Concept::Or(cs) => Concept::or(cs.iter().map(Concept::nnf)),
            Concept::Exists(r, c) => Concept::exists(r.clone(), c.nnf()),
            Concept::Forall(r, c) => Concept::forall(r.clone(), c.nnf()),
            Concept::Not(inner) => inner.negated_nnf(),
        }
    }

    /// `nnf(¬self)` without building the intermediate negation.
    pub fn negated_nnf(&self) -> Concept {
        match self {
            Concept::Top => Concept::Bottom,
            Concept::Bottom => Concept::Top,
            Concept::Name(_) => Concept::not(self.clone()),
            Concept::Not(inner) => inner.nnf(),
            Concept::And(cs) => Concept::or(cs.iter().map(Concept::negated_nnf)),
            Concept::Or(cs) => Concept::and(cs.iter().map(Concept::negated_nnf)),
            Concept::Exists(r, c) => Concept::forall(r.clone(), c.negated_nnf()),
            Concept::Forall(r, c) => Concept::exists(r.clone(), c.negated_nnf()),
        }
    }

    /// Number of syntax-tree nodes. Role names and n-ary constructors count once.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Name(_) => 1,
            Concept::Not(c) => 1 + c.size(),
            Concept::And(cs) | Concept::Or(cs) => 1 + cs.iter().map(Concept::size).sum::<usize>(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => 2 + c.size(),
        }
    }

    /// Count of negation symbols plus occurrences of `⊥`.
    pub fn negativity(&self) -> usize {
        match self {
            Concept::Top | Concept::Name(_) => 0,
            Concept::Bottom => 1,
            Concept::Not(c) => 1 + c.negativity(),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().map(Concept::negativity).sum(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.negativity(),
        }
    }

    pub fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Name(n) => {
                sig.concepts.insert(n.clone());
            }
            Concept::Not(c) => c.collect_signature(sig),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().for_each(|c| c.collect_signature(sig)),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                sig.roles.insert(r.0.clone());
                c.collect_signature(sig);
            }
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }

    /// Apply `f` to every concept name, replacing it by the returned concept.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Concept>) -> Concept {
        match self {
            Concept::Top | Concept::Bottom => self.clone(),
            Concept::Name(n) => f(n).unwrap_or_else(|| self.clone()),
            Concept::Not(c) => Concept::not(c.substitute(f)),
            Concept::And(cs) => Concept::and(cs.iter().map(|c| c.substitute(f))),
            Concept::Or(cs) => Concept::or(cs.iter().map(|c| c.substitute(f))),
            Concept::Exists(r, c) => Concept::exists(r.clone(), c.substitute(f)),
            Concept::Forall(r, c) => Concept::forall(r.clone(), c.substitute(f)),
        }
    }

    /// Every subconcept, including `self`, in pre-order.
    pub fn subconcepts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            match c {
                Concept::Not(x) | Concept::Exists(_, x) | Concept::Forall(_, x) => stack.push(x),
                Concept::And(cs) | Concept::Or(cs) => stack.extend(cs.iter().rev()),
                _ => {}
            }
        }
        out
    }
}

fn canonical_operands(mut v: Vec<Concept>) -> Vec<Concept> {
    v.sort_by_cached_key(|c| c.to_ascii());
    v.dedup();
    v
}

impl From<&str> for Concept {
    fn from(s: &str) -> Self {
        match s {
            "top" => Concept::Top,
            "bot" => Concept::Bottom,
            _ => Concept::Name(s.to_string()),
        }
    }
}

/// A set of concept names and a set of role names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub concepts: BTreeSet<String>,
    pub roles: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_concepts<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Signature { concepts: names.into_iter().map(Into::into).collect(), roles: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.concepts.len() + self.roles.len()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concepts.is_subset(&other.concepts) && self.roles.is_subset(&other.roles)
    }

    pub fn intersects(&self, other: &Signature) -> bool {
        !self.concepts.is_disjoint(&other.concepts) || !self.roles.is_disjoint(&other.roles)
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
    }

    pub fn contains(&self, name: &str) -> bool {
        self.concepts.contains(name) || self.roles.contains(name)
    }

    /// Every name, concept names first, each group sorted.
    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.concepts.iter().chain(self.roles.iter())
    }
}
