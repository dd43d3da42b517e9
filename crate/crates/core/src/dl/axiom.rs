use super::concept::{Concept, Role, Signature};

/// A TBox axiom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Axiom {
    Gci(Concept, Concept),
    Equiv(Concept, Concept),
    RoleInclusion(Role, Role),
}

impl Axiom {
    pub fn gci(lhs: impl Into<Concept>, rhs: impl Into<Concept>) -> Self {
        Axiom::Gci(lhs.into(), rhs.into())
    }

    pub fn equiv(lhs: impl Into<Concept>, rhs: impl Into<Concept>) -> Self {
        Axiom::Equiv(lhs.into(), rhs.into())
    }

    pub fn role_inclusion(sub: impl Into<Role>, sup: impl Into<Role>) -> Self {
        Axiom::RoleInclusion(sub.into(), sup.into())
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }

    pub fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Axiom::Gci(l, r) | Axiom::Equiv(l, r) => {
                l.collect_signature(sig);
                r.collect_signature(sig);
            }
            Axiom::RoleInclusion(r, s) => {
                sig.roles.insert(r.0.clone());
                sig.roles.insert(s.0.clone());
            }
        }
    }

    /// Number of syntax-tree nodes; the connective counts once.
    pub fn size(&self) -> usize {
        match self {
            Axiom::Gci(l, r) | Axiom::Equiv(l, r) => 1 + l.size() + r.size(),
            Axiom::RoleInclusion(..) => 3,
        }
    }

    /// The GCIs this axiom stands for (an equivalence yields both directions).
    pub fn gcis(&self) -> Vec<(Concept, Concept)> {
        match self {
            Axiom::Gci(l, r) => vec![(l.clone(), r.clone())],
            Axiom::Equiv(l, r) => vec![(l.clone(), r.clone()), (r.clone(), l.clone())],
            Axiom::RoleInclusion(..) => Vec::new(),
        }
    }

    /// `A ⊑ B` with both sides concept names (`⊥` allowed on the right).
    pub fn is_atomic_inclusion(&self) -> bool {
        matches!(self, Axiom::Gci(Concept::Name(_), Concept::Name(_) | Concept::Bottom))
    }

    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Concept>) -> Axiom {
        match self {
            Axiom::Gci(l, r) => Axiom::Gci(l.substitute(f), r.substitute(f)),
            Axiom::Equiv(l, r) => Axiom::Equiv(l.substitute(f), r.substitute(f)),
            Axiom::RoleInclusion(..) => self.clone(),
        }
    }
}

/// Size of an axiom's syntax tree.
pub fn axiom_size(a: &Axiom) -> usize {
    a.size()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_sizes() {
        assert_eq!(Axiom::gci("A", "B").size(), 3);
        assert_eq!(Axiom::gci("A", Concept::forall("r", Concept::name("C1"))).size(), 5);
        assert_eq!(Axiom::role_inclusion("r", "s").size(), 3);
    }

    #[test]
    fn signature_separates_namespaces() {
        let a = Axiom::gci("A", Concept::exists("r", Concept::name("B")));
        let sig = a.signature();
        assert!(sig.concepts.contains("A") && sig.concepts.contains("B"));
        assert!(sig.roles.contains("r") && !sig.concepts.contains("r"));
    }
}
