use std::collections::{BTreeMap, BTreeSet, VecDeque};

use indexmap::IndexSet;

use super::axiom::Axiom;
use super::concept::{Role, Signature};

/// A finite set of axioms that remembers insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    axioms: IndexSet<Axiom>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts the axiom unless an equal one is present. Returns whether it was new.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        self.axioms.insert(axiom)
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Axiom> + ExactSizeIterator {
        self.axioms.iter()
    }

    pub fn get(&self, idx: usize) -> Option<&Axiom> {
        self.axioms.get_index(idx)
    }

    pub fn position(&self, axiom: &Axiom) -> Option<usize> {
        self.axioms.get_index_of(axiom)
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        self.axioms.shift_remove(axiom)
    }

    /// A copy without `axiom`, preserving the order of the rest.
    pub fn without(&self, axiom: &Axiom) -> Ontology {
        let mut o = self.clone();
        o.remove(axiom);
        o
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in &self.axioms {
            a.collect_signature(&mut sig);
        }
        sig
    }

    pub fn role_hierarchy(&self) -> RoleHierarchy {
        RoleHierarchy::from_axioms(self.axioms.iter())
    }

    pub fn is_subset_of(&self, other: &Ontology) -> bool {
        self.axioms.iter().all(|a| other.contains(a))
    }

    /// Order-independent key: sorted ascii renderings, one per line.
    pub fn canonical_key(&self) -> String {
        let mut lines: Vec<String> = self.axioms.iter().map(Axiom::to_ascii).collect();
        lines.sort();
        lines.join("\n")
    }

    /// Sum of axiom sizes.
    pub fn total_size(&self) -> usize {
        self.axioms.iter().map(Axiom::size).sum()
    }

    /// Ascii rendering in the textual ontology format, one axiom per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.axioms {
            s.push_str(&a.to_ascii());
            s.push('\n');
        }
        s
    }
}

impl FromIterator<Axiom> for Ontology {
    fn from_iter<T: IntoIterator<Item = Axiom>>(iter: T) -> Self {
        Ontology { axioms: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a Ontology {
    type Item = &'a Axiom;
    type IntoIter = indexmap::set::Iter<'a, Axiom>;

    fn into_iter(self) -> Self::IntoIter {
        self.axioms.iter()
    }
}

impl Extend<Axiom> for Ontology {
    fn extend<T: IntoIterator<Item = Axiom>>(&mut self, iter: T) {
        self.axioms.extend(iter)
    }
}

/// Reflexive-transitive closure of declared role inclusions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleHierarchy {
    direct: BTreeMap<String, BTreeSet<String>>,
    supers: BTreeMap<String, BTreeSet<String>>,
}

impl RoleHierarchy {
    pub fn from_axioms<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> Self {
        let mut direct: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for a in axioms {
            if let Axiom::RoleInclusion(r, s) = a {
                direct.entry(r.0.clone()).or_default().insert(s.0.clone());
                direct.entry(s.0.clone()).or_default();
            }
        }
        let mut supers = BTreeMap::new();
        for r in direct.keys() {
            let mut seen = BTreeSet::new();
            let mut queue: VecDeque<&String> = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                if let Some(next) = direct.get(x) {
                    for y in next {
                        if seen.insert(y.clone()) {
                            queue.push_back(y);
                        }
                    }
                }
            }
            seen.remove(r);
            supers.insert(r.clone(), seen);
        }
        RoleHierarchy { direct, supers }
    }

    /// `r ⊑ s` holds in the reflexive-transitive closure.
    pub fn subsumes(&self, r: &str, s: &str) -> bool {
        r == s || self.supers.get(r).is_some_and(|set| set.contains(s))
    }

    /// Strict super-roles of `r`.
    pub fn supers(&self, r: &str) -> impl Iterator<Item = &String> {
        self.supers.get(r).into_iter().flatten()
    }

    /// Strict sub-roles of `s`.
    pub fn subs<'a>(&'a self, s: &'a str) -> impl Iterator<Item = &'a String> + 'a {
        self.supers.iter().filter(move |(_, sup)| sup.contains(s)).map(|(r, _)| r)
    }

    /// Declared inclusions along a shortest chain from `r` to `s` (empty when `r == s`).
    pub fn chain(&self, r: &str, s: &str) -> Option<Vec<Axiom>> {
        if r == s {
            return Some(Vec::new());
        }
        let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            for y in self.direct.get(x).into_iter().flatten() {
                if y != r && !prev.contains_key(y.as_str()) {
                    prev.insert(y, x);
                    if y == s {
                        let mut out = Vec::new();
                        let mut cur = s;
                        while cur != r {
                            let p = prev[cur];
                            out.push(Axiom::RoleInclusion(Role::new(p), Role::new(cur)));
                            cur = p;
                        }
                        out.reverse();
                        return Some(out);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

/// `r ⊑ s` in the reflexive-transitive closure of the ontology's role inclusions.
pub fn role_subsumes(o: &Ontology, r: &Role, s: &Role) -> bool {
    o.role_hierarchy().subsumes(r.as_str(), s.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(r: &str, s: &str) -> Axiom {
        Axiom::role_inclusion(r, s)
    }

    #[test]
    fn role_closure() {
        let o: Ontology = [ri("r", "s"), ri("s", "t")].into_iter().collect();
        assert!(role_subsumes(&o, &"r".into(), &"t".into()));
        assert!(role_subsumes(&o, &"q".into(), &"q".into()));
        assert!(!role_subsumes(&o, &"s".into(), &"r".into()));
        let h = o.role_hierarchy();
        assert_eq!(h.chain("r", "t").unwrap(), vec![ri("r", "s"), ri("s", "t")]);
        assert_eq!(h.subs("t").cloned().collect::<Vec<_>>(), vec!["r", "s"]);
    }

    #[test]
    fn dedup_on_insert() {
        let mut o = Ontology::new();
        assert!(o.insert(Axiom::gci("A", "B")));
        assert!(!o.insert(Axiom::gci("A", "B")));
        assert_eq!(o.len(), 1);
    }
}
