//! Tableau satisfiability for ALCH TBoxes.
//!
//! GCIs with a concept name on the left (alone or in a conjunction) are
//! absorbed and unfolded lazily; the rest are internalized and asserted at
//! each node. Branching is
//! depth-first with the left disjunct first. Labels carry dependency sets so
//! that clashes independent of a choice point jump straight past it.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::dl::{Axiom, Concept, Ontology, RoleHierarchy};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableauConfig {
    pub max_nodes: usize,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig { max_nodes: 100_000 }
    }
}

impl TableauConfig {
    pub fn with_max_nodes(max_nodes: usize) -> Self {
        TableauConfig { max_nodes: max_nodes.max(1) }
    }
}

/// Reusable reasoner over a fixed TBox.
#[derive(Clone, Debug)]
pub struct Reasoner {
    tbox: Vec<Concept>,
    absorbed: Vec<(Concept, Concept)>,
    hierarchy: RoleHierarchy,
    cfg: TableauConfig,
}

impl Reasoner {
    pub fn new(o: &Ontology) -> Self {
        Self::with_config(o, TableauConfig::default())
    }

    pub fn with_config(o: &Ontology, cfg: TableauConfig) -> Self {
        let mut tbox = Vec::new();
        let mut absorbed = Vec::new();
        for a in o {
            for (l, r) in a.gcis() {
                if let Some(rule) = absorb(&l.nnf(), &r) {
                    if !absorbed.contains(&rule) {
                        absorbed.push(rule);
                    }
                    continue;
                }
                let c = Concept::or([Concept::not(l), r]).nnf();
                if c != Concept::Top && !tbox.contains(&c) {
                    tbox.push(c);
                }
            }
        }
        Reasoner { tbox, absorbed, hierarchy: o.role_hierarchy(), cfg }
    }

    pub fn is_satisfiable(&self, c: &Concept) -> Result<bool> {
        let mut t = Tableau::build(&self.tbox, &self.absorbed, &c.nnf(), &self.hierarchy, self.cfg);
        t.run()
    }

    pub fn is_entailed(&self, a: &Axiom) -> Result<bool> {
        match a {
            Axiom::Gci(l, r) => Ok(!self.is_satisfiable(&Concept::and([l.clone(), Concept::not(r.clone())]))?),
            Axiom::Equiv(l, r) => Ok(self.is_entailed(&Axiom::Gci(l.clone(), r.clone()))?
                && self.is_entailed(&Axiom::Gci(r.clone(), l.clone()))?),
            Axiom::RoleInclusion(r, s) => Ok(self.hierarchy.subsumes(r.as_str(), s.as_str())),
        }
    }
}

/// `A ⊓ C ⊑ D` becomes the lazy rule `A ↦ ¬C ⊔ D`.
fn absorb(l: &Concept, r: &Concept) -> Option<(Concept, Concept)> {
    match l {
        Concept::Name(_) => Some((l.clone(), r.nnf())),
        Concept::And(cs) => {
            let i = cs.iter().position(Concept::is_name)?;
            let rest = Concept::and(cs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()));
            Some((cs[i].clone(), Concept::or([rest.negated_nnf(), r.nnf()])))
        }
        _ => None,
    }
}

pub fn is_satisfiable(o: &Ontology, c: &Concept, cfg: TableauConfig) -> Result<bool> {
    Reasoner::with_config(o, cfg).is_satisfiable(c)
}

pub fn is_entailed(o: &Ontology, a: &Axiom) -> Result<bool> {
    Reasoner::new(o).is_entailed(a)
}

/// Conjunction of [`is_entailed`]; stops at the first non-entailed axiom.
pub fn entails_all(o: &Ontology, axioms: &[Axiom]) -> Result<bool> {
    if axioms.is_empty() {
        return Ok(true);
    }
    let r = Reasoner::new(o);
    for a in axioms {
        if !r.is_entailed(a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

type Cid = u32;
type Rid = u32;

#[derive(Clone, Debug)]
enum Node {
    Top,
    Bottom,
    Atom { complement: Option<Cid> },
    And(Vec<Cid>),
    Or(Vec<Cid>),
    Exists(Rid, Cid),
    Forall(Rid, Cid),
}

/// Sorted set of branch-point ids a label entry depends on.
type Deps = Vec<u32>;

fn union(a: &Deps, b: &Deps) -> Deps {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Clone)]
struct TNode {
    bits: Vec<u64>,
    deps: Vec<Option<Deps>>,
    edge: Option<(usize, Rid, Deps)>,
    children: Vec<usize>,
}

impl TNode {
    fn has(&self, c: Cid) -> bool {
        self.bits[(c / 64) as usize] & (1u64 << (c % 64)) != 0
    }

    fn subset_of(&self, other: &TNode) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone)]
struct State {
    nodes: Vec<Rc<TNode>>,
    queue: Vec<(usize, Cid)>,
}

enum Outcome {
    Sat,
    Clash(Deps),
}

struct Tableau {
    concepts: Vec<Node>,
    tbox: Vec<Cid>,
    /// Per concept id, what its presence unfolds to.
    unfold: Vec<Vec<Cid>>,
    root: Cid,
    ors: Vec<Cid>,
    exists: Vec<Cid>,
    foralls: Vec<Cid>,
    role_sub: Vec<Vec<bool>>,
    cfg: TableauConfig,
}

struct Interner {
    ids: HashMap<Concept, Cid>,
    nodes: Vec<Node>,
    roles: BTreeMap<String, Rid>,
}

impl Interner {
    fn role(&mut self, r: &str) -> Rid {
        let n = self.roles.len() as Rid;
        *self.roles.entry(r.to_string()).or_insert(n)
    }

    fn intern(&mut self, c: &Concept) -> Cid {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        let node = match c {
            Concept::Top => Node::Top,
            Concept::Bottom => Node::Bottom,
            Concept::Name(_) | Concept::Not(_) => Node::Atom { complement: None },
            Concept::And(xs) => Node::And(xs.iter().map(|x| self.intern(x)).collect()),
            Concept::Or(xs) => Node::Or(xs.iter().map(|x| self.intern(x)).collect()),
            Concept::Exists(r, x) => {
                let f = self.intern(x);
                Node::Exists(self.role(r.as_str()), f)
            }
            Concept::Forall(r, x) => {
                let f = self.intern(x);
                Node::Forall(self.role(r.as_str()), f)
            }
        };
        let id = self.nodes.len() as Cid;
        self.nodes.push(node);
        self.ids.insert(c.clone(), id);
        if matches!(c, Concept::Name(_) | Concept::Not(_)) {
            let comp = match c {
                Concept::Not(x) => (**x).clone(),
                _ => Concept::not(c.clone()),
            };
            let cid = match self.ids.get(&comp) {
                Some(&x) => x,
                None => {
                    let x = self.nodes.len() as Cid;
                    self.nodes.push(Node::Atom { complement: Some(id) });
                    self.ids.insert(comp, x);
                    x
                }
            };
            self.nodes[id as usize] = Node::Atom { complement: Some(cid) };
        }
        id
    }
}

impl Tableau {
    fn build(tbox: &[Concept], absorbed: &[(Concept, Concept)], query: &Concept, h: &RoleHierarchy, cfg: TableauConfig) -> Tableau {
        let mut int = Interner { ids: HashMap::new(), nodes: Vec::new(), roles: BTreeMap::new() };
        let tbox_ids: Vec<Cid> = tbox.iter().map(|c| int.intern(c)).collect();
        let rules: Vec<(Cid, Cid)> = absorbed.iter().map(|(a, c)| (int.intern(a), int.intern(c))).collect();
        let root = int.intern(query);
        let mut unfold = vec![Vec::new(); int.nodes.len()];
        for (a, c) in rules {
            unfold[a as usize].push(c);
        }
        let mut names: Vec<&str> = vec![""; int.roles.len()];
        for (r, &id) in &int.roles {
            names[id as usize] = r;
        }
        let role_sub = names.iter().map(|r| names.iter().map(|s| h.subsumes(r, s)).collect()).collect();
        let mut ors = Vec::new();
        let mut exists = Vec::new();
        let mut foralls = Vec::new();
        for (i, n) in int.nodes.iter().enumerate() {
            match n {
                Node::Or(_) => ors.push(i as Cid),
                Node::Exists(..) => exists.push(i as Cid),
                Node::Forall(..) => foralls.push(i as Cid),
                _ => {}
            }
        }
        Tableau { concepts: int.nodes, tbox: tbox_ids, unfold, root, ors, exists, foralls, role_sub, cfg }
    }

    fn run(&mut self) -> Result<bool> {
        let mut st = State { nodes: Vec::new(), queue: Vec::new() };
        self.new_node(&mut st, None);
        self.add(&mut st, 0, self.root, Vec::new());
        Ok(matches!(self.solve(st, 0)?, Outcome::Sat))
    }

    fn new_node(&self, st: &mut State, edge: Option<(usize, Rid, Deps)>) -> usize {
        let n = self.concepts.len();
        let id = st.nodes.len();
        st.nodes.push(Rc::new(TNode { bits: vec![0; n.div_ceil(64)], deps: vec![None; n], edge: edge.clone(), children: Vec::new() }));
        if let Some((p, role, edeps)) = edge {
            Rc::make_mut(&mut st.nodes[p]).children.push(id);
            for &f in &self.foralls {
                if let (Node::Forall(s, c), true) = (&self.concepts[f as usize], st.nodes[p].has(f)) {
                    if self.role_sub[role as usize][*s as usize] {
                        let d = union(st.nodes[p].deps[f as usize].as_ref().unwrap(), &edeps);
                        self.add(st, id, *c, d);
                    }
                }
            }
        }
        for &t in &self.tbox {
            self.add(st, id, t, Vec::new());
        }
        id
    }

    fn add(&self, st: &mut State, x: usize, c: Cid, deps: Deps) {
        if st.nodes[x].has(c) {
            return;
        }
        let node = Rc::make_mut(&mut st.nodes[x]);
        node.bits[(c / 64) as usize] |= 1u64 << (c % 64);
        node.deps[c as usize] = Some(deps);
        st.queue.push((x, c));
    }

    fn deps_of(st: &State, x: usize, c: Cid) -> &Deps {
        st.nodes[x].deps[c as usize].as_ref().expect("label entry without dependencies")
    }

    /// Deterministic rules to fixpoint, including unit propagation on disjunctions.
    fn propagate(&self, st: &mut State) -> std::result::Result<(), Deps> {
        loop {
            while let Some((x, c)) = st.queue.pop() {
                let d = Self::deps_of(st, x, c).clone();
                for &u in &self.unfold[c as usize] {
                    self.add(st, x, u, d.clone());
                }
                match &self.concepts[c as usize] {
                    Node::Bottom => return Err(d),
                    Node::Atom { complement: Some(k) } => {
                        if st.nodes[x].has(*k) {
                            return Err(union(&d, Self::deps_of(st, x, *k)));
                        }
                    }
                    Node::And(cs) => {
                        for &y in cs {
                            self.add(st, x, y, d.clone());
                        }
                    }
                    Node::Forall(s, f) => {
                        let children = st.nodes[x].children.clone();
                        for ch in children {
                            let (_, q, edeps) = st.nodes[ch].edge.clone().unwrap();
                            if self.role_sub[q as usize][*s as usize] {
                                self.add(st, ch, *f, union(&d, &edeps));
                            }
                        }
                    }
                    _ => {}
                }
            }
            let mut progressed = false;
            for x in 0..st.nodes.len() {
                for &o in &self.ors {
                    if !st.nodes[x].has(o) {
                        continue;
                    }
                    let Node::Or(ds) = &self.concepts[o as usize] else { unreachable!() };
                    if ds.iter().any(|&y| st.nodes[x].has(y)) {
                        continue;
                    }
                    let mut blame = Self::deps_of(st, x, o).clone();
                    let mut open = None;
                    let mut n_open = 0;
                    for &y in ds {
                        match self.falsified(st, x, y) {
                            Some(fd) => blame = union(&blame, fd),
                            None => {
                                n_open += 1;
                                open = Some(y);
                            }
                        }
                    }
                    if n_open == 0 {
                        return Err(blame);
                    }
                    if n_open == 1 {
                        self.add(st, x, open.unwrap(), blame);
                        progressed = true;
                    }
                }
            }
            if !progressed && st.queue.is_empty() {
                return Ok(());
            }
        }
    }

    /// Dependencies of the reason `y` cannot hold at `x`, if it is trivially false there.
    fn falsified<'s>(&self, st: &'s State, x: usize, y: Cid) -> Option<&'s Deps> {
        static EMPTY: Deps = Vec::new();
        match &self.concepts[y as usize] {
            Node::Bottom => Some(&EMPTY),
            Node::Atom { complement: Some(k) } if st.nodes[x].has(*k) => Some(Self::deps_of(st, x, *k)),
            _ => None,
        }
    }

    fn blocked(st: &State, x: usize) -> bool {
        x != 0 && (0..x).any(|y| st.nodes[x].subset_of(&st.nodes[y]))
    }

    /// Nodes that are blocked or below a blocked node.
    fn inactive(st: &State) -> Vec<bool> {
        let mut out = vec![false; st.nodes.len()];
        for x in 0..st.nodes.len() {
            let parent = st.nodes[x].edge.as_ref().is_some_and(|(p, _, _)| out[*p]);
            out[x] = parent || Self::blocked(st, x);
        }
        out
    }

    fn solve(&self, mut st: State, level: u32) -> Result<Outcome> {
        loop {
            if let Err(d) = self.propagate(&mut st) {
                return Ok(Outcome::Clash(d));
            }
            if let Some((x, o, alts, pruned)) = self.pick_branch(&st) {
                let base = Self::deps_of(&st, x, o).clone();
                let mut acc = union(&base, &pruned);
                let with_level = union(&base, &vec![level]);
                for y in alts {
                    let mut next = st.clone();
                    self.add(&mut next, x, y, with_level.clone());
                    match self.solve(next, level + 1)? {
                        Outcome::Sat => return Ok(Outcome::Sat),
                        Outcome::Clash(cs) => {
                            if cs.binary_search(&level).is_err() {
                                return Ok(Outcome::Clash(cs));
                            }
                            let rest: Deps = cs.into_iter().filter(|&l| l != level).collect();
                            acc = union(&acc, &rest);
                        }
                    }
                }
                return Ok(Outcome::Clash(acc));
            }
            match self.pick_exists(&st) {
                Some((x, e)) => {
                    if st.nodes.len() >= self.cfg.max_nodes {
                        return Err(Error::ResourceLimit { limit: self.cfg.max_nodes });
                    }
                    let Node::Exists(r, f) = self.concepts[e as usize] else { unreachable!() };
                    let d = Self::deps_of(&st, x, e).clone();
                    let child = self.new_node(&mut st, Some((x, r, d.clone())));
                    self.add(&mut st, child, f, d);
                }
                None => return Ok(Outcome::Sat),
            }
        }
    }

    /// An undecided disjunction, its open disjuncts and the dependencies of the falsified ones.
    fn pick_branch(&self, st: &State) -> Option<(usize, Cid, Vec<Cid>, Deps)> {
        let inactive = Self::inactive(st);
        for x in (0..st.nodes.len()).filter(|&x| !inactive[x]) {
            for &o in &self.ors {
                if !st.nodes[x].has(o) {
                    continue;
                }
                let Node::Or(ds) = &self.concepts[o as usize] else { unreachable!() };
                if ds.iter().any(|&y| st.nodes[x].has(y)) {
                    continue;
                }
                let mut open = Vec::new();
                let mut pruned = Vec::new();
                for &y in ds {
                    match self.falsified(st, x, y) {
                        Some(fd) => pruned = union(&pruned, fd),
                        None => open.push(y),
                    }
                }
                open.sort_by_key(|&y| self.cost(y));
                return Some((x, o, open, pruned));
            }
        }
        None
    }

    /// Rough expansion cost of a disjunct: literals, then universals, then anything generating successors.
    fn cost(&self, y: Cid) -> u8 {
        match &self.concepts[y as usize] {
            Node::Top | Node::Bottom | Node::Atom { .. } => 0,
            Node::Forall(..) => 1,
            Node::And(cs) | Node::Or(cs) => 1 + cs.iter().map(|&c| self.cost(c)).max().unwrap_or(0),
            Node::Exists(..) => 4,
        }
    }

    fn pick_exists(&self, st: &State) -> Option<(usize, Cid)> {
        let inactive = Self::inactive(st);
        for x in (0..st.nodes.len()).filter(|&x| !inactive[x]) {
            for &e in &self.exists {
                if !st.nodes[x].has(e) {
                    continue;
                }
                let Node::Exists(r, f) = self.concepts[e as usize] else { unreachable!() };
                let witnessed = st.nodes[x].children.iter().any(|&ch| {
                    let (_, q, _) = st.nodes[ch].edge.as_ref().unwrap();
                    self.role_sub[*q as usize][r as usize] && st.nodes[ch].has(f)
                });
                if !witnessed {
                    return Some((x, e));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::parse_ontology;

    fn case_split() -> Ontology {
        parse_ontology("sub(A, only(r, C1))\nsub(C1, or(C3, C2))\nsub(C2, C3)\nsub(only(r, C3), B)").unwrap()
    }

    fn gci(l: &str, r: &str) -> Axiom {
        crate::dl::parse_axiom(&format!("sub({l}, {r})")).unwrap()
    }

    #[test]
    fn case_split_entailment() {
        let o = case_split();
        let c = Concept::and([Concept::name("A"), Concept::not(Concept::name("B"))]);
        assert!(!is_satisfiable(&o, &c, TableauConfig::default()).unwrap());
        assert!(entails_all(&o, &[gci("A", "B"), gci("C1", "C3")]).unwrap());
        assert!(!is_entailed(&o, &gci("B", "A")).unwrap());
    }

    #[test]
    fn contradiction_and_looping_model() {
        let c = Concept::and([Concept::name("C3"), Concept::not(Concept::name("C3"))]);
        assert!(!is_satisfiable(&Ontology::new(), &c, TableauConfig::default()).unwrap());
        let o = parse_ontology("sub(A, some(r, A))").unwrap();
        assert!(is_satisfiable(&o, &Concept::name("A"), TableauConfig::default()).unwrap());
    }

    #[test]
    fn forall_through_hierarchy() {
        let o = parse_ontology("sub(A, some(r, B))\nsubrole(r, s)\nsub(A, only(s, not(B)))").unwrap();
        assert!(!is_satisfiable(&o, &Concept::name("A"), TableauConfig::default()).unwrap());
        let o2 = parse_ontology("sub(A, some(s, B))\nsubrole(r, s)\nsub(A, only(r, not(B)))").unwrap();
        assert!(is_satisfiable(&o2, &Concept::name("A"), TableauConfig::default()).unwrap());
    }

    #[test]
    fn node_limit_is_an_error() {
        let o = parse_ontology("sub(top, some(r, A))\nsub(A, some(r, B))\nsub(B, some(r, not(A)))").unwrap();
        let err = is_satisfiable(&o, &Concept::Top, TableauConfig::with_max_nodes(1)).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { limit: 1 }));
    }

    #[test]
    fn pruned_disjuncts_keep_their_dependencies() {
        let o = parse_ontology(
            "sub(E, D)\nsub(E, some(r, E))\nsub(C, only(s, B))\nsub(top, or(and(not(B), not(D)), only(r, bot), C))",
        )
        .unwrap();
        assert!(is_satisfiable(&o, &Concept::name("E"), TableauConfig::default()).unwrap());
    }

    #[test]
    fn role_inclusion_entailment() {
        let o = parse_ontology("subrole(r, s)\nsubrole(s, t)").unwrap();
        assert!(is_entailed(&o, &Axiom::role_inclusion("r", "t")).unwrap());
        assert!(!is_entailed(&o, &Axiom::role_inclusion("t", "r")).unwrap());
    }
}
