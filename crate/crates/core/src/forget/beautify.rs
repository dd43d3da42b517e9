use crate::dl::{Axiom, Concept};

/// Local simplifications: `⊤`/`⊥` absorption, complementary operands and unit propagation.
pub fn simplify(c: &Concept) -> Concept {
    simplify_nnf(&c.nnf())
}

fn simplify_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Name(_) | Concept::Not(_) => c.clone(),
        Concept::Exists(r, f) => match simplify_nnf(f) {
            Concept::Bottom => Concept::Bottom,
            f => Concept::exists(r.clone(), f),
        },
        Concept::Forall(r, f) => match simplify_nnf(f) {
            Concept::Top => Concept::Top,
            f => Concept::forall(r.clone(), f),
        },
        Concept::And(cs) => simplify_and(cs.iter().map(simplify_nnf).collect()),
        Concept::Or(cs) => simplify_or(cs.iter().map(simplify_nnf).collect()),
    }
}

fn simplify_and(parts: Vec<Concept>) -> Concept {
    let mut cur = match Concept::and(parts.into_iter().filter(|c| *c != Concept::Top)) {
        Concept::And(v) => v,
        other => return other,
    };
    loop {
        if cur.contains(&Concept::Bottom) || has_complement(&cur) {
            return Concept::Bottom;
        }
        let mut changed = false;
        let snapshot = cur.clone();
        for part in cur.iter_mut() {
            if let Concept::Or(ds) = part {
                let kept: Vec<Concept> = ds.iter().filter(|d| !snapshot.contains(&d.negated_nnf())).cloned().collect();
                if kept.len() != ds.len() {
                    *part = Concept::or(kept);
                    changed = true;
                }
            }
        }
        if !changed {
            return Concept::and(cur);
        }
        cur = match Concept::and(cur.into_iter().filter(|c| *c != Concept::Top)) {
            Concept::And(v) => v,
            other => return simplify_nnf(&other),
        };
    }
}

fn simplify_or(parts: Vec<Concept>) -> Concept {
    match Concept::or(parts) {
        Concept::Or(v) if v.contains(&Concept::Top) || has_complement(&v) => Concept::Top,
        Concept::Or(v) => Concept::or(v.into_iter().filter(|c| *c != Concept::Bottom)),
        other => other,
    }
}

fn has_complement(v: &[Concept]) -> bool {
    v.iter().any(|x| matches!(x, Concept::Not(_)) && v.contains(&x.negated_nnf()))
}

/// Simplifies an axiom for display. Returns `None` for tautologies.
///
/// Right-hand disjuncts whose negation has strictly lower negativity move to
/// the left-hand side.
pub fn beautify(a: &Axiom) -> Option<Axiom> {
    match a {
        Axiom::RoleInclusion(r, s) => (r != s).then(|| a.clone()),
        Axiom::Equiv(l, r) => {
            let (l, r) = (simplify(l), simplify(r));
            (l != r).then_some(Axiom::Equiv(l, r))
        }
        Axiom::Gci(l, r) => {
            let mut lhs = simplify(l);
            let mut rhs = simplify(r);
            let disjuncts = match &rhs {
                Concept::Or(ds) => ds.clone(),
                other => vec![other.clone()],
            };
            let mut keep = Vec::new();
            let mut moved = Vec::new();
            for d in disjuncts {
                let n = d.negated_nnf();
                if n.negativity() < d.negativity() {
                    moved.push(n);
                } else {
                    keep.push(d);
                }
            }
            if !moved.is_empty() {
                moved.push(lhs);
                lhs = simplify_nnf(&Concept::and(moved));
                rhs = simplify_nnf(&Concept::or(keep));
            }
            if rhs == Concept::Top || lhs == Concept::Bottom || lhs == rhs {
                return None;
            }
            Some(Axiom::Gci(lhs, rhs))
        }
    }
}
