use std::fmt::{self, Write};

use super::axiom::Axiom;
use super::concept::Concept;

/// Rendering style for axioms and concepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// The textual ontology format, e.g. `sub(A, only(r, C1))`.
    Ascii,
    /// Mathematical notation, e.g. `A ⊑ ∀r.C1`.
    Unicode,
}

impl Concept {
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        write_ascii(self, &mut s);
        s
    }

    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        write_unicode(self, &mut s);
        s
    }
}

fn write_ascii(c: &Concept, out: &mut String) {
    match c {
        Concept::Top => out.push_str("top"),
        Concept::Bottom => out.push_str("bot"),
        Concept::Name(n) => out.push_str(n),
        Concept::Not(x) => {
            out.push_str("not(");
            write_ascii(x, out);
            out.push(')');
        }
        Concept::And(xs) | Concept::Or(xs) => {
            out.push_str(if matches!(c, Concept::And(_)) { "and(" } else { "or(" });
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_ascii(x, out);
            }
            out.push(')');
        }
        Concept::Exists(r, x) | Concept::Forall(r, x) => {
            out.push_str(if matches!(c, Concept::Exists(..)) { "some(" } else { "only(" });
            out.push_str(r.as_str());
            out.push_str(", ");
            write_ascii(x, out);
            out.push(')');
        }
    }
}

fn write_unicode(c: &Concept, out: &mut String) {
    match c {
        Concept::Top => out.push('⊤'),
        Concept::Bottom => out.push('⊥'),
        Concept::Name(n) => out.push_str(n),
        Concept::Not(x) => {
            out.push('¬');
            write_unicode_operand(x, out);
        }
        Concept::And(xs) | Concept::Or(xs) => {
            let sep = if matches!(c, Concept::And(_)) { " ⊓ " } else { " ⊔ " };
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_unicode_operand(x, out);
            }
        }
        Concept::Exists(r, x) | Concept::Forall(r, x) => {
            out.push(if matches!(c, Concept::Exists(..)) { '∃' } else { '∀' });
            out.push_str(r.as_str());
            out.push('.');
            write_unicode_operand(x, out);
        }
    }
}

fn write_unicode_operand(c: &Concept, out: &mut String) {
    if matches!(c, Concept::And(_) | Concept::Or(_)) {
        out.push('(');
        write_unicode(c, out);
        out.push(')');
    } else {
        write_unicode(c, out);
    }
}

impl Axiom {
    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        match self {
            Axiom::Gci(l, r) | Axiom::Equiv(l, r) => {
                s.push_str(if matches!(self, Axiom::Gci(..)) { "sub(" } else { "equiv(" });
                write_ascii(l, &mut s);
                s.push_str(", ");
                write_ascii(r, &mut s);
                s.push(')');
            }
            Axiom::RoleInclusion(r, q) => {
                let _ = write!(s, "subrole({r}, {q})");
            }
        }
        s
    }

    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        match self {
            Axiom::Gci(l, r) | Axiom::Equiv(l, r) => {
                write_unicode(l, &mut s);
                s.push_str(if matches!(self, Axiom::Gci(..)) { " ⊑ " } else { " ≡ " });
                write_unicode(r, &mut s);
            }
            Axiom::RoleInclusion(r, q) => {
                let _ = write!(s, "{r} ⊑ {q}");
            }
        }
        s
    }

    pub fn render(&self, style: Style) -> String {
        match style {
            Style::Ascii => self.to_ascii(),
            Style::Unicode => self.to_unicode(),
        }
    }
}

/// Renders an axiom in the requested style.
pub fn print_axiom(a: &Axiom, style: Style) -> String {
    a.render(style)
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_unicode())
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_unicode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let a = Axiom::gci("A", Concept::forall("r", Concept::name("C1")));
        assert_eq!(a.render(Style::Unicode), "A ⊑ ∀r.C1");
        let b = Axiom::gci(Concept::and([Concept::name("A"), Concept::exists("r", Concept::Top)]), "B");
        assert_eq!(b.render(Style::Ascii), "sub(and(A, some(r, top)), B)");
        assert_eq!(Axiom::role_inclusion("r", "s").render(Style::Unicode), "r ⊑ s");
        let c = Axiom::gci(
            "A",
            Concept::or([
                Concept::name("B"),
                Concept::exists("r", Concept::and([Concept::name("C1"), Concept::not(Concept::name("C3"))])),
            ]),
        );
        assert_eq!(c.to_unicode(), "A ⊑ B ⊔ ∃r.(C1 ⊓ ¬C3)");
    }
}
