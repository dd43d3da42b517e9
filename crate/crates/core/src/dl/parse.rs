//! Parsers for the textual ontology format and for the unicode rendering.
//!
//! Ontology files contain one axiom after another (line breaks are not
//! significant) and `#` starts a comment running to the end of the line:
//!
//! ```text
//! concept := "top" | "bot" | NAME | "not(" concept ")"
//!          | "and(" concept ("," concept)+ ")" | "or(" concept ("," concept)+ ")"
//!          | "some(" ROLE "," concept ")" | "only(" ROLE "," concept ")"
//! axiom   := "sub(" concept "," concept ")" | "equiv(" concept "," concept ")"
//!          | "subrole(" ROLE "," ROLE ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::axiom::Axiom;
use super::concept::{Concept, Role};
use super::ontology::Ontology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

/// Non-fatal observations made while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    DuplicateAxiom { line: usize, axiom: String },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::DuplicateAxiom { line, axiom } => {
                write!(f, "line {line}: duplicate axiom {axiom} ignored")
            }
        }
    }
}

/// Prefix reserved for names introduced during clause normalization.
pub const DEFINER_PREFIX: &str = "_D";

pub fn is_reserved_name(name: &str) -> bool {
    name.strip_prefix(DEFINER_PREFIX)
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Sub,
    Equiv,
    And,
    Or,
    Not,
    Exists,
    Forall,
    Top,
    Bottom,
    Eof,
    Bad(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Sub => "`⊑`".into(),
            Tok::Equiv => "`≡`".into(),
            Tok::And => "`⊓`".into(),
            Tok::Or => "`⊔`".into(),
            Tok::Not => "`¬`".into(),
            Tok::Exists => "`∃`".into(),
            Tok::Forall => "`∀`".into(),
            Tok::Top => "`⊤`".into(),
            Tok::Bottom => "`⊥`".into(),
            Tok::Eof => "end of input".into(),
            Tok::Bad(c) => format!("`{c}`"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        let mut toks = Vec::new();
        let (mut line, mut col) = (1usize, 1usize);
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (l, cl) = (line, col);
            if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            if c.is_whitespace() {
                chars.next();
                col += 1;
                continue;
            }
            if c == '#' {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l, cl));
                continue;
            }
            chars.next();
            col += 1;
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '⊑' => Tok::Sub,
                '≡' => Tok::Equiv,
                '⊓' => Tok::And,
                '⊔' => Tok::Or,
                '¬' => Tok::Not,
                '∃' => Tok::Exists,
                '∀' => Tok::Forall,
                '⊤' => Tok::Top,
                '⊥' => Tok::Bottom,
                other => Tok::Bad(other),
            };
            toks.push((t, l, cl));
        }
        toks.push((Tok::Eof, line, col));
        Lexer { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn line(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (t, line, column) = &self.toks[self.pos];
        ParseError {
            line: *line,
            column: *column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if is_reserved_name(s) => {
                let mut e = self.error(&[what]);
                e.found = format!("reserved name `{s}`");
                Err(e)
            }
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }
}

// ---- ascii grammar ----

const CONCEPT_START: &[&str] = &["top", "bot", "not(", "and(", "or(", "some(", "only(", "concept name"];

fn ascii_concept(lx: &mut Lexer) -> Result<Concept, ParseError> {
    let Tok::Ident(word) = lx.peek().clone() else {
        return Err(lx.error(CONCEPT_START));
    };
    let is_call = *lx.peek2() == Tok::LParen;
    match (word.as_str(), is_call) {
        ("top", false) => {
            lx.next();
            Ok(Concept::Top)
        }
        ("bot", false) => {
            lx.next();
            Ok(Concept::Bottom)
        }
        ("not", true) => {
            lx.next();
            lx.next();
            let c = ascii_concept(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(Concept::not(c))
        }
        ("and" | "or", true) => {
            lx.next();
            lx.next();
            let mut args = vec![ascii_concept(lx)?];
            lx.expect(Tok::Comma, "`,`")?;
            args.push(ascii_concept(lx)?);
            loop {
                match lx.peek() {
                    Tok::Comma => {
                        lx.next();
                        args.push(ascii_concept(lx)?);
                    }
                    Tok::RParen => {
                        lx.next();
                        break;
                    }
                    _ => return Err(lx.error(&["`,`", "`)`"])),
                }
            }
            Ok(if word == "and" { Concept::and(args) } else { Concept::or(args) })
        }
        ("some" | "only", true) => {
            lx.next();
            lx.next();
            let r = Role(lx.name("role name")?);
            lx.expect(Tok::Comma, "`,`")?;
            let c = ascii_concept(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(if word == "some" { Concept::exists(r, c) } else { Concept::forall(r, c) })
        }
        ("top" | "bot", true) => Err(lx.error(CONCEPT_START)),
        (_, true) if matches!(word.as_str(), "sub" | "equiv" | "subrole") => Err(lx.error(CONCEPT_START)),
        ("not" | "and" | "or" | "some" | "only", false) => {
            lx.next();
            Err(lx.error(&["`(`"]))
        }
        _ => Ok(Concept::Name(lx.name("concept name")?)),
    }
}

fn ascii_axiom(lx: &mut Lexer) -> Result<Axiom, ParseError> {
    const START: &[&str] = &["sub(", "equiv(", "subrole("];
    let Tok::Ident(word) = lx.peek().clone() else {
        return Err(lx.error(START));
    };
    if !matches!(word.as_str(), "sub" | "equiv" | "subrole") {
        return Err(lx.error(START));
    }
    lx.next();
    lx.expect(Tok::LParen, "`(`")?;
    let ax = if word == "subrole" {
        let r = lx.name("role name")?;
        lx.expect(Tok::Comma, "`,`")?;
        let s = lx.name("role name")?;
        Axiom::RoleInclusion(Role(r), Role(s))
    } else {
        let l = ascii_concept(lx)?;
        lx.expect(Tok::Comma, "`,`")?;
        let r = ascii_concept(lx)?;
        if word == "sub" {
            Axiom::Gci(l, r)
        } else {
            Axiom::Equiv(l, r)
        }
    };
    lx.expect(Tok::RParen, "`)`")?;
    Ok(ax)
}

/// Parses an ontology in the textual format, reporting duplicate axioms as warnings.
pub fn parse_ontology_with_warnings(text: &str) -> Result<(Ontology, Vec<ParseWarning>), ParseError> {
    let mut lx = Lexer::new(text);
    let mut o = Ontology::new();
    let mut warnings = Vec::new();
    while *lx.peek() != Tok::Eof {
        let line = lx.line();
        let ax = ascii_axiom(&mut lx)?;
        if o.contains(&ax) {
            warnings.push(ParseWarning::DuplicateAxiom { line, axiom: ax.to_ascii() });
        } else {
            o.insert(ax);
        }
    }
    Ok((o, warnings))
}

/// Parses an ontology in the textual format; duplicates are silently dropped.
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    parse_ontology_with_warnings(text).map(|(o, _)| o)
}

/// Parses exactly one axiom in the textual format.
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    let mut lx = Lexer::new(text);
    let ax = ascii_axiom(&mut lx)?;
    if *lx.peek() != Tok::Eof {
        return Err(lx.error(&["end of input"]));
    }
    Ok(ax)
}

/// Parses exactly one concept in the textual format.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut lx = Lexer::new(text);
    let c = ascii_concept(&mut lx)?;
    if *lx.peek() != Tok::Eof {
        return Err(lx.error(&["end of input"]));
    }
    Ok(c)
}

// ---- unicode rendering ----

fn uni_or(lx: &mut Lexer) -> Result<Concept, ParseError> {
    let mut parts = vec![uni_and(lx)?];
    while *lx.peek() == Tok::Or {
        lx.next();
        parts.push(uni_and(lx)?);
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::or(parts) })
}

fn uni_and(lx: &mut Lexer) -> Result<Concept, ParseError> {
    let mut parts = vec![uni_unary(lx)?];
    while *lx.peek() == Tok::And {
        lx.next();
        parts.push(uni_unary(lx)?);
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::and(parts) })
}

fn uni_unary(lx: &mut Lexer) -> Result<Concept, ParseError> {
    match lx.peek().clone() {
        Tok::Top => {
            lx.next();
            Ok(Concept::Top)
        }
        Tok::Bottom => {
            lx.next();
            Ok(Concept::Bottom)
        }
        Tok::Not => {
            lx.next();
            Ok(Concept::not(uni_unary(lx)?))
        }
        Tok::Exists | Tok::Forall => {
            let ex = lx.next() == Tok::Exists;
            let r = Role(lx.name("role name")?);
            lx.expect(Tok::Dot, "`.`")?;
            let c = uni_unary(lx)?;
            Ok(if ex { Concept::exists(r, c) } else { Concept::forall(r, c) })
        }
        Tok::LParen => {
            lx.next();
            let c = uni_or(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(c)
        }
        Tok::Ident(_) => Ok(Concept::Name(lx.name("concept name")?)),
        _ => Err(lx.error(&["`⊤`", "`⊥`", "`¬`", "`∃`", "`∀`", "`(`", "concept name"])),
    }
}

/// Parses the unicode rendering of an axiom. `X ⊑ Y` between two bare names is
/// read as a role inclusion when either name is in `roles`.
pub fn parse_unicode_axiom(text: &str, roles: &BTreeSet<String>) -> Result<Axiom, ParseError> {
    let mut lx = Lexer::new(text);
    let l = uni_or(&mut lx)?;
    let equiv = match lx.next() {
        Tok::Sub => false,
        Tok::Equiv => true,
        _ => {
            lx.pos -= 1;
            return Err(lx.error(&["`⊑`", "`≡`"]));
        }
    };
    let r = uni_or(&mut lx)?;
    if *lx.peek() != Tok::Eof {
        return Err(lx.error(&["end of input"]));
    }
    Ok(match (l, r, equiv) {
        (Concept::Name(a), Concept::Name(b), false) if roles.contains(&a) || roles.contains(&b) => {
            Axiom::RoleInclusion(Role(a), Role(b))
        }
        (l, r, false) => Axiom::Gci(l, r),
        (l, r, true) => Axiom::Equiv(l, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_axiom("sub(A, only(r, C1))").unwrap(),
            Axiom::gci("A", Concept::forall("r", Concept::name("C1")))
        );
        assert_eq!(parse_axiom("equiv(A, B)").unwrap(), Axiom::equiv("A", "B"));
        let err = parse_axiom("sub(A)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        assert_eq!(err.expected, vec!["`,`"]);
    }

    #[test]
    fn comments_whitespace_and_duplicates() {
        let text = "# header\nsub(A, B) # trailing\n\n  sub( A ,\n B )\nsubrole(r, s)\n";
        let (o, w) = parse_ontology_with_warnings(text).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(w.len(), 1);
        assert!(matches!(&w[0], ParseWarning::DuplicateAxiom { line: 4, .. }));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_ontology("sub(A, B)\nsub(and(A), B)").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.expected, vec!["`,`"]);
        assert!(parse_axiom("sub(_D3, B)").unwrap_err().found.contains("reserved"));
        assert!(parse_axiom("sub(not, B)").is_err());
        assert!(parse_axiom("sub(A, B) sub").is_err());
    }

    #[test]
    fn unicode_round_trip() {
        let roles: BTreeSet<String> = ["r".to_string()].into();
        for text in [
            "sub(A, or(B, some(r, and(C1, not(C3)))))",
            "sub(and(A, only(r, C)), B)",
            "equiv(top, not(not(bot)))",
            "subrole(r, s)",
        ] {
            let a = parse_axiom(text).unwrap();
            assert_eq!(parse_unicode_axiom(&a.to_unicode(), &roles).unwrap(), a, "{text}");
        }
    }
}
