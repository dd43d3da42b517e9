//! ALCH syntax: concepts, axioms, ontologies, signatures, parsing and printing.

mod axiom;
mod concept;
mod ontology;
mod parse;
mod print;

pub use axiom::{axiom_size, Axiom};
pub use concept::{Concept, Role, Signature};
pub use ontology::{role_subsumes, Ontology, RoleHierarchy};
pub use parse::{
    is_reserved_name, parse_axiom, parse_concept, parse_ontology, parse_ontology_with_warnings, parse_unicode_axiom,
    ParseError, ParseWarning, DEFINER_PREFIX,
};
pub use print::{print_axiom, Style};
