//! Proof generation for description-logic entailments.
//!
//! The crate covers ALCH syntax, a tableau reasoner, ELH saturation with
//! traced inferences, optimal proof extraction, justifications, forgetting,
//! and the elimination and detailed proof generators built on top of them.

pub mod cancel;
pub mod corpus;
pub mod detailed;
pub mod dl;
pub mod el;
pub mod elim;
pub mod error;
pub mod extract;
pub mod forget;
pub mod justify;
pub mod methods;
pub mod par;
pub mod proof;
pub mod tableau;

pub use cancel::CancelToken;
pub use error::{Error, Result};
pub use par::Exec;
