//! The six ways to explain an entailment, behind one entry point.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::cancel::CancelToken;
use crate::detailed::{generate_detailed_proof, DetailedOptions};
use crate::dl::{Axiom, Ontology, Signature};
use crate::el::{is_elh, saturate_for};
use crate::elim::{generate_elimination_proof, EliminationTask, Strategy};
use crate::error::{Error, Result};
use crate::extract::{extract_optimal, ExtractionRequest};
use crate::forget::ForgetOptions;
use crate::justify::justification_union;
use crate::proof::{Measure, Proof};
use crate::tableau::is_entailed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ElkSize,
    ElkDepth,
    ElimHeuristic,
    ElimNameOptimized,
    ElimSizeOptimized,
    Detailed,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::ElkSize, Method::ElkDepth, Method::ElimHeuristic, Method::ElimNameOptimized, Method::ElimSizeOptimized, Method::Detailed];

    pub fn tag(self) -> &'static str {
        match self {
            Method::ElkSize => "elk-size",
            Method::ElkDepth => "elk-depth",
            Method::ElimHeuristic => "elim-heur",
            Method::ElimNameOptimized => "elim-name-opt",
            Method::ElimSizeOptimized => "elim-size-opt",
            Method::Detailed => "detailed",
        }
    }

    /// The measure a method optimizes when none is given.
    pub fn default_measure(self) -> Measure {
        match self {
            Method::ElkDepth => Measure::Depth,
            _ => Measure::Size,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| format!("unknown method {s:?}; expected one of {}", Method::ALL.map(Method::tag).join(", ")))
    }
}

#[derive(Clone, Debug)]
pub struct ExplainOptions {
    pub known: Signature,
    pub measure: Option<Measure>,
    pub per_name: Duration,
    pub cancel: Option<CancelToken>,
}

impl Default for ExplainOptions {
    fn default() -> Self {
        ExplainOptions { known: Signature::new(), measure: None, per_name: ForgetOptions::default().per_name, cancel: None }
    }
}

#[derive(Clone, Debug)]
pub struct Explanation {
    pub proof: Proof,
    pub warnings: Vec<String>,
}

/// Splits plain names into roles and concepts by how `o` uses them.
pub fn known_signature<S: AsRef<str>>(o: &Ontology, names: impl IntoIterator<Item = S>) -> Signature {
    let roles = o.signature().roles;
    let mut sig = Signature::new();
    for n in names {
        let n = n.as_ref().trim();
        if n.is_empty() {
            continue;
        }
        if roles.contains(n) {
            sig.roles.insert(n.to_string());
        } else {
            sig.concepts.insert(n.to_string());
        }
    }
    sig
}

fn elk(o: &Ontology, goal: &Axiom, measure: Measure, opts: &ExplainOptions) -> Result<Explanation> {
    if let Some(c) = &opts.cancel {
        c.report("justification", 0.0);
    }
    let union = justification_union(o, goal)?;
    if !is_elh(&union.ontology) {
        return Err(Error::Precondition("the justifications of this goal are not in ELH; use an elim-* method or detailed".into()));
    }
    if let Some(c) = &opts.cancel {
        c.report("saturation", 0.3);
    }
    let traced = saturate_for(&union.ontology, &goal.signature())?;
    if let Some(c) = &opts.cancel {
        c.report("extraction", 0.7);
    }
    let check = |a: &Axiom| is_entailed(o, a).unwrap_or(false);
    let mut req = ExtractionRequest::new(&traced.pool, goal.clone(), &union.ontology, measure).with_known(opts.known.clone(), &check);
    if let Some(c) = &opts.cancel {
        req = req.with_cancel(c);
    }
    let proof = extract_optimal(&req)?;
    Ok(Explanation { proof, warnings: union.warning.into_iter().collect() })
}

/// Explains `goal` from `o` with `method`. A goal that does not follow is
/// reported as [`Error::NotEntailed`].
pub fn explain(o: &Ontology, goal: &Axiom, method: Method, opts: &ExplainOptions) -> Result<Explanation> {
    if !is_entailed(o, goal)? {
        return Err(Error::NotEntailed(goal.to_unicode()));
    }
    let measure = opts.measure.unwrap_or(method.default_measure());
    let strategy = match method {
        Method::ElkSize | Method::ElkDepth => return elk(o, goal, measure, opts),
        Method::Detailed => {
            let d = DetailedOptions { measure, per_name: opts.per_name, substitute_first: false, cancel: opts.cancel.clone() };
            let out = generate_detailed_proof(o, goal, &d)?;
            return Ok(Explanation { proof: out.proof, warnings: out.warnings });
        }
        Method::ElimHeuristic => Strategy::Heuristic,
        Method::ElimNameOptimized => Strategy::NameOptimized,
        Method::ElimSizeOptimized => Strategy::SizeOptimized,
    };
    let mut task = EliminationTask::new(o.clone(), goal.clone(), strategy);
    task.measure = measure;
    task.per_name = opts.per_name;
    task.known = opts.known.clone();
    task.cancel = opts.cancel.clone();
    Ok(Explanation { proof: generate_elimination_proof(&task)?, warnings: Vec::new() })
}
