use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::dl::{parse_unicode_axiom, Axiom, Concept};
use crate::error::{Error, Result};

use super::{measure_proof, Measure, Proof, Step, Vertex};

#[derive(Serialize)]
struct JsonProof<'a> {
    goal: String,
    vertices: Vec<JsonVertex>,
    steps: Vec<JsonStep<'a>>,
    root: usize,
    measures: JsonMeasures,
    suboptimal: bool,
}

#[derive(Serialize)]
struct JsonVertex {
    id: usize,
    axiom: String,
    asserted: bool,
    known: bool,
}

#[derive(Serialize)]
struct JsonStep<'a> {
    conclusion: usize,
    premises: &'a [usize],
    rule: &'a str,
    eliminated: &'a [String],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonMeasures {
    size: u64,
    depth: u64,
    weighted_size: u64,
}

pub fn write_json(p: &Proof) -> String {
    let doc = JsonProof {
        goal: p.goal.to_unicode(),
        vertices: p
            .vertices
            .iter()
            .map(|v| JsonVertex { id: v.id, axiom: v.axiom.to_unicode(), asserted: v.asserted, known: v.known })
            .collect(),
        steps: p
            .steps
            .iter()
            .map(|s| JsonStep { conclusion: s.conclusion, premises: &s.premises, rule: &s.rule, eliminated: &s.eliminated })
            .collect(),
        root: p.root,
        measures: JsonMeasures {
            size: measure_proof(p, &Measure::Size),
            depth: measure_proof(p, &Measure::Depth),
            weighted_size: measure_proof(p, &Measure::WeightedSize),
        },
        suboptimal: p.suboptimal,
    };
    serde_json::to_string(&doc).expect("proof serialization cannot fail")
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.into(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, base: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{base}/{key}"), "missing field"))
}

fn as_obj<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(ptr, "expected an object"))
}

fn as_uint(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(ptr, "expected a non-negative integer"))
}

fn as_bool(v: &Value, ptr: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| schema(ptr, "expected a boolean"))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(ptr, "expected a string"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn collect_roles(c: &Concept, roles: &mut BTreeSet<String>) {
    let mut sig = crate::dl::Signature::new();
    c.collect_signature(&mut sig);
    roles.extend(sig.roles);
}

/// Parses every axiom string, deciding which bare `X ⊑ Y` forms are role
/// inclusions by iterating until the set of role names is stable.
fn parse_axioms(texts: &[(String, &str)]) -> Result<Vec<Axiom>> {
    let mut roles = BTreeSet::new();
    loop {
        let mut parsed = Vec::with_capacity(texts.len());
        for (ptr, t) in texts {
            let a = parse_unicode_axiom(t, &roles).map_err(|e| schema(ptr.clone(), format!("bad axiom: {e}")))?;
            parsed.push(a);
        }
        let mut next = roles.clone();
        for a in &parsed {
            match a {
                Axiom::RoleInclusion(r, s) => {
                    next.insert(r.0.clone());
                    next.insert(s.0.clone());
                }
                Axiom::Gci(l, r) | Axiom::Equiv(l, r) => {
                    collect_roles(l, &mut next);
                    collect_roles(r, &mut next);
                }
            }
        }
        if next == roles {
            return Ok(parsed);
        }
        roles = next;
    }
}

pub fn read_json(text: &str) -> Result<Proof> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let top = as_obj(&doc, "")?;
    let goal_text = as_str(field(top, "", "goal")?, "/goal")?;
    let vs = as_array(field(top, "", "vertices")?, "/vertices")?;
    let ss = as_array(field(top, "", "steps")?, "/steps")?;
    let root = as_uint(field(top, "", "root")?, "/root")?;
    let suboptimal = as_bool(field(top, "", "suboptimal")?, "/suboptimal")?;
    let measures = as_obj(field(top, "", "measures")?, "/measures")?;
    for key in ["size", "depth", "weightedSize"] {
        as_uint(field(measures, "/measures", key)?, &format!("/measures/{key}"))?;
    }

    let mut texts = vec![("/goal".to_string(), goal_text)];
    let mut flags = Vec::with_capacity(vs.len());
    for (i, v) in vs.iter().enumerate() {
        let base = format!("/vertices/{i}");
        let o = as_obj(v, &base)?;
        let id = as_uint(field(o, &base, "id")?, &format!("{base}/id"))?;
        if id != i {
            return Err(schema(format!("{base}/id"), format!("expected id {i}")));
        }
        texts.push((format!("{base}/axiom"), as_str(field(o, &base, "axiom")?, &format!("{base}/axiom"))?));
        let asserted = as_bool(field(o, &base, "asserted")?, &format!("{base}/asserted"))?;
        let known = as_bool(field(o, &base, "known")?, &format!("{base}/known"))?;
        flags.push((asserted, known));
    }
    let mut axioms = parse_axioms(&texts)?.into_iter();
    let goal = axioms.next().unwrap();
    let vertices: Vec<Vertex> =
        axioms.zip(flags).enumerate().map(|(id, (axiom, (asserted, known)))| Vertex { id, axiom, asserted, known }).collect();

    let n = vertices.len();
    let vref = |v: &Value, ptr: String| -> Result<usize> {
        let x = as_uint(v, &ptr)?;
        if x >= n {
            return Err(schema(ptr, format!("vertex {x} does not exist")));
        }
        Ok(x)
    };
    if root >= n {
        return Err(schema("/root", format!("vertex {root} does not exist")));
    }
    let mut steps = Vec::with_capacity(ss.len());
    for (i, s) in ss.iter().enumerate() {
        let base = format!("/steps/{i}");
        let o = as_obj(s, &base)?;
        let conclusion = vref(field(o, &base, "conclusion")?, format!("{base}/conclusion"))?;
        let mut premises = Vec::new();
        for (j, q) in as_array(field(o, &base, "premises")?, &format!("{base}/premises"))?.iter().enumerate() {
            premises.push(vref(q, format!("{base}/premises/{j}"))?);
        }
        let rule = as_str(field(o, &base, "rule")?, &format!("{base}/rule"))?.to_string();
        let mut eliminated = Vec::new();
        for (j, e) in as_array(field(o, &base, "eliminated")?, &format!("{base}/eliminated"))?.iter().enumerate() {
            eliminated.push(as_str(e, &format!("{base}/eliminated/{j}"))?.to_string());
        }
        steps.push(Step { conclusion, premises, rule, eliminated });
    }
    Ok(Proof { goal, vertices, steps, root, suboptimal })
}
