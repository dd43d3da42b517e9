use std::fmt::Write;

use super::Proof;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: rounded axiom nodes, rectangular step nodes,
/// edges premise → step → conclusion.
pub fn write_dot(p: &Proof) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");
    for v in &p.vertices {
        let style = if v.asserted { "rounded,bold" } else if v.known { "rounded,dashed" } else { "rounded" };
        let _ = writeln!(out, "  v{} [label=\"{}\", shape=box, style=\"{}\"];", v.id, escape(&v.axiom.to_unicode()), style);
    }
    for (i, s) in p.steps.iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label=\"{}\", shape=rectangle, style=filled, fillcolor=\"#e0e0e0\"];", escape(&s.rule));
        for q in &s.premises {
            let _ = writeln!(out, "  v{q} -> s{i};");
        }
        let _ = writeln!(out, "  s{i} -> v{};", s.conclusion);
    }
    out.push_str("}\n");
    out
}
