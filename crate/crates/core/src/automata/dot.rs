//! Graphviz rendering.

use super::Automaton;
use std::fmt::Write;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders `a` in DOT syntax; `label` prints a payload (empty to omit).
pub fn to_dot<W: Clone, F: Fn(&W) -> String>(a: &Automaton<W>, label: F) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in a.finals() {
        let _ = writeln!(out, "  q{q} [shape=doublecircle];");
    }
    for (i, &q) in a.initial().iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];\n  init{i} -> q{q};");
    }
    for t in a.transitions() {
        let w = label(&t.weight);
        let text = if w.is_empty() {
            a.alphabet().name(t.letter).to_string()
        } else {
            format!("{} / {}", a.alphabet().name(t.letter), w)
        };
        let _ = writeln!(out, "  q{} -> q{} [label=\"{}\"];", t.from, t.to, escape(&text));
    }
    out.push_str("}\n");
    out
}
