//! Deterministic text serializations of translation quivers.

use std::fmt::{Display, Write};

use crate::translation_quiver::{QuiverJson, TranslationQuiver, VertexId};

fn sorted_arrows<V: VertexId>(g: &TranslationQuiver<V>) -> Vec<(V, V)> {
    let mut arrows: Vec<(V, V)> = g
        .quiver()
        .arrows()
        .map(|(s, t)| (s.clone(), t.clone()))
        .collect();
    arrows.sort();
    arrows
}

fn sorted_tau<V: VertexId>(g: &TranslationQuiver<V>) -> Vec<(V, V)> {
    let mut tau: Vec<(V, V)> = g.tau_pairs().map(|(f, t)| (f.clone(), t.clone())).collect();
    tau.sort();
    tau
}

/// Graphviz digraph. Arrows are solid; `tau x = y` is drawn as a dotted
/// edge `x -> y` that does not constrain the layout.
pub fn to_dot<V: VertexId + Display>(g: &TranslationQuiver<V>, name: &str) -> String {
    let mut vertices = g.vertices().to_vec();
    vertices.sort();
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for v in &vertices {
        writeln!(out, "  \"{v}\";").unwrap();
    }
    for (s, t) in sorted_arrows(g) {
        writeln!(out, "  \"{s}\" -> \"{t}\";").unwrap();
    }
    for (f, t) in sorted_tau(g) {
        writeln!(
            out,
            "  \"{f}\" -> \"{t}\" [style=dotted, constraint=false];"
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn to_json<V: VertexId + serde::Serialize>(g: &TranslationQuiver<V>) -> String {
    let mut s =
        serde_json::to_string_pretty(&QuiverJson::from_quiver(g)).expect("quiver JSON serializes");
    s.push('\n');
    s
}

/// One `kind,src,tgt` row per arrow and per tau pair.
pub fn to_csv<V: VertexId + Display>(g: &TranslationQuiver<V>) -> String {
    let mut out = String::from("kind,src,tgt\n");
    for (s, t) in sorted_arrows(g) {
        writeln!(out, "arrow,\"{s}\",\"{t}\"").unwrap();
    }
    for (f, t) in sorted_tau(g) {
        writeln!(out, "tau,\"{f}\",\"{t}\"").unwrap();
    }
    out
}

pub fn to_text<V: VertexId + Display>(g: &TranslationQuiver<V>) -> String {
    let mut out = String::new();
    writeln!(out, "vertices: {}", g.vertex_count()).unwrap();
    writeln!(out, "arrows: {}", g.arrow_count()).unwrap();
    for (s, t) in sorted_arrows(g) {
        writeln!(out, "{s} -> {t}").unwrap();
    }
    for (f, t) in sorted_tau(g) {
        writeln!(out, "tau {f} = {t}").unwrap();
    }
    out
}

/// 0/1 matrix with a header row of labels.
pub fn matrix_csv<L: Display>(labels: &[L], m: &[Vec<bool>]) -> String {
    let mut out = String::from("object");
    for l in labels {
        write!(out, ",{l}").unwrap();
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(m) {
        write!(out, "{l}").unwrap();
        for &b in row {
            write!(out, ",{}", u8::from(b)).unwrap();
        }
        out.push('\n');
    }
    out
}
