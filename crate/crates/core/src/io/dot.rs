//! Graphviz export.
//!
//! State edges are undirected, input edges carry `dir=forward`, every edge is
//! labelled with its sign. SSC state nodes are filled green, witness nodes get
//! a red outline and placed input targets are drawn double-circled.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::graph::{NodeId, SignedNetwork};
use crate::placement::PlacementResult;
use crate::ssc::SscReport;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DotAnnotations {
    pub ssc_nodes: BTreeSet<u32>,
    pub witness: BTreeSet<u32>,
    pub placed: BTreeSet<u32>,
}

impl DotAnnotations {
    pub fn from_report(r: &SscReport) -> Self {
        let states = |s: &BTreeSet<NodeId>| s.iter().filter(|n| !n.is_input()).map(|n| n.label()).collect();
        DotAnnotations {
            ssc_nodes: states(&r.ssc_state_nodes),
            witness: r.witness_alpha.as_ref().map(states).unwrap_or_default(),
            placed: BTreeSet::new(),
        }
    }

    pub fn from_placement(p: &PlacementResult) -> Self {
        DotAnnotations { placed: p.targets().into_iter().collect(), ..Default::default() }
    }
}

pub fn export_dot(net: &SignedNetwork, annotations: Option<&DotAnnotations>) -> String {
    let empty = DotAnnotations::default();
    let ann = annotations.unwrap_or(&empty);
    let mut out = String::from("graph network {\n  node [shape=circle];\n");
    for &v in net.state_labels() {
        let mut attrs = vec![];
        if ann.ssc_nodes.contains(&v) {
            attrs.push("style=filled, fillcolor=palegreen".to_string());
        }
        if ann.witness.contains(&v) {
            attrs.push("color=red, penwidth=2".to_string());
        }
        if ann.placed.contains(&v) {
            attrs.push("shape=doublecircle".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{v}\";");
        } else {
            let _ = writeln!(out, "  \"{v}\" [{}];", attrs.join(", "));
        }
    }
    for u in net.input_labels() {
        let _ = writeln!(out, "  \"u{u}\" [shape=box];");
    }
    for e in net.state_edges() {
        let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"{}\"];", e.a, e.b, e.sign.symbol());
    }
    for e in net.input_edges() {
        let _ = writeln!(out, "  \"u{}\" -- \"{}\" [dir=forward, label=\"{}\"];", e.input, e.target, e.sign.symbol());
    }
    out.push_str("}\n");
    out
}
