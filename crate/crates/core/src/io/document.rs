//! JSON network documents.
//!
//! ```json
//! {
//!   "version": "1",
//!   "state_nodes": [1, 2, 3],
//!   "input_nodes": [1],
//!   "state_edges": [{"a": 1, "b": 2, "sign": "+"}, {"a": 2, "b": 3, "sign": "-"}],
//!   "input_edges": [{"input": 1, "target": 2, "sign": "+"}],
//!   "decomposition": {"components": [[1, 2], [3]], "bridges": [{"i": 0, "j": 1, "edges": [[2, 3]]}]}
//! }
//! ```
//!
//! Node references are plain integers or strings; `"u4"` names input 4 and
//! is rejected wherever a state node is expected. Component indices in the
//! decomposition are 0-based. `bridges` may be omitted and is then derived
//! from the chain.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::components::{validate_decomposition, PactusDecomposition};
use crate::graph::{build_network, GraphError, NetworkSpec, NodeId, Sign, SignedNetwork};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeRef {
    Int(u32),
    Text(String),
}

impl NodeRef {
    fn resolve(&self) -> Result<NodeId, String> {
        match self {
            NodeRef::Int(k) => Ok(NodeId::State(*k)),
            NodeRef::Text(s) => s.parse(),
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Int(k) => write!(f, "{k}"),
            NodeRef::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEdgeDoc {
    pub a: NodeRef,
    pub b: NodeRef,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEdgeDoc {
    pub input: NodeRef,
    pub target: NodeRef,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeDoc {
    pub i: usize,
    pub j: usize,
    pub edges: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub components: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridges: Option<Vec<BridgeDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub version: String,
    pub state_nodes: Vec<u32>,
    #[serde(default)]
    pub input_nodes: Vec<u32>,
    #[serde(default)]
    pub state_edges: Vec<StateEdgeDoc>,
    #[serde(default)]
    pub input_edges: Vec<InputEdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationKind {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Schema(String),
    #[error("invalid decomposition: {}", .0.join("; "))]
    Decomposition(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document at `{path}`: {kind}")]
    Validation { path: String, kind: ValidationKind },
}

fn invalid(path: impl Into<String>, kind: impl Into<ValidationKind>) -> ParseError {
    ParseError::Validation { path: path.into(), kind: kind.into() }
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> ParseError {
    invalid(path, ValidationKind::Schema(msg.into()))
}

/// Parses and validates a document.
pub fn parse_network(text: &str) -> Result<(SignedNetwork, Option<PactusDecomposition>), ParseError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let doc: NetworkDocument = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;
    doc.to_network()
}

/// Pretty-printed document for a network and optional decomposition.
pub fn serialize_network(net: &SignedNetwork, dec: Option<&PactusDecomposition>) -> String {
    serde_json::to_string_pretty(&NetworkDocument::from_network(net, dec)).expect("document serializes")
}

impl NetworkDocument {
    pub fn from_network(net: &SignedNetwork, dec: Option<&PactusDecomposition>) -> Self {
        NetworkDocument {
            version: FORMAT_VERSION.to_string(),
            state_nodes: net.state_labels().to_vec(),
            input_nodes: net.input_labels(),
            state_edges: net
                .state_edges()
                .iter()
                .map(|e| StateEdgeDoc { a: NodeRef::Int(e.a), b: NodeRef::Int(e.b), sign: e.sign })
                .collect(),
            input_edges: net
                .input_edges()
                .iter()
                .map(|e| InputEdgeDoc { input: NodeRef::Int(e.input), target: NodeRef::Int(e.target), sign: e.sign })
                .collect(),
            decomposition: dec.map(|d| DecompositionDoc {
                components: d.components.iter().map(|c| c.nodes.clone()).collect(),
                bridges: Some(
                    d.bridges
                        .iter()
                        .map(|b| BridgeDoc {
                            i: b.component_i,
                            j: b.component_j,
                            edges: b.edges.iter().map(|e| (e.a, e.b)).collect(),
                        })
                        .collect(),
                ),
            }),
        }
    }

    /// Validates the document, reporting the first problem with its field path.
    pub fn to_network(&self) -> Result<(SignedNetwork, Option<PactusDecomposition>), ParseError> {
        if self.version != FORMAT_VERSION {
            return Err(schema("version", format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", self.version)));
        }
        if self.state_nodes.is_empty() {
            return Err(invalid("state_nodes", GraphError::NoStateNodes));
        }
        let mut states = BTreeSet::new();
        for (k, &s) in self.state_nodes.iter().enumerate() {
            if !states.insert(s) {
                return Err(invalid(format!("state_nodes[{k}]"), GraphError::DuplicateNode(NodeId::State(s))));
            }
        }
        let mut inputs = BTreeSet::new();
        for (k, &u) in self.input_nodes.iter().enumerate() {
            if !inputs.insert(u) {
                return Err(invalid(format!("input_nodes[{k}]"), GraphError::DuplicateNode(NodeId::Input(u))));
            }
        }
        let mut spec = NetworkSpec { state_nodes: self.state_nodes.clone(), input_nodes: self.input_nodes.clone(), edges: vec![] };
        let mut seen = BTreeSet::new();
        for (k, e) in self.state_edges.iter().enumerate() {
            let mut ends = [0u32; 2];
            for (slot, (field, r)) in [("a", &e.a), ("b", &e.b)].into_iter().enumerate() {
                let path = format!("state_edges[{k}].{field}");
                let id = r.resolve().map_err(|m| schema(&path, m))?;
                match id {
                    NodeId::Input(_) => {
                        return Err(invalid(path, GraphError::InputInEdge(other_end(e, slot), id)));
                    }
                    NodeId::State(s) if !states.contains(&s) => return Err(invalid(path, GraphError::UnknownNode(id))),
                    NodeId::State(s) => ends[slot] = s,
                }
            }
            if ends[0] == ends[1] {
                return Err(invalid(format!("state_edges[{k}]"), GraphError::SelfEdgeInSpec(NodeId::State(ends[0]))));
            }
            if !seen.insert((ends[0].min(ends[1]), ends[0].max(ends[1]))) {
                return Err(invalid(
                    format!("state_edges[{k}]"),
                    GraphError::DuplicateEdge(NodeId::State(ends[0]), NodeId::State(ends[1])),
                ));
            }
            spec.state_edge(ends[0], ends[1], e.sign);
        }
        let mut fan = std::collections::BTreeMap::new();
        for (k, e) in self.input_edges.iter().enumerate() {
            let path = format!("input_edges[{k}].input");
            let u = match e.input.resolve().map_err(|m| schema(&path, m))? {
                NodeId::Input(u) | NodeId::State(u) => u,
            };
            if !inputs.contains(&u) {
                return Err(invalid(path, GraphError::UnknownNode(NodeId::Input(u))));
            }
            let path = format!("input_edges[{k}].target");
            let t = match e.target.resolve().map_err(|m| schema(&path, m))? {
                id @ NodeId::Input(_) => return Err(invalid(path, GraphError::InputInEdge(NodeId::Input(u), id))),
                NodeId::State(t) if !states.contains(&t) => {
                    return Err(invalid(path, GraphError::UnknownNode(NodeId::State(t))));
                }
                NodeId::State(t) => t,
            };
            *fan.entry(u).or_insert(0usize) += 1;
            spec.input_edge(u, t, e.sign);
        }
        for (k, &u) in self.input_nodes.iter().enumerate() {
            let count = fan.get(&u).copied().unwrap_or(0);
            if count != 1 {
                return Err(invalid(format!("input_nodes[{k}]"), GraphError::InputFanOutViolation(NodeId::Input(u), count)));
            }
        }
        let net = build_network(&spec).map_err(|e| invalid("", e))?;
        let dec = match &self.decomposition {
            None => None,
            Some(d) => Some(self.decomposition_of(&net, d)?),
        };
        Ok((net, dec))
    }

    fn decomposition_of(&self, net: &SignedNetwork, d: &DecompositionDoc) -> Result<PactusDecomposition, ParseError> {
        for (c, comp) in d.components.iter().enumerate() {
            for (k, &v) in comp.iter().enumerate() {
                if net.index_of(v).is_none() {
                    return Err(invalid(
                        format!("decomposition.components[{c}][{k}]"),
                        GraphError::UnknownNode(NodeId::State(v)),
                    ));
                }
            }
        }
        let dec = PactusDecomposition::from_chain(net, &d.components);
        if let Some(bridges) = &d.bridges {
            for (k, b) in bridges.iter().enumerate() {
                let path = format!("decomposition.bridges[{k}]");
                let derived = dec.bridge(b.i, b.j).ok_or_else(|| {
                    schema(&path, format!("no edges join components {} and {}", b.i, b.j))
                })?;
                let want: BTreeSet<(u32, u32)> = b.edges.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
                let have: BTreeSet<(u32, u32)> = derived.edges.iter().map(|e| e.key()).collect();
                if want != have {
                    return Err(schema(path, format!("edges {want:?} differ from the network's {have:?}")));
                }
            }
            if bridges.len() != dec.bridges.len() {
                return Err(schema("decomposition.bridges", format!("{} bridges listed, network has {}", bridges.len(), dec.bridges.len())));
            }
        }
        let check = validate_decomposition(net, &dec);
        if !check.valid {
            return Err(invalid("decomposition", ValidationKind::Decomposition(check.diagnostics)));
        }
        Ok(dec)
    }
}

fn other_end(e: &StateEdgeDoc, slot: usize) -> NodeId {
    let r = if slot == 0 { &e.b } else { &e.a };
    r.resolve().unwrap_or(NodeId::State(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        for net in [fixtures::square_two_inputs(), fixtures::tree5_leaf_inputs(), fixtures::mixed_bridge_chain_placed()] {
            let text = serialize_network(&net, None);
            let (back, dec) = parse_network(&text).unwrap();
            assert_eq!(back, net);
            assert!(dec.is_none());
        }
        let (net, dec) = fixtures::single_bridge_chain();
        let (back, d2) = parse_network(&serialize_network(&net, Some(&dec))).unwrap();
        assert_eq!(back, net);
        assert_eq!(d2, Some(dec));
    }

    #[test]
    fn negative_sign_and_string_refs() {
        let text = r#"{"version":"1","state_nodes":[1,2],"input_nodes":[1],
            "state_edges":[{"a":"1","b":2,"sign":"-"}],
            "input_edges":[{"input":"u1","target":2,"sign":"+"}]}"#;
        let (net, _) = parse_network(text).unwrap();
        assert_eq!(net.edge_sign(1, 2), Some(Sign::Negative));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_network("{\n  \"version\": \"1\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn validation_paths() {
        let cases = [
            (r#"{"version":"1","state_nodes":[]}"#, "state_nodes"),
            (r#"{"version":"1","state_nodes":[1,2],"state_edges":[{"a":1,"b":3,"sign":"+"}]}"#, "state_edges[0].b"),
            (r#"{"version":"1","state_nodes":[1,2],"input_nodes":[1],"state_edges":[{"a":"u1","b":2,"sign":"+"}],"input_edges":[{"input":1,"target":2,"sign":"+"}]}"#, "state_edges[0].a"),
            (r#"{"version":"1","state_nodes":[1],"input_nodes":[1,2],"input_edges":[{"input":1,"target":1,"sign":"+"},{"input":2,"target":"u1","sign":"+"}]}"#, "input_edges[1].target"),
            (r#"{"version":"1","state_nodes":[1],"input_nodes":[1]}"#, "input_nodes[0]"),
            (r#"{"version":"2","state_nodes":[1]}"#, "version"),
            (r#"{"version":"1","state_nodes":[1],"state_edges":[{"a":1,"b":1,"sign":"*"}]}"#, "state_edges[0].sign"),
            (r#"{"state_nodes":[1]}"#, "."),
        ];
        for (text, want) in cases {
            match parse_network(text) {
                Err(ParseError::Validation { path, .. }) => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn input_into_input_is_typed() {
        let text = r#"{"version":"1","state_nodes":[1],"input_nodes":[1,2],"input_edges":[{"input":1,"target":1,"sign":"+"},{"input":2,"target":"u1","sign":"+"}]}"#;
        let Err(ParseError::Validation { kind, .. }) = parse_network(text) else { panic!() };
        assert_eq!(kind, ValidationKind::Graph(GraphError::InputInEdge(NodeId::Input(2), NodeId::Input(1))));
    }

    #[test]
    fn decomposition_checks() {
        let (net, _) = fixtures::single_bridge_chain();
        let mut doc = NetworkDocument::from_network(&net, None);
        doc.decomposition = Some(DecompositionDoc { components: vec![(1..=16).collect()], bridges: None });
        assert!(matches!(
            doc.to_network(),
            Err(ParseError::Validation { kind: ValidationKind::Decomposition(_), .. })
        ));
        doc.decomposition = Some(DecompositionDoc {
            components: vec![vec![1, 2, 3], vec![4, 5, 6, 7, 8, 9], vec![10, 11, 12], vec![13, 14, 15, 16]],
            bridges: Some(vec![BridgeDoc { i: 0, j: 1, edges: vec![(2, 4)] }]),
        });
        let Err(ParseError::Validation { path, .. }) = doc.to_network() else { panic!() };
        assert_eq!(path, "decomposition.bridges[0]");
    }
}
