//! Signed network data model and neighbor-set conventions.
//!
//! State nodes carry an implicit self-loop (the Laplacian diagonal), input
//! nodes have exactly one out-edge into a state node. Only signs are stored;
//! magnitudes live in the numeric and symbolic layers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A node label. State and input labels live in separate spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    State(u32),
    Input(u32),
}

impl NodeId {
    pub fn is_input(self) -> bool {
        matches!(self, NodeId::Input(_))
    }

    pub fn label(self) -> u32 {
        match self {
            NodeId::State(k) | NodeId::Input(k) => k,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::State(k) => write!(f, "{k}"),
            NodeId::Input(k) => write!(f, "u{k}"),
        }
    }
}

impl std::str::FromStr for NodeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad node reference {s:?}");
        match s.strip_prefix('u') {
            Some(rest) => rest.parse().map(NodeId::Input).map_err(|_| bad()),
            None => s.parse().map(NodeId::State).map_err(|_| bad()),
        }
    }
}

impl Serialize for NodeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-", alias = "−")]
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }
}

/// One entry of the sign pattern of `T = [L, B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignEntry {
    Positive,
    Negative,
    Zero,
    Indeterminate,
}

impl fmt::Display for SignEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SignEntry::Positive => "+",
            SignEntry::Negative => "-",
            SignEntry::Zero => "0",
            SignEntry::Indeterminate => "?",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("input {0} has {1} out-edges, expected exactly one")]
    InputFanOutViolation(NodeId, usize),
    #[error("edge {0} -> {1} points into an input node")]
    InputInEdge(NodeId, NodeId),
    #[error("explicit self-edge on {0}")]
    SelfEdgeInSpec(NodeId),
    #[error("network has no state nodes")]
    NoStateNodes,
    #[error("alpha contains input node {0}")]
    AlphaContainsInputNode(NodeId),
}

/// A raw edge as written by a user. State-to-state edges are undirected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSpec {
    pub from: NodeId,
    pub to: NodeId,
    pub sign: Sign,
}

/// Unvalidated node and edge lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetworkSpec {
    pub state_nodes: Vec<u32>,
    pub input_nodes: Vec<u32>,
    pub edges: Vec<EdgeSpec>,
}

impl NetworkSpec {
    pub fn state_edge(&mut self, a: u32, b: u32, sign: Sign) -> &mut Self {
        self.edges.push(EdgeSpec { from: NodeId::State(a), to: NodeId::State(b), sign });
        self
    }

    pub fn input_edge(&mut self, u: u32, target: u32, sign: Sign) -> &mut Self {
        self.edges.push(EdgeSpec { from: NodeId::Input(u), to: NodeId::State(target), sign });
        self
    }
}

/// Undirected state edge between labels `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateEdge {
    pub a: u32,
    pub b: u32,
    pub sign: Sign,
}

impl StateEdge {
    pub fn new(a: u32, b: u32, sign: Sign) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        StateEdge { a, b, sign }
    }

    pub fn key(&self) -> (u32, u32) {
        (self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InputEdge {
    pub input: u32,
    pub target: u32,
    pub sign: Sign,
}

/// Validated, immutable signed network.
///
/// State nodes are also addressed by a dense index `0..n` in ascending label
/// order; the bitset routines work on those indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedNetwork {
    state_labels: Vec<u32>,
    index: BTreeMap<u32, usize>,
    input_edges: Vec<InputEdge>,
    edges: BTreeMap<(usize, usize), Sign>,
    adj: Vec<Vec<usize>>,
}

pub fn build_network(spec: &NetworkSpec) -> Result<SignedNetwork, GraphError> {
    if spec.state_nodes.is_empty() {
        return Err(GraphError::NoStateNodes);
    }
    let mut states = BTreeSet::new();
    for &s in &spec.state_nodes {
        if !states.insert(s) {
            return Err(GraphError::DuplicateNode(NodeId::State(s)));
        }
    }
    let mut inputs = BTreeSet::new();
    for &u in &spec.input_nodes {
        if !inputs.insert(u) {
            return Err(GraphError::DuplicateNode(NodeId::Input(u)));
        }
    }
    let known = |n: NodeId| match n {
        NodeId::State(k) => states.contains(&k),
        NodeId::Input(k) => inputs.contains(&k),
    };
    let state_labels: Vec<u32> = states.iter().copied().collect();
    let index: BTreeMap<u32, usize> =
        state_labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

    let mut edges = BTreeMap::new();
    let mut fan_out: BTreeMap<u32, Vec<InputEdge>> = inputs.iter().map(|&u| (u, vec![])).collect();
    for e in &spec.edges {
        for n in [e.from, e.to] {
            if !known(n) {
                return Err(GraphError::UnknownNode(n));
            }
        }
        if e.to.is_input() {
            return Err(GraphError::InputInEdge(e.from, e.to));
        }
        match (e.from, e.to) {
            (NodeId::State(a), NodeId::State(b)) => {
                if a == b {
                    return Err(GraphError::SelfEdgeInSpec(e.from));
                }
                let (i, j) = (index[&a], index[&b]);
                let key = (i.min(j), i.max(j));
                if edges.insert(key, e.sign).is_some() {
                    return Err(GraphError::DuplicateEdge(e.from, e.to));
                }
            }
            (NodeId::Input(u), NodeId::State(k)) => {
                let list = fan_out.get_mut(&u).expect("input checked above");
                if list.iter().any(|x| x.target == k) {
                    return Err(GraphError::DuplicateEdge(e.from, e.to));
                }
                list.push(InputEdge { input: u, target: k, sign: e.sign });
            }
            _ => unreachable!("input targets rejected above"),
        }
    }
    let mut input_edges = Vec::with_capacity(fan_out.len());
    for (u, list) in fan_out {
        if list.len() != 1 {
            return Err(GraphError::InputFanOutViolation(NodeId::Input(u), list.len()));
        }
        input_edges.push(list[0]);
    }
    let mut adj = vec![Vec::new(); state_labels.len()];
    for &(i, j) in edges.keys() {
        adj[i].push(j);
        adj[j].push(i);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(SignedNetwork { state_labels, index, input_edges, edges, adj })
}

impl SignedNetwork {
    pub fn state_count(&self) -> usize {
        self.state_labels.len()
    }

    pub fn input_count(&self) -> usize {
        self.input_edges.len()
    }

    /// State labels in ascending order (position = dense index).
    pub fn state_labels(&self) -> &[u32] {
        &self.state_labels
    }

    pub fn input_labels(&self) -> Vec<u32> {
        self.input_edges.iter().map(|e| e.input).collect()
    }

    pub fn input_edges(&self) -> &[InputEdge] {
        &self.input_edges
    }

    pub fn state_edges(&self) -> Vec<StateEdge> {
        self.edges
            .iter()
            .map(|(&(i, j), &s)| StateEdge::new(self.state_labels[i], self.state_labels[j], s))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn label_of(&self, idx: usize) -> u32 {
        self.state_labels[idx]
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node {
            NodeId::State(k) => self.index.contains_key(&k),
            NodeId::Input(k) => self.input_edges.iter().any(|e| e.input == k),
        }
    }

    /// Dense neighbor indices of a state node, ascending.
    pub fn neighbors_idx(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn degree(&self, label: u32) -> Option<usize> {
        self.index_of(label).map(|i| self.adj[i].len())
    }

    pub fn edge_sign(&self, a: u32, b: u32) -> Option<Sign> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.edges.get(&(i.min(j), i.max(j))).copied()
    }

    /// Dense `(i, j, sign)` triples with `i < j`, in lexicographic order.
    pub fn edges_idx(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        self.edges.iter().map(|(&(i, j), &s)| (i, j, s))
    }

    /// Dense indices of state nodes that receive at least one input edge.
    pub fn attached_idx(&self) -> BTreeSet<usize> {
        self.input_edges.iter().map(|e| self.index[&e.target]).collect()
    }

    pub fn spec(&self) -> NetworkSpec {
        let mut spec = NetworkSpec {
            state_nodes: self.state_labels.clone(),
            input_nodes: self.input_labels(),
            edges: vec![],
        };
        for e in self.state_edges() {
            spec.state_edge(e.a, e.b, e.sign);
        }
        for e in &self.input_edges {
            spec.input_edge(e.input, e.target, e.sign);
        }
        spec
    }

    /// Copy of the network with additional inputs attached; new input labels
    /// continue after the largest existing one.
    pub fn with_inputs(&self, targets: &[(u32, Sign)]) -> Result<SignedNetwork, GraphError> {
        let mut spec = self.spec();
        let first = spec.input_nodes.iter().copied().max().map_or(1, |m| m + 1);
        for (next, &(t, s)) in (first..).zip(targets) {
            spec.input_nodes.push(next);
            spec.input_edge(next, t, s);
        }
        build_network(&spec)
    }

    /// Copy of the network with all inputs removed.
    pub fn without_inputs(&self) -> SignedNetwork {
        let mut spec = self.spec();
        spec.input_nodes.clear();
        spec.edges.retain(|e| !e.from.is_input());
        build_network(&spec).expect("subset of a valid network")
    }

    /// Copy with one state edge's sign flipped.
    pub fn with_flipped_edge(&self, a: u32, b: u32) -> Option<SignedNetwork> {
        let sign = self.edge_sign(a, b)?;
        let mut out = self.clone();
        let (i, j) = (self.index[&a], self.index[&b]);
        out.edges.insert((i.min(j), i.max(j)), sign.flip());
        Some(out)
    }
}

/// `N_i`: the node itself, its state neighbors and the inputs feeding it.
/// Input nodes have an empty neighbor set.
pub fn in_neighbors(net: &SignedNetwork, node: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
    if !net.contains(node) {
        return Err(GraphError::UnknownNode(node));
    }
    let mut out = BTreeSet::new();
    if let NodeId::State(k) = node {
        let i = net.index[&k];
        out.insert(node);
        out.extend(net.adj[i].iter().map(|&j| NodeId::State(net.state_labels[j])));
        out.extend(
            net.input_edges.iter().filter(|e| e.target == k).map(|e| NodeId::Input(e.input)),
        );
    }
    Ok(out)
}

/// `N(alpha)`: the union of `N_j` over `j` in `alpha`.
pub fn neighborhood(
    net: &SignedNetwork,
    alpha: &BTreeSet<NodeId>,
) -> Result<BTreeSet<NodeId>, GraphError> {
    let mut out = BTreeSet::new();
    for &j in alpha {
        if j.is_input() {
            return Err(GraphError::AlphaContainsInputNode(j));
        }
        out.extend(in_neighbors(net, j)?);
    }
    Ok(out)
}

/// Every state node reachable from some input through state edges.
pub fn is_accessible(net: &SignedNetwork) -> bool {
    let mut seen = vec![false; net.state_count()];
    let mut queue: VecDeque<usize> = net.attached_idx().into_iter().collect();
    for &i in &queue {
        seen[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        for &j in &net.adj[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Sign pattern of `T = [L, B]`: `n` rows, `n + m` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<SignEntry>,
}

impl SignMatrix {
    pub fn get(&self, r: usize, c: usize) -> SignEntry {
        self.entries[r * self.cols + c]
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn sign_pattern(net: &SignedNetwork) -> SignMatrix {
    let n = net.state_count();
    let m = net.input_count();
    let cols = n + m;
    let mut entries = vec![SignEntry::Zero; n * cols];
    let mut has_pos = vec![false; n];
    let mut has_neg = vec![false; n];
    for (i, j, s) in net.edges_idx() {
        let e = match s {
            Sign::Positive => SignEntry::Positive,
            Sign::Negative => SignEntry::Negative,
        };
        entries[i * cols + j] = e;
        entries[j * cols + i] = e;
        for k in [i, j] {
            match s {
                Sign::Positive => has_pos[k] = true,
                Sign::Negative => has_neg[k] = true,
            }
        }
    }
    for i in 0..n {
        // diagonal is -(sum of signed couplings)
        entries[i * cols + i] = match (has_pos[i], has_neg[i]) {
            (false, false) => SignEntry::Zero,
            (true, false) => SignEntry::Negative,
            (false, true) => SignEntry::Positive,
            (true, true) => SignEntry::Indeterminate,
        };
    }
    for (c, e) in net.input_edges.iter().enumerate() {
        let r = net.index[&e.target];
        entries[r * cols + n + c] = match e.sign {
            Sign::Positive => SignEntry::Positive,
            Sign::Negative => SignEntry::Negative,
        };
    }
    SignMatrix { rows: n, cols, entries }
}

/// Rebuild the state edge set from the off-diagonal part of a sign pattern.
pub fn edges_from_pattern(labels: &[u32], pattern: &SignMatrix) -> Vec<StateEdge> {
    let mut out = vec![];
    for i in 0..pattern.rows {
        for j in i + 1..pattern.rows {
            let sign = match pattern.get(i, j) {
                SignEntry::Positive => Sign::Positive,
                SignEntry::Negative => Sign::Negative,
                _ => continue,
            };
            out.push(StateEdge::new(labels[i], labels[j], sign));
        }
    }
    out
}
