//! Component kinds, bridge graphs, pactus chains and the closed-form SSC
//! conditions for paths, trees and cycles.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{build_network, NetworkSpec, Sign, SignedNetwork, StateEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentKind {
    SymPath,
    SymCycle,
    PathType,
    TreeType,
    CycleType,
}

impl ComponentKind {
    /// Kind label used for the merged step views of the general algorithm.
    pub fn as_view_kind(self) -> ComponentKind {
        match self {
            ComponentKind::SymPath | ComponentKind::PathType => ComponentKind::PathType,
            ComponentKind::SymCycle | ComponentKind::CycleType => ComponentKind::CycleType,
            ComponentKind::TreeType => ComponentKind::TreeType,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComponentError {
    #[error("subgraph is empty")]
    Empty,
    #[error("subgraph is disconnected")]
    Disconnected,
    #[error("edge {0} -- {1} leaves the node set")]
    ForeignEdge(u32, u32),
    #[error("component is {found:?}, expected {expected}")]
    WrongKind { found: ComponentKind, expected: &'static str },
    #[error("expected {expected} input attachment(s), got {found}")]
    WrongInputCount { expected: &'static str, found: usize },
    #[error("attachment node {0} is not in the component")]
    UnknownAttachment(u32),
}

/// Simple undirected graph on state labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StateSubgraph {
    adj: BTreeMap<u32, BTreeSet<u32>>,
}

impl StateSubgraph {
    pub fn new(nodes: &[u32], edges: &[(u32, u32)]) -> Result<Self, ComponentError> {
        let mut adj: BTreeMap<u32, BTreeSet<u32>> =
            nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
        for &(a, b) in edges {
            if a == b || !adj.contains_key(&a) || !adj.contains_key(&b) {
                return Err(ComponentError::ForeignEdge(a, b));
            }
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        Ok(StateSubgraph { adj })
    }

    /// Subgraph of `net` induced by `nodes`.
    pub fn induced(net: &SignedNetwork, nodes: &BTreeSet<u32>) -> Self {
        let edges: Vec<(u32, u32)> = net
            .state_edges()
            .into_iter()
            .filter(|e| nodes.contains(&e.a) && nodes.contains(&e.b))
            .map(|e| (e.a, e.b))
            .collect();
        let nodes: Vec<u32> = nodes.iter().copied().collect();
        StateSubgraph::new(&nodes, &edges).expect("induced edges stay inside")
    }

    pub fn of_network(net: &SignedNetwork) -> Self {
        StateSubgraph::induced(net, &net.state_labels().iter().copied().collect())
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.adj.contains_key(&n)
    }

    pub fn neighbors(&self, n: u32) -> &BTreeSet<u32> {
        &self.adj[&n]
    }

    pub fn degree(&self, n: u32) -> usize {
        self.adj.get(&n).map_or(0, |s| s.len())
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = vec![];
        for (&a, nb) in &self.adj {
            out.extend(nb.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.adj.keys().next() else { return true };
        self.reach(start, &BTreeSet::new()).len() == self.adj.len()
    }

    /// Nodes reachable from `start` without using the edges in `cut`.
    fn reach(&self, start: u32, cut: &BTreeSet<(u32, u32)>) -> BTreeSet<u32> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for &b in &self.adj[&a] {
                if !cut.contains(&(a.min(b), a.max(b))) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen
    }
}

pub fn classify_component(g: &StateSubgraph) -> Result<ComponentKind, ComponentError> {
    if g.node_count() == 0 {
        return Err(ComponentError::Empty);
    }
    if !g.is_connected() {
        return Err(ComponentError::Disconnected);
    }
    let n = g.node_count();
    let m = g.edge_count();
    let max_deg = g.nodes().map(|v| g.degree(v)).max().unwrap_or(0);
    Ok(if m + 1 == n {
        if max_deg <= 2 {
            ComponentKind::SymPath
        } else {
            ComponentKind::TreeType
        }
    } else if m == n && n >= 3 && max_deg == 2 {
        ComponentKind::SymCycle
    } else {
        ComponentKind::CycleType
    })
}

fn check_attachments(g: &StateSubgraph, att: &BTreeSet<u32>) -> Result<(), ComponentError> {
    match att.iter().find(|&&a| !g.contains(a)) {
        Some(&a) => Err(ComponentError::UnknownAttachment(a)),
        None => Ok(()),
    }
}

/// A path with one input is SSC iff the input sits at a terminal.
pub fn check_lemma_path(g: &StateSubgraph, att: &BTreeSet<u32>) -> Result<bool, ComponentError> {
    let kind = classify_component(g)?;
    if kind != ComponentKind::SymPath {
        return Err(ComponentError::WrongKind { found: kind, expected: "a path" });
    }
    if att.len() != 1 {
        return Err(ComponentError::WrongInputCount { expected: "1", found: att.len() });
    }
    check_attachments(g, att)?;
    let a = *att.iter().next().unwrap();
    Ok(g.degree(a) <= 1)
}

/// A tree with `m >= 2` inputs is SSC iff it splits into `m` paths, each
/// holding exactly one attachment at one of its terminals.
pub fn check_lemma_tree(g: &StateSubgraph, att: &BTreeSet<u32>) -> Result<bool, ComponentError> {
    let kind = classify_component(g)?;
    if !matches!(kind, ComponentKind::SymPath | ComponentKind::TreeType) {
        return Err(ComponentError::WrongKind { found: kind, expected: "a tree" });
    }
    if att.len() < 2 {
        return Err(ComponentError::WrongInputCount { expected: "at least 2", found: att.len() });
    }
    check_attachments(g, att)?;
    Ok(tree_partition(g, att).is_some())
}

/// Search over which tree edges are cut; returns the resulting paths,
/// each listed from its attached terminal. Works for any `m >= 1`.
pub fn tree_partition(g: &StateSubgraph, att: &BTreeSet<u32>) -> Option<Vec<Vec<u32>>> {
    let edges = g.edges();
    let cuts = att.len().checked_sub(1)?;
    if cuts > edges.len() || att.iter().any(|&a| !g.contains(a)) {
        return None;
    }
    let mut pick: Vec<usize> = (0..cuts).collect();
    loop {
        let cut: BTreeSet<(u32, u32)> = pick.iter().map(|&i| edges[i]).collect();
        if let Some(paths) = paths_after_cut(g, att, &cut) {
            return Some(paths);
        }
        if !next_combination(&mut pick, edges.len()) {
            return None;
        }
    }
}

fn paths_after_cut(
    g: &StateSubgraph,
    att: &BTreeSet<u32>,
    cut: &BTreeSet<(u32, u32)>,
) -> Option<Vec<Vec<u32>>> {
    let deg = |v: u32| g.neighbors(v).iter().filter(|&&w| !cut.contains(&(v.min(w), v.max(w)))).count();
    let mut paths = vec![];
    for &a in att {
        if deg(a) > 1 {
            return None;
        }
        let part = g.reach(a, cut);
        if part.iter().filter(|v| att.contains(v)).count() != 1 {
            return None;
        }
        if part.iter().any(|&v| deg(v) > 2) {
            return None;
        }
        // walk the path from its attached end
        let mut order = vec![a];
        let mut prev = None;
        let mut cur = a;
        loop {
            let next = g.neighbors(cur).iter().copied().find(|&w| {
                Some(w) != prev && !cut.contains(&(cur.min(w), cur.max(w)))
            });
            match next {
                Some(w) => {
                    prev = Some(cur);
                    cur = w;
                    order.push(w);
                }
                None => break,
            }
        }
        paths.push(order);
    }
    // with m - 1 cuts in a tree there are exactly m parts, one per attachment
    Some(paths)
}

/// Advance `pick` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A cycle with two inputs is SSC iff the two attached nodes are adjacent.
pub fn check_lemma_cycle(g: &StateSubgraph, att: &BTreeSet<u32>) -> Result<bool, ComponentError> {
    let kind = classify_component(g)?;
    if kind != ComponentKind::SymCycle {
        return Err(ComponentError::WrongKind { found: kind, expected: "a cycle" });
    }
    if att.len() != 2 {
        return Err(ComponentError::WrongInputCount { expected: "2", found: att.len() });
    }
    check_attachments(g, att)?;
    let v: Vec<u32> = att.iter().copied().collect();
    Ok(g.neighbors(v[0]).contains(&v[1]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub nodes: Vec<u32>,
    pub edges: Vec<StateEdge>,
}

impl Component {
    pub fn subgraph(&self) -> StateSubgraph {
        let e: Vec<(u32, u32)> = self.edges.iter().map(StateEdge::key).collect();
        StateSubgraph::new(&self.nodes, &e).expect("component edges stay inside")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeGraph {
    pub component_i: usize,
    pub component_j: usize,
    pub edges: Vec<StateEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PactusDecomposition {
    pub components: Vec<Component>,
    pub bridges: Vec<BridgeGraph>,
    pub kinds: Vec<ComponentKind>,
}

impl PactusDecomposition {
    /// Derive component edges and bridges from `net` for the given chain of
    /// node sets. Structural validity is checked separately.
    pub fn from_chain(net: &SignedNetwork, chain: &[Vec<u32>]) -> PactusDecomposition {
        let mut owner = BTreeMap::new();
        for (c, nodes) in chain.iter().enumerate() {
            for &v in nodes {
                owner.insert(v, c);
            }
        }
        let mut components: Vec<Component> = chain
            .iter()
            .map(|nodes| {
                let mut nodes = nodes.clone();
                nodes.sort_unstable();
                Component { nodes, edges: vec![] }
            })
            .collect();
        let mut bridges: BTreeMap<(usize, usize), Vec<StateEdge>> = BTreeMap::new();
        for e in net.state_edges() {
            let (Some(&ca), Some(&cb)) = (owner.get(&e.a), owner.get(&e.b)) else { continue };
            if ca == cb {
                components[ca].edges.push(e);
            } else {
                bridges.entry((ca.min(cb), ca.max(cb))).or_default().push(e);
            }
        }
        let bridges = bridges
            .into_iter()
            .map(|((i, j), edges)| BridgeGraph { component_i: i, component_j: j, edges })
            .collect();
        let kinds = components
            .iter()
            .map(|c| classify_component(&c.subgraph()).unwrap_or(ComponentKind::CycleType))
            .collect();
        PactusDecomposition { components, bridges, kinds }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn bridge(&self, i: usize, j: usize) -> Option<&BridgeGraph> {
        let (i, j) = (i.min(j), i.max(j));
        self.bridges.iter().find(|b| b.component_i == i && b.component_j == j)
    }

    pub fn component_of(&self, v: u32) -> Option<usize> {
        self.components.iter().position(|c| c.nodes.contains(&v))
    }

    /// Endpoints of bridge `(i, j)` lying in component `side`.
    pub fn bridge_endpoints(&self, i: usize, j: usize, side: usize) -> BTreeSet<u32> {
        let Some(b) = self.bridge(i, j) else { return BTreeSet::new() };
        let comp = &self.components[side];
        b.edges
            .iter()
            .flat_map(|e| [e.a, e.b])
            .filter(|v| comp.nodes.contains(v))
            .collect()
    }

    /// The state network described by the chain, without inputs.
    pub fn to_network(&self) -> SignedNetwork {
        let mut spec = NetworkSpec::default();
        for c in &self.components {
            spec.state_nodes.extend(&c.nodes);
            for e in &c.edges {
                spec.state_edge(e.a, e.b, e.sign);
            }
        }
        for b in &self.bridges {
            for e in &b.edges {
                spec.state_edge(e.a, e.b, e.sign);
            }
        }
        build_network(&spec).expect("decomposition describes a valid network")
    }

    pub fn cycle_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == ComponentKind::SymCycle).count()
    }

    pub fn path_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == ComponentKind::SymPath).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

pub fn validate_decomposition(net: &SignedNetwork, dec: &PactusDecomposition) -> DecompositionCheck {
    let mut diag = vec![];
    let mut owner: BTreeMap<u32, usize> = BTreeMap::new();
    if dec.components.is_empty() {
        diag.push("no components".to_string());
    }
    if dec.kinds.len() != dec.components.len() {
        diag.push("kind list length differs from component count".to_string());
    }
    for (c, comp) in dec.components.iter().enumerate() {
        if comp.nodes.is_empty() {
            diag.push(format!("component {c} is empty"));
        }
        for &v in &comp.nodes {
            if net.index_of(v).is_none() {
                diag.push(format!("component {c} names unknown node {v}"));
            } else if let Some(prev) = owner.insert(v, c) {
                diag.push(format!("node {v} appears in components {prev} and {c}"));
            }
        }
    }
    for &v in net.state_labels() {
        if !owner.contains_key(&v) {
            diag.push(format!("node {v} is not covered by any component"));
        }
    }
    if !diag.is_empty() {
        return DecompositionCheck { valid: false, diagnostics: diag };
    }

    // every network edge is a component edge or a bridge edge, and the
    // declared edge lists agree with the network
    let mut declared: BTreeMap<(u32, u32), Sign> = BTreeMap::new();
    let mut add = |e: &StateEdge, what: String, diag: &mut Vec<String>| {
        if declared.insert(e.key(), e.sign).is_some() {
            diag.push(format!("edge {}--{} declared twice ({what})", e.a, e.b));
        }
    };
    for (c, comp) in dec.components.iter().enumerate() {
        for e in &comp.edges {
            if owner.get(&e.a) != Some(&c) || owner.get(&e.b) != Some(&c) {
                diag.push(format!("component {c} edge {}--{} leaves the component", e.a, e.b));
            }
            add(e, format!("component {c}"), &mut diag);
        }
    }
    for b in &dec.bridges {
        let (i, j) = (b.component_i, b.component_j);
        if i.abs_diff(j) != 1 || i.max(j) >= dec.components.len() {
            diag.push(format!("bridge ({i},{j}) does not join consecutive components"));
            continue;
        }
        if b.edges.is_empty() {
            diag.push(format!("bridge ({i},{j}) has no edges"));
        }
        let mut seen = BTreeSet::new();
        for e in &b.edges {
            let (ca, cb) = (owner.get(&e.a), owner.get(&e.b));
            let ok = matches!((ca, cb), (Some(&x), Some(&y)) if (x == i && y == j) || (x == j && y == i));
            if !ok {
                diag.push(format!("bridge ({i},{j}) edge {}--{} does not join the two components", e.a, e.b));
            }
            for v in [e.a, e.b] {
                if !seen.insert(v) {
                    diag.push(format!("bridge ({i},{j}) is not injective at node {v}"));
                }
            }
            add(e, format!("bridge ({i},{j})"), &mut diag);
        }
        let bound = dec.components[i].nodes.len().min(dec.components[j].nodes.len());
        if b.edges.len() > bound {
            diag.push(format!("bridge ({i},{j}) has {} edges, bound is {bound}", b.edges.len()));
        }
    }
    let actual: BTreeMap<(u32, u32), Sign> =
        net.state_edges().into_iter().map(|e| (e.key(), e.sign)).collect();
    for (k, s) in &actual {
        match declared.get(k) {
            None => diag.push(format!("network edge {}--{} is not covered", k.0, k.1)),
            Some(d) if d != s => diag.push(format!("edge {}--{} sign differs from the network", k.0, k.1)),
            _ => {}
        }
    }
    for k in declared.keys() {
        if !actual.contains_key(k) {
            diag.push(format!("declared edge {}--{} is not in the network", k.0, k.1));
        }
    }
    for i in 1..dec.components.len() {
        if dec.bridge(i - 1, i).is_none_or(|b| b.edges.is_empty()) {
            diag.push(format!("components {} and {i} are not bridged", i - 1));
        }
    }
    for (c, comp) in dec.components.iter().enumerate() {
        match classify_component(&comp.subgraph()) {
            Ok(k @ (ComponentKind::SymPath | ComponentKind::SymCycle)) => {
                if dec.kinds.get(c) != Some(&k) {
                    diag.push(format!("component {c} kind recorded incorrectly"));
                }
            }
            Ok(k) => diag.push(format!("component {c} is {k:?}, not a path or cycle")),
            Err(e) => diag.push(format!("component {c}: {e}")),
        }
    }
    DecompositionCheck { valid: diag.is_empty(), diagnostics: diag }
}

/// Default cap on explored search states in [`auto_decompose`].
pub const AUTO_DECOMPOSE_BUDGET: usize = 200_000;

/// Best-effort search for a chain of induced paths and cycles.
///
/// Preference: fewest components, then fewest bridge edges, then the lowest
/// smallest label in the first component, then lexicographic order.
pub fn auto_decompose(net: &SignedNetwork) -> Option<PactusDecomposition> {
    auto_decompose_with_budget(net, AUTO_DECOMPOSE_BUDGET)
}

pub fn auto_decompose_with_budget(net: &SignedNetwork, budget: usize) -> Option<PactusDecomposition> {
    let g = StateSubgraph::of_network(net);
    if !g.is_connected() {
        return None;
    }
    let mut search = ChainSearch { g: &g, budget, best: None };
    let all: BTreeSet<u32> = g.nodes().collect();
    for first in induced_pieces(&g, &all, &BTreeSet::new()) {
        if search.budget == 0 {
            break;
        }
        let rest: BTreeSet<u32> = all.difference(&first).copied().collect();
        search.extend(vec![first], rest, 0);
    }
    let chain: Vec<Vec<u32>> = search.best?.1.into_iter().map(|s| s.into_iter().collect()).collect();
    let dec = PactusDecomposition::from_chain(net, &chain);
    validate_decomposition(net, &dec).valid.then_some(dec)
}

type ChainKey = (usize, usize, u32, Vec<Vec<u32>>);

struct ChainSearch<'a> {
    g: &'a StateSubgraph,
    budget: usize,
    best: Option<(ChainKey, Vec<BTreeSet<u32>>)>,
}

impl ChainSearch<'_> {
    fn extend(&mut self, chain: Vec<BTreeSet<u32>>, rest: BTreeSet<u32>, bridge_edges: usize) {
        if self.budget == 0 {
            return;
        }
        self.budget -= 1;
        if let Some((key, _)) = &self.best {
            if chain.len() > key.0 || (chain.len() == key.0 && bridge_edges > key.1) {
                return;
            }
        }
        let last = chain.last().unwrap();
        let frontier: BTreeSet<u32> = last
            .iter()
            .flat_map(|&v| self.g.neighbors(v).iter().copied())
            .filter(|v| rest.contains(v))
            .collect();
        if rest.is_empty() {
            let key: ChainKey = (
                chain.len(),
                bridge_edges,
                *chain[0].iter().next().unwrap(),
                chain.iter().map(|s| s.iter().copied().collect()).collect(),
            );
            if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
                self.best = Some((key, chain));
            }
            return;
        }
        if frontier.is_empty() {
            return;
        }
        for next in induced_pieces(self.g, &rest, &frontier) {
            let Some(count) = injective_bridge(self.g, last, &next) else { continue };
            let remaining: BTreeSet<u32> = rest.difference(&next).copied().collect();
            let mut chain2 = chain.clone();
            chain2.push(next);
            self.extend(chain2, remaining, bridge_edges + count);
        }
    }
}

/// Number of edges between `a` and `b` if they form an injective bridge.
fn injective_bridge(g: &StateSubgraph, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Option<usize> {
    let mut used = BTreeSet::new();
    let mut count = 0;
    for &v in a {
        for &w in g.neighbors(v) {
            if b.contains(&w) {
                if !used.insert(v) || !used.insert(w) {
                    return None;
                }
                count += 1;
            }
        }
    }
    Some(count)
}

/// Node sets inside `pool` that induce a path or a chordless cycle in `g`
/// and contain every node of `must`.
fn induced_pieces(g: &StateSubgraph, pool: &BTreeSet<u32>, must: &BTreeSet<u32>) -> Vec<BTreeSet<u32>> {
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    for &start in pool {
        let mut path = vec![start];
        grow_paths(g, pool, &mut path, &mut found);
    }
    let mut out: Vec<BTreeSet<u32>> = found
        .into_iter()
        .map(|v| v.into_iter().collect::<BTreeSet<u32>>())
        .filter(|s| must.is_subset(s))
        .collect();
    out.sort_by_key(|s| std::cmp::Reverse(s.len()));
    out.dedup();
    out
}

fn grow_paths(g: &StateSubgraph, pool: &BTreeSet<u32>, path: &mut Vec<u32>, found: &mut BTreeSet<Vec<u32>>) {
    let mut key = path.clone();
    key.sort_unstable();
    found.insert(key);
    let end = *path.last().unwrap();
    for &w in g.neighbors(end) {
        if !pool.contains(&w) || path.contains(&w) {
            continue;
        }
        // w may touch only `end`, or also the start when it closes a cycle
        let touches: Vec<usize> =
            (0..path.len() - 1).filter(|&i| g.neighbors(w).contains(&path[i])).collect();
        if touches.is_empty() {
            path.push(w);
            grow_paths(g, pool, path, found);
            path.pop();
        } else if touches == [0] && path.len() >= 2 {
            let mut key = path.clone();
            key.push(w);
            key.sort_unstable();
            found.insert(key);
        }
    }
}
