//! Minimum external input placement on path/cycle chains.
//!
//! Both algorithms walk the chain once. At step `i` the component is viewed
//! together with the far endpoints of the bridge to `i + 1`; the near
//! endpoints of the bridge from `i - 1` act as virtual inputs (the component
//! input nodes).

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::components::{
    classify_component, next_combination, tree_partition, validate_decomposition, ComponentKind,
    PactusDecomposition, StateSubgraph,
};
use crate::graph::{build_network, NetworkSpec, NodeId, Sign, SignedNetwork};
use crate::ssc::{check_ssc, check_ssc_with_virtual_inputs, is_ssc_fast, SscError, SscReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("not a valid chain decomposition: {}", .0.join("; "))]
    NotAPactus(Vec<String>),
    #[error("bridge ({i},{j}) has {count} edges; single bridges required")]
    BridgeMultiplicity { i: usize, j: usize, count: usize },
    #[error("path component {0} forms a tree together with its bridges")]
    PreconditionTreeJoin(usize),
    #[error("no input set makes step {0} SSC")]
    NoFeasiblePlacement(usize),
    #[error("prefix up to component {0} is not SSC")]
    PredecessorNotSsc(usize),
    #[error("assembled network is not SSC")]
    AssembledNotSsc,
    #[error("search needs {needed} subset checks, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Ssc(#[from] SscError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub input: u32,
    pub target: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub m: usize,
    pub p: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementResult {
    pub attachments: Vec<Attachment>,
    /// Component input nodes per step (empty for the first component).
    pub component_inputs: Vec<BTreeSet<u32>>,
    /// Targets added at each step.
    pub per_step_added: Vec<Vec<u32>>,
    pub counts: Counts,
    pub per_step_kind: Vec<ComponentKind>,
    pub per_step_ssc_nodes: Vec<BTreeSet<u32>>,
    /// Component-processing iterations performed.
    pub iterations: usize,
}

impl PlacementResult {
    pub fn targets(&self) -> Vec<u32> {
        self.attachments.iter().map(|a| a.target).collect()
    }

    /// The chain's network with the placed inputs attached.
    pub fn assemble(&self, dec: &PactusDecomposition) -> SignedNetwork {
        let targets: Vec<(u32, Sign)> = self.targets().into_iter().map(|t| (t, Sign::Positive)).collect();
        dec.to_network().with_inputs(&targets).expect("targets belong to the chain")
    }
}

fn view_nodes(dec: &PactusDecomposition, i: usize) -> BTreeSet<u32> {
    let mut nodes: BTreeSet<u32> = dec.components[i].nodes.iter().copied().collect();
    if i + 1 < dec.len() {
        nodes.extend(dec.bridge_endpoints(i, i + 1, i + 1));
    }
    nodes
}

/// Component `i` plus the outgoing bridge, as a plain subgraph.
pub fn step_subgraph(dec: &PactusDecomposition, i: usize) -> StateSubgraph {
    let nodes: Vec<u32> = view_nodes(dec, i).into_iter().collect();
    let mut edges: Vec<(u32, u32)> = dec.components[i].edges.iter().map(|e| e.key()).collect();
    if let Some(b) = dec.bridge(i, i + 1) {
        edges.extend(b.edges.iter().map(|e| e.key()));
    }
    StateSubgraph::new(&nodes, &edges).expect("view edges stay inside")
}

/// The step view as a network: component `i`, the far endpoints of the
/// outgoing bridge, and the component input nodes `ic` joined by the
/// incoming bridge. Real inputs feed `targets`.
pub fn step_view(dec: &PactusDecomposition, i: usize, ic: &BTreeSet<u32>, targets: &[u32]) -> SignedNetwork {
    let mut spec = NetworkSpec::default();
    let mut nodes = view_nodes(dec, i);
    nodes.extend(ic);
    spec.state_nodes = nodes.iter().copied().collect();
    for e in &dec.components[i].edges {
        spec.state_edge(e.a, e.b, e.sign);
    }
    if let Some(b) = dec.bridge(i, i + 1) {
        for e in &b.edges {
            spec.state_edge(e.a, e.b, e.sign);
        }
    }
    if i > 0 {
        if let Some(b) = dec.bridge(i - 1, i) {
            for e in b.edges.iter().filter(|e| ic.contains(&e.a) || ic.contains(&e.b)) {
                spec.state_edge(e.a, e.b, e.sign);
            }
        }
    }
    for (k, &t) in targets.iter().enumerate() {
        spec.input_nodes.push(k as u32 + 1);
        spec.input_edge(k as u32 + 1, t, Sign::Positive);
    }
    build_network(&spec).expect("view of a valid decomposition")
}

fn view_report(
    dec: &PactusDecomposition,
    i: usize,
    ic: &BTreeSet<u32>,
    targets: &[u32],
) -> Result<Option<SscReport>, PlacementError> {
    let view = step_view(dec, i, ic, targets);
    let virt: BTreeSet<NodeId> = ic.iter().map(|&k| NodeId::State(k)).collect();
    match check_ssc_with_virtual_inputs(&view, &virt) {
        Ok(r) if r.is_ssc => Ok(Some(r)),
        Ok(_) | Err(SscError::NotAccessible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Component input nodes of component `i`: the endpoints on the `i - 1`
/// side of the incoming bridge. Requires the prefix `0..i` together with
/// that bridge to be SSC under the inputs already in `net_so_far`.
pub fn component_input_nodes(
    dec: &PactusDecomposition,
    net_so_far: &SignedNetwork,
    i: usize,
) -> Result<BTreeSet<u32>, PlacementError> {
    if i == 0 {
        return Ok(BTreeSet::new());
    }
    let mut spec = NetworkSpec::default();
    let mut prefix: BTreeSet<u32> = BTreeSet::new();
    for c in &dec.components[..i] {
        prefix.extend(&c.nodes);
        for e in &c.edges {
            spec.state_edge(e.a, e.b, e.sign);
        }
    }
    for k in 0..i {
        if let Some(b) = dec.bridge(k, k + 1) {
            for e in &b.edges {
                spec.state_edge(e.a, e.b, e.sign);
            }
        }
    }
    let mut nodes = prefix.clone();
    nodes.extend(dec.bridge_endpoints(i - 1, i, i));
    spec.state_nodes = nodes.into_iter().collect();
    for e in net_so_far.input_edges().iter().filter(|e| prefix.contains(&e.target)) {
        spec.input_nodes.push(e.input);
        spec.input_edge(e.input, e.target, e.sign);
    }
    let net = build_network(&spec).map_err(|e| PlacementError::NotAPactus(vec![e.to_string()]))?;
    match check_ssc(&net) {
        Ok(r) if r.is_ssc => Ok(dec.bridge_endpoints(i - 1, i, i - 1)),
        Ok(_) | Err(SscError::NotAccessible) => Err(PlacementError::PredecessorNotSsc(i)),
        Err(e) => Err(e.into()),
    }
}

fn ensure_valid(dec: &PactusDecomposition) -> Result<SignedNetwork, PlacementError> {
    if dec.is_empty() {
        return Err(PlacementError::NotAPactus(vec!["no components".into()]));
    }
    let net = dec.to_network();
    let chk = validate_decomposition(&net, dec);
    if !chk.valid {
        return Err(PlacementError::NotAPactus(chk.diagnostics));
    }
    Ok(net)
}

/// Nodes of component `i` fed by a component input node.
fn fed_by(dec: &PactusDecomposition, i: usize, ic: &BTreeSet<u32>) -> BTreeSet<u32> {
    let Some(b) = (i > 0).then(|| dec.bridge(i - 1, i)).flatten() else { return BTreeSet::new() };
    b.edges
        .iter()
        .filter_map(|e| {
            if ic.contains(&e.a) {
                Some(e.b)
            } else if ic.contains(&e.b) {
                Some(e.a)
            } else {
                None
            }
        })
        .collect()
}

struct Walk {
    net: SignedNetwork,
    result: PlacementResult,
}

impl Walk {
    fn new(net: SignedNetwork, m: usize) -> Walk {
        Walk {
            net,
            result: PlacementResult {
                attachments: vec![],
                component_inputs: vec![],
                per_step_added: vec![],
                counts: Counts { m, p: 0, c: 0 },
                per_step_kind: vec![],
                per_step_ssc_nodes: vec![],
                iterations: 0,
            },
        }
    }

    fn record(&mut self, ic: BTreeSet<u32>, kind: ComponentKind, added: Vec<u32>, report: SscReport) {
        let r = &mut self.result;
        for &t in &added {
            r.attachments.push(Attachment { input: r.attachments.len() as u32 + 1, target: t });
        }
        let targets: Vec<(u32, Sign)> = added.iter().map(|&t| (t, Sign::Positive)).collect();
        self.net = self.net.with_inputs(&targets).expect("targets are state nodes");
        r.component_inputs.push(ic);
        r.per_step_added.push(added);
        r.per_step_kind.push(kind);
        r.per_step_ssc_nodes.push(report.ssc_state_nodes.iter().map(|n| n.label()).collect());
        r.iterations += 1;
    }

    fn finish(self) -> Result<PlacementResult, PlacementError> {
        let r = self.result;
        assert_eq!(r.counts.m, r.counts.p + r.counts.c, "every component is a path or a cycle");
        match check_ssc(&self.net) {
            Ok(rep) if rep.is_ssc => Ok(r),
            Ok(_) | Err(SscError::NotAccessible) => Err(PlacementError::AssembledNotSsc),
            Err(e) => Err(e.into()),
        }
    }
}

/// Placement for chains with single bridge edges and no tree-shaped joins.
/// Yields one input per cycle plus one.
pub fn algorithm1(dec: &PactusDecomposition) -> Result<PlacementResult, PlacementError> {
    let net = ensure_valid(dec)?;
    for b in &dec.bridges {
        if b.edges.len() != 1 {
            return Err(PlacementError::BridgeMultiplicity {
                i: b.component_i,
                j: b.component_j,
                count: b.edges.len(),
            });
        }
    }
    for (i, kind) in dec.kinds.iter().enumerate() {
        if *kind == ComponentKind::SymPath {
            let g = step_subgraph(dec, i);
            let mut deg_in: Vec<usize> = g.nodes().map(|v| g.degree(v)).collect();
            if i > 0 {
                for v in dec.bridge_endpoints(i - 1, i, i) {
                    let pos = g.nodes().position(|w| w == v).unwrap();
                    deg_in[pos] += 1;
                }
            }
            if deg_in.iter().any(|&d| d > 2) {
                return Err(PlacementError::PreconditionTreeJoin(i));
            }
        }
    }

    let mut walk = Walk::new(net.clone(), dec.len());
    for i in 0..dec.len() {
        let ic = component_input_nodes(dec, &walk.net, i)?;
        let kind = dec.kinds[i];
        let g = dec.components[i].subgraph();
        let candidates: Vec<Vec<u32>> = match (kind, i) {
            (ComponentKind::SymPath, 0) => g.nodes().filter(|&v| g.degree(v) <= 1).map(|v| vec![v]).collect(),
            (ComponentKind::SymPath, _) => vec![vec![]],
            (_, 0) => g.edges().into_iter().map(|(a, b)| vec![a, b]).collect(),
            _ => {
                let fed = fed_by(dec, i, &ic);
                let near: BTreeSet<u32> = fed
                    .iter()
                    .flat_map(|&v| g.neighbors(v).iter().copied())
                    .filter(|v| !fed.contains(v))
                    .collect();
                near.into_iter().map(|v| vec![v]).collect()
            }
        };
        match kind {
            ComponentKind::SymPath => walk.result.counts.p += 1,
            _ => walk.result.counts.c += 1,
        }
        let mut chosen = None;
        for cand in candidates {
            if let Some(rep) = view_report(dec, i, &ic, &cand)? {
                chosen = Some((cand, rep));
                break;
            }
        }
        let Some((added, rep)) = chosen else {
            return Err(if kind == ComponentKind::SymPath && i > 0 {
                PlacementError::PreconditionTreeJoin(i)
            } else {
                PlacementError::NoFeasiblePlacement(i)
            });
        };
        walk.record(ic, kind, added, rep);
    }
    walk.finish()
}

/// Placement for general chains: at each step add the fewest inputs that
/// make the step view SSC, lowest labels first.
pub fn algorithm2(dec: &PactusDecomposition) -> Result<PlacementResult, PlacementError> {
    let net = ensure_valid(dec)?;
    let mut walk = Walk::new(net, dec.len());
    for i in 0..dec.len() {
        let ic = component_input_nodes(dec, &walk.net, i)?;
        let g = step_subgraph(dec, i);
        let kind = classify_component(&g).expect("views are connected").as_view_kind();
        match dec.kinds[i] {
            ComponentKind::SymPath => walk.result.counts.p += 1,
            _ => walk.result.counts.c += 1,
        }
        let fed = fed_by(dec, i, &ic);
        let acyclic = kind != ComponentKind::CycleType;
        let pool: Vec<u32> = dec.components[i].nodes.iter().copied().filter(|v| !fed.contains(v)).collect();

        let mut chosen = None;
        'search: for k in 0..=pool.len() {
            let mut pick: Vec<usize> = (0..k).collect();
            loop {
                let cand: Vec<u32> = pick.iter().map(|&p| pool[p]).collect();
                let lemma_ok = acyclic && {
                    let mut att = fed.clone();
                    att.extend(&cand);
                    tree_partition(&g, &att).is_some()
                };
                if !acyclic || lemma_ok {
                    let rep = view_report(dec, i, &ic, &cand)?;
                    debug_assert!(!acyclic || rep.is_some(), "path/tree rule disagrees with enumeration");
                    if let Some(rep) = rep {
                        chosen = Some((cand, rep));
                        break 'search;
                    }
                }
                if !next_combination(&mut pick, pool.len()) {
                    break;
                }
            }
        }
        let Some((added, rep)) = chosen else {
            return Err(PlacementError::NoFeasiblePlacement(i));
        };
        walk.record(ic, kind, added, rep);
    }
    walk.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinInputs {
    pub count: usize,
    pub targets: Vec<u32>,
}

pub const DEFAULT_MIN_INPUTS_BUDGET: u128 = 1 << 32;

pub fn exhaustive_min_inputs(
    net: &SignedNetwork,
    max_inputs: usize,
) -> Result<Option<MinInputs>, PlacementError> {
    exhaustive_min_inputs_with_budget(net, max_inputs, DEFAULT_MIN_INPUTS_BUDGET)
}

/// Smallest number of inputs (at most `max_inputs`) that makes the state
/// graph of `net` SSC; existing inputs are ignored. Each level `k` is charged
/// `C(n, k) * 2^n` subset checks against `budget` before it runs.
pub fn exhaustive_min_inputs_with_budget(
    net: &SignedNetwork,
    max_inputs: usize,
    budget: u128,
) -> Result<Option<MinInputs>, PlacementError> {
    let bare = net.without_inputs();
    let n = bare.state_count();
    let mut spent: u128 = 0;
    for k in 1..=max_inputs.min(n) {
        let level = binomial(n, k).saturating_mul(1u128.checked_shl(n as u32).unwrap_or(u128::MAX));
        spent = spent.saturating_add(level);
        if spent > budget {
            return Err(PlacementError::BudgetExceeded { needed: spent, budget });
        }
        let mut combos = vec![];
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            combos.push(pick.clone());
            if !next_combination(&mut pick, n) {
                break;
            }
        }
        if let Some(best) = combos.par_iter().find_first(|c| is_ssc_fast(&bare, c)) {
            let targets = best.iter().map(|&i| bare.label_of(i)).collect();
            return Ok(Some(MinInputs { count: k, targets }));
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn single_bridge_chain_algorithm1() {
        let (_, dec) = fixtures::single_bridge_chain();
        let r = algorithm1(&dec).unwrap();
        assert_eq!(r.targets(), vec![1, 5, 10, 13]);
        assert_eq!(r.counts, Counts { m: 4, p: 1, c: 3 });
        assert_eq!(r.iterations, 4);
        assert!(check_ssc(&r.assemble(&dec)).unwrap().is_ssc);
        let covered: BTreeSet<u32> = r.per_step_ssc_nodes.iter().flatten().copied().collect();
        assert_eq!(covered, (1..=16).collect());
    }

    #[test]
    fn single_bridge_chain_algorithm2_matches_count() {
        let (_, dec) = fixtures::single_bridge_chain();
        let r = algorithm2(&dec).unwrap();
        assert_eq!(r.attachments.len(), 4);
        assert_eq!(r.iterations, 4);
    }

    #[test]
    fn mixed_chain_walkthrough() {
        let (_, dec) = fixtures::mixed_bridge_chain();
        let r = algorithm2(&dec).unwrap();
        assert_eq!(r.per_step_added, vec![vec![1, 3], vec![5], vec![], vec![14]]);
        assert_eq!(r.component_inputs, vec![set(&[]), set(&[2, 3]), set(&[4, 9]), set(&[12])]);
        assert_eq!(
            r.per_step_kind,
            vec![ComponentKind::TreeType, ComponentKind::CycleType, ComponentKind::CycleType, ComponentKind::CycleType]
        );
        assert_eq!(r.per_step_ssc_nodes[0], set(&[1, 2, 3, 4, 6]));
        assert_eq!(r.per_step_ssc_nodes[1], set(&[4, 5, 6, 7, 8, 9, 10, 12]));
        assert_eq!(r.per_step_ssc_nodes[2], set(&[10, 11, 12, 13]));
        assert_eq!(r.per_step_ssc_nodes[3], set(&[13, 14, 15, 16]));
        assert_eq!(r.iterations, 4);
        // node 7 works as well as the canonical 5
        assert!(view_report(&dec, 1, &set(&[2, 3]), &[7]).unwrap().is_some());
    }

    #[test]
    fn mixed_chain_rejected_by_algorithm1() {
        let (_, dec) = fixtures::mixed_bridge_chain();
        assert!(matches!(algorithm1(&dec), Err(PlacementError::BridgeMultiplicity { i: 0, j: 1, count: 2 })));
    }

    #[test]
    fn component_inputs_follow_prefix() {
        let (_, dec) = fixtures::mixed_bridge_chain();
        let full = dec.to_network().with_inputs(&[(1, Sign::Positive), (3, Sign::Positive)]).unwrap();
        assert_eq!(component_input_nodes(&dec, &full, 1).unwrap(), set(&[2, 3]));
        assert_eq!(component_input_nodes(&dec, &full, 0).unwrap(), set(&[]));
        let bare = dec.to_network().with_inputs(&[(1, Sign::Positive)]).unwrap();
        assert_eq!(component_input_nodes(&dec, &bare, 1), Err(PlacementError::PredecessorNotSsc(1)));
    }

    #[test]
    fn single_components() {
        let net = fixtures::path(&[1, 2, 3], &[]);
        let dec = PactusDecomposition::from_chain(&net, &[vec![1, 2, 3]]);
        assert_eq!(algorithm1(&dec).unwrap().targets(), vec![1]);
        let net = fixtures::cycle(&[1, 2, 3, 4, 5], &[]);
        let dec = PactusDecomposition::from_chain(&net, &[vec![1, 2, 3, 4, 5]]);
        let r = algorithm1(&dec).unwrap();
        assert_eq!(r.targets(), vec![1, 2]);
        assert_eq!(algorithm2(&dec).unwrap().targets(), vec![1, 2]);
        let net = fixtures::path(&[7], &[]);
        let dec = PactusDecomposition::from_chain(&net, &[vec![7]]);
        assert_eq!(algorithm2(&dec).unwrap().targets(), vec![7]);
    }

    #[test]
    fn path_hanging_off_interior_is_a_tree_join() {
        // path 1-2-3, bridge 2-4, path 4-5
        let net = fixtures::network(&[1, 2, 3, 4, 5], &[(1, 2), (2, 3), (2, 4), (4, 5)], &[]);
        let dec = PactusDecomposition::from_chain(&net, &[vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(algorithm1(&dec), Err(PlacementError::PreconditionTreeJoin(0)));
        assert_eq!(algorithm2(&dec).unwrap().attachments.len(), 2);
    }

    #[test]
    fn exhaustive_small_cases() {
        let r = exhaustive_min_inputs(&fixtures::cycle(&[1, 2, 3, 4], &[]), 4).unwrap().unwrap();
        assert_eq!(r, MinInputs { count: 2, targets: vec![1, 2] });
        let r = exhaustive_min_inputs(&fixtures::path(&[1, 2, 3, 4, 5], &[]), 3).unwrap().unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(exhaustive_min_inputs(&fixtures::cycle(&[1, 2, 3, 4], &[]), 1).unwrap(), None);
        let err = exhaustive_min_inputs_with_budget(&fixtures::cycle(&[1, 2, 3, 4], &[]), 4, 10);
        assert!(matches!(err, Err(PlacementError::BudgetExceeded { .. })));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 4), 1820);
        assert_eq!(binomial(5, 0), 1);
    }
}
