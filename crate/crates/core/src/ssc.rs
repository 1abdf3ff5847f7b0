//! Dedicated/sharing classification and the subset-enumeration SSC test.
//!
//! Subsets are bitmasks over the ground set: the state nodes in scope that
//! are not fed by an input. A subset `alpha` fails when no node outside it has
//! exactly one neighbor inside it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{in_neighbors, is_accessible, neighborhood, GraphError, NodeId, SignedNetwork};

pub const DEFAULT_MAX_GROUND: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeClass {
    Dedicated,
    Sharing,
    NotAdjacent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SscError {
    #[error("network is not accessible from its inputs")]
    NotAccessible,
    #[error("ground set has {size} nodes, cap is {cap}")]
    GroundSetTooLarge { size: usize, cap: usize },
    #[error("node {0} lies inside alpha")]
    NodeInsideAlpha(NodeId),
    #[error("alpha is empty")]
    EmptyAlpha,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SscReport {
    pub is_ssc: bool,
    pub witness_alpha: Option<BTreeSet<NodeId>>,
    pub alphas_checked: u64,
    pub ssc_state_nodes: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SscOptions {
    /// Refuse ground sets larger than this (at most 63).
    pub max_ground: usize,
    /// Skip subsets touching input-fed nodes. Turning this off enumerates
    /// every subset of the scope and is only useful for cross-checks.
    pub prune: bool,
}

impl Default for SscOptions {
    fn default() -> Self {
        SscOptions { max_ground: DEFAULT_MAX_GROUND, prune: true }
    }
}

pub fn classify_node(
    net: &SignedNetwork,
    node: NodeId,
    alpha: &BTreeSet<NodeId>,
) -> Result<NodeClass, SscError> {
    if alpha.is_empty() {
        return Err(SscError::EmptyAlpha);
    }
    if alpha.contains(&node) {
        return Err(SscError::NodeInsideAlpha(node));
    }
    let around = neighborhood(net, alpha)?;
    if !net.contains(node) {
        return Err(GraphError::UnknownNode(node).into());
    }
    if !around.contains(&node) {
        return Ok(NodeClass::NotAdjacent);
    }
    let hits = in_neighbors(net, node)?.intersection(alpha).count();
    Ok(if hits <= 1 { NodeClass::Dedicated } else { NodeClass::Sharing })
}

/// Whether `N(alpha) \ alpha` has a dedicated node; inputs are reported
/// first, then the lowest state label.
pub fn has_dedicated(
    net: &SignedNetwork,
    alpha: &BTreeSet<NodeId>,
) -> Result<(bool, Option<NodeId>), SscError> {
    if alpha.is_empty() {
        return Err(SscError::EmptyAlpha);
    }
    let around = neighborhood(net, alpha)?;
    let mut candidates: Vec<NodeId> = around.difference(alpha).copied().collect();
    candidates.sort_by_key(|n| (!n.is_input(), n.label()));
    for node in candidates {
        if classify_node(net, node, alpha)? == NodeClass::Dedicated {
            return Ok((true, Some(node)));
        }
    }
    Ok((false, None))
}

pub fn check_ssc(net: &SignedNetwork) -> Result<SscReport, SscError> {
    check_ssc_with(net, &SscOptions::default())
}

pub fn check_ssc_with(net: &SignedNetwork, opts: &SscOptions) -> Result<SscReport, SscError> {
    if !is_accessible(net) {
        return Err(SscError::NotAccessible);
    }
    let engine = Engine::new(net, &BTreeSet::new(), opts)?;
    Ok(engine.report())
}

/// The SSC state nodes; no accessibility requirement.
pub fn ssc_state_nodes(net: &SignedNetwork) -> Result<BTreeSet<NodeId>, SscError> {
    let engine = Engine::new(net, &BTreeSet::new(), &SscOptions::default())?;
    Ok(engine.report().ssc_state_nodes)
}

/// SSC test on a component view: the state nodes listed in `virtual_inputs`
/// are removed from the scope and act as inputs to their neighbors.
pub fn check_ssc_with_virtual_inputs(
    net: &SignedNetwork,
    virtual_inputs: &BTreeSet<NodeId>,
) -> Result<SscReport, SscError> {
    check_ssc_with_virtual_inputs_opts(net, virtual_inputs, &SscOptions::default())
}

pub fn check_ssc_with_virtual_inputs_opts(
    net: &SignedNetwork,
    virtual_inputs: &BTreeSet<NodeId>,
    opts: &SscOptions,
) -> Result<SscReport, SscError> {
    let mut virt = BTreeSet::new();
    for &v in virtual_inputs {
        match v {
            NodeId::State(k) => match net.index_of(k) {
                Some(i) => {
                    virt.insert(i);
                }
                None => return Err(GraphError::UnknownNode(v).into()),
            },
            NodeId::Input(_) => return Err(GraphError::AlphaContainsInputNode(v).into()),
        }
    }
    let engine = Engine::new(net, &virt, opts)?;
    if !engine.accessible(net) {
        return Err(SscError::NotAccessible);
    }
    Ok(engine.report())
}

/// Fast yes/no SSC decision used by search loops. `extra` lists dense
/// indices that receive additional inputs.
pub(crate) fn is_ssc_fast(net: &SignedNetwork, extra: &[usize]) -> bool {
    let n = net.state_count();
    let mut attached = vec![false; n];
    for i in net.attached_idx() {
        attached[i] = true;
    }
    for &i in extra {
        attached[i] = true;
    }
    let ground: Vec<usize> = (0..n).filter(|&i| !attached[i]).collect();
    if ground.len() > 63 {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (p, &i) in ground.iter().enumerate() {
        pos[i] = p;
    }
    let masks: Vec<u64> = (0..n)
        .map(|v| {
            net.neighbors_idx(v)
                .iter()
                .filter(|&&j| pos[j] != usize::MAX)
                .fold(0u64, |m, &j| m | 1 << pos[j])
        })
        .collect();
    let self_bit: Vec<u64> =
        (0..n).map(|v| if pos[v] == usize::MAX { 0 } else { 1 << pos[v] }).collect();
    let total = 1u64 << ground.len();
    (1..total).all(|alpha| {
        (0..n).any(|v| self_bit[v] & alpha == 0 && (masks[v] & alpha).count_ones() == 1)
    })
}

struct Engine {
    /// Labels of ground positions.
    ground_labels: Vec<u32>,
    /// Per scope node: ground-position mask of its neighbors.
    nbr: Vec<u64>,
    /// Per scope node: its own ground bit (0 when not in the ground set).
    own: Vec<u64>,
    /// Ground positions fed by an input (only when not pruning).
    fed: u64,
    scope: Vec<usize>,
    scope_labels: BTreeSet<NodeId>,
    prune: bool,
}

impl Engine {
    fn new(
        net: &SignedNetwork,
        virt: &BTreeSet<usize>,
        opts: &SscOptions,
    ) -> Result<Engine, SscError> {
        let n = net.state_count();
        let scope: Vec<usize> = (0..n).filter(|i| !virt.contains(i)).collect();
        let mut fed = vec![false; n];
        for i in net.attached_idx() {
            fed[i] = true;
        }
        for &v in virt {
            for &j in net.neighbors_idx(v) {
                fed[j] = true;
            }
        }
        let ground: Vec<usize> =
            scope.iter().copied().filter(|&i| !(opts.prune && fed[i])).collect();
        let cap = opts.max_ground.min(63);
        if ground.len() > cap {
            return Err(SscError::GroundSetTooLarge { size: ground.len(), cap });
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &i) in ground.iter().enumerate() {
            pos[i] = p;
        }
        let nbr = scope
            .iter()
            .map(|&v| {
                net.neighbors_idx(v)
                    .iter()
                    .filter(|&&j| pos[j] != usize::MAX)
                    .fold(0u64, |m, &j| m | 1 << pos[j])
            })
            .collect();
        let own = scope.iter().map(|&v| if pos[v] == usize::MAX { 0 } else { 1 << pos[v] }).collect();
        let fed_mask = ground
            .iter()
            .enumerate()
            .filter(|(_, &i)| fed[i])
            .fold(0u64, |m, (p, _)| m | 1 << p);
        Ok(Engine {
            ground_labels: ground.iter().map(|&i| net.label_of(i)).collect(),
            nbr,
            own,
            fed: fed_mask,
            scope_labels: scope.iter().map(|&i| NodeId::State(net.label_of(i))).collect(),
            scope,
            prune: opts.prune,
        })
    }

    fn accessible(&self, net: &SignedNetwork) -> bool {
        let n = net.state_count();
        let in_scope: Vec<bool> = {
            let mut v = vec![false; n];
            for &i in &self.scope {
                v[i] = true;
            }
            v
        };
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut seeds: BTreeSet<usize> = net.attached_idx();
        for (i, &inside) in in_scope.iter().enumerate() {
            if !inside {
                seeds.extend(net.neighbors_idx(i).iter().copied());
            }
        }
        for i in seeds {
            if in_scope[i] && !seen[i] {
                seen[i] = true;
                stack.push(i);
            }
        }
        while let Some(i) = stack.pop() {
            for &j in net.neighbors_idx(i) {
                if in_scope[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        self.scope.iter().all(|&i| seen[i])
    }

    fn fails(&self, alpha: u64) -> bool {
        if !self.prune && alpha & self.fed != 0 {
            return false;
        }
        !self
            .nbr
            .iter()
            .zip(&self.own)
            .any(|(&m, &o)| o & alpha == 0 && (m & alpha).count_ones() == 1)
    }

    fn report(&self) -> SscReport {
        let g = self.ground_labels.len();
        let total = 1u64 << g;
        const CHUNK: u64 = 1 << 14;
        let chunks = total.div_ceil(CHUNK);
        let (witness, union) = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = (c * CHUNK).max(1);
                let hi = ((c + 1) * CHUNK).min(total);
                let mut best: Option<u64> = None;
                let mut union = 0u64;
                for alpha in lo..hi {
                    if self.fails(alpha) {
                        union |= alpha;
                        best = Some(match best {
                            Some(b) if !precedes(alpha, b) => b,
                            _ => alpha,
                        });
                    }
                }
                (best, union)
            })
            .reduce(
                || (None, 0),
                |(a, ua), (b, ub)| {
                    let best = match (a, b) {
                        (Some(x), Some(y)) => Some(if precedes(x, y) { x } else { y }),
                        (x, None) => x,
                        (None, y) => y,
                    };
                    (best, ua | ub)
                },
            );
        let labels = |mask: u64| -> BTreeSet<NodeId> {
            (0..g).filter(|p| mask >> p & 1 == 1).map(|p| NodeId::State(self.ground_labels[p])).collect()
        };
        let bad = labels(union);
        SscReport {
            is_ssc: witness.is_none(),
            witness_alpha: witness.map(labels),
            alphas_checked: total - 1,
            ssc_state_nodes: self.scope_labels.difference(&bad).copied().collect(),
        }
    }
}

/// Order by cardinality, then lexicographically on sorted positions.
fn precedes(a: u64, b: u64) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca < cb;
    }
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) != 0
}
