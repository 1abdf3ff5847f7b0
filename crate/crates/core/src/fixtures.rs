//! Reference networks used throughout the examples and tests.
//!
//! All edges are positive unless stated; input labels are numbered from 1 in
//! the order the targets are given.

use crate::components::PactusDecomposition;
use crate::graph::{build_network, NetworkSpec, Sign, SignedNetwork};

/// Network from node labels, positive state edges and input targets.
pub fn network(nodes: &[u32], edges: &[(u32, u32)], inputs: &[u32]) -> SignedNetwork {
    let mut spec = NetworkSpec { state_nodes: nodes.to_vec(), ..Default::default() };
    for &(a, b) in edges {
        spec.state_edge(a, b, Sign::Positive);
    }
    for (k, &t) in inputs.iter().enumerate() {
        let u = k as u32 + 1;
        spec.input_nodes.push(u);
        spec.input_edge(u, t, Sign::Positive);
    }
    build_network(&spec).expect("fixture is valid")
}

pub fn path(labels: &[u32], inputs: &[u32]) -> SignedNetwork {
    let edges: Vec<(u32, u32)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    network(labels, &edges, inputs)
}

pub fn cycle(labels: &[u32], inputs: &[u32]) -> SignedNetwork {
    let mut edges: Vec<(u32, u32)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    edges.push((labels[labels.len() - 1], labels[0]));
    network(labels, &edges, inputs)
}

/// 4-cycle 1-2-3-4 with inputs feeding nodes 2 and 3.
pub fn square_two_inputs() -> SignedNetwork {
    network(&[1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (1, 4)], &[2, 3])
}

/// Path 1-2-3-4 driven at terminal 4.
pub fn path4_terminal_input() -> SignedNetwork {
    path(&[1, 2, 3, 4], &[4])
}

/// Path 1-2-3-4 driven at interior node 3.
pub fn path4_interior_input() -> SignedNetwork {
    path(&[1, 2, 3, 4], &[3])
}

pub const TREE5_EDGES: [(u32, u32); 4] = [(1, 2), (2, 3), (2, 4), (4, 5)];

/// Tree on 1..5 driven at leaves 3 and 5.
pub fn tree5_leaf_inputs() -> SignedNetwork {
    network(&[1, 2, 3, 4, 5], &TREE5_EDGES, &[3, 5])
}

/// Same tree driven at 4 and 5.
pub fn tree5_adjacent_inputs() -> SignedNetwork {
    network(&[1, 2, 3, 4, 5], &TREE5_EDGES, &[4, 5])
}

/// 4-cycle driven at adjacent nodes 2 and 3.
pub fn cycle4_adjacent_inputs() -> SignedNetwork {
    cycle(&[1, 2, 3, 4], &[2, 3])
}

/// 4-cycle driven at opposite nodes 1 and 3.
pub fn cycle4_opposite_inputs() -> SignedNetwork {
    cycle(&[1, 2, 3, 4], &[1, 3])
}

const SINGLE_BRIDGE_EDGES: [(u32, u32); 18] = [
    (1, 2), (2, 3),
    (3, 4),
    (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (4, 9),
    (9, 12),
    (10, 11), (11, 12), (10, 12),
    (11, 16),
    (13, 14), (14, 15), (15, 16), (13, 16),
];

const SINGLE_BRIDGE_CHAIN: [&[u32]; 4] = [&[1, 2, 3], &[4, 5, 6, 7, 8, 9], &[10, 11, 12], &[13, 14, 15, 16]];

fn nodes16() -> Vec<u32> {
    (1..=16).collect()
}

/// Path, 6-cycle, triangle and 4-cycle joined by single bridge edges.
pub fn single_bridge_chain() -> (SignedNetwork, PactusDecomposition) {
    let net = network(&nodes16(), &SINGLE_BRIDGE_EDGES, &[]);
    let chain: Vec<Vec<u32>> = SINGLE_BRIDGE_CHAIN.iter().map(|c| c.to_vec()).collect();
    let dec = PactusDecomposition::from_chain(&net, &chain);
    (net, dec)
}

/// The single-bridge chain with its minimum input placement {1, 5, 10, 13}.
pub fn single_bridge_chain_placed() -> SignedNetwork {
    network(&nodes16(), &SINGLE_BRIDGE_EDGES, &[1, 5, 10, 13])
}

const TWO_BRIDGE_EDGES: [(u32, u32); 10] =
    [(1, 2), (2, 3), (2, 6), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (4, 9)];

/// Path 1-2-3 joined to the 6-cycle 4..9 by bridges 2-6 and 3-4, driven at
/// 1 and 3.
pub fn two_bridge_pair() -> SignedNetwork {
    network(&(1..=9).collect::<Vec<_>>(), &TWO_BRIDGE_EDGES, &[1, 3])
}

/// The 6-cycle of [`two_bridge_pair`] together with the two path nodes that
/// feed it (2 and 3), for use as virtual inputs. `inputs` are real inputs.
pub fn two_bridge_cycle_view(inputs: &[u32]) -> SignedNetwork {
    let edges = [(2, 6), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (4, 9)];
    network(&[2, 3, 4, 5, 6, 7, 8, 9], &edges, inputs)
}

const MIXED_BRIDGE_EDGES: [(u32, u32); 20] = [
    (1, 2), (2, 3),
    (2, 6), (3, 4),
    (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (4, 9),
    (4, 10), (9, 12),
    (10, 11), (11, 12), (10, 12),
    (12, 13),
    (13, 14), (14, 15), (15, 16), (13, 16),
];

/// Path, 6-cycle, triangle and 4-cycle where the first two joins use two
/// bridge edges each: {2-6, 3-4}, {4-10, 9-12}, {12-13}.
pub fn mixed_bridge_chain() -> (SignedNetwork, PactusDecomposition) {
    let net = network(&nodes16(), &MIXED_BRIDGE_EDGES, &[]);
    let chain: Vec<Vec<u32>> = SINGLE_BRIDGE_CHAIN.iter().map(|c| c.to_vec()).collect();
    let dec = PactusDecomposition::from_chain(&net, &chain);
    (net, dec)
}

/// The mixed-bridge chain driven at {1, 3, 7, 14}.
pub fn mixed_bridge_chain_placed() -> SignedNetwork {
    network(&nodes16(), &MIXED_BRIDGE_EDGES, &[1, 3, 7, 14])
}

/// Path 1-2-3 driven at the middle node.
pub fn path3_middle_input() -> SignedNetwork {
    path(&[1, 2, 3], &[2])
}
