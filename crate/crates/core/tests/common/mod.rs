//! Random network generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sscnet::graph::{build_network, NetworkSpec, Sign, SignedNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Path,
    Cycle,
    Tree,
    General,
}

pub fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// State edges on labels `1..=n` for the given shape, with labels shuffled.
pub fn shape_edges<R: Rng>(rng: &mut R, shape: Shape, n: u32) -> Vec<(u32, u32)> {
    let mut order: Vec<u32> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(u32, u32)> = match shape {
        Shape::Path | Shape::Cycle => order.windows(2).map(|w| (w[0], w[1])).collect(),
        Shape::Tree | Shape::General => (1..order.len()).map(|k| (order[rng.gen_range(0..k)], order[k])).collect(),
    };
    if shape == Shape::Cycle && n >= 3 {
        edges.push((order[0], order[n as usize - 1]));
    }
    if shape == Shape::General {
        for a in 1..=n {
            for b in a + 1..=n {
                let present = edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b));
                if !present && rng.gen_bool(0.25) {
                    edges.push((a, b));
                }
            }
        }
    }
    edges
}

/// Network with random signs on `edges` and one input per entry of `targets`.
pub fn signed_network<R: Rng>(rng: &mut R, n: u32, edges: &[(u32, u32)], targets: &[u32]) -> SignedNetwork {
    let mut spec = NetworkSpec { state_nodes: (1..=n).collect(), ..Default::default() };
    for &(a, b) in edges {
        let s = random_sign(rng);
        spec.state_edge(a, b, s);
    }
    for (k, &t) in targets.iter().enumerate() {
        let u = k as u32 + 1;
        spec.input_nodes.push(u);
        spec.input_edge(u, t, Sign::Positive);
    }
    build_network(&spec).expect("generated network is valid")
}

/// Distinct random targets in `1..=n`.
pub fn random_targets<R: Rng>(rng: &mut R, n: u32, k: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (1..=n).collect();
    all.shuffle(rng);
    all.truncate(k.min(n as usize));
    all.sort_unstable();
    all
}

/// One corpus entry: a shape with the input count its closed-form rule
/// expects (paths one, cycles two, trees two or three, general graphs one to
/// three).
pub fn corpus_entry<R: Rng>(rng: &mut R, max_nodes: u32) -> (Shape, SignedNetwork) {
    let shape = [Shape::Path, Shape::Cycle, Shape::Tree, Shape::General][rng.gen_range(0..4)];
    let lo = if shape == Shape::Cycle { 3 } else { 2 };
    let n = rng.gen_range(lo..=max_nodes);
    let k = match shape {
        Shape::Path => 1,
        Shape::Cycle => 2,
        Shape::Tree => rng.gen_range(2..=3),
        Shape::General => rng.gen_range(1..=3),
    };
    let edges = shape_edges(rng, shape, n);
    let targets = random_targets(rng, n, k);
    (shape, signed_network(rng, n, &edges, &targets))
}
