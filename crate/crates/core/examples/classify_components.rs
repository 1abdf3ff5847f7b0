//! Component kinds, the closed-form path/tree/cycle rules and automatic
//! chain decomposition.

use std::collections::BTreeSet;

use sscnet::components::{
    auto_decompose, check_lemma_cycle, check_lemma_path, check_lemma_tree, classify_component, tree_partition,
    StateSubgraph,
};
use sscnet::fixtures::{self, TREE5_EDGES};

fn main() {
    let path = StateSubgraph::new(&[1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4)]).unwrap();
    let tree = StateSubgraph::new(&[1, 2, 3, 4, 5], &TREE5_EDGES).unwrap();
    let cycle = StateSubgraph::new(&[1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();

    for (name, g) in [("path", &path), ("tree", &tree), ("cycle", &cycle)] {
        println!("{name}: {:?}", classify_component(g).unwrap());
    }

    let at = |v: &[u32]| v.iter().copied().collect::<BTreeSet<u32>>();
    println!("path, input at 4: {}", check_lemma_path(&path, &at(&[4])).unwrap());
    println!("path, input at 3: {}", check_lemma_path(&path, &at(&[3])).unwrap());
    println!("tree, inputs at 3, 5: {} via {:?}", check_lemma_tree(&tree, &at(&[3, 5])).unwrap(), tree_partition(&tree, &at(&[3, 5])));
    println!("tree, inputs at 4, 5: {}", check_lemma_tree(&tree, &at(&[4, 5])).unwrap());
    println!("cycle, inputs at 2, 3: {}", check_lemma_cycle(&cycle, &at(&[2, 3])).unwrap());
    println!("cycle, inputs at 1, 3: {}", check_lemma_cycle(&cycle, &at(&[1, 3])).unwrap());

    let (net, _) = fixtures::single_bridge_chain();
    let dec = auto_decompose(&net).expect("chain exists");
    for (c, k) in dec.components.iter().zip(&dec.kinds) {
        println!("component {:?}: {k:?}", c.nodes);
    }
    for b in &dec.bridges {
        let edges: Vec<_> = b.edges.iter().map(|e| (e.a, e.b)).collect();
        println!("bridge {} - {}: {edges:?}", b.component_i, b.component_j);
    }
}
