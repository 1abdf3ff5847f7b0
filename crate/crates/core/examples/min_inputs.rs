//! Exhaustive minimum input count, as a reference for the chain algorithms.

use std::time::Instant;

use sscnet::fixtures;
use sscnet::placement::exhaustive_min_inputs;

fn main() {
    let cases = [
        ("4-path", fixtures::path4_terminal_input()),
        ("4-cycle", fixtures::cycle4_adjacent_inputs()),
        ("5-node tree", fixtures::tree5_leaf_inputs()),
        ("16-node single-bridge chain", fixtures::single_bridge_chain().0),
    ];
    for (name, net) in cases {
        let t = Instant::now();
        let m = exhaustive_min_inputs(&net, 6).unwrap().expect("some placement works");
        println!("{name}: {} inputs at {:?} ({:.2?})", m.count, m.targets, t.elapsed());
    }
}
