//! SSC state nodes: the nodes every failing subset avoids.

use sscnet::fixtures;
use sscnet::ssc::ssc_state_nodes;

fn show(name: &str, net: &sscnet::graph::SignedNetwork) {
    let nodes: Vec<String> = ssc_state_nodes(net).unwrap().iter().map(|n| n.to_string()).collect();
    println!("{name}: {{{}}} of {} state nodes", nodes.join(", "), net.state_count());
}

fn main() {
    show("4-cycle driven at 1 and 3", &fixtures::cycle4_opposite_inputs());
    show("path + 6-cycle, two bridges, driven at 1 and 3", &fixtures::two_bridge_pair());
    show("path driven at its end", &fixtures::path4_terminal_input());
}
