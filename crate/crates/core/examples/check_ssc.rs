//! Decide SSC for a handful of small networks and show the failing subset
//! when there is one.

use sscnet::fixtures;
use sscnet::ssc::check_ssc;

fn main() {
    let nets = [
        ("path 1-2-3-4, input at 4", fixtures::path4_terminal_input()),
        ("path 1-2-3-4, input at 3", fixtures::path4_interior_input()),
        ("tree, inputs at leaves 3 and 5", fixtures::tree5_leaf_inputs()),
        ("tree, inputs at 4 and 5", fixtures::tree5_adjacent_inputs()),
        ("4-cycle, adjacent inputs", fixtures::cycle4_adjacent_inputs()),
        ("4-cycle, opposite inputs", fixtures::cycle4_opposite_inputs()),
    ];
    for (name, net) in nets {
        let r = check_ssc(&net).expect("accessible");
        match &r.witness_alpha {
            None => println!("{name:32} SSC ({} subsets checked)", r.alphas_checked),
            Some(a) => {
                let a: Vec<String> = a.iter().map(ToString::to_string).collect();
                println!("{name:32} not SSC, alpha = {{{}}}", a.join(", "));
            }
        }
    }
}
