//! Sampled ranks and the counterexample search.

use std::time::Instant;

use sscnet::fixtures;
use sscnet::numeric::{adversarial_search, monte_carlo_sc, DEFAULT_SEARCH_BUDGET, DEFAULT_TOLERANCE};

fn main() {
    let t = Instant::now();
    let net = fixtures::mixed_bridge_chain_placed();
    let r = monte_carlo_sc(&net, 1000, 7, DEFAULT_TOLERANCE);
    println!(
        "16 nodes: {} of {} samples full rank, min rank {} ({:.2?})",
        r.full_rank_count,
        r.samples_run,
        r.min_rank_seen,
        t.elapsed()
    );

    for (name, net) in [
        ("3-path, middle input", fixtures::path3_middle_input()),
        ("4-path, interior input", fixtures::path4_interior_input()),
        ("4-cycle, opposite inputs", fixtures::cycle4_opposite_inputs()),
        ("4-path, terminal input", fixtures::path4_terminal_input()),
    ] {
        match adversarial_search(&net, DEFAULT_SEARCH_BUDGET) {
            Some(s) => {
                let m: Vec<String> = s.weights.iter().map(|w| format!("a_{}_{}={:.6}", w.a, w.b, w.value)).collect();
                println!("{name}: deficient at {}", m.join(" "));
            }
            None => println!("{name}: nothing found"),
        }
    }
}
