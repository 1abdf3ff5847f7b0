//! Input placement on a chain joined by single bridge edges.

use sscnet::fixtures;
use sscnet::placement::algorithm1;
use sscnet::ssc::check_ssc;

fn main() {
    let (_, dec) = fixtures::single_bridge_chain();
    let p = algorithm1(&dec).expect("preconditions hold");
    println!("targets: {:?}", p.targets());
    println!("paths = {}, cycles = {}, inputs = {}", p.counts.p, p.counts.c, p.attachments.len());
    for (i, added) in p.per_step_added.iter().enumerate() {
        println!("  component {}: added {added:?}", i + 1);
    }
    println!("assembled network SSC: {}", check_ssc(&p.assemble(&dec)).unwrap().is_ssc);
}
