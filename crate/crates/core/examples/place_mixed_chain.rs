//! The general placement walk on a chain whose joins use several bridge edges.

use sscnet::fixtures;
use sscnet::placement::algorithm2;
use sscnet::ssc::check_ssc;

fn main() {
    let (_, dec) = fixtures::mixed_bridge_chain();
    let p = algorithm2(&dec).expect("placement exists");
    for i in 0..dec.len() {
        println!(
            "step {}: kind {:?}, component inputs {:?}, added {:?}, SSC nodes {:?}",
            i + 1,
            p.per_step_kind[i],
            p.component_inputs[i],
            p.per_step_added[i],
            p.per_step_ssc_nodes[i]
        );
    }
    println!("total inputs {}, iterations {}", p.attachments.len(), p.iterations);
    println!("assembled network SSC: {}", check_ssc(&p.assemble(&dec)).unwrap().is_ssc);
}
