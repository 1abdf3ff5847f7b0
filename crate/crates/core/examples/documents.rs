//! Load a network document from disk (default: the 16-node single-bridge
//! chain with its decomposition) and write it back out.

use sscnet::io::{parse_network, serialize_network};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/single-bridge-chain.json").to_string()
    });
    let text = std::fs::read_to_string(&path).expect("readable file");
    match parse_network(&text) {
        Ok((net, dec)) => {
            println!("{} state nodes, {} edges, {} inputs", net.state_count(), net.edge_count(), net.input_count());
            if let Some(d) = &dec {
                println!("decomposition: {} components, {} bridges", d.len(), d.bridges.len());
            }
            let again = parse_network(&serialize_network(&net, dec.as_ref())).unwrap();
            println!("round trip identical: {}", again == (net, dec));
        }
        Err(e) => eprintln!("{path}: {e}"),
    }
}
