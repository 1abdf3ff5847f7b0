//! Graphviz output with SSC nodes highlighted.

use sscnet::fixtures;
use sscnet::io::{export_dot, DotAnnotations};
use sscnet::ssc::check_ssc;

fn main() {
    let net = fixtures::two_bridge_pair();
    let ann = DotAnnotations::from_report(&check_ssc(&net).unwrap());
    print!("{}", export_dot(&net, Some(&ann)));
}
