//! Exact Gramian over edge symbols and the conservative elimination that
//! zeroes any pivot that could vanish.

use sscnet::fixtures;
use sscnet::symbolic::{build_symbolic_input, build_symbolic_laplacian, gramian, verify_ssc_symbolic, SymbolicOptions};

fn main() {
    let net = fixtures::path3_middle_input();
    let (l, table) = build_symbolic_laplacian(&net);
    let c = gramian(&l, &build_symbolic_input(&net)).unwrap();
    print!("Gramian:\n{}", c.render(&|v| table.name(v)));

    let (full, report, table) = verify_ssc_symbolic(&net, &SymbolicOptions::default()).unwrap();
    print!("{}", report.audit(&table));
    println!("rank {} of {}, full: {full}", report.rank, net.state_count());

    let (full, report, _) = verify_ssc_symbolic(&fixtures::path4_terminal_input(), &SymbolicOptions::default()).unwrap();
    println!("path driven at its end: rank {}, full: {full}", report.rank);
}
