//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness. A failing criterion is reported, not
//! raised, so the rest of the suite still runs; the process fails only if a
//! criterion panics.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus_entry, random_sign, random_targets, shape_edges, signed_network, Shape};
use sscnet::components::{
    check_lemma_cycle, check_lemma_path, check_lemma_tree, classify_component, ComponentKind, PactusDecomposition,
    StateSubgraph,
};
use sscnet::fixtures;
use sscnet::graph::{build_network, NetworkSpec, NodeId, Sign, SignedNetwork};
use sscnet::numeric::{adversarial_search_seeded, monte_carlo_with, MonteCarloOptions, DEFAULT_SEARCH_BUDGET};
use sscnet::placement::{algorithm1, algorithm2, exhaustive_min_inputs};
use sscnet::ssc::{check_ssc, ssc_state_nodes};
use sscnet::symbolic::{
    build_symbolic_input, build_symbolic_laplacian, gramian, gramian_with_cap, rank_with_condition1,
    rank_with_options, Polynomial, SymMatrix, SymbolicError, SymbolicOptions,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    ensure(el <= limit, || format!("{what} took {el:.2?}, limit {limit:?}"))?;
    Ok((out, el))
}

fn states(v: &[u32]) -> BTreeSet<NodeId> {
    v.iter().map(|&k| NodeId::State(k)).collect()
}

fn figure_reproductions() -> Outcome {
    let second = Duration::from_secs(1);
    let positive = [
        ("path driven at terminal", fixtures::path4_terminal_input()),
        ("tree driven at leaves", fixtures::tree5_leaf_inputs()),
        ("4-cycle, adjacent inputs", fixtures::cycle4_adjacent_inputs()),
        ("single-bridge chain placed", fixtures::single_bridge_chain_placed()),
        ("mixed-bridge chain placed", fixtures::mixed_bridge_chain_placed()),
    ];
    let mut slowest = Duration::ZERO;
    for (name, net) in positive {
        let (r, el) = timed(second, name, || check_ssc(&net))?;
        slowest = slowest.max(el);
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        ensure(r.is_ssc, || format!("{name}: expected SSC"))?;
    }
    let negative = [
        ("path driven inside", fixtures::path4_interior_input(), vec![1, 2, 4]),
        ("tree driven at 4, 5", fixtures::tree5_adjacent_inputs(), vec![1, 3]),
        ("4-cycle, opposite inputs", fixtures::cycle4_opposite_inputs(), vec![2, 4]),
    ];
    for (name, net, witness) in negative {
        let (r, el) = timed(second, name, || check_ssc(&net))?;
        slowest = slowest.max(el);
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        ensure(!r.is_ssc && r.witness_alpha == Some(states(&witness)), || {
            format!("{name}: got {:?}", r.witness_alpha)
        })?;
    }
    Ok(format!("8 networks, slowest {slowest:.2?}"))
}

fn ssc_node_sets() -> Outcome {
    let a = ssc_state_nodes(&fixtures::cycle4_opposite_inputs()).map_err(|e| e.to_string())?;
    ensure(a == states(&[1, 3]), || format!("4-cycle: {a:?}"))?;
    let b = ssc_state_nodes(&fixtures::two_bridge_pair()).map_err(|e| e.to_string())?;
    ensure(b == states(&[1, 2, 3, 4, 6]), || format!("two-bridge pair: {b:?}"))?;
    Ok("{1,3} and {1,2,3,4,6}".into())
}

fn single_bridge_placement() -> Outcome {
    let (net, dec) = fixtures::single_bridge_chain();
    let p = algorithm1(&dec).map_err(|e| e.to_string())?;
    ensure(p.attachments.len() == 4 && p.counts.c == 3 && p.attachments.len() == p.counts.c + 1, || {
        format!("{} attachments, counts {:?}", p.attachments.len(), p.counts)
    })?;
    let assembled = p.assemble(&dec);
    ensure(check_ssc(&assembled).map(|r| r.is_ssc).unwrap_or(false), || "assembled network not SSC".into())?;
    let (m, el) = timed(Duration::from_secs(60), "exhaustive search", || exhaustive_min_inputs(&net, 4))?;
    let m = m.map_err(|e| e.to_string())?.ok_or("no placement with at most 4 inputs")?;
    ensure(m.count == 4, || format!("exhaustive minimum is {}", m.count))?;
    Ok(format!("targets {:?}, exhaustive minimum 4 at {:?} in {el:.2?}", p.targets(), m.targets))
}

fn general_placement_walk() -> Outcome {
    let (_, dec) = fixtures::mixed_bridge_chain();
    let p = algorithm2(&dec).map_err(|e| e.to_string())?;
    let added: Vec<bool> = p.per_step_added.iter().map(|a| !a.is_empty()).collect();
    ensure(added == [true, true, false, true], || format!("per-step additions {:?}", p.per_step_added))?;
    ensure(p.attachments.len() == 4, || format!("{} inputs", p.attachments.len()))?;
    let want: Vec<BTreeSet<u32>> =
        vec![BTreeSet::new(), BTreeSet::from([2, 3]), BTreeSet::from([4, 9]), BTreeSet::from([12])];
    ensure(p.component_inputs == want, || format!("component inputs {:?}", p.component_inputs))?;
    Ok(format!("added {:?}, component inputs {:?}", p.per_step_added, p.component_inputs))
}

fn symbolic_elimination() -> Outcome {
    let net = fixtures::path3_middle_input();
    let (l, table) = build_symbolic_laplacian(&net);
    let c = gramian(&l, &build_symbolic_input(&net)).map_err(|e| e.to_string())?;
    let (a12, a23) = (Polynomial::var(0), Polynomial::var(1));
    let k = Polynomial::int;
    let s2 = &a12 + &a23;
    let expect = SymMatrix::from_rows(vec![
        vec![k(0), a12.clone(), -(&a12 * &(&a12 + &s2))],
        vec![k(1), -s2.clone(), &(&(&a12 * &a12) + &(&s2 * &s2)) + &(&a23 * &a23)],
        vec![k(0), a23.clone(), -(&a23 * &(&s2 + &a23))],
    ]);
    ensure(c == expect, || format!("Gramian differs:\n{c}"))?;
    let rep = rank_with_condition1(&c).map_err(|e| e.to_string())?;
    ensure(rep.rank == 2, || format!("rank {}", rep.rank))?;
    let zeroed: Vec<_> = rep.zeroed().collect();
    ensure(zeroed.len() == 1 && zeroed[0].pivot == &a12 - &a23, || format!("zeroed pivots {zeroed:?}"))?;
    Ok(format!("rank 2, zeroed pivot {}", table.render(&zeroed[0].pivot)))
}

fn sixteen_node_rank() -> Outcome {
    let net = fixtures::mixed_bridge_chain_placed();
    let opts = MonteCarloOptions { samples: 1000, seed: 2024, ..Default::default() };
    let (r, el) = timed(Duration::from_secs(30), "1000 samples", || monte_carlo_with(&net, &opts))?;
    ensure(r.full_rank_count == 1000 && r.min_rank_seen == 16, || {
        format!("full rank {} of 1000, min rank {}", r.full_rank_count, r.min_rank_seen)
    })?;
    let (l, _) = build_symbolic_laplacian(&net);
    let exact = match gramian_with_cap(&l, &build_symbolic_input(&net), 10_000) {
        Err(SymbolicError::PolynomialBudgetExceeded { terms, .. }) => format!("exact Gramian passes 10^4 terms ({terms})"),
        Err(e) => e.to_string(),
        Ok(_) => "exact Gramian fits 10^4 terms".into(),
    };
    Ok(format!("1000/1000 full rank, min rank 16 in {el:.2?}; {exact}"))
}

fn lemma_for(shape: Shape, net: &SignedNetwork) -> Option<bool> {
    let g = StateSubgraph::of_network(net);
    let att: BTreeSet<u32> = net.input_edges().iter().map(|e| e.target).collect();
    let kind = classify_component(&g).ok()?;
    match (shape, kind, att.len()) {
        (Shape::Path, ComponentKind::SymPath, 1) => check_lemma_path(&g, &att).ok(),
        (Shape::Cycle, ComponentKind::SymCycle, 2) => check_lemma_cycle(&g, &att).ok(),
        (Shape::Tree, ComponentKind::SymPath | ComponentKind::TreeType, k) if k >= 2 => check_lemma_tree(&g, &att).ok(),
        _ => None,
    }
}

fn cross_module_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corpus: Vec<(Shape, SignedNetwork)> = (0..240).map(|_| corpus_entry(&mut rng, 8)).collect();
    let (mut lemma_checked, mut lemma_bad) = (0, vec![]);
    let (mut ssc_count, mut ssc_with_cex) = (0, 0);
    let (mut non_ssc, mut found, mut missed_uniform) = (0, 0, 0);
    let (mut sym_checked, mut sym_skipped, mut sym_bad) = (0, 0, 0);
    let symbolic_cap = SymbolicOptions { term_cap: 20_000, ..Default::default() };
    for (idx, (shape, net)) in corpus.iter().enumerate() {
        let r = check_ssc(net).map_err(|e| format!("corpus {idx}: {e}"))?;
        if let Some(l) = lemma_for(*shape, net) {
            lemma_checked += 1;
            if l != r.is_ssc {
                lemma_bad.push(idx);
            }
        }
        let opts = MonteCarloOptions { samples: 500, seed: idx as u64, ..Default::default() };
        let mc = monte_carlo_with(net, &opts);
        if r.is_ssc {
            ssc_count += 1;
            if mc.counterexample.is_some() {
                ssc_with_cex += 1;
            }
        } else {
            non_ssc += 1;
            if mc.counterexample.is_some() || adversarial_search_seeded(net, DEFAULT_SEARCH_BUDGET, idx as u64).is_some() {
                found += 1;
            } else if net.state_edges().iter().all(|e| e.sign == Sign::Positive) || net.state_edges().iter().all(|e| e.sign == Sign::Negative) {
                missed_uniform += 1;
            }
        }
        let (l, _) = build_symbolic_laplacian(net);
        match gramian_with_cap(&l, &build_symbolic_input(net), symbolic_cap.term_cap)
            .and_then(|c| rank_with_options(&c, &symbolic_cap))
        {
            Ok(rep) => {
                sym_checked += 1;
                if rep.rank > mc.min_rank_seen {
                    sym_bad += 1;
                }
            }
            Err(SymbolicError::PolynomialBudgetExceeded { .. }) => sym_skipped += 1,
            Err(e) => return Err(format!("corpus {idx}: {e}")),
        }
    }
    let rate = found as f64 / non_ssc.max(1) as f64;
    let detail = format!(
        "{} networks; (a) {lemma_checked} lemma cases, {} disagree; (b) {ssc_count} SSC, {ssc_with_cex} with counterexamples; \
         (c) {found}/{non_ssc} non-SSC refuted ({:.1}%), {missed_uniform} misses with uniform signs; \
         (d) {sym_checked} symbolic ranks compared, {sym_bad} above a sampled rank, {sym_skipped} skipped at the term cap",
        corpus.len(),
        lemma_bad.len(),
        rate * 100.0
    );
    let ok = lemma_bad.is_empty() && ssc_with_cex == 0 && rate >= 0.9 && sym_bad == 0;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// An SSC component with labels starting at `offset + 1` and input labels
/// starting at `input_offset + 1`.
struct Piece {
    n: u32,
    edges: Vec<(u32, u32, Sign)>,
    targets: Vec<u32>,
}

fn ssc_piece<R: Rng>(rng: &mut R, shapes: &[Shape], max_nodes: u32) -> Piece {
    loop {
        let shape = shapes[rng.gen_range(0..shapes.len())];
        let lo = if shape == Shape::Cycle { 3 } else { 1 };
        let n = rng.gen_range(lo..=max_nodes);
        let raw = shape_edges(rng, shape, n);
        let k = rng.gen_range(1..=3usize.min(n as usize));
        let targets = random_targets(rng, n, k);
        let net = signed_network(rng, n, &raw, &targets);
        if check_ssc(&net).map(|r| r.is_ssc).unwrap_or(false) {
            return Piece { n, edges: net.state_edges().iter().map(|e| (e.a, e.b, e.sign)).collect(), targets };
        }
    }
}

fn merge(a: &Piece, b: &Piece, bridges: &[(u32, u32, Sign)]) -> SignedNetwork {
    let off = a.n;
    let mut spec = NetworkSpec { state_nodes: (1..=a.n + b.n).collect(), ..Default::default() };
    for &(x, y, s) in &a.edges {
        spec.state_edge(x, y, s);
    }
    for &(x, y, s) in &b.edges {
        spec.state_edge(x + off, y + off, s);
    }
    for &(x, y, s) in bridges {
        spec.state_edge(x, y + off, s);
    }
    let targets: Vec<u32> = a.targets.iter().copied().chain(b.targets.iter().map(|t| t + off)).collect();
    for (k, &t) in targets.iter().enumerate() {
        let u = k as u32 + 1;
        spec.input_nodes.push(u);
        spec.input_edge(u, t, Sign::Positive);
    }
    build_network(&spec).expect("merged network is valid")
}

fn composition_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let all = [Shape::Path, Shape::Cycle, Shape::Tree, Shape::General];
    let mut single_bad = vec![];
    for trial in 0..100 {
        let a = ssc_piece(&mut rng, &all, 6);
        let b = ssc_piece(&mut rng, &all, 6);
        let bridge = (rng.gen_range(1..=a.n), rng.gen_range(1..=b.n), random_sign(&mut rng));
        if !check_ssc(&merge(&a, &b, &[bridge])).map(|r| r.is_ssc).unwrap_or(false) {
            single_bad.push(trial);
        }
    }
    let mut double_bad = vec![];
    let mut trial = 0;
    while trial < 100 {
        let a = ssc_piece(&mut rng, &[Shape::Path], 6);
        let b = ssc_piece(&mut rng, &[Shape::Path], 6);
        if a.n < 2 || b.n < 2 {
            continue;
        }
        let k = a.targets[rng.gen_range(0..a.targets.len())];
        let l = b.targets[rng.gen_range(0..b.targets.len())];
        let k2 = loop {
            let v = rng.gen_range(1..=a.n);
            if v != k {
                break v;
            }
        };
        let l2 = loop {
            let v = rng.gen_range(1..=b.n);
            if v != l {
                break v;
            }
        };
        let bridges = [(k, l, random_sign(&mut rng)), (k2, l2, random_sign(&mut rng))];
        if !check_ssc(&merge(&a, &b, &bridges)).map(|r| r.is_ssc).unwrap_or(false) {
            double_bad.push(trial);
        }
        trial += 1;
    }
    let detail = format!(
        "single-bridge merges {}/100 SSC, two-bridge merges {}/100 SSC",
        100 - single_bad.len(),
        100 - double_bad.len()
    );
    if single_bad.is_empty() && double_bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failing trials {single_bad:?} / {double_bad:?}"))
    }
}

/// Random chain of paths and cycles joined by single bridge edges.
fn random_chain<R: Rng>(rng: &mut R, m: usize) -> PactusDecomposition {
    let mut spec = NetworkSpec::default();
    let mut chain: Vec<Vec<u32>> = vec![];
    let mut next = 1;
    for c in 0..m {
        let cyc = rng.gen_bool(0.5);
        let n = if cyc { rng.gen_range(3..=5) } else { rng.gen_range(1..=4) };
        let nodes: Vec<u32> = (next..next + n).collect();
        next += n;
        spec.state_nodes.extend(&nodes);
        for w in nodes.windows(2) {
            spec.state_edge(w[0], w[1], random_sign(rng));
        }
        if cyc {
            spec.state_edge(nodes[0], nodes[nodes.len() - 1], random_sign(rng));
        }
        if c > 0 {
            let prev = &chain[c - 1];
            let a = prev[rng.gen_range(0..prev.len())];
            let b = nodes[rng.gen_range(0..nodes.len())];
            spec.state_edge(a, b, random_sign(rng));
        }
        chain.push(nodes);
    }
    let net = build_network(&spec).expect("chain is valid");
    PactusDecomposition::from_chain(&net, &chain)
}

fn iteration_counters() -> Outcome {
    let mut runs = 0;
    let mut check = |name: String, dec: &PactusDecomposition, alg1: bool| -> Result<(), String> {
        for (tag, res) in [("general", Some(algorithm2(dec))), ("single-bridge", alg1.then(|| algorithm1(dec)))] {
            let Some(res) = res else { continue };
            match res {
                Ok(p) => {
                    runs += 1;
                    ensure(p.iterations == dec.len(), || {
                        format!("{name} ({tag}): {} iterations for {} components", p.iterations, dec.len())
                    })?;
                }
                // outside the single-bridge algorithm's preconditions
                Err(e) if tag == "single-bridge" => {
                    let _ = e;
                }
                Err(e) => return Err(format!("{name} ({tag}): {e}")),
            }
        }
        Ok(())
    };
    check("single-bridge chain".into(), &fixtures::single_bridge_chain().1, true)?;
    check("mixed-bridge chain".into(), &fixtures::mixed_bridge_chain().1, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..40 {
        let m = rng.gen_range(1..=5);
        let dec = random_chain(&mut rng, m);
        check(format!("random chain {k}"), &dec, true)?;
    }
    Ok(format!("{runs} runs, iterations equal the component count"))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "figure reproductions", figure_reproductions),
        (2, "SSC state node sets", ssc_node_sets),
        (3, "single-bridge placement and exhaustive minimum", single_bridge_placement),
        (4, "general placement walk", general_placement_walk),
        (5, "symbolic elimination", symbolic_elimination),
        (6, "16-node sampled rank", sixteen_node_rank),
        (7, "cross-module properties", cross_module_properties),
        (8, "composition laws", composition_laws),
        (9, "iteration counters", iteration_counters),
    ];
    let mut passed = 0;
    let mut panicked = false;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let el = t.elapsed();
        match res {
            Ok(Ok(detail)) => {
                passed += 1;
                println!("criterion {n}: PASS {name} [{el:.2?}] {detail}");
            }
            Ok(Err(detail)) => println!("criterion {n}: FAIL {name} [{el:.2?}] {detail}"),
            Err(_) => {
                panicked = true;
                println!("criterion {n}: FAIL {name} [{el:.2?}] panicked");
            }
        }
    }
    println!("acceptance: {passed}/9 criteria passed");
    if panicked {
        std::process::exit(101);
    }
}
