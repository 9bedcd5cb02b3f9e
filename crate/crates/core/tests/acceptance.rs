//! The acceptance criteria, one line of output per criterion.
//!
//! Run with `cargo test -p shl --test acceptance -- --nocapture` to see the
//! lines. Every criterion is exact; a failure prints its witness.

use std::sync::Arc;
use std::time::Instant;

use shl::sset::{product, std_simplex, SimplicialPair};
use shl::suite::{self, Check, Status, SuiteConfig};

/// Cell counts of `sd^k` of a graph with `v` vertices and `e` edges: each
/// vertex and edge becomes a vertex, each edge splits in two.
fn graph_sd(v: usize, e: usize, k: usize) -> (usize, usize) {
    (0..k).fold((v, e), |(v, e), _| (v + e, 2 * e))
}

/// Strict chains of nonempty subsets of `{0,..,n}`, by length, over
/// bitmasks.
fn subset_chains(n: usize) -> Vec<usize> {
    let masks: Vec<u32> = (1..(1u32 << (n + 1))).collect();
    let proper = |a: u32, b: u32| a != b && a & b == a;
    let mut counts = vec![masks.len()];
    let mut chains: Vec<Vec<u32>> = masks.iter().map(|&m| vec![m]).collect();
    loop {
        let next: Vec<Vec<u32>> = chains
            .iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                masks.iter().filter(move |&&m| proper(last, m)).map(move |&m| {
                    let mut c = c.clone();
                    c.push(m);
                    c
                })
            })
            .collect();
        if next.is_empty() {
            return counts;
        }
        counts.push(next.len());
        chains = next;
    }
}

/// Monotone lattice paths from `(0,0)` to `(p,q)`.
fn lattice_paths(p: usize, q: usize) -> usize {
    let mut row = vec![1usize; q + 1];
    for _ in 0..p {
        for j in 1..=q {
            row[j] += row[j - 1];
        }
    }
    row[q]
}

fn oracle_sd_counts() -> Option<String> {
    let d2 = SimplicialPair::absolute(Arc::new(std_simplex(2)));
    let d1 = SimplicialPair::absolute(Arc::new(std_simplex(1)));
    let sd_d2 = shl::polyfun::tower(&d2).level(1).set().counts();
    let sd2_d1 = shl::polyfun::tower(&d1).level(2).set().counts();
    let chains = subset_chains(2);
    let (v, e) = graph_sd(2, 1, 2);
    if sd_d2 != vec![7, 12, 6] || chains != sd_d2 {
        return Some(format!("sd Δ^2 = {sd_d2:?}, chains {chains:?}"));
    }
    if sd2_d1 != vec![5, 4] || sd2_d1 != vec![v, e] {
        return Some(format!("sd² Δ^1 = {sd2_d1:?}, oracle ({v}, {e})"));
    }
    None
}

fn oracle_product_counts() -> Option<String> {
    for p in 0..=3 {
        for q in 0..=3 {
            let got = product(&Arc::new(std_simplex(p)), &Arc::new(std_simplex(q))).set.count(p + q);
            if got != lattice_paths(p, q) {
                return Some(format!("Δ^{p} × Δ^{q}: {got} top simplices, oracle {}", lattice_paths(p, q)));
            }
        }
    }
    None
}

/// An extra oracle run next to a check; `Some` explains a mismatch.
type Oracle = fn() -> Option<String>;

fn find(name: &str) -> Check {
    *suite::checks().iter().find(|c| c.name == name).expect("registered check")
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let criteria: [(usize, &str, Option<Oracle>); 15] = [
        (1, "gamma_composition", None),
        (2, "sd_counts", Some(oracle_sd_counts)),
        (3, "product_counts", Some(oracle_product_counts)),
        (4, "mu_kernel", None),
        (5, "mu_associativity", None),
        (6, "cylinder_homotopy", None),
        (7, "htilde_endpoints", None),
        (8, "group_inverse", None),
        (9, "path_extension", None),
        (10, "classifying_maps", None),
        (11, "splitting_independence", None),
        (12, "mu_image_witness", None),
        (13, "extend_section", None),
        (14, "comparison_square", None),
        (15, "cert_calculus", None),
    ];
    let mut failed = Vec::new();
    for (k, name, oracle) in criteria {
        let start = Instant::now();
        let result = suite::run_check(&cfg, &find(name));
        let oracle_fail = oracle.and_then(|o| o());
        let ok = result.status == Status::Pass && oracle_fail.is_none();
        println!(
            "criterion {k:>2} {:<4} {name} ({:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if let Some(w) = &result.witness {
            println!("    witness: {w}");
        }
        if let Some(why) = &oracle_fail {
            println!("    oracle: {why}");
        }
        if !ok {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
