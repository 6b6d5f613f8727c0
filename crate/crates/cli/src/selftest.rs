//! Brute-force oracle suites over small generated graphs.

use ndt_core::{
    brute_force_gamma, compute_params, decompose, filter_feasible, fractional_arboricity, generate, pack_k_forests,
    verify_certificate, verify_partition, DecomposeOptions, Family, GenSpec, MultiGraph, Outcome,
};

use crate::{Failure, EXIT_INTERNAL, EXIT_OK};

/// Cycles through small shapes and parameter pairs, deterministically in `seed`.
fn corpus(seed: u64, count: usize) -> impl Iterator<Item = (usize, usize, MultiGraph)> {
    (0..count).map(move |i| {
        let k = 1 + i % 3;
        let d = 1 + (i / 3) % 6;
        let n = 2 + (i / 18) % 9;
        let m = 1 + (i * 7) % (2 * n + 2);
        let family = if i % 2 == 0 { Family::RandomMultigraph } else { Family::ForestPlusNoise };
        let g = generate(&GenSpec { family, n, m, k, d, seed: seed.wrapping_add(i as u64) }).expect("n >= 2");
        (k, d, g)
    })
}

fn suite(name: &str, seed: u64, count: usize, check: impl Fn(usize, usize, &MultiGraph) -> bool) -> bool {
    let bad = corpus(seed, count).filter(|(k, d, g)| !check(*k, *d, g)).count();
    println!("{name}\t{}\t{count} graphs, {bad} mismatches", if bad == 0 { "pass" } else { "FAIL" });
    bad == 0
}

pub(crate) fn run(seed: u64, count: usize) -> Result<u8, Failure> {
    let results = [
        suite("gamma", seed, count, |_, _, g| fractional_arboricity(g).map(|r| r.0).ok() == brute_force_gamma(g).ok()),
        suite("feasibility", seed, count, |k, d, g| {
            let p = compute_params(k, d).expect("positive");
            filter_feasible(g, &p) == (brute_force_gamma(g).expect("small") <= p.threshold())
        }),
        suite("packing", seed, count, |k, _, g| {
            let full = pack_k_forests(g, k).leftover.is_empty();
            full == (brute_force_gamma(g).expect("small") <= ndt_core::Rational::from_integer(k as i64))
        }),
        suite("decompose", seed, count, |k, d, g| {
            let p = compute_params(k, d).expect("positive");
            match decompose(g, &p, &DecomposeOptions::default()).map(|r| r.outcome) {
                Ok(Outcome::Forests(f)) => verify_partition(g, &p, &f.classes, f.special_index).is_valid(),
                Ok(Outcome::Dense(c)) => verify_certificate(g, &p, &c) && !filter_feasible(g, &p),
                Err(_) => false,
            }
        }),
    ];
    if results.iter().all(|&ok| ok) {
        Ok(EXIT_OK)
    } else {
        Err(Failure(EXIT_INTERNAL, "selftest found mismatches".into()))
    }
}
