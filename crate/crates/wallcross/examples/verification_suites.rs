//! Seeded random verification suites: mutation laws, the
//! twist-equals-double-mutation identity, the twist factorization, the
//! balanced-wall property, and discriminant length agreement with the
//! brute-force oracle.
//!
//! Run with: `cargo run --release --example verification_suites`

use wallcross::corpus::{
    run_double_mutation_suite, run_factorization_suite, run_intersection_suite,
    run_mutation_suite, run_wall_suite,
};

fn main() {
    let seed = 25;
    let suites = [
        run_mutation_suite(seed, 1000),
        run_double_mutation_suite(seed, 500),
        run_factorization_suite(seed, 200),
        run_wall_suite(seed, 200),
        run_intersection_suite(seed, 200, 25),
    ];
    for s in &suites {
        println!(
            "{:<22} instances={:<5} checks={:<6} passed={}",
            s.name, s.instances, s.checks, s.passed
        );
        for f in &s.failures {
            println!("    failure: {f}");
        }
    }
    assert!(suites.iter().all(|s| s.passed));
}
