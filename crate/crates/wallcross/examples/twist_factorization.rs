//! Factoring a twist through a splitting of its source block, down to
//! rank-one pieces, and the symbolic window plan for a wall with a
//! length-3 collection on its fixed locus.
//!
//! Run with: `cargo run --example twist_factorization`

use wallcross::kmut::{
    factorization_plan, iterated_rank_one_factorization, verify_twist_factorization,
    EulerLattice,
};

fn main() -> wallcross::Result<()> {
    // ambient <A, B, G> where chi(a, b) was chosen so the cotwist of B
    // stays left-orthogonal to A
    let lat = EulerLattice::new(vec![
        vec![1, 1, 2, 1],
        vec![0, 1, 1, 1],
        vec![0, 0, 1, 2],
        vec![0, 0, 0, 1],
    ])?;
    let check = verify_twist_factorization(&lat, &[0], &[1], &[2, 3])?;
    println!("two-factor splitting: hypothesis = {}", check.hypothesis_holds);
    println!("twist factors as the ordered product: {}", check.identity_holds);

    let it = iterated_rank_one_factorization(&lat, &[0, 1], &[2, 3])?;
    println!(
        "rank-one iteration: step hypotheses = {:?}, product matches = {}",
        it.step_hypotheses, it.product_matches
    );

    // symbolic plan for a window shift over a three-block splitting
    let plan = factorization_plan(3, 3, 0)?;
    println!("\nwindow-shift plan for 3 blocks, width 3, position 0:");
    println!("  composition: {}", plan.composition);
    println!("  intermediate windows: {:?}", plan.intermediates);
    for step in &plan.steps {
        println!(
            "  {} : {} -> {}   vanishing into blocks {:?}, from blocks {:?}",
            step.twist, step.from, step.to, step.vanish_into, step.vanish_from
        );
    }
    Ok(())
}
