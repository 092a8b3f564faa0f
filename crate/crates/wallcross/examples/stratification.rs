//! Kirwan-Ness stratifications of the unstable locus for characters in
//! different chambers, printed in vanishing-locus notation.
//!
//! Run with: `cargo run --example stratification`

use wallcross::gkz::{build_fan, WeightMatrix};
use wallcross::lattice::Vec2;
use wallcross::strat::kn_stratify;

fn main() -> wallcross::Result<()> {
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        Some(["x", "x", "x", "y", "y", "y", "p", "q"].map(String::from).to_vec()),
    )?;
    let fan = build_fan(&w)?;
    let labels = w.labels();

    // characters on both sides of the wall spanned by (0,-1), and both
    // sides of the wall spanned by (-1,0)
    for chi in [Vec2::new(-1, -5), Vec2::new(1, -5), Vec2::new(-5, -1), Vec2::new(-5, 1)] {
        let s = kn_stratify(&w, &fan, chi)?;
        println!("character {chi}:");
        println!("  lambda_max = {}  S_max = {}", s.lambda_max, s.s_max_set.render(labels));
        for st in &s.strata {
            println!(
                "  lambda = {:>7}  Z = {:<18} S = {:<16} eta = {}",
                st.lambda.to_string(),
                st.z_set.render(labels),
                st.s_set.render(labels),
                st.eta_plus
            );
        }
        if !s.skipped.is_empty() {
            let skipped: Vec<String> = s.skipped.iter().map(|l| l.to_string()).collect();
            println!("  skipped candidates (fixed locus already unstable): {}", skipped.join(", "));
        }
        println!();
    }

    // a non-generic character is rejected with a reason
    match kn_stratify(&w, &fan, Vec2::new(-1, -1)) {
        Err(e) => println!("character (-1,-1) is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
