//! Balanced wall-crossing reports: for each wall of the fan, stratify
//! both adjacent chambers with deterministic near-wall characters and
//! exhibit the flipped stratum pair.
//!
//! Run with: `cargo run --example wall_crossing`

use wallcross::gkz::{build_fan, WeightMatrix};
use wallcross::strat::{wall_crossing, window_descriptor};

fn main() -> wallcross::Result<()> {
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        Some(["x", "x", "x", "y", "y", "y", "p", "q"].map(String::from).to_vec()),
    )?;
    let fan = build_fan(&w)?;
    let labels = w.labels();

    for i in 0..fan.walls().len() {
        let rep = wall_crossing(&w, &fan, i)?;
        println!("wall W{} spanned by {}:", i + 1, rep.wall_ray);
        println!(
            "  test characters {} / {} (K = {})",
            rep.character_ccw, rep.character_cw, rep.k_used
        );
        println!(
            "  flipped cocharacters {} / {}  balanced = {}",
            rep.flipped_ccw.lambda, rep.flipped_cw.lambda, rep.balanced
        );
        println!("  shared fixed locus Z = {}", rep.shared_z.render(labels));
        println!("  window width eta = {}", rep.eta);
        println!("  residual weights on the fixed locus: {:?}", rep.residual_weights);

        // the grade-restriction window at position 0 and its dual
        let win = window_descriptor(&rep.flipped_ccw, 0);
        println!(
            "  window at w=0: half-open {:?}, closed {:?}, dual position {}",
            win.g_window, win.c_window, win.dual_weight
        );
        println!();
    }
    Ok(())
}
