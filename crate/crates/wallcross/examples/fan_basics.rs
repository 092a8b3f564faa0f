//! Parse a weight matrix, group its columns into primitive rays, and
//! build the wall-and-chamber fan.
//!
//! Run with: `cargo run --example fan_basics`

use wallcross::gkz::{build_fan, WeightMatrix};

fn main() -> wallcross::Result<()> {
    // a rank-2 torus acting on A^8 with zero weight sums
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        Some(["x", "x", "x", "y", "y", "y", "p", "q"].map(String::from).to_vec()),
    )?;

    let fan = build_fan(&w)?;

    println!("ray groups (counterclockwise from the positive x-axis):");
    for g in fan.ray_groups() {
        println!(
            "  chi = {}  multipliers = {:?}  total = {}  columns = {:?}",
            g.chi, g.multipliers, g.total, g.member_columns
        );
    }

    println!("\nwalls (negated primitive rays):");
    for (i, wall) in fan.walls().iter().enumerate() {
        println!("  W{} spanned by {}", i + 1, wall.ray);
    }

    println!("\nchambers (consecutive wall pairs):");
    for (i, c) in fan.chambers().iter().enumerate() {
        println!("  chamber {}: {}", i, c);
    }

    // every direction lands in exactly one chamber or on one wall
    use wallcross::gkz::{locate, Location};
    use wallcross::lattice::Vec2;
    for chi in [Vec2::new(-1, -2), Vec2::new(0, -7), Vec2::new(0, 0)] {
        match locate(&fan, chi) {
            Location::Chamber(c) => println!("{chi} lies inside chamber {c}"),
            Location::Wall(i) => println!("{chi} lies on wall W{}", i + 1),
            Location::Origin => println!("{chi} is the origin"),
        }
    }
    Ok(())
}
