//! Exact intersection lengths of the discriminant with the wall curves,
//! and the expected autoequivalence counts they predict.
//!
//! Run with: `cargo run --example discriminant_lengths`

use wallcross::gkz::{build_fan, WeightMatrix};
use wallcross::horn::{expected_autoequivalences, wall_intersection_length};

fn main() -> wallcross::Result<()> {
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        Some(["x", "x", "x", "y", "y", "y", "p", "q"].map(String::from).to_vec()),
    )?;
    let fan = build_fan(&w)?;

    for i in 0..fan.walls().len() {
        let inter = wall_intersection_length(&fan, i)?;
        println!(
            "wall W{} (ray {}): total length {}, source multiplicity {}, closed form applies: {}",
            i + 1,
            fan.wall(i)?.ray,
            inter.total,
            inter.d_formula,
            inter.applicable
        );
        for p in &inter.per_point {
            if p.in_charts.is_empty() {
                continue;
            }
            println!(
                "    point {} (zero of groups {:?}) in charts {:?} with length {}",
                p.point, p.zero_of_groups, p.in_charts, p.length
            );
        }

        let exp = expected_autoequivalences(&w, &fan, i)?;
        match exp.agree {
            Some(agree) => println!(
                "    expected count: discriminant {} vs collection {:?} -> agree = {agree}",
                exp.discriminant_length, exp.collection_length
            ),
            None => println!(
                "    expected count: discriminant {} ({})",
                exp.discriminant_length, exp.note
            ),
        }
        println!();
    }
    Ok(())
}
