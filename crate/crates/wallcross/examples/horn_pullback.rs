//! Factored pullbacks of torus monomials along the rational
//! parameterization of the reduced discriminant.
//!
//! Run with: `cargo run --example horn_pullback`

use wallcross::gkz::{build_fan, WeightMatrix};
use wallcross::horn::{horn_pullback, normalize_and_render};
use wallcross::lattice::Vec2;

fn main() -> wallcross::Result<()> {
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        None,
    )?;
    let fan = build_fan(&w)?;

    for lambda in [Vec2::new(1, 0), Vec2::new(0, 1), Vec2::new(1, 1), Vec2::new(2, -1)] {
        let f = horn_pullback(&fan, lambda)?;
        println!(
            "lambda = {:>7}:  {}   (degree {})",
            lambda.to_string(),
            normalize_and_render(&fan, &f),
            f.degree()
        );
    }

    // pullback is a homomorphism: coefficients multiply, exponents add
    let a = horn_pullback(&fan, Vec2::new(1, 0))?;
    let b = horn_pullback(&fan, Vec2::new(0, 1))?;
    let ab = horn_pullback(&fan, Vec2::new(1, 1))?;
    assert_eq!(a.mul(&b), ab);
    println!("\nproduct of the two axis pullbacks equals the pullback of (1,1)");
    Ok(())
}
