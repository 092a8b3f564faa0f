//! Draw the wall-and-chamber fan as ASCII art and write an SVG file.
//!
//! Run with: `cargo run --example render_fan`

use wallcross::gkz::{build_fan, WeightMatrix};
use wallcross::render::{render_ascii, render_svg};

fn main() -> wallcross::Result<()> {
    let w = WeightMatrix::parse_and_validate(
        &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
        None,
    )?;
    let fan = build_fan(&w)?;

    print!("{}", render_ascii(&fan));

    let svg = render_svg(&fan);
    let path = std::env::temp_dir().join("wallcross_fan.svg");
    std::fs::write(&path, &svg).expect("write svg");
    println!("\nSVG written to {}", path.display());
    Ok(())
}
