//! Static fan rendering: ASCII for terminals, plain SVG 1.1 for files.
//!
//! Walls are drawn as rays from the origin through exact lattice points;
//! there is no floating point in either backend, so output bytes are
//! stable.

use crate::gkz::GkzFan;
use crate::lattice::Vec2;
use crate::report::roman;

/// Integer division rounding half away from zero.
fn div_round(n: i64, d: i64) -> i64 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n >= 0 {
        (n + d / 2) / d
    } else {
        -((-n + d / 2) / d)
    }
}

/// Renders the fan on a character grid with wall and chamber labels.
pub fn render_ascii(fan: &GkzFan) -> String {
    const HALF_W: i64 = 18;
    const HALF_H: i64 = 9;
    let width = (2 * HALF_W + 1) as usize;
    let height = (2 * HALF_H + 1) as usize;

    // two raster columns per lattice unit to keep the aspect ratio sane
    let raster_w = width * 2;
    let mut raster = vec![vec![' '; raster_w]; height];
    let mut plot = |x: i64, y: i64, ch: char| {
        let col = 2 * (x + HALF_W);
        let row = HALF_H - y;
        if row >= 0 && row < height as i64 && col >= 0 && col < raster_w as i64 {
            raster[row as usize][col as usize] = ch;
        }
    };

    plot(0, 0, '+');
    for wall in fan.walls() {
        let Vec2 { x: a, y: b } = wall.ray;
        if a.abs() >= b.abs() {
            for i in 1..=HALF_W {
                let x = if a > 0 { i } else { -i };
                let y = div_round(b * x, a);
                if y.abs() > HALF_H {
                    break;
                }
                plot(x, y, '*');
            }
        } else {
            for i in 1..=HALF_H {
                let y = if b > 0 { i } else { -i };
                let x = div_round(a * y, b);
                if x.abs() > HALF_W {
                    break;
                }
                plot(x, y, '*');
            }
        }
    }

    let mut text_at = |x: i64, y: i64, s: &str| {
        let col = 2 * (x + HALF_W);
        let row = HALF_H - y;
        if row < 0 || row >= height as i64 || col < 0 {
            return;
        }
        let row = row as usize;
        for (k, ch) in s.chars().enumerate() {
            let c = col as usize + k;
            if c < raster_w {
                raster[row][c] = ch;
            }
        }
    };

    for (i, wall) in fan.walls().iter().enumerate() {
        let tip = scale_to_box(wall.ray, HALF_W - 2, HALF_H - 1);
        text_at(tip.x, tip.y, &format!("W{}", i + 1));
    }
    for (i, chamber) in fan.chambers().iter().enumerate() {
        let (a, b) = chamber.generators();
        let mid = a.add(b);
        let mid = if mid.is_zero() { a.rot90ccw() } else { mid };
        let spot = scale_to_box(mid, HALF_W - 4, HALF_H - 2);
        text_at(spot.x, spot.y, &roman(i + 1));
    }

    let mut out = String::new();
    for row in raster {
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Largest integer multiple of the direction fitting in the box.
fn scale_to_box(v: Vec2, half_w: i64, half_h: i64) -> Vec2 {
    let sx = if v.x == 0 { i64::MAX } else { half_w / v.x.abs() };
    let sy = if v.y == 0 { i64::MAX } else { half_h / v.y.abs() };
    let s = sx.min(sy).max(1);
    v.scale(s)
}

/// Renders the fan as a plain SVG 1.1 document. Every wall segment runs
/// from the origin through an exact scaled lattice point.
pub fn render_svg(fan: &GkzFan) -> String {
    const UNIT: i64 = 24;
    const BOX: i64 = 10;
    let extent = UNIT * (BOX + 2);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         viewBox=\"{} {} {} {}\">\n",
        -extent,
        -extent,
        2 * extent,
        2 * extent
    ));
    out.push_str("  <rect x=\"-264\" y=\"-264\" width=\"528\" height=\"528\" fill=\"white\"/>\n");
    // light lattice grid
    for i in -BOX..=BOX {
        let p = i * UNIT;
        out.push_str(&format!(
            "  <line x1=\"{p}\" y1=\"{}\" x2=\"{p}\" y2=\"{}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            -BOX * UNIT,
            BOX * UNIT
        ));
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{p}\" x2=\"{}\" y2=\"{p}\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            -BOX * UNIT,
            BOX * UNIT
        ));
    }
    for (i, wall) in fan.walls().iter().enumerate() {
        let tip = scale_to_box(wall.ray, BOX, BOX);
        // y axis points up in lattice coordinates, down in SVG
        let (x2, y2) = (tip.x * UNIT, -tip.y * UNIT);
        out.push_str(&format!(
            "  <line x1=\"0\" y1=\"0\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\" stroke-width=\"3\"/>\n"
        ));
        let lx = x2 + if tip.x >= 0 { 8 } else { -28 };
        let ly = y2 + if tip.y >= 0 { -6 } else { 18 };
        out.push_str(&format!(
            "  <text x=\"{lx}\" y=\"{ly}\" font-family=\"monospace\" font-size=\"18\">W{}</text>\n",
            i + 1
        ));
    }
    for (i, chamber) in fan.chambers().iter().enumerate() {
        let (a, b) = chamber.generators();
        let mid = a.add(b);
        let mid = if mid.is_zero() { a.rot90ccw() } else { mid };
        let spot = scale_to_box(mid, BOX - 3, BOX - 3);
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"20\">{}</text>\n",
            spot.x * UNIT,
            -spot.y * UNIT,
            roman(i + 1)
        ));
    }
    out.push_str("  <circle cx=\"0\" cy=\"0\" r=\"4\" fill=\"black\"/>\n");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkz::{build_fan, WeightMatrix};

    fn fan_of(rows: [Vec<i64>; 2]) -> GkzFan {
        build_fan(&WeightMatrix::parse_and_validate(&rows, None).unwrap()).unwrap()
    }

    #[test]
    fn ascii_render_is_deterministic_and_labeled() {
        let fan = fan_of([vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]]);
        let a = render_ascii(&fan);
        let b = render_ascii(&fan);
        assert_eq!(a, b);
        for label in ["W1", "W2", "W3", "W4", "I", "II", "III", "IV"] {
            assert!(a.contains(label), "missing label {label}\n{a}");
        }
    }

    #[test]
    fn svg_renders_four_diagonals_for_the_square_fan() {
        let fan = fan_of([vec![1, 1, -1, -1], vec![1, -1, 1, -1]]);
        let svg = render_svg(&fan);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke=\"black\"").count(), 4);
        assert_eq!(svg.matches("<text").count(), 8);
    }

    #[test]
    fn svg_wall_passes_through_the_scaled_lattice_point() {
        let fan = fan_of([vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]]);
        let svg = render_svg(&fan);
        // the (1,3) wall is drawn to 3*(1,3) = (3,9), scaled by 24
        assert!(svg.contains("x2=\"72\" y2=\"-216\""));
    }
}
