//! Horn uniformization of the reduced discriminant and exact intersection
//! lengths with wall curves.
//!
//! The discriminant is parameterized by the projectivized cocharacter
//! line; pullbacks of torus monomials factor as a rational coefficient
//! times a product of the primitive weight forms with integer exponents.
//! Valuations are read off the factored form, never by expanding
//! polynomials, and intersection lengths reduce to exact integer
//! minimizations over chart cones.

use crate::error::{Error, Result};
use crate::gkz::{GkzFan, WeightMatrix};
use crate::lattice::{lattice_minimize, MinimizeOutcome, Vec2};
use crate::strat::{fixed_subquotient, wall_crossing};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

/// A monomial pullback in factored form: a nonzero rational coefficient
/// times a product of primitive weight forms with integer exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredRational {
    /// Exact coefficient, sign included once normalized.
    pub coefficient: BigRational,
    /// `(ray group index, exponent)` in ray order; zero exponents omitted.
    pub factors: Vec<(usize, i64)>,
}

impl FactoredRational {
    pub fn one() -> FactoredRational {
        FactoredRational { coefficient: BigRational::one(), factors: Vec::new() }
    }

    /// Total degree of the factored form; zero for every pullback of a
    /// Calabi-Yau fan.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Product of two factored pullbacks: coefficients multiply and
    /// exponents add.
    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        let mut factors = self.factors.clone();
        for &(ray, e) in &other.factors {
            match factors.iter_mut().find(|(r, _)| *r == ray) {
                Some((_, acc)) => *acc += e,
                None => factors.push((ray, e)),
            }
        }
        factors.retain(|(_, e)| *e != 0);
        factors.sort_by_key(|(r, _)| *r);
        FactoredRational { coefficient: &self.coefficient * &other.coefficient, factors }
    }
}

/// Pullback of the monomial `x^lambda` along the discriminant
/// parameterization, in factored form with the coefficient
/// `prod (d^i_j)^(-d^i_j (chi_i, lambda))`.
pub fn horn_pullback(fan: &GkzFan, lambda: Vec2) -> Result<FactoredRational> {
    let mut coefficient = BigRational::one();
    let mut factors = Vec::new();
    for (gi, g) in fan.ray_groups().iter().enumerate() {
        let pairing = g.chi.dot(lambda);
        for &d in &g.multipliers {
            if d == 1 {
                continue;
            }
            let e = -(d as i128) * pairing;
            let e = i32::try_from(e).map_err(|_| {
                Error::InvalidInput("pullback exponent too large to expand".into())
            })?;
            coefficient *= BigRational::from_integer(BigInt::from(d)).pow(e);
        }
        let exp = i64::try_from(-(g.total as i128) * pairing)
            .map_err(|_| Error::InvalidInput("pullback exponent exceeds i64".into()))?;
        if exp != 0 {
            factors.push((gi, exp));
        }
    }
    Ok(FactoredRational { coefficient, factors })
}

/// Rewrites a factored pullback so every linear form has a positive
/// leading coefficient, absorbing the signs into the coefficient, and
/// renders it as a human-readable string such as `-4*(u+3v)/u`.
pub fn normalize_and_render(fan: &GkzFan, f: &FactoredRational) -> String {
    let mut coefficient = f.coefficient.clone();
    // antiparallel rays normalize to the same form; merge their exponents
    let mut merged: Vec<(Vec2, i64)> = Vec::new();
    for &(ray, e) in &f.factors {
        let chi = fan.ray_groups()[ray].chi;
        let lead = if chi.x != 0 { chi.x } else { chi.y };
        let form = if lead < 0 {
            if e % 2 != 0 {
                coefficient = -coefficient;
            }
            chi.neg()
        } else {
            chi
        };
        match merged.iter_mut().find(|(g, _)| *g == form) {
            Some((_, acc)) => *acc += e,
            None => merged.push((form, e)),
        }
    }
    let mut numer: Vec<String> = Vec::new();
    let mut denom: Vec<String> = Vec::new();
    for (form, e) in merged {
        if e == 0 {
            continue;
        }
        let text = render_form(form);
        let target = if e > 0 { &mut numer } else { &mut denom };
        let a = e.abs();
        target.push(if a == 1 { text } else { format!("{text}^{a}") });
    }
    let mut out = String::new();
    let coeff_is_one = coefficient == BigRational::one();
    let coeff_is_minus_one = coefficient == -BigRational::one();
    if numer.is_empty() {
        out.push_str(&render_rational(&coefficient));
    } else if coeff_is_minus_one {
        out.push('-');
    } else if !coeff_is_one {
        out.push_str(&render_rational(&coefficient));
        out.push('*');
    }
    out.push_str(&numer.join("*"));
    if !denom.is_empty() {
        out.push('/');
        out.push_str(&denom.join("/"));
    }
    out
}

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a linear form on the cocharacter line, e.g. `u+3v` or `2u-v`.
/// The input is assumed to have a positive leading coefficient.
fn render_form(chi: Vec2) -> String {
    let mut parts = String::new();
    let mut two_terms = false;
    if chi.x != 0 {
        match chi.x {
            1 => parts.push('u'),
            -1 => parts.push_str("-u"),
            a => parts.push_str(&format!("{a}u")),
        }
    }
    if chi.y != 0 {
        if chi.x != 0 {
            two_terms = true;
            if chi.y > 0 {
                parts.push('+');
            }
        }
        match chi.y {
            1 => parts.push('v'),
            -1 => parts.push_str("-v"),
            b => parts.push_str(&format!("{b}v")),
        }
    }
    if two_terms {
        format!("({parts})")
    } else {
        parts
    }
}

/// One point of the parameter line supporting discriminant valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    /// Canonical primitive direction of the point on the parameter line.
    pub point: Vec2,
    /// Ray groups whose forms vanish there; more than one when two groups
    /// are antiparallel.
    pub zero_of_groups: Vec<usize>,
    /// Chambers whose chart contains the image of the point.
    pub in_charts: Vec<usize>,
    /// Valuation length computed in each containing chart.
    pub chart_lengths: Vec<(usize, i64)>,
    /// Consensus length at this point.
    pub length: i64,
}

/// Intersection data of the discriminant with one wall curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallIntersection {
    pub wall_index: usize,
    /// True when the negated source ray is not itself a weight ray, so
    /// the closed-form count `d^i` applies.
    pub applicable: bool,
    /// Total multiplicity of the wall's source ray group.
    pub d_formula: i64,
    pub per_point: Vec<PointRecord>,
    pub total: i64,
    /// True when every point lying in both charts received the same
    /// length from each.
    pub charts_agree: bool,
}

/// Computes the intersection length of the discriminant with a wall
/// curve by exact valuations in the two adjacent chamber charts.
pub fn wall_intersection_length(fan: &GkzFan, wall_idx: usize) -> Result<WallIntersection> {
    let wall = fan.wall(wall_idx)?.clone();
    if wall.source_groups.len() != 1 {
        return Err(Error::Internal("wall with multiple source groups".into()));
    }
    let source = wall.source_groups[0];
    let source_chi = fan.ray_groups()[source].chi;
    let applicable = !fan.ray_groups().iter().any(|g| g.chi == wall.ray);
    let d_formula = fan.ray_groups()[source].total;

    // zero loci of the weight forms on the parameter line, with
    // antiparallel coincidences merged into one point record
    let mut points: Vec<(Vec2, Vec<usize>)> = Vec::new();
    for (gi, g) in fan.ray_groups().iter().enumerate() {
        let (mut p, _) = g.chi.rot90ccw().primitive().expect("rays are nonzero");
        if p.x < 0 || (p.x == 0 && p.y < 0) {
            p = p.neg();
        }
        match points.iter_mut().find(|(q, _)| *q == p) {
            Some((_, groups)) => groups.push(gi),
            None => points.push((p, vec![gi])),
        }
    }

    let (ccw, cw) = fan.chambers_of_wall(wall_idx)?;
    let mut per_point = Vec::new();
    let mut charts_agree = true;
    let mut total: i64 = 0;
    for (p, groups) in points {
        // total valuation functional at this point
        let mut objective = Vec2::ZERO;
        for &gi in &groups {
            let g = &fan.ray_groups()[gi];
            objective = objective.add(g.chi.scale(-g.total));
        }
        let mut in_charts = Vec::new();
        let mut chart_lengths = Vec::new();
        for chamber in [ccw, cw] {
            let dual = fan.chambers()[chamber].dual();
            let (g1, g2) = dual.generators();
            // membership: every chart monomial pulls back with
            // non-negative valuation at the point
            if objective.dot(g1) < 0 || objective.dot(g2) < 0 {
                continue;
            }
            in_charts.push(chamber);
            match lattice_minimize(objective, &dual, source_chi, -1)? {
                MinimizeOutcome::Bounded(l) => chart_lengths.push((chamber, l)),
                MinimizeOutcome::Unbounded => {
                    return Err(Error::Internal(
                        "bounded-below valuation reported unbounded".into(),
                    ))
                }
            }
        }
        let length = match chart_lengths.len() {
            0 => 0,
            1 => chart_lengths[0].1,
            _ => {
                if chart_lengths[0].1 != chart_lengths[1].1 {
                    charts_agree = false;
                }
                chart_lengths.iter().map(|(_, l)| *l).min().unwrap()
            }
        };
        total += length;
        per_point.push(PointRecord { point: p, zero_of_groups: groups, in_charts, chart_lengths, length });
    }

    Ok(WallIntersection { wall_index: wall_idx, applicable, d_formula, per_point, total, charts_agree })
}

/// Comparison of the discriminant intersection length with the length of
/// the exceptional collection on the wall's fixed subquotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCountReport {
    pub wall_index: usize,
    pub discriminant_length: i64,
    pub collection_length: Option<i64>,
    /// `Some(true)` when both counts are defined and equal; `None` when
    /// the closed-form count does not apply to this wall.
    pub agree: Option<bool>,
    pub note: String,
}

/// Expected number of autoequivalences produced by crossing a wall,
/// from both the discriminant side and the fixed-subquotient side.
pub fn expected_autoequivalences(
    w: &WeightMatrix,
    fan: &GkzFan,
    wall_idx: usize,
) -> Result<ExpectedCountReport> {
    let inter = wall_intersection_length(fan, wall_idx)?;
    let crossing = wall_crossing(w, fan, wall_idx)?;
    let data = fixed_subquotient(w, fan, &crossing.flipped_ccw, wall_idx)?;
    let (agree, note) = if inter.applicable && data.all_positive {
        let c = data.collection_length.unwrap();
        (Some(c == inter.total), String::new())
    } else {
        (
            None,
            "count formula inapplicable: the wall ray direction is also a weight ray"
                .to_string(),
        )
    };
    Ok(ExpectedCountReport {
        wall_index: wall_idx,
        discriminant_length: inter.total,
        collection_length: data.collection_length,
        agree,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkz::build_fan;
    use crate::lattice::brute_force_minimize;

    fn paper() -> (WeightMatrix, GkzFan) {
        let w = WeightMatrix::parse_and_validate(
            &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
            Some(["x", "x", "x", "y", "y", "y", "p", "q"].iter().map(|s| s.to_string()).collect()),
        )
        .unwrap();
        let fan = build_fan(&w).unwrap();
        (w, fan)
    }

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn wall_by_ray(fan: &GkzFan, ray: Vec2) -> usize {
        fan.walls().iter().position(|w| w.ray == ray).unwrap()
    }

    #[test]
    fn pullback_fixtures() {
        let (_, fan) = paper();
        let f = horn_pullback(&fan, v(1, 0)).unwrap();
        assert_eq!(normalize_and_render(&fan, &f), "-4*(u+3v)/u");
        let f = horn_pullback(&fan, v(0, 1)).unwrap();
        assert_eq!(normalize_and_render(&fan, &f), "-(u+3v)^3/v^3");
        let f = horn_pullback(&fan, v(0, 0)).unwrap();
        assert_eq!(f, FactoredRational::one());
        assert_eq!(normalize_and_render(&fan, &f), "1");
    }

    #[test]
    fn pullback_is_a_homomorphism() {
        let (_, fan) = paper();
        for (a, b) in [(v(1, 0), v(0, 1)), (v(2, -1), v(-1, 3)), (v(1, 1), v(1, 1))] {
            let fa = horn_pullback(&fan, a).unwrap();
            let fb = horn_pullback(&fan, b).unwrap();
            let fab = horn_pullback(&fan, a.add(b)).unwrap();
            assert_eq!(fa.mul(&fb), fab);
        }
    }

    proptest::proptest! {
        #[test]
        fn pullback_homomorphism_and_degree_zero(
            ax in -9i64..=9, ay in -9i64..=9,
            bx in -9i64..=9, by in -9i64..=9,
        ) {
            let (_, fan) = paper();
            let a = v(ax, ay);
            let b = v(bx, by);
            let fa = horn_pullback(&fan, a).unwrap();
            let fb = horn_pullback(&fan, b).unwrap();
            let fab = horn_pullback(&fan, a.add(b)).unwrap();
            proptest::prop_assert_eq!(&fa.mul(&fb), &fab);
            proptest::prop_assert_eq!(fa.degree(), 0);
            proptest::prop_assert_eq!(fab.degree(), 0);
        }
    }

    #[test]
    fn pullbacks_have_degree_zero() {
        let (_, fan) = paper();
        for lam in [v(1, 0), v(0, 1), v(3, -2), v(-5, 7)] {
            assert_eq!(horn_pullback(&fan, lam).unwrap().degree(), 0);
        }
    }

    #[test]
    fn skew_wall_has_length_one() {
        let (_, fan) = paper();
        let idx = wall_by_ray(&fan, v(1, 3));
        let inter = wall_intersection_length(&fan, idx).unwrap();
        assert!(inter.applicable);
        assert_eq!(inter.total, 1);
        assert!(inter.charts_agree);
        // supported exactly at the zero of the (-1,-3) form
        let support: Vec<&PointRecord> =
            inter.per_point.iter().filter(|p| p.length > 0).collect();
        assert_eq!(support.len(), 1);
        let q_group = fan.ray_groups().iter().position(|g| g.chi == v(-1, -3)).unwrap();
        assert_eq!(support[0].zero_of_groups, vec![q_group]);
        assert_eq!(support[0].in_charts.len(), 2);
    }

    #[test]
    fn lower_wall_has_length_three() {
        let (_, fan) = paper();
        let idx = wall_by_ray(&fan, v(0, -1));
        let inter = wall_intersection_length(&fan, idx).unwrap();
        assert!(inter.applicable);
        assert_eq!(inter.total, 3);
        assert_eq!(inter.total, inter.d_formula);
        assert!(inter.charts_agree);
    }

    #[test]
    fn left_wall_formula_does_not_apply() {
        let (_, fan) = paper();
        let idx = wall_by_ray(&fan, v(-1, 0));
        let inter = wall_intersection_length(&fan, idx).unwrap();
        assert!(!inter.applicable);
        assert!(inter.charts_agree);
        // honest valuation length, checked against the brute-force oracle
        assert_eq!(inter.total, 1);
        let source_chi = v(1, 0);
        for chamber in inter.per_point.iter().flat_map(|p| p.in_charts.iter()) {
            let dual = fan.chambers()[*chamber].dual();
            for p in &inter.per_point {
                if !p.in_charts.contains(chamber) {
                    continue;
                }
                let mut obj = Vec2::ZERO;
                for &gi in &p.zero_of_groups {
                    let g = &fan.ray_groups()[gi];
                    obj = obj.add(g.chi.scale(-g.total));
                }
                let oracle = brute_force_minimize(obj, &dual, source_chi, -1, 25).unwrap();
                let recorded =
                    p.chart_lengths.iter().find(|(c, _)| c == chamber).unwrap().1;
                assert_eq!(oracle, recorded);
            }
        }
    }

    #[test]
    fn positive_axis_wall_also_inapplicable() {
        let (_, fan) = paper();
        let idx = wall_by_ray(&fan, v(1, 0));
        let inter = wall_intersection_length(&fan, idx).unwrap();
        assert!(!inter.applicable);
        assert_eq!(inter.total, 0);
    }

    #[test]
    fn expected_counts_on_the_running_example() {
        let (w, fan) = paper();
        let rep = expected_autoequivalences(&w, &fan, wall_by_ray(&fan, v(0, -1))).unwrap();
        assert_eq!(rep.discriminant_length, 3);
        assert_eq!(rep.collection_length, Some(3));
        assert_eq!(rep.agree, Some(true));

        let rep = expected_autoequivalences(&w, &fan, wall_by_ray(&fan, v(1, 3))).unwrap();
        assert_eq!(rep.discriminant_length, 1);
        assert_eq!(rep.collection_length, Some(1));
        assert_eq!(rep.agree, Some(true));

        let rep = expected_autoequivalences(&w, &fan, wall_by_ray(&fan, v(-1, 0))).unwrap();
        assert_eq!(rep.agree, None);
        assert!(!rep.note.is_empty());
    }
}
