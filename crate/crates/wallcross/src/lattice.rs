//! Exact arithmetic on rank-2 character and cocharacter lattices.
//!
//! Everything here is integer or rational; there is no floating point
//! anywhere in the crate. Angular comparisons use quadrant indices and
//! cross products, and Hilbert-Mumford slopes are compared through their
//! signs and squared magnitudes so the Euclidean norm never has to be
//! evaluated as a real number.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest coordinate magnitude accepted from user input.
///
/// With coordinates bounded by this, every intermediate product in the
/// crate fits comfortably in `i128`.
pub const MAX_COORD: i64 = 1_000_000;

/// A vector in a rank-2 lattice (characters or cocharacters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Standard pairing `(self, other)`; also the Euclidean inner product.
    pub fn dot(self, other: Vec2) -> i128 {
        self.x as i128 * other.x as i128 + self.y as i128 * other.y as i128
    }

    /// `self.x * other.y - self.y * other.x`; positive iff `other` is
    /// counterclockwise from `self` by less than a half turn.
    pub fn cross(self, other: Vec2) -> i128 {
        self.x as i128 * other.y as i128 - self.y as i128 * other.x as i128
    }

    pub fn norm_sq(self) -> i128 {
        self.dot(self)
    }

    pub fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }

    pub fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(self, k: i64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn rot90ccw(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Rotation by a quarter turn clockwise.
    pub fn rot90cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    /// Splits a nonzero vector into a primitive direction and a positive
    /// integer multiplier, so `multiplier * direction == self`.
    pub fn primitive(self) -> Result<(Vec2, i64)> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = gcd_i64(self.x.unsigned_abs() as i64, self.y.unsigned_abs() as i64);
        Ok((Vec2::new(self.x / g, self.y / g), g))
    }

    /// True if both vectors lie on the same ray from the origin.
    pub fn same_ray(self, other: Vec2) -> bool {
        !self.is_zero()
            && !other.is_zero()
            && self.cross(other) == 0
            && self.dot(other) > 0
    }

    /// Index of the counterclockwise half-plane sweep starting at the
    /// positive x-axis: 0 for angle in [0, pi), 1 for [pi, 2pi).
    fn half(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Total preorder by angle counterclockwise from the positive x-axis.
    /// Parallel (same-ray) vectors compare equal.
    pub fn ccw_cmp(self, other: Vec2) -> Ordering {
        debug_assert!(!self.is_zero() && !other.is_zero());
        match self.half().cmp(&other.half()) {
            Ordering::Equal => {
                let c = self.cross(other);
                // within one half-turn, positive cross means self comes first
                c.cmp(&0).reverse()
            }
            ord => ord,
        }
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Hilbert-Mumford slope `(chi, lambda) / |lambda|`, stored exactly as a
/// sign together with the squared magnitude `(chi,lambda)^2 / |lambda|^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuValue {
    pub sign: i8,
    pub mag_sq: Ratio<i128>,
}

impl MuValue {
    pub fn of(chi: Vec2, lambda: Vec2) -> Result<MuValue> {
        if lambda.is_zero() {
            return Err(Error::ZeroVector);
        }
        let p = chi.dot(lambda);
        let sign = match p.cmp(&0) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        Ok(MuValue {
            sign,
            mag_sq: Ratio::new(p * p, lambda.norm_sq()),
        })
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }
}

impl PartialOrd for MuValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MuValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {
                let m = self.mag_sq.cmp(&other.mag_sq);
                if self.sign >= 0 {
                    m
                } else {
                    m.reverse()
                }
            }
            ord => ord,
        }
    }
}

/// Exact ordering of `mu(chi, l1)` versus `mu(chi, l2)`.
pub fn mu_compare(chi: Vec2, l1: Vec2, l2: Vec2) -> Result<Ordering> {
    Ok(MuValue::of(chi, l1)?.cmp(&MuValue::of(chi, l2)?))
}

/// A strictly convex rational cone in the plane, stored by its two
/// primitive generators in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone2 {
    a: Vec2,
    b: Vec2,
}

impl Cone2 {
    pub fn new(a: Vec2, b: Vec2) -> Result<Cone2> {
        let (a, _) = a.primitive()?;
        let (b, _) = b.primitive()?;
        if a.cross(b) <= 0 {
            return Err(Error::DegenerateCone);
        }
        Ok(Cone2 { a, b })
    }

    pub fn generators(&self) -> (Vec2, Vec2) {
        (self.a, self.b)
    }

    /// Closed membership test.
    pub fn contains(&self, v: Vec2) -> bool {
        self.a.cross(v) >= 0 && v.cross(self.b) >= 0
    }

    /// Open membership test.
    pub fn contains_interior(&self, v: Vec2) -> bool {
        self.a.cross(v) > 0 && v.cross(self.b) > 0
    }

    /// Cone of all vectors pairing non-negatively with every element.
    ///
    /// The dual of a strictly convex full cone is again strictly convex,
    /// with primitive counterclockwise generators.
    pub fn dual(&self) -> Cone2 {
        // boundary rays of the dual are perpendicular to the generators
        let u = self.b.rot90cw();
        let v = self.a.rot90ccw();
        debug_assert!(u.cross(v) > 0);
        Cone2 { a: u, b: v }
    }
}

impl fmt::Display for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone({},{})", self.a, self.b)
    }
}

/// Result of an exact integer minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimizeOutcome {
    Bounded(i64),
    Unbounded,
}

/// Exact minimum of `(objective, lambda)` over integer points
/// `lambda in cone` with `(normal, lambda) <= bound`.
///
/// The rational relaxation is solved by vertex enumeration; the integer
/// optimum is then located by sweeping level lines of the objective
/// upward from the relaxation value, which terminates because a feasible
/// integer point is constructed up front. `Unbounded` is returned when
/// the objective is negative somewhere on the recession cone of the
/// feasible region.
pub fn lattice_minimize(
    objective: Vec2,
    cone: &Cone2,
    normal: Vec2,
    bound: i64,
) -> Result<MinimizeOutcome> {
    let (g1, g2) = cone.generators();
    let s1 = normal.dot(g1);
    let s2 = normal.dot(g2);
    let b = bound as i128;

    if b < 0 && s1 >= 0 && s2 >= 0 {
        // (normal, .) is non-negative on the whole cone
        return Err(Error::EmptyFeasibleRegion);
    }

    // recession cone of the feasible region: cone cut by (normal, .) <= 0
    let mut rec: Vec<Vec2> = Vec::new();
    if s1 <= 0 && s2 <= 0 {
        rec.push(g1);
        rec.push(g2);
    } else if s1 > 0 && s2 > 0 {
        // trivial recession cone
    } else {
        // exactly one generator on each side; the cut line crosses the cone
        let w0 = normal.rot90ccw();
        let w = if cone.contains(w0) { w0 } else { w0.neg() };
        debug_assert!(cone.contains(w) && normal.dot(w) == 0);
        if s1 <= 0 {
            rec.push(g1);
        }
        if s2 <= 0 {
            rec.push(g2);
        }
        rec.push(w);
    }
    if rec.iter().any(|r| objective.dot(*r) < 0) {
        return Ok(MinimizeOutcome::Unbounded);
    }

    if objective.is_zero() {
        return Ok(MinimizeOutcome::Bounded(0));
    }

    // rational optimum over the vertices of the region
    let mut z_lp: Option<Ratio<i128>> = None;
    let mut push = |v: Ratio<i128>| match &mut z_lp {
        Some(z) => {
            if v < *z {
                *z = v
            }
        }
        None => z_lp = Some(v),
    };
    if b >= 0 {
        push(Ratio::from_integer(0));
    }
    for (g, s) in [(g1, s1), (g2, s2)] {
        if s != 0 {
            let t = Ratio::new(b, s);
            if t >= Ratio::from_integer(0) {
                push(t * Ratio::from_integer(objective.dot(g)));
            }
        }
    }
    let z_lp = z_lp.ok_or_else(|| {
        Error::Internal("feasible region with no vertex".into())
    })?;

    // a concrete feasible integer point gives an upper bound for the sweep
    let witness = if b >= 0 {
        Vec2::ZERO
    } else {
        let (g, s) = if s1 < 0 { (g1, s1) } else { (g2, s2) };
        let t = ratio_ceil(Ratio::new(b, s));
        debug_assert!(t > 0);
        Vec2::new(g.x * t as i64, g.y * t as i64)
    };
    let z_hi = objective.dot(witness);

    let step = gcd_i64(objective.x.abs(), objective.y.abs()) as i128;
    let mut z = ratio_ceil(z_lp / Ratio::from_integer(step)) * step;
    let mut guard = 0usize;
    while z <= z_hi {
        if level_line_feasible(objective, z, cone, normal, b) {
            let out = i64::try_from(z)
                .map_err(|_| Error::Internal("minimum exceeds i64".into()))?;
            return Ok(MinimizeOutcome::Bounded(out));
        }
        z += step;
        guard += 1;
        if guard > 4_000_000 {
            return Err(Error::Internal("level-line sweep did not terminate".into()));
        }
    }
    Err(Error::Internal(
        "integer witness not reached by level-line sweep".into(),
    ))
}

/// Does the line `(objective, lambda) = z` meet the feasible region in an
/// integer point?
fn level_line_feasible(c: Vec2, z: i128, cone: &Cone2, normal: Vec2, b: i128) -> bool {
    let g = num_integer::gcd(c.x.abs() as i128, c.y.abs() as i128);
    if z % g != 0 {
        return false;
    }
    // base integer solution of c.x * x + c.y * y = z via the extended gcd
    let e = num_integer::Integer::extended_gcd(&(c.x as i128), &(c.y as i128));
    let q = z / g;
    let base = (e.x * q, e.y * q);
    // integer points on the line: base + k * dir
    let dir = (-(c.y as i128) / g, c.x as i128 / g);

    // each constraint row (a, b, c0): a*x + b*y + c0 >= 0
    let (g1, g2) = cone.generators();
    let rows = [
        // cross(g1, p) >= 0
        (-(g1.y as i128), g1.x as i128, 0i128),
        // cross(p, g2) >= 0
        (g2.y as i128, -(g2.x as i128), 0i128),
        // b - (normal, p) >= 0
        (-(normal.x as i128), -(normal.y as i128), b),
    ];
    // intersect rational intervals for k
    let mut lo: Option<Ratio<i128>> = None;
    let mut hi: Option<Ratio<i128>> = None;
    for (a, bb, c0) in rows {
        let const_term = a * base.0 + bb * base.1 + c0;
        let k_coef = a * dir.0 + bb * dir.1;
        match k_coef.cmp(&0) {
            Ordering::Equal => {
                if const_term < 0 {
                    return false;
                }
            }
            Ordering::Greater => {
                // k >= -const/k_coef
                let l = Ratio::new(-const_term, k_coef);
                if lo.as_ref().map_or(true, |cur| l > *cur) {
                    lo = Some(l);
                }
            }
            Ordering::Less => {
                let h = Ratio::new(-const_term, k_coef);
                if hi.as_ref().map_or(true, |cur| h < *cur) {
                    hi = Some(h);
                }
            }
        }
    }
    let k_lo = lo.map(ratio_ceil);
    let k_hi = hi.map(ratio_floor);
    match (k_lo, k_hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true, // a half-infinite or full line of integer points
    }
}

fn ratio_ceil(r: Ratio<i128>) -> i128 {
    r.ceil().to_integer()
}

fn ratio_floor(r: Ratio<i128>) -> i128 {
    r.floor().to_integer()
}

/// Brute-force reference for [`lattice_minimize`]: enumerate all integer
/// points with coordinates bounded by `radius` and take the minimum.
///
/// Returns `None` if no feasible point lies in the search box. This is the
/// independent oracle used by the test suites; it stays deliberately naive.
pub fn brute_force_minimize(
    objective: Vec2,
    cone: &Cone2,
    normal: Vec2,
    bound: i64,
    radius: i64,
) -> Option<i64> {
    let mut best: Option<i128> = None;
    for x in -radius..=radius {
        for y in -radius..=radius {
            let p = Vec2::new(x, y);
            if !cone.contains(p) {
                continue;
            }
            if normal.dot(p) > bound as i128 {
                continue;
            }
            let v = objective.dot(p);
            if best.map_or(true, |b| v < b) {
                best = Some(v);
            }
        }
    }
    best.map(|b| b as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(v(-2, 0).primitive().unwrap(), (v(-1, 0), 2));
        assert_eq!(v(1, 0).primitive().unwrap(), (v(1, 0), 1));
        assert_eq!(v(-6, -18).primitive().unwrap(), (v(-1, -3), 6));
        assert_eq!(v(0, 0).primitive(), Err(Error::ZeroVector));
    }

    #[test]
    fn mu_compare_examples() {
        // mu^2 = 25 vs 1
        assert_eq!(
            mu_compare(v(-1, -5), v(0, -1), v(-1, 0)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            mu_compare(v(-1, -1), v(0, -1), v(-1, 0)).unwrap(),
            Ordering::Equal
        );
        // 64/10 vs 1
        assert_eq!(
            mu_compare(v(1, -5), v(3, -1), v(1, 0)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(mu_compare(v(1, 1), v(0, 0), v(1, 0)), Err(Error::ZeroVector));
    }

    #[test]
    fn mu_negative_values_order_by_signed_magnitude() {
        // both slopes negative: smaller squared magnitude is the larger mu
        let chi = v(1, 0);
        let m1 = MuValue::of(chi, v(-1, 0)).unwrap(); // mu = -1
        let m2 = MuValue::of(chi, v(-2, 1)).unwrap(); // mu = -2/sqrt5
        assert!(m2 > m1);
    }

    #[test]
    fn dual_cone_examples() {
        let q3 = Cone2::new(v(-1, 0), v(0, -1)).unwrap();
        assert_eq!(q3.dual(), q3);
        let q1 = Cone2::new(v(1, 0), v(0, 1)).unwrap();
        assert_eq!(q1.dual(), q1);
        let c = Cone2::new(v(1, 3), v(-1, 0)).unwrap();
        assert_eq!(c.dual(), Cone2::new(v(0, 1), v(-3, 1)).unwrap());
    }

    #[test]
    fn degenerate_cones_rejected() {
        assert_eq!(Cone2::new(v(1, 0), v(2, 0)), Err(Error::DegenerateCone));
        assert_eq!(Cone2::new(v(1, 0), v(-3, 0)), Err(Error::DegenerateCone));
        // wrong orientation
        assert_eq!(Cone2::new(v(0, 1), v(1, 0)), Err(Error::DegenerateCone));
    }

    #[test]
    fn minimize_wall_length_instance() {
        // third quadrant, level set below the line y = -1
        let q3 = Cone2::new(v(-1, 0), v(0, -1)).unwrap();
        let out = lattice_minimize(v(0, -3), &q3, v(0, 1), -1).unwrap();
        assert_eq!(out, MinimizeOutcome::Bounded(3));
    }

    #[test]
    fn minimize_zero_objective() {
        let q3 = Cone2::new(v(-1, 0), v(0, -1)).unwrap();
        let out = lattice_minimize(v(0, 0), &q3, v(0, 1), -1).unwrap();
        assert_eq!(out, MinimizeOutcome::Bounded(0));
    }

    #[test]
    fn minimize_unbounded_on_recession_ray() {
        // objective decreases without bound along the ray (-1, 0)
        let q3 = Cone2::new(v(-1, 0), v(0, -1)).unwrap();
        let out = lattice_minimize(v(1, 0), &q3, v(1, 0), -1).unwrap();
        assert_eq!(out, MinimizeOutcome::Unbounded);
    }

    #[test]
    fn minimize_bounded_despite_unbounded_region() {
        // the region {x <= -1} in Q3 is unbounded but the objective -x is not
        let q3 = Cone2::new(v(-1, 0), v(0, -1)).unwrap();
        let out = lattice_minimize(v(-1, 0), &q3, v(1, 0), -1).unwrap();
        assert_eq!(out, MinimizeOutcome::Bounded(1));
        assert_eq!(
            brute_force_minimize(v(-1, 0), &q3, v(1, 0), -1, 25),
            Some(1)
        );
    }

    #[test]
    fn minimize_empty_region() {
        let q1 = Cone2::new(v(1, 0), v(0, 1)).unwrap();
        assert_eq!(
            lattice_minimize(v(1, 1), &q1, v(1, 1), -1),
            Err(Error::EmptyFeasibleRegion)
        );
    }

    #[test]
    fn ccw_order_walks_the_circle() {
        let mut rays = vec![v(1, 0), v(1, 3), v(-1, 0), v(0, -1)];
        rays.sort_by(|a, b| a.ccw_cmp(*b));
        assert_eq!(rays, vec![v(1, 0), v(1, 3), v(-1, 0), v(0, -1)]);
        let mut shuffled = vec![v(0, -1), v(-1, 0), v(1, 3), v(1, 0)];
        shuffled.sort_by(|a, b| a.ccw_cmp(*b));
        assert_eq!(shuffled, rays);
    }

    proptest! {
        #[test]
        fn primitive_absorbs_positive_scaling(x in -40i64..40, y in -40i64..40, k in 1i64..9) {
            prop_assume!(x != 0 || y != 0);
            let (d, m) = Vec2::new(x, y).primitive().unwrap();
            let (d2, m2) = Vec2::new(x * k, y * k).primitive().unwrap();
            prop_assert_eq!(d, d2);
            prop_assert_eq!(m2, m * k);
        }

        #[test]
        fn mu_invariant_under_positive_scaling(
            cx in -9i64..9, cy in -9i64..9,
            lx in -9i64..9, ly in -9i64..9,
            k in 1i64..7,
        ) {
            prop_assume!(lx != 0 || ly != 0);
            let chi = Vec2::new(cx, cy);
            let l = Vec2::new(lx, ly);
            let scaled = Vec2::new(lx * k, ly * k);
            prop_assert_eq!(MuValue::of(chi, l).unwrap(), MuValue::of(chi, scaled).unwrap());
        }

        #[test]
        fn dual_is_an_involution(ax in -9i64..9, ay in -9i64..9, bx in -9i64..9, by in -9i64..9) {
            let a = Vec2::new(ax, ay);
            let b = Vec2::new(bx, by);
            prop_assume!(!a.is_zero() && !b.is_zero() && a.cross(b) > 0);
            let c = Cone2::new(a, b).unwrap();
            prop_assert_eq!(c.dual().dual(), c);
        }

        #[test]
        fn minimize_matches_brute_force(
            ax in -5i64..=5, ay in -5i64..=5,
            bx in -5i64..=5, by in -5i64..=5,
            ox in -6i64..=6, oy in -6i64..=6,
            nx in -4i64..=4, ny in -4i64..=4,
            bound in -6i64..=6,
        ) {
            let a = Vec2::new(ax, ay);
            let b = Vec2::new(bx, by);
            prop_assume!(!a.is_zero() && !b.is_zero() && a.cross(b) > 0);
            let cone = Cone2::new(a, b).unwrap();
            let obj = Vec2::new(ox, oy);
            let normal = Vec2::new(nx, ny);
            match lattice_minimize(obj, &cone, normal, bound) {
                Ok(MinimizeOutcome::Bounded(m)) => {
                    // the oracle sees the optimum once its box is wide
                    // enough; thin cones can push every feasible point out
                    // of a small box
                    let oracle = brute_force_minimize(obj, &cone, normal, bound, 25)
                        .or_else(|| brute_force_minimize(obj, &cone, normal, bound, 90));
                    if let Some(o) = oracle {
                        prop_assert_eq!(o, m);
                    }
                }
                Ok(MinimizeOutcome::Unbounded) => {
                    // the oracle value keeps dropping as the radius grows
                    let small = brute_force_minimize(obj, &cone, normal, bound, 12);
                    let large = brute_force_minimize(obj, &cone, normal, bound, 40);
                    if let (Some(s), Some(l)) = (small, large) {
                        prop_assert!(l < s);
                    }
                }
                Err(Error::EmptyFeasibleRegion) => {
                    prop_assert_eq!(brute_force_minimize(obj, &cone, normal, bound, 40), None);
                }
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            }
        }
    }
}
