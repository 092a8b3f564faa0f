//! Kirwan-Ness stratifications, grade-restriction windows, and balanced
//! wall crossings.
//!
//! For a linearizing character chi strictly inside a chamber, the unstable
//! locus is stratified inductively: the most unstable stratum attracts
//! along the primitive cocharacter parallel to chi, and every weight ray
//! contributes a candidate cocharacter perpendicular to it, admitted in
//! order of strictly decreasing Hilbert-Mumford slope unless its fixed
//! locus is already swallowed by earlier strata.
//!
//! Wall crossings are analyzed at the near-wall limit: the character
//! `K*r + r_perp` with `K -> infinity` is evaluated symbolically, so every
//! sign and slope comparison is a lexicographic test on small integer
//! polynomials in `K`. A concrete `K` reproducing the limit stratification
//! is then computed and reported for reproducibility.

use crate::coordset::CoordSet;
use crate::error::{Error, Result};
use crate::gkz::{locate, GkzFan, Location, WeightMatrix};
use crate::lattice::{MuValue, Vec2};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Pairing values that are linear in the formal near-wall parameter `K`.
/// Concrete characters have `k = 0`. Signs are read lexicographically
/// from the `K` coefficient down, i.e. in the `K -> infinity` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Lin {
    k: i128,
    c: i128,
}

impl Lin {
    fn sign(self) -> i8 {
        let lead = if self.k != 0 { self.k } else { self.c };
        match lead.cmp(&0) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

/// A linearization: either a concrete character or the limit of
/// `K*ray + perp` as `K -> infinity`.
#[derive(Debug, Clone, Copy)]
enum Character {
    Concrete(Vec2),
    NearWall { ray: Vec2, perp: Vec2 },
}

impl Character {
    fn pair(&self, v: Vec2) -> Lin {
        match *self {
            Character::Concrete(chi) => Lin { k: 0, c: chi.dot(v) },
            Character::NearWall { ray, perp } => Lin { k: ray.dot(v), c: perp.dot(v) },
        }
    }

    /// Compares mu(chi, l1)^2 against mu(chi, l2)^2 exactly, as
    /// quadratic polynomials in `K` ordered lexicographically.
    fn mu_sq_cmp(&self, l1: Vec2, l2: Vec2) -> Ordering {
        let p1 = self.pair(l1);
        let p2 = self.pair(l2);
        let n1 = l1.norm_sq();
        let n2 = l2.norm_sq();
        let lhs = [p1.k * p1.k * n2, 2 * p1.k * p1.c * n2, p1.c * p1.c * n2];
        let rhs = [p2.k * p2.k * n1, 2 * p2.k * p2.c * n1, p2.c * p2.c * n1];
        lhs.cmp(&rhs)
    }
}

/// One unstable stratum: destabilizing cocharacter, slope, fixed locus,
/// attracting set, and the window widths for both signs of the
/// cocharacter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnStratum {
    pub lambda: Vec2,
    /// Squared slope as an exact fraction (numerator, denominator), with
    /// the sign stored separately; populated for concrete linearizations.
    pub mu_sq: (i128, i128),
    pub z_set: CoordSet,
    pub s_set: CoordSet,
    pub eta_plus: i64,
    pub eta_minus: i64,
}

/// The full Kirwan-Ness stratification for one linearization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratification {
    pub linearization: Vec2,
    pub lambda_max: Vec2,
    /// Support of the most unstable stratum (closed, no exclusions).
    pub s_max_set: CoordSet,
    /// Remaining strata in strictly decreasing slope order.
    pub strata: Vec<KnStratum>,
    /// Candidate cocharacters skipped because their fixed locus was
    /// contained in an earlier stratum.
    pub skipped: Vec<Vec2>,
}

/// Stratification data independent of how slopes are recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CoreStratum {
    lambda: Vec2,
    fixed_support: Vec<usize>,
    attracting_support: Vec<usize>,
    z: CoordSet,
    s: CoordSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CoreStrat {
    s_max_support: Vec<usize>,
    strata: Vec<CoreStratum>,
    skipped: Vec<Vec2>,
}

fn stratify_core(w: &WeightMatrix, fan: &GkzFan, chi: &Character) -> Result<CoreStrat> {
    let cols = w.columns();
    let s_max_support: Vec<usize> =
        (0..cols.len()).filter(|&i| chi.pair(cols[i]).sign() >= 0).collect();

    // one candidate per ray group: the perpendicular primitive cocharacter
    // with positive slope
    let mut candidates: Vec<Vec2> = Vec::new();
    for g in fan.ray_groups() {
        let perp = g.chi.rot90ccw();
        let lam = match chi.pair(perp).sign() {
            1 => perp,
            -1 => perp.neg(),
            _ => {
                return Err(Error::NonGenericLinearization(format!(
                    "character is parallel to the weight ray {}; the candidate \
                     cocharacter perpendicular to it has slope zero",
                    g.chi
                )))
            }
        };
        if !candidates.contains(&lam) {
            candidates.push(lam);
        }
    }
    candidates.sort_by(|a, b| chi.mu_sq_cmp(*a, *b).reverse());
    for pair in candidates.windows(2) {
        if chi.mu_sq_cmp(pair[0], pair[1]) == Ordering::Equal {
            return Err(Error::NonGenericLinearization(format!(
                "candidate cocharacters {} and {} have equal slope",
                pair[0], pair[1]
            )));
        }
    }

    let mut earlier_supports: Vec<Vec<usize>> = vec![s_max_support.clone()];
    let mut strata = Vec::new();
    let mut skipped = Vec::new();
    for lam in candidates {
        let fixed: Vec<usize> =
            (0..cols.len()).filter(|&i| cols[i].dot(lam) == 0).collect();
        let swallowed =
            earlier_supports.iter().any(|b| fixed.iter().all(|i| b.contains(i)));
        if swallowed {
            skipped.push(lam);
            continue;
        }
        let attracting: Vec<usize> =
            (0..cols.len()).filter(|&i| cols[i].dot(lam) >= 0).collect();
        let z = CoordSet::new(fixed.iter().copied(), earlier_supports.iter().cloned());
        let s = CoordSet::new(attracting.iter().copied(), earlier_supports.iter().cloned());
        earlier_supports.push(attracting.clone());
        strata.push(CoreStratum { lambda: lam, fixed_support: fixed, attracting_support: attracting, z, s });
    }
    Ok(CoreStrat { s_max_support, strata, skipped })
}

/// Window width of a cocharacter: the total negative pairing against the
/// weight columns. Equals the width for the opposite cocharacter on any
/// Calabi-Yau matrix.
pub fn eta_of(w: &WeightMatrix, lambda: Vec2) -> Result<i64> {
    if lambda.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut eta: i128 = 0;
    for c in w.columns() {
        let p = c.dot(lambda);
        if p < 0 {
            eta -= p;
        }
    }
    i64::try_from(eta).map_err(|_| Error::Internal("window width exceeds i64".into()))
}

/// Computes the Kirwan-Ness stratification for a character strictly
/// inside a chamber of the fan.
pub fn kn_stratify(w: &WeightMatrix, fan: &GkzFan, chi: Vec2) -> Result<Stratification> {
    match locate(fan, chi) {
        Location::Chamber(_) => {}
        Location::Wall(i) => {
            return Err(Error::NonGenericLinearization(format!(
                "character {chi} lies on wall {i}"
            )))
        }
        Location::Origin => {
            return Err(Error::NonGenericLinearization("character is zero".into()))
        }
    }
    let core = stratify_core(w, fan, &Character::Concrete(chi))?;
    finish_stratification(w, chi, core)
}

fn finish_stratification(w: &WeightMatrix, chi: Vec2, core: CoreStrat) -> Result<Stratification> {
    let (lambda_max, _) = chi.primitive()?;
    let strata = core
        .strata
        .into_iter()
        .map(|cs| {
            let mu = MuValue::of(chi, cs.lambda)?;
            Ok(KnStratum {
                lambda: cs.lambda,
                mu_sq: (*mu.mag_sq.numer(), *mu.mag_sq.denom()),
                z_set: cs.z,
                s_set: cs.s,
                eta_plus: eta_of(w, cs.lambda)?,
                eta_minus: eta_of(w, cs.lambda.neg())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Stratification {
        linearization: chi,
        lambda_max,
        s_max_set: CoordSet::span(core.s_max_support.iter().copied()),
        strata,
        skipped: core.skipped,
    })
}

/// Integer grade-restriction window data at weight `w` for width `eta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDescriptor {
    pub weight: i64,
    pub eta: i64,
    /// Weights in the half-open window `[w, w + eta)`.
    pub g_window: Vec<i64>,
    /// Weights in the closed window `[w, w + eta]`.
    pub c_window: Vec<i64>,
    /// The dual window position `-eta - w`.
    pub dual_weight: i64,
}

/// Builds the window descriptor for a stratum at window position `w`.
pub fn window_descriptor(stratum: &KnStratum, w: i64) -> WindowDescriptor {
    window_descriptor_for_eta(stratum.eta_plus, w)
}

pub fn window_descriptor_for_eta(eta: i64, w: i64) -> WindowDescriptor {
    WindowDescriptor {
        weight: w,
        eta,
        g_window: (w..w + eta).collect(),
        c_window: (w..=w + eta).collect(),
        dual_weight: -eta - w,
    }
}

/// Comparison of the stratifications on the two sides of one wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancedWallReport {
    pub wall_index: usize,
    pub wall_ray: Vec2,
    /// Concrete test characters `K*r + r_perp` (counterclockwise side)
    /// and `K*r - r_perp` (clockwise side) reproducing the near-wall
    /// limit, with the computed `K`.
    pub k_used: i64,
    pub character_ccw: Vec2,
    pub character_cw: Vec2,
    pub stratification_ccw: Stratification,
    pub stratification_cw: Stratification,
    /// The flipped pair: least unstable strata with opposite cocharacters.
    pub flipped_ccw: KnStratum,
    pub flipped_cw: KnStratum,
    pub shared_z: CoordSet,
    pub eta: i64,
    /// Weights of the residual one-parameter action on the fixed locus,
    /// measured against the wall's source ray direction.
    pub residual_weights: Vec<i64>,
    pub balanced: bool,
}

impl BalancedWallReport {
    /// The window-dual map `w -> -eta - w`.
    pub fn window_dual(&self, w: i64) -> i64 {
        -self.eta - w
    }
}

/// Analyzes the crossing of one wall with deterministic near-wall test
/// characters on both sides.
pub fn wall_crossing(w: &WeightMatrix, fan: &GkzFan, wall_idx: usize) -> Result<BalancedWallReport> {
    let wall = fan.wall(wall_idx)?.clone();
    let r = wall.ray;
    let perp = r.rot90ccw();

    let core_ccw = stratify_core(w, fan, &Character::NearWall { ray: r, perp })?;
    let core_cw = stratify_core(w, fan, &Character::NearWall { ray: r, perp: perp.neg() })?;

    // the flipped stratum is the one whose cocharacter is perpendicular
    // to the wall ray
    let find_flipped = |core: &CoreStrat| -> Option<usize> {
        core.strata.iter().position(|s| s.lambda.dot(r) == 0)
    };
    let (fp, fm) = match (find_flipped(&core_ccw), find_flipped(&core_cw)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NoFlippedStratum(wall_idx)),
    };
    let balanced = core_ccw.strata[fp].lambda == core_cw.strata[fm].lambda.neg()
        && core_ccw.strata[fp].z.set_eq(&core_cw.strata[fm].z);

    // smallest concrete K whose stratifications agree with the limit
    let (ccw_chamber, cw_chamber) = fan.chambers_of_wall(wall_idx)?;
    let mut chosen: Option<(i64, Stratification, Stratification)> = None;
    for k in 1..=10_000i64 {
        let chi_ccw = r.scale(k).add(perp);
        let chi_cw = r.scale(k).add(perp.neg());
        if locate(fan, chi_ccw) != Location::Chamber(ccw_chamber)
            || locate(fan, chi_cw) != Location::Chamber(cw_chamber)
        {
            continue;
        }
        let sc = match stratify_core(w, fan, &Character::Concrete(chi_ccw)) {
            Ok(s) => s,
            Err(Error::NonGenericLinearization(_)) => continue,
            Err(e) => return Err(e),
        };
        let sw = match stratify_core(w, fan, &Character::Concrete(chi_cw)) {
            Ok(s) => s,
            Err(Error::NonGenericLinearization(_)) => continue,
            Err(e) => return Err(e),
        };
        if sc == core_ccw && sw == core_cw {
            let strat_ccw = finish_stratification(w, chi_ccw, sc)?;
            let strat_cw = finish_stratification(w, chi_cw, sw)?;
            chosen = Some((k, strat_ccw, strat_cw));
            break;
        }
    }
    let (k_used, strat_ccw, strat_cw) = chosen.ok_or_else(|| {
        Error::Internal("no concrete character reproduces the near-wall limit".into())
    })?;

    let flipped_ccw = strat_ccw.strata[fp].clone();
    let flipped_cw = strat_cw.strata[fm].clone();
    let shared_z = flipped_ccw.z_set.clone();
    let eta = flipped_ccw.eta_plus;

    let residual_weights = residual_weights_on(w, &core_ccw.strata[fp].fixed_support, r)?;

    Ok(BalancedWallReport {
        wall_index: wall_idx,
        wall_ray: r,
        k_used,
        character_ccw: strat_ccw.linearization,
        character_cw: strat_cw.linearization,
        stratification_ccw: strat_ccw,
        stratification_cw: strat_cw,
        flipped_ccw,
        flipped_cw,
        shared_z,
        eta,
        residual_weights,
        balanced,
    })
}

/// Weights of the residual one-parameter action on the wall's fixed
/// coordinates, measured against the source direction `-ray`.
fn residual_weights_on(w: &WeightMatrix, fixed: &[usize], ray: Vec2) -> Result<Vec<i64>> {
    let source = ray.neg();
    let n = source.norm_sq();
    fixed
        .iter()
        .map(|&i| {
            let col = w.columns()[i];
            let num = col.dot(source);
            if num % n != 0 || col.cross(source) != 0 {
                return Err(Error::Internal("fixed column not parallel to the wall".into()));
            }
            i64::try_from(num / n).map_err(|_| Error::Internal("residual weight overflow".into()))
        })
        .collect()
}

/// Deterministic generic character inside a chamber: the first character
/// of the form `k*a + b` or `a + k*b` (generators `a`, `b`, small `k`)
/// whose stratification is generic.
pub fn chamber_character(w: &WeightMatrix, fan: &GkzFan, chamber: usize) -> Result<Vec2> {
    let (a, b) = fan.chamber(chamber)?.generators();
    let mut candidates = Vec::new();
    for k in 1..=40i64 {
        candidates.push(a.scale(k).add(b));
        candidates.push(a.add(b.scale(k)));
    }
    for chi in candidates {
        if kn_stratify(w, fan, chi).is_ok() {
            return Ok(chi);
        }
    }
    Err(Error::NonGenericLinearization(format!(
        "no generic character found in chamber {chamber}"
    )))
}

/// Weighted projective data of a wall's fixed subquotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedProjectiveData {
    /// Residual weights on the fixed coordinates, in column order.
    pub weights: Vec<i64>,
    /// True when the residual action has only positive weights, so the
    /// fixed subquotient is a weighted projective stack.
    pub all_positive: bool,
    /// Sum of the weights when all are positive: the length of a full
    /// exceptional collection on the fixed subquotient.
    pub collection_length: Option<i64>,
}

/// Extracts the residual weight data of the flipped stratum of a wall.
pub fn fixed_subquotient(
    w: &WeightMatrix,
    fan: &GkzFan,
    stratum: &KnStratum,
    wall_idx: usize,
) -> Result<WeightedProjectiveData> {
    let wall = fan.wall(wall_idx)?;
    if stratum.lambda.dot(wall.ray) != 0 {
        return Err(Error::NotWallStratum);
    }
    let fixed: Vec<usize> = (0..w.len())
        .filter(|&i| w.columns()[i].dot(stratum.lambda) == 0)
        .collect();
    if fixed != stratum.z_set.ambient() {
        return Err(Error::NotWallStratum);
    }
    let weights = residual_weights_on(w, &fixed, wall.ray)?;
    let all_positive = weights.iter().all(|&c| c > 0);
    let collection_length = all_positive.then(|| weights.iter().sum());
    Ok(WeightedProjectiveData { weights, all_positive, collection_length })
}
