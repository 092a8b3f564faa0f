//! Weight matrices and the GKZ wall-and-chamber fan.
//!
//! The geometric input for everything in this crate is a 2 x m integer
//! matrix of torus weights with zero row sums. Its columns group into
//! primitive rays with multiplicities; negating those rays and taking
//! consecutive pairs yields the complete fan of GIT chambers.

use crate::error::{Error, Result};
use crate::lattice::{Cone2, Vec2, MAX_COORD};
use serde::{Deserialize, Serialize};

/// Validated 2 x m weight matrix of a rank-2 torus action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMatrix {
    columns: Vec<Vec2>,
    labels: Vec<String>,
}

impl WeightMatrix {
    /// Validates a raw 2-row integer table: every column nonzero, columns
    /// spanning the plane, and both row sums zero.
    pub fn parse_and_validate(rows: &[Vec<i64>; 2], labels: Option<Vec<String>>) -> Result<WeightMatrix> {
        if rows[0].len() != rows[1].len() {
            return Err(Error::InvalidInput("weight rows have different lengths".into()));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::InvalidInput("weight matrix has no columns".into()));
        }
        let columns: Vec<Vec2> = (0..m).map(|i| Vec2::new(rows[0][i], rows[1][i])).collect();
        for (i, c) in columns.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::ZeroColumn(i));
            }
            if c.x.abs() > MAX_COORD || c.y.abs() > MAX_COORD {
                return Err(Error::InvalidInput(format!(
                    "column {i} exceeds the supported coordinate bound {MAX_COORD}"
                )));
            }
        }
        for (row, vals) in rows.iter().enumerate() {
            let sum: i64 = vals.iter().sum();
            if sum != 0 {
                return Err(Error::NotCalabiYau { row, sum });
            }
        }
        if columns.windows(2).all(|w| w[0].cross(w[1]) == 0) {
            return Err(Error::RankDeficient);
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != m {
                    return Err(Error::InvalidInput("label count does not match column count".into()));
                }
                l
            }
            None => (0..m).map(|i| format!("x{i}")).collect(),
        };
        Ok(WeightMatrix { columns, labels })
    }

    pub fn columns(&self) -> &[Vec2] {
        &self.columns
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

/// All columns sharing one primitive ray direction, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayGroup {
    /// Primitive direction common to the member columns.
    pub chi: Vec2,
    /// Positive multiplier of each member column, in column order.
    pub multipliers: Vec<i64>,
    /// Sum of the multipliers.
    pub total: i64,
    /// Indices of the member columns in the weight matrix.
    pub member_columns: Vec<usize>,
}

/// Groups the columns of a weight matrix by primitive direction, ordered
/// counterclockwise starting at the positive x-axis.
pub fn group_rays(w: &WeightMatrix) -> Vec<RayGroup> {
    let mut groups: Vec<RayGroup> = Vec::new();
    for (i, col) in w.columns().iter().enumerate() {
        let (dir, mult) = col.primitive().expect("validated columns are nonzero");
        match groups.iter_mut().find(|g| g.chi == dir) {
            Some(g) => {
                g.multipliers.push(mult);
                g.total += mult;
                g.member_columns.push(i);
            }
            None => groups.push(RayGroup {
                chi: dir,
                multipliers: vec![mult],
                total: mult,
                member_columns: vec![i],
            }),
        }
    }
    groups.sort_by(|a, b| a.chi.ccw_cmp(b.chi));
    groups
}

/// The GKZ fan: wall rays (negated primitive weight rays) in
/// counterclockwise order, and the chambers they bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkzFan {
    ray_groups: Vec<RayGroup>,
    /// Primitive wall rays, counterclockwise from the positive x-axis.
    walls: Vec<Wall>,
    chambers: Vec<Cone2>,
}

/// One wall of the fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    /// Primitive ray spanning the wall.
    pub ray: Vec2,
    /// Ray groups whose negated direction spans this wall.
    pub source_groups: Vec<usize>,
}

impl GkzFan {
    pub fn ray_groups(&self) -> &[RayGroup] {
        &self.ray_groups
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn chambers(&self) -> &[Cone2] {
        &self.chambers
    }

    pub fn wall(&self, idx: usize) -> Result<&Wall> {
        self.walls.get(idx).ok_or(Error::IndexOutOfRange { what: "wall", index: idx })
    }

    pub fn chamber(&self, idx: usize) -> Result<&Cone2> {
        self.chambers.get(idx).ok_or(Error::IndexOutOfRange { what: "chamber", index: idx })
    }

    /// The two chambers adjacent to a wall, counterclockwise then
    /// clockwise of the wall ray.
    pub fn chambers_of_wall(&self, idx: usize) -> Result<(usize, usize)> {
        self.wall(idx)?;
        let n = self.walls.len();
        // chamber i spans walls i and i+1, so wall i separates
        // chambers i-1 (clockwise side) and i (counterclockwise side)
        let ccw = idx;
        let cw = (idx + n - 1) % n;
        Ok((ccw, cw))
    }
}

/// Builds the complete wall-and-chamber fan from the ray groups.
pub fn build_fan(w: &WeightMatrix) -> Result<GkzFan> {
    let ray_groups = group_rays(w);
    let mut walls: Vec<Wall> = Vec::new();
    for (gi, g) in ray_groups.iter().enumerate() {
        let ray = g.chi.neg();
        match walls.iter_mut().find(|wl| wl.ray == ray) {
            Some(wl) => wl.source_groups.push(gi),
            None => walls.push(Wall { ray, source_groups: vec![gi] }),
        }
    }
    walls.sort_by(|a, b| a.ray.ccw_cmp(b.ray));
    if walls.len() < 3 {
        // unreachable for a validated Calabi-Yau matrix of rank 2
        return Err(Error::DegenerateFan);
    }
    let mut chambers = Vec::with_capacity(walls.len());
    for i in 0..walls.len() {
        let a = walls[i].ray;
        let b = walls[(i + 1) % walls.len()].ray;
        chambers.push(Cone2::new(a, b)?);
    }
    Ok(GkzFan { ray_groups, walls, chambers })
}

/// Where a character sits relative to the fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    Chamber(usize),
    Wall(usize),
    Origin,
}

/// Classifies a character as interior to exactly one chamber, on exactly
/// one wall ray, or zero.
pub fn locate(fan: &GkzFan, chi: Vec2) -> Location {
    if chi.is_zero() {
        return Location::Origin;
    }
    for (i, w) in fan.walls().iter().enumerate() {
        if w.ray.same_ray(chi) {
            return Location::Wall(i);
        }
    }
    for (i, c) in fan.chambers().iter().enumerate() {
        if c.contains_interior(chi) {
            return Location::Chamber(i);
        }
    }
    unreachable!("a complete fan covers every nonzero direction")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn paper_matrix() -> WeightMatrix {
        WeightMatrix::parse_and_validate(
            &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
            Some(
                ["x", "x", "x", "y", "y", "y", "p", "q"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            ),
        )
        .unwrap()
    }

    #[test]
    fn validation_accepts_the_running_examples() {
        paper_matrix();
        WeightMatrix::parse_and_validate(&[vec![1, 1, -1, -1], vec![1, -1, 1, -1]], None).unwrap();
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(matches!(
            WeightMatrix::parse_and_validate(&[vec![1, 1, -2], vec![1, 1, -2]], None),
            Err(Error::RankDeficient)
        ));
        assert!(matches!(
            WeightMatrix::parse_and_validate(&[vec![1, 1], vec![1, 1]], None),
            Err(Error::NotCalabiYau { row: 0, sum: 2 })
        ));
        assert!(matches!(
            WeightMatrix::parse_and_validate(&[vec![1, 0, -1], vec![1, 0, -1]], None),
            Err(Error::ZeroColumn(1))
        ));
    }

    #[test]
    fn ray_grouping_on_the_running_example() {
        let groups = group_rays(&paper_matrix());
        let summary: Vec<(Vec2, Vec<i64>)> =
            groups.iter().map(|g| (g.chi, g.multipliers.clone())).collect();
        assert_eq!(
            summary,
            vec![
                (Vec2::new(1, 0), vec![1, 1, 1]),
                (Vec2::new(0, 1), vec![1, 1, 1]),
                (Vec2::new(-1, 0), vec![2]),
                (Vec2::new(-1, -3), vec![1]),
            ]
        );
        // reconstructibility: multipliers times directions give back the columns
        let w = paper_matrix();
        for g in &groups {
            for (&col, &mult) in g.member_columns.iter().zip(&g.multipliers) {
                assert_eq!(w.columns()[col], g.chi.scale(mult));
            }
        }
        // restated Calabi-Yau condition
        let sum = groups.iter().fold(Vec2::ZERO, |acc, g| acc.add(g.chi.scale(g.total)));
        assert!(sum.is_zero());
    }

    #[test]
    fn square_matrix_groups_are_singletons() {
        let w = WeightMatrix::parse_and_validate(&[vec![1, 1, -1, -1], vec![1, -1, 1, -1]], None)
            .unwrap();
        let groups = group_rays(&w);
        assert_eq!(groups.len(), 4);
        assert!(groups.iter().all(|g| g.multipliers == vec![1]));
    }

    #[test]
    fn fan_of_the_running_example() {
        let fan = build_fan(&paper_matrix()).unwrap();
        let walls: Vec<Vec2> = fan.walls().iter().map(|w| w.ray).collect();
        assert_eq!(
            walls,
            vec![Vec2::new(1, 0), Vec2::new(1, 3), Vec2::new(-1, 0), Vec2::new(0, -1)]
        );
        assert_eq!(fan.chambers().len(), 4);
        // the chamber spanning (-1,0),(0,-1) is present
        let q3 = Cone2::new(Vec2::new(-1, 0), Vec2::new(0, -1)).unwrap();
        assert!(fan.chambers().contains(&q3));
    }

    #[test]
    fn square_fan_has_four_diagonal_walls() {
        let w = WeightMatrix::parse_and_validate(&[vec![1, 1, -1, -1], vec![1, -1, 1, -1]], None)
            .unwrap();
        let fan = build_fan(&w).unwrap();
        let walls: Vec<Vec2> = fan.walls().iter().map(|w| w.ray).collect();
        assert_eq!(
            walls,
            vec![Vec2::new(1, 1), Vec2::new(-1, 1), Vec2::new(-1, -1), Vec2::new(1, -1)]
        );
        assert_eq!(fan.chambers().len(), fan.walls().len());
    }

    #[test]
    fn locate_classifies_points() {
        let fan = build_fan(&paper_matrix()).unwrap();
        // interior of the chamber spanning (-1,0),(0,-1)
        let loc = locate(&fan, Vec2::new(-1, -2));
        let Location::Chamber(c) = loc else { panic!("expected chamber, got {loc:?}") };
        let q3 = Cone2::new(Vec2::new(-1, 0), Vec2::new(0, -1)).unwrap();
        assert_eq!(fan.chambers()[c], q3);
        // on the wall spanned by (0,-1)
        let loc = locate(&fan, Vec2::new(0, -7));
        let Location::Wall(w) = loc else { panic!("expected wall, got {loc:?}") };
        assert_eq!(fan.walls()[w].ray, Vec2::new(0, -1));
        assert_eq!(locate(&fan, Vec2::ZERO), Location::Origin);
    }

    #[test]
    fn chambers_tile_the_plane() {
        let fan = build_fan(&paper_matrix()).unwrap();
        // a grid of sample directions lands in exactly one chamber interior,
        // on one wall, or at the origin
        for x in -8..=8i64 {
            for y in -8..=8i64 {
                let p = Vec2::new(x, y);
                let interior = fan.chambers().iter().filter(|c| c.contains_interior(p)).count();
                let on_wall = fan.walls().iter().filter(|w| w.ray.same_ray(p)).count();
                if p.is_zero() {
                    assert_eq!((interior, on_wall), (0, 0));
                } else {
                    assert_eq!(interior + on_wall, 1, "direction {p} not covered exactly once");
                }
            }
        }
    }

    #[test]
    fn wall_adjacency_is_consistent() {
        let fan = build_fan(&paper_matrix()).unwrap();
        for i in 0..fan.walls().len() {
            let (ccw, cw) = fan.chambers_of_wall(i).unwrap();
            let ray = fan.walls()[i].ray;
            let (a, _) = fan.chambers()[ccw].generators();
            let (_, b) = fan.chambers()[cw].generators();
            assert_eq!(a, ray);
            assert_eq!(b, ray);
        }
    }
}
