//! Structured analysis requests and byte-stable reports.
//!
//! Reports serialize with a fixed field order and deterministic contents
//! for a fixed input, task set, and seed. Integers that can exceed 64
//! bits (pullback coefficients) are rendered as decimal strings.

use crate::coordset::CoordSet;
use crate::corpus::{
    run_double_mutation_suite, run_factorization_suite, run_intersection_suite,
    run_mutation_suite, run_wall_suite, SuiteReport,
};
use crate::error::{Error, Result};
use crate::gkz::{build_fan, GkzFan, WeightMatrix};
use crate::horn::{
    expected_autoequivalences, horn_pullback, normalize_and_render, wall_intersection_length,
    WallIntersection,
};
use crate::kmut::{factorization_plan, TwistPlan};
use crate::lattice::Vec2;
use crate::strat::{chamber_character, kn_stratify, wall_crossing, Stratification};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const SCHEMA_VERSION: u32 = 1;

/// Tasks a report can include.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Fan,
    Strata,
    Walls,
    Horn,
    Expected,
    Kmut,
}

impl Task {
    pub const ALL: [Task; 6] =
        [Task::Fan, Task::Strata, Task::Walls, Task::Horn, Task::Expected, Task::Kmut];

    pub fn parse(s: &str) -> Result<Task> {
        match s {
            "fan" => Ok(Task::Fan),
            "strata" => Ok(Task::Strata),
            "walls" => Ok(Task::Walls),
            "horn" => Ok(Task::Horn),
            "expected" => Ok(Task::Expected),
            "kmut" => Ok(Task::Kmut),
            other => Err(Error::InvalidInput(format!("unknown task '{other}'"))),
        }
    }
}

/// Optional parameters narrowing a request to one chamber, wall, etc.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RequestParams {
    pub chamber: Option<usize>,
    pub wall: Option<usize>,
    pub character: Option<(i64, i64)>,
    pub lambda: Option<(i64, i64)>,
    pub weight: Option<i64>,
    pub blocks: Option<usize>,
    pub eta: Option<i64>,
    pub corpus: Option<usize>,
    pub seed: Option<u64>,
}

/// A full analysis request: weights, tasks, and parameters.
#[derive(Debug, Clone)]
pub struct AnalysisRequest {
    pub weights: WeightMatrix,
    pub tasks: BTreeSet<Task>,
    pub params: RequestParams,
}

/// The versioned input document accepted as JSON or TOML.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDocument {
    pub schema: u32,
    pub weights: [Vec<i64>; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Parses an input document (JSON first, then TOML) into a validated
/// weight matrix.
pub fn parse_input(text: &str) -> Result<WeightMatrix> {
    let doc: InputDocument = match serde_json::from_str(text) {
        Ok(d) => d,
        Err(json_err) => toml::from_str(text).map_err(|toml_err| {
            Error::InvalidInput(format!(
                "input is neither valid JSON ({json_err}) nor valid TOML ({toml_err})"
            ))
        })?,
    };
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported input schema {} (expected {SCHEMA_VERSION})",
            doc.schema
        )));
    }
    WeightMatrix::parse_and_validate(&doc.weights, doc.labels)
}

fn pair(v: Vec2) -> [i64; 2] {
    [v.x, v.y]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputEcho {
    pub weights: [Vec<i64>; 2],
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayGroupView {
    pub chi: [i64; 2],
    pub multipliers: Vec<i64>,
    pub total: i64,
    pub member_columns: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallView {
    pub index: usize,
    pub ray: [i64; 2],
    pub source_groups: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChamberView {
    pub index: usize,
    pub label: String,
    pub generators: [[i64; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanReport {
    pub ray_groups: Vec<RayGroupView>,
    pub walls: Vec<WallView>,
    pub chambers: Vec<ChamberView>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoordSetView {
    pub notation: String,
    pub ambient: Vec<usize>,
    pub excluded: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumView {
    pub lambda: [i64; 2],
    pub mu_sq: String,
    pub z: CoordSetView,
    pub s: CoordSetView,
    pub eta_plus: i64,
    pub eta_minus: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratificationView {
    pub character: [i64; 2],
    pub chamber: usize,
    pub lambda_max: [i64; 2],
    pub s_max: CoordSetView,
    pub strata: Vec<StratumView>,
    pub skipped: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointView {
    pub point: [i64; 2],
    pub zero_of_groups: Vec<usize>,
    pub in_charts: Vec<usize>,
    pub length: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionView {
    pub applicable: bool,
    pub d_formula: i64,
    pub total: i64,
    pub charts_agree: bool,
    pub points: Vec<PointView>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallCrossingView {
    pub index: usize,
    pub ray: [i64; 2],
    pub balanced: bool,
    pub k_used: i64,
    pub character_ccw: [i64; 2],
    pub character_cw: [i64; 2],
    pub flipped_lambda_ccw: [i64; 2],
    pub flipped_lambda_cw: [i64; 2],
    pub shared_z: CoordSetView,
    pub eta: i64,
    pub window_dual_of_zero: i64,
    pub residual_weights: Vec<i64>,
    pub stratification_ccw: StratificationView,
    pub stratification_cw: StratificationView,
    pub intersection: IntersectionView,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HornView {
    pub lambda: [i64; 2],
    /// Raw coefficient of the factored pullback, as a decimal string.
    pub coefficient: String,
    pub factors: Vec<HornFactorView>,
    pub degree: i64,
    pub normalized: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HornFactorView {
    pub ray_group: usize,
    pub form: [i64; 2],
    pub exponent: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedView {
    pub wall: usize,
    pub ray: [i64; 2],
    pub discriminant_length: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection_length: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KmutReport {
    pub seed: u64,
    pub corpus: usize,
    pub suites: Vec<SuiteReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<TwistPlan>,
}

/// The top-level report document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<StratificationView>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walls: Option<Vec<WallCrossingView>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horn: Option<Vec<HornView>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<ExpectedView>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmut: Option<KmutReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Roman numeral for a 1-based chamber label.
pub fn roman(n: usize) -> String {
    const PAIRS: [(usize, &str); 13] = [
        (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
        (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
    ];
    let mut n = n;
    let mut out = String::new();
    for (v, s) in PAIRS {
        while n >= v {
            out.push_str(s);
            n -= v;
        }
    }
    out
}

fn coord_set_view(set: &CoordSet, labels: &[String]) -> CoordSetView {
    CoordSetView {
        notation: set.render(labels),
        ambient: set.ambient().to_vec(),
        excluded: set.excluded().to_vec(),
    }
}

fn stratification_view(
    s: &Stratification,
    fan: &GkzFan,
    labels: &[String],
) -> StratificationView {
    let chamber = match crate::gkz::locate(fan, s.linearization) {
        crate::gkz::Location::Chamber(c) => c,
        _ => usize::MAX,
    };
    StratificationView {
        character: pair(s.linearization),
        chamber,
        lambda_max: pair(s.lambda_max),
        s_max: coord_set_view(&s.s_max_set, labels),
        strata: s
            .strata
            .iter()
            .map(|st| StratumView {
                lambda: pair(st.lambda),
                mu_sq: format!("{}/{}", st.mu_sq.0, st.mu_sq.1),
                z: coord_set_view(&st.z_set, labels),
                s: coord_set_view(&st.s_set, labels),
                eta_plus: st.eta_plus,
                eta_minus: st.eta_minus,
            })
            .collect(),
        skipped: s.skipped.iter().map(|l| pair(*l)).collect(),
    }
}

fn intersection_view(i: &WallIntersection) -> IntersectionView {
    IntersectionView {
        applicable: i.applicable,
        d_formula: i.d_formula,
        total: i.total,
        charts_agree: i.charts_agree,
        points: i
            .per_point
            .iter()
            .map(|p| PointView {
                point: pair(p.point),
                zero_of_groups: p.zero_of_groups.clone(),
                in_charts: p.in_charts.clone(),
                length: p.length,
            })
            .collect(),
    }
}

/// Runs the requested tasks and assembles the report. Nothing is written
/// anywhere; the caller decides how to emit the result.
pub fn run_analyze(request: &AnalysisRequest) -> Result<Report> {
    let w = &request.weights;
    let labels = w.labels().to_vec();
    let fan = build_fan(w)?;
    let mut warnings = Vec::new();

    let mut report = Report {
        schema: SCHEMA_VERSION,
        input: InputEcho {
            weights: [
                w.columns().iter().map(|c| c.x).collect(),
                w.columns().iter().map(|c| c.y).collect(),
            ],
            labels: labels.clone(),
        },
        warnings: Vec::new(),
        fan: None,
        strata: None,
        walls: None,
        horn: None,
        expected: None,
        kmut: None,
    };

    if request.tasks.contains(&Task::Fan) {
        report.fan = Some(FanReport {
            ray_groups: fan
                .ray_groups()
                .iter()
                .map(|g| RayGroupView {
                    chi: pair(g.chi),
                    multipliers: g.multipliers.clone(),
                    total: g.total,
                    member_columns: g.member_columns.clone(),
                })
                .collect(),
            walls: fan
                .walls()
                .iter()
                .enumerate()
                .map(|(i, wl)| WallView {
                    index: i,
                    ray: pair(wl.ray),
                    source_groups: wl.source_groups.clone(),
                })
                .collect(),
            chambers: fan
                .chambers()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let (a, b) = c.generators();
                    ChamberView { index: i, label: roman(i + 1), generators: [pair(a), pair(b)] }
                })
                .collect(),
        });
    }

    if request.tasks.contains(&Task::Strata) {
        let mut views = Vec::new();
        if let Some((x, y)) = request.params.character {
            let s = kn_stratify(w, &fan, Vec2::new(x, y))?;
            views.push(stratification_view(&s, &fan, &labels));
        } else {
            let chambers: Vec<usize> = match request.params.chamber {
                Some(c) => vec![c],
                None => (0..fan.chambers().len()).collect(),
            };
            for c in chambers {
                let chi = chamber_character(w, &fan, c)?;
                let s = kn_stratify(w, &fan, chi)?;
                views.push(stratification_view(&s, &fan, &labels));
            }
        }
        report.strata = Some(views);
    }

    if request.tasks.contains(&Task::Walls) {
        let walls: Vec<usize> = match request.params.wall {
            Some(i) => vec![i],
            None => (0..fan.walls().len()).collect(),
        };
        let mut views = Vec::new();
        for i in walls {
            let crossing = wall_crossing(w, &fan, i)?;
            let inter = wall_intersection_length(&fan, i)?;
            if !crossing.balanced {
                warnings.push(format!("wall {i}: crossing is not balanced"));
            }
            views.push(WallCrossingView {
                index: i,
                ray: pair(crossing.wall_ray),
                balanced: crossing.balanced,
                k_used: crossing.k_used,
                character_ccw: pair(crossing.character_ccw),
                character_cw: pair(crossing.character_cw),
                flipped_lambda_ccw: pair(crossing.flipped_ccw.lambda),
                flipped_lambda_cw: pair(crossing.flipped_cw.lambda),
                shared_z: coord_set_view(&crossing.shared_z, &labels),
                eta: crossing.eta,
                window_dual_of_zero: crossing.window_dual(0),
                residual_weights: crossing.residual_weights.clone(),
                stratification_ccw: stratification_view(&crossing.stratification_ccw, &fan, &labels),
                stratification_cw: stratification_view(&crossing.stratification_cw, &fan, &labels),
                intersection: intersection_view(&inter),
            });
        }
        report.walls = Some(views);
    }

    if request.tasks.contains(&Task::Horn) {
        let lambdas: Vec<Vec2> = match request.params.lambda {
            Some((x, y)) => vec![Vec2::new(x, y)],
            None => vec![Vec2::new(1, 0), Vec2::new(0, 1)],
        };
        let mut views = Vec::new();
        for lam in lambdas {
            let f = horn_pullback(&fan, lam)?;
            views.push(HornView {
                lambda: pair(lam),
                coefficient: {
                    use num_traits::One;
                    if f.coefficient.denom().is_one() {
                        f.coefficient.numer().to_string()
                    } else {
                        format!("{}/{}", f.coefficient.numer(), f.coefficient.denom())
                    }
                },
                factors: f
                    .factors
                    .iter()
                    .map(|&(ray, e)| HornFactorView {
                        ray_group: ray,
                        form: pair(fan.ray_groups()[ray].chi),
                        exponent: e,
                    })
                    .collect(),
                degree: f.degree(),
                normalized: normalize_and_render(&fan, &f),
            });
        }
        report.horn = Some(views);
    }

    if request.tasks.contains(&Task::Expected) {
        let walls: Vec<usize> = match request.params.wall {
            Some(i) => vec![i],
            None => (0..fan.walls().len()).collect(),
        };
        let mut views = Vec::new();
        for i in walls {
            let e = expected_autoequivalences(w, &fan, i)?;
            views.push(ExpectedView {
                wall: i,
                ray: pair(fan.wall(i)?.ray),
                discriminant_length: e.discriminant_length,
                collection_length: e.collection_length,
                agree: e.agree,
                note: e.note,
            });
        }
        report.expected = Some(views);
    }

    if request.tasks.contains(&Task::Kmut) {
        let seed = request.params.seed.unwrap_or(crate::corpus::DEFAULT_SEED);
        let corpus = request.params.corpus.unwrap_or(50);
        let plan = match request.params.blocks {
            Some(b) => Some(factorization_plan(
                b,
                request.params.eta.unwrap_or(1),
                request.params.weight.unwrap_or(0),
            )?),
            None => None,
        };
        report.kmut = Some(KmutReport {
            seed,
            corpus,
            suites: vec![
                run_mutation_suite(seed, corpus),
                run_double_mutation_suite(seed, corpus),
                run_factorization_suite(seed, corpus.min(100)),
                run_wall_suite(seed, corpus.min(40)),
                run_intersection_suite(seed, corpus.min(40), 25),
            ],
            plan,
        });
    }

    report.warnings = warnings;
    Ok(report)
}
