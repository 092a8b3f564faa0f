//! Exact wall-crossing analysis for rank-2 torus actions on a vector
//! space.
//!
//! Starting from a 2 x m integer weight matrix with zero row sums, this
//! crate computes, with no floating point anywhere:
//!
//! - the wall-and-chamber fan on character space ([`gkz`]),
//! - Kirwan-Ness stratifications of the unstable locus for any chamber
//!   character, grade-restriction window widths, and balanced
//!   wall-crossing reports with deterministic near-wall test characters
//!   ([`strat`]),
//! - the rational parameterization of the reduced discriminant and exact
//!   intersection lengths of the discriminant with wall curves, giving
//!   the expected number of autoequivalences per wall ([`horn`]),
//! - an integer K-theory calculus of Euler forms, exceptional-collection
//!   mutations, and spherical-twist shadows, with verified twist
//!   identities over seeded random corpora ([`kmut`], [`corpus`]),
//! - byte-stable JSON reports and static ASCII/SVG fan pictures
//!   ([`report`], [`render`]).
//!
//! The `examples/` directory has one runnable example per capability;
//! a thin `wallcross` binary exposes the same operations as subcommands.
//!
//! ```
//! use wallcross::gkz::{build_fan, WeightMatrix};
//! use wallcross::strat::kn_stratify;
//! use wallcross::lattice::Vec2;
//!
//! let w = WeightMatrix::parse_and_validate(
//!     &[vec![1, 1, 1, 0, 0, 0, -2, -1], vec![0, 0, 0, 1, 1, 1, 0, -3]],
//!     None,
//! ).unwrap();
//! let fan = build_fan(&w).unwrap();
//! assert_eq!(fan.walls().len(), 4);
//! let strat = kn_stratify(&w, &fan, Vec2::new(-1, -5)).unwrap();
//! assert_eq!(strat.strata.len(), 2);
//! ```

pub mod coordset;
pub mod corpus;
pub mod error;
pub mod gkz;
pub mod horn;
pub mod kmut;
pub mod lattice;
pub mod render;
pub mod report;
pub mod strat;

pub use error::{Error, Result};
pub use gkz::{build_fan, group_rays, locate, GkzFan, WeightMatrix};
pub use lattice::{lattice_minimize, Cone2, MinimizeOutcome, MuValue, Vec2};
pub use strat::{eta_of, kn_stratify, wall_crossing, Stratification};
