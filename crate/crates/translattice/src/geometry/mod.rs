//! Numerical geometry over the base line: critical values, path planning,
//! and certified tracking of branch points.

mod critical;
mod plan;
mod track;

pub use critical::{critical_values, embed_univar, find_roots, CriticalValues};
pub use plan::{plan_paths, PathKind, PathPlan, PlannedPath};
pub use track::{TrackOutcome, Tracker};
