//! Numerical toolkit for explicit toric Poincare-Einstein 4-metrics.

pub mod error;
pub mod jet2;
pub mod cli;
pub mod conformal;
pub mod curvature;
pub mod domain;
pub mod numeric;
pub mod regularity;
pub mod polyfam;
pub mod rootlab;
pub mod volume;

pub use error::{Error, Result};
pub use jet2::{Jet2, Var};
pub use polyfam::{metric_at, Chart, FamilyParams, MetricEval, Quartic};

/// Magnitude below which a quantity guarding a degenerate locus counts as zero.
pub const DOMAIN_FLOOR: f64 = 1e-12;
