//! Numerical thresholds shared by the predicates and certificate checks.

use serde::{Deserialize, Serialize};

/// Relative positivity floor: eigenvalues in `[-pos_rel·(1+‖a‖), 0)` count as zero.
pub const POSITIVITY_REL: f64 = 1e-9;
/// Relative invertibility floor on the smallest singular value.
pub const INVERTIBILITY_REL: f64 = 1e-10;
/// Relative lower-bound floor separating frames from rank-deficient sequences.
pub const FRAME_REL: f64 = 1e-8;
/// Strictness margin for hypothesis inequalities `value < bound`.
pub const MARGIN_REL: f64 = 1e-12;
/// Margins below this fraction of the bound are flagged as near-boundary.
pub const NEAR_BOUNDARY_REL: f64 = 1e-6;
/// Residual tolerance for conclusion checks (products, inverse formulas, sandwiches).
pub const RESIDUAL: f64 = 1e-8;

/// The full set of thresholds used by a certificate run.
///
/// Every field is relative to the natural scale of the quantity it guards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub positivity: f64,
    pub invertibility: f64,
    pub frame: f64,
    pub margin: f64,
    pub near_boundary: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            positivity: POSITIVITY_REL,
            invertibility: INVERTIBILITY_REL,
            frame: FRAME_REL,
            margin: MARGIN_REL,
            near_boundary: NEAR_BOUNDARY_REL,
            residual: RESIDUAL,
        }
    }
}

impl Tolerances {
    /// Smallest value any override may take; below this round-off dominates.
    pub const FLOOR: f64 = 1e-15;

    /// Returns the name of the first field below [`Tolerances::FLOOR`], if any.
    pub fn below_floor(&self) -> Option<&'static str> {
        [
            ("positivity", self.positivity),
            ("invertibility", self.invertibility),
            ("frame", self.frame),
            ("margin", self.margin),
            ("near_boundary", self.near_boundary),
            ("residual", self.residual),
        ]
        .into_iter()
        .find(|(_, v)| !(*v >= Self::FLOOR))
        .map(|(name, _)| name)
    }
}
