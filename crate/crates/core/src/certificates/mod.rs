//! Machine-checked records for the invertibility results on multipliers.
//!
//! Each checker evaluates the explicit hypothesis constants of one result
//! (with the margin `bound - value`) and, when every hypothesis holds,
//! verifies the stated conclusions numerically. A failing conclusion under
//! met hypotheses yields [`Verdict::Violation`], which is always surfaced.
//!
//! | id | statement |
//! |----|-----------|
//! | `multiplier_properties` | `M^* = M_{U^*,X,Y}`, positivity, finite-rank propagation |
//! | `lower_frame_condition` | invertible `M_{U,Y,X}` forces a lower frame bound on `Y` |
//! | `perturbation` | `‖U - W‖ < ‖U^{-1}‖^{-1}` makes `W` invertible, with a norm sandwich |
//! | `frame_perturbation` | a sequence close to a frame is a frame and `M_{U,X,Y}` is invertible |
//! | `transformed_frame` | `x_n = W y_n`: invertibility and the inverse formulas |
//! | `dual_frame` | `‖U - I‖ < 1/(2D)` makes `M_{U,X,X^d}` invertible |
//! | `approximate_dual` | `Σ‖x_n - ỹ_n‖² < 1/(4D)` makes `M_{I,Y,X}` (and `M_{U,Y,X}`) invertible |
//! | `riesz_injectivity` | `U ↦ M_{U,Y,X}` is injective on Riesz bases |
//! | `riesz_norm_bounds` | `K√(CC') ≤ ‖M_{U,Y,X}‖ ≤ √(DD')‖U‖` |
//! | `riesz_invertibility` | `U` invertible iff `M_{U,Y,X}` invertible |
//! | `unique_dual` | `X` has a unique dual iff `M_{U,Y,X}` invertible |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::operators::ModuleOperator;
use crate::tolerance::Tolerances;

mod invertibility;
mod multiplier;
mod riesz;

pub use invertibility::{approximate_dual, dual_frame, frame_perturbation, transformed_frame};
pub use multiplier::{lower_frame_condition, multiplier_properties, perturbation};
pub use riesz::{riesz_injectivity, riesz_invertibility, riesz_norm_bounds, unique_dual};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    MultiplierProperties,
    LowerFrameCondition,
    Perturbation,
    FramePerturbation,
    TransformedFrame,
    DualFrame,
    ApproximateDual,
    RieszInjectivity,
    RieszNormBounds,
    RieszInvertibility,
    UniqueDual,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::MultiplierProperties,
        TheoremId::LowerFrameCondition,
        TheoremId::Perturbation,
        TheoremId::FramePerturbation,
        TheoremId::TransformedFrame,
        TheoremId::DualFrame,
        TheoremId::ApproximateDual,
        TheoremId::RieszInjectivity,
        TheoremId::RieszNormBounds,
        TheoremId::RieszInvertibility,
        TheoremId::UniqueDual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::MultiplierProperties => "multiplier_properties",
            TheoremId::LowerFrameCondition => "lower_frame_condition",
            TheoremId::Perturbation => "perturbation",
            TheoremId::FramePerturbation => "frame_perturbation",
            TheoremId::TransformedFrame => "transformed_frame",
            TheoremId::DualFrame => "dual_frame",
            TheoremId::ApproximateDual => "approximate_dual",
            TheoremId::RieszInjectivity => "riesz_injectivity",
            TheoremId::RieszNormBounds => "riesz_norm_bounds",
            TheoremId::RieszInvertibility => "riesz_invertibility",
            TheoremId::UniqueDual => "unique_dual",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    HypothesisNotMet,
    #[serde(rename = "VIOLATION")]
    Violation,
}

/// A strict inequality `value < bound` from the statement being checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    /// `bound - value`.
    pub margin: f64,
    pub met: bool,
    /// Met, but with a margin below the near-boundary fraction of the bound.
    pub near_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value ≤ threshold`
    AtMost,
    /// `value ≥ threshold`
    AtLeast,
    /// boolean outcome; value is 1 or 0
    Holds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Informational conclusions are reported but never produce a violation.
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Hypothesis>,
    pub hypothesis_met: bool,
    pub conclusions: Vec<Conclusion>,
    /// Named constants (`C`, `D`, `λ`, `σ`, `K`, norms, ...).
    pub constants: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn conclusion(&self, name: &str) -> Option<&Conclusion> {
        self.conclusions.iter().find(|c| c.name == name)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn has_near_boundary(&self) -> bool {
        self.hypotheses.iter().any(|h| h.near_boundary)
    }
}

/// Accumulates hypotheses and conclusions and settles the verdict.
pub(crate) struct Builder<'a> {
    theorem: TheoremId,
    tol: &'a Tolerances,
    hypotheses: Vec<Hypothesis>,
    conclusions: Vec<Conclusion>,
    constants: BTreeMap<String, f64>,
    notes: Vec<String>,
}

impl<'a> Builder<'a> {
    pub fn new(theorem: TheoremId, tol: &'a Tolerances) -> Self {
        Self {
            theorem,
            tol,
            hypotheses: Vec::new(),
            conclusions: Vec::new(),
            constants: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Records `value < bound`, required to hold by `margin_rel · bound`.
    pub fn hypothesis_lt(&mut self, name: &str, value: f64, bound: f64) -> bool {
        let margin = bound - value;
        let met = margin.is_finite() && margin > self.tol.margin * bound.abs() && bound > 0.0;
        let near_boundary = met && margin < self.tol.near_boundary * bound.abs();
        self.hypotheses.push(Hypothesis {
            name: name.to_string(),
            value,
            bound,
            margin,
            met,
            near_boundary,
        });
        met
    }

    /// Records a structural hypothesis that has no numeric margin.
    pub fn hypothesis_holds(&mut self, name: &str, holds: bool) -> bool {
        let v = if holds { 1.0 } else { 0.0 };
        self.hypotheses.push(Hypothesis {
            name: name.to_string(),
            value: v,
            bound: 1.0,
            margin: v,
            met: holds,
            near_boundary: false,
        });
        holds
    }

    fn push(&mut self, name: &str, value: f64, threshold: f64, relation: Relation, pass: bool, required: bool) -> bool {
        self.conclusions.push(Conclusion {
            name: name.to_string(),
            value,
            threshold,
            relation,
            pass,
            required,
        });
        pass
    }

    /// `value ≤ threshold`.
    pub fn at_most(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let pass = value <= threshold;
        self.push(name, value, threshold, Relation::AtMost, pass, true)
    }

    /// `value ≥ threshold`.
    pub fn at_least(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let pass = value >= threshold;
        self.push(name, value, threshold, Relation::AtLeast, pass, true)
    }

    pub fn holds(&mut self, name: &str, pass: bool) -> bool {
        let v = if pass { 1.0 } else { 0.0 };
        self.push(name, v, 1.0, Relation::Holds, pass, true)
    }

    /// Informational `value ≥ threshold`.
    pub fn report_at_least(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let pass = value >= threshold;
        self.push(name, value, threshold, Relation::AtLeast, pass, false)
    }

    /// Informational `value ≤ threshold`.
    pub fn report_at_most(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let pass = value <= threshold;
        self.push(name, value, threshold, Relation::AtMost, pass, false)
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records `σ_min(op) > invertibility · ‖op‖` as a required conclusion.
    pub fn invertible(&mut self, name: &str, op: &ModuleOperator) -> bool {
        let min_sv = if op.is_square() { op.min_singular_value() } else { 0.0 };
        let norm = op.norm();
        self.constant(&format!("{name}.min_sv"), min_sv);
        self.constant(&format!("{name}.norm"), norm);
        let pass = op.is_square() && min_sv > self.tol.invertibility * norm;
        self.holds(&format!("{name}_invertible"), pass)
    }

    /// A hypothesis whose verdict is decided outside the strict `<` rule.
    pub fn hypothesis_special(&mut self, name: &str, value: f64, bound: f64, met: bool) -> bool {
        self.hypotheses.push(Hypothesis {
            name: name.to_string(),
            value,
            bound,
            margin: bound - value,
            met,
            near_boundary: false,
        });
        met
    }

    /// Slack `1 + residual` applied to upper-bound checks.
    pub fn up(&self, x: f64) -> f64 {
        x * (1.0 + self.tol.residual)
    }

    /// Slack `1 - residual` applied to lower-bound checks.
    pub fn down(&self, x: f64) -> f64 {
        x * (1.0 - self.tol.residual)
    }

    pub fn finish(self) -> Certificate {
        let hypothesis_met = self.hypotheses.iter().all(|h| h.met);
        let verdict = if !hypothesis_met {
            Verdict::HypothesisNotMet
        } else if self.conclusions.iter().any(|c| c.required && !c.pass) {
            Verdict::Violation
        } else {
            Verdict::Verified
        };
        Certificate {
            theorem: self.theorem,
            hypotheses: self.hypotheses,
            hypothesis_met,
            conclusions: self.conclusions,
            constants: self.constants,
            notes: self.notes,
            verdict,
        }
    }
}
