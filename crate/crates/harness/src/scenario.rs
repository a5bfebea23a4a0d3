//! Scenario files: named objects plus a list of checks.
//!
//! ```json
//! {
//!   "algebra": [2, 1],
//!   "rank": 2,
//!   "seed": 7,
//!   "tolerances": { "residual": 1e-9 },
//!   "objects": {
//!     "E": { "kind": "standard_basis" },
//!     "U": { "kind": "diagonal", "entries": [2, 3] },
//!     "P": { "kind": "generate", "generator": "dual_pair", "seed": 1 },
//!     "I": { "kind": "identity", "len": 4 }
//!   },
//!   "checks": [
//!     { "theorem": "riesz_invertibility", "x": "E", "y": "E", "u": "U", "expect": "verified" },
//!     { "theorem": "dual_frame", "x": "P.x", "dual": "P.dual", "u": "I" },
//!     { "sweep": "perturbation", "trials": 20 }
//!   ]
//! }
//! ```
//!
//! Objects from a generator are addressed as `name.part`; a generator with a
//! single part may also be addressed by `name` alone.

use std::collections::BTreeMap;
use std::path::Path;

use cstar_frames::certificates::{
    approximate_dual, dual_frame, frame_perturbation, lower_frame_condition, multiplier_properties,
    perturbation, riesz_injectivity, riesz_invertibility, riesz_norm_bounds, transformed_frame,
    unique_dual,
};
use cstar_frames::{
    AlgebraShape, Certificate, DiagonalSymbol, FrameSequence, ModuleOperator, TheoremId, Tolerances, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{HarnessError, Result};
use crate::generators::{self, GenParams, Generated, GeneratorKind};
use crate::json::{operator_from_json, vector_from_json, ElementJson};
use crate::report::{CheckRecord, Environment, Outcome, Report, RNG_DESCRIPTION};
use crate::suite;

/// Samples used by sampled conclusions when a check does not say.
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Block dimensions of the algebra.
    pub algebra: Vec<usize>,
    /// Module rank `k`.
    pub rank: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectSpec {
    /// Literal frame: one coordinate list per vector.
    Frame { vectors: Vec<Vec<ElementJson>> },
    /// `{e_n}` in `A^len` (default: the scenario rank).
    StandardBasis {
        #[serde(default)]
        len: Option<usize>,
    },
    /// Literal operator, rows indexed by the codomain coordinate.
    Operator { rows: Vec<Vec<ElementJson>> },
    /// Diagonal operator with arbitrary entries.
    Diagonal { entries: Vec<ElementJson> },
    Identity {
        #[serde(default)]
        len: Option<usize>,
    },
    /// Diagonal symbol with central entries (rejected otherwise).
    DiagonalSymbol { entries: Vec<ElementJson> },
    Generate {
        generator: GeneratorKind,
        seed: u64,
        #[serde(default)]
        params: GenParams,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckSpec {
    Single(SingleCheck),
    Sweep(SweepCheck),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleCheck {
    pub theorem: TheoremId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Seeded suite trials of one theorem inside a scenario run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCheck {
    pub sweep: TheoremId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

/// Parses scenario text, reporting the failing field with line and column.
pub fn parse(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        HarnessError::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })
}

pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

#[derive(Debug, Clone)]
enum Object {
    Frame(FrameSequence),
    Operator(ModuleOperator),
}

/// Resolved objects, keyed by reference name.
pub struct Objects {
    shape: AlgebraShape,
    items: BTreeMap<String, Object>,
}

fn invalid(name: &str, message: impl ToString) -> HarnessError {
    HarnessError::InvalidObject {
        name: name.to_string(),
        message: message.to_string(),
    }
}

impl Objects {
    pub fn build(scenario: &Scenario) -> Result<Self> {
        let shape = AlgebraShape::new(scenario.algebra.clone())?;
        if scenario.rank == 0 {
            return Err(invalid("rank", "module rank must be positive"));
        }
        let mut items = BTreeMap::new();
        for (name, spec) in &scenario.objects {
            if name.contains('.') {
                return Err(invalid(name, "object names may not contain `.`"));
            }
            match spec {
                ObjectSpec::Frame { vectors } => {
                    let vs = vectors
                        .iter()
                        .map(|v| vector_from_json(&shape, v))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| invalid(name, e))?;
                    items.insert(name.clone(), Object::Frame(FrameSequence::new(vs).map_err(|e| invalid(name, e))?));
                }
                ObjectSpec::StandardBasis { len } => {
                    let n = len.unwrap_or(scenario.rank);
                    if n == 0 {
                        return Err(invalid(name, "length must be positive"));
                    }
                    items.insert(name.clone(), Object::Frame(FrameSequence::standard_basis(&shape, n)));
                }
                ObjectSpec::Operator { rows } => {
                    let t = operator_from_json(&shape, rows).map_err(|e| invalid(name, e))?;
                    items.insert(name.clone(), Object::Operator(t));
                }
                ObjectSpec::Diagonal { entries } => {
                    let diag = entries
                        .iter()
                        .map(|e| e.to_element(&shape))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| invalid(name, e))?;
                    let t = ModuleOperator::diagonal(&shape, diag).map_err(|e| invalid(name, e))?;
                    items.insert(name.clone(), Object::Operator(t));
                }
                ObjectSpec::Identity { len } => {
                    let n = len.unwrap_or(scenario.rank);
                    if n == 0 {
                        return Err(invalid(name, "length must be positive"));
                    }
                    items.insert(name.clone(), Object::Operator(ModuleOperator::identity(&shape, n)));
                }
                ObjectSpec::DiagonalSymbol { entries } => {
                    let diag = entries
                        .iter()
                        .map(|e| e.to_element(&shape))
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| invalid(name, e))?;
                    let m = DiagonalSymbol::new(diag).map_err(|e| invalid(name, e))?;
                    items.insert(name.clone(), Object::Operator(m.to_operator()));
                }
                ObjectSpec::Generate { generator, seed, params } => {
                    let parts = generators::generate(*generator, &shape, scenario.rank, *seed, params)?;
                    let single = parts.len() == 1;
                    for (part, g) in parts {
                        let obj = match g {
                            Generated::Frame(x) => Object::Frame(x),
                            Generated::Operator(t) => Object::Operator(t),
                            Generated::Diagonal(m) => Object::Operator(m.to_operator()),
                        };
                        if single {
                            items.insert(name.clone(), obj.clone());
                        }
                        items.insert(format!("{name}.{part}"), obj);
                    }
                }
            }
        }
        Ok(Self { shape, items })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    fn get(&self, name: &str, context: &str) -> Result<&Object> {
        self.items.get(name).ok_or_else(|| HarnessError::UnresolvedReference {
            name: name.to_string(),
            context: context.to_string(),
        })
    }

    fn frame(&self, name: &str, context: &str) -> Result<&FrameSequence> {
        match self.get(name, context)? {
            Object::Frame(x) => Ok(x),
            Object::Operator(_) => Err(invalid(name, format!("{context} expects a frame, found an operator"))),
        }
    }

    fn operator(&self, name: &str, context: &str) -> Result<&ModuleOperator> {
        match self.get(name, context)? {
            Object::Operator(t) => Ok(t),
            Object::Frame(_) => Err(invalid(name, format!("{context} expects an operator, found a frame"))),
        }
    }
}

/// The references of one single check, resolved up front so that every
/// reference error surfaces before any check runs.
struct Bound<'a> {
    x: Option<&'a FrameSequence>,
    y: Option<&'a FrameSequence>,
    dual: Option<&'a FrameSequence>,
    u: Option<&'a ModuleOperator>,
    u2: Option<&'a ModuleOperator>,
    w: Option<&'a ModuleOperator>,
}

/// Which references each theorem needs (`x, y, dual, u, u2, w`); `u` is optional for `approximate_dual`.
fn required(theorem: TheoremId) -> &'static [&'static str] {
    match theorem {
        TheoremId::MultiplierProperties
        | TheoremId::LowerFrameCondition
        | TheoremId::FramePerturbation
        | TheoremId::RieszNormBounds
        | TheoremId::RieszInvertibility
        | TheoremId::UniqueDual => &["x", "y", "u"],
        TheoremId::Perturbation => &["u", "w"],
        TheoremId::TransformedFrame => &["y", "w", "u"],
        TheoremId::DualFrame => &["x", "dual", "u"],
        TheoremId::ApproximateDual => &["x", "y"],
        TheoremId::RieszInjectivity => &["x", "y", "u", "u2"],
    }
}

fn bind<'a>(objects: &'a Objects, index: usize, c: &SingleCheck) -> Result<Bound<'a>> {
    let context = format!("check {index} ({})", c.theorem);
    let refs = [
        ("x", &c.x),
        ("y", &c.y),
        ("dual", &c.dual),
        ("u", &c.u),
        ("u2", &c.u2),
        ("w", &c.w),
    ];
    for arg in required(c.theorem) {
        if refs.iter().any(|(name, v)| name == arg && v.is_none()) {
            return Err(HarnessError::MissingArgument {
                index,
                theorem: c.theorem.to_string(),
                arg,
            });
        }
    }
    let frame = |r: &Option<String>| r.as_deref().map(|n| objects.frame(n, &context)).transpose();
    let op = |r: &Option<String>| r.as_deref().map(|n| objects.operator(n, &context)).transpose();
    Ok(Bound {
        x: frame(&c.x)?,
        y: frame(&c.y)?,
        dual: frame(&c.dual)?,
        u: op(&c.u)?,
        u2: op(&c.u2)?,
        w: op(&c.w)?,
    })
}

fn run_single(
    c: &SingleCheck,
    b: &Bound<'_>,
    tol: &Tolerances,
    rng: &mut ChaCha8Rng,
) -> cstar_frames::Result<Certificate> {
    // `bind` has checked presence of every required reference
    let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
    let (x, y, dual) = (b.x, b.y, b.dual);
    let (u, u2, w) = (b.u, b.u2, b.w);
    match c.theorem {
        TheoremId::MultiplierProperties => multiplier_properties(u.unwrap(), y.unwrap(), x.unwrap(), tol),
        TheoremId::LowerFrameCondition => {
            lower_frame_condition(u.unwrap(), y.unwrap(), x.unwrap(), tol, rng, samples)
        }
        TheoremId::Perturbation => perturbation(u.unwrap(), w.unwrap(), tol, rng, samples),
        TheoremId::FramePerturbation => frame_perturbation(x.unwrap(), y.unwrap(), u.unwrap(), tol),
        TheoremId::TransformedFrame => transformed_frame(y.unwrap(), w.unwrap(), u.unwrap(), tol),
        TheoremId::DualFrame => dual_frame(x.unwrap(), dual.unwrap(), u.unwrap(), tol),
        TheoremId::ApproximateDual => approximate_dual(y.unwrap(), x.unwrap(), u, tol),
        TheoremId::RieszInjectivity => riesz_injectivity(x.unwrap(), y.unwrap(), u.unwrap(), u2.unwrap(), tol),
        TheoremId::RieszNormBounds => riesz_norm_bounds(x.unwrap(), y.unwrap(), u.unwrap(), tol),
        TheoremId::RieszInvertibility => riesz_invertibility(x.unwrap(), y.unwrap(), u.unwrap(), tol),
        TheoremId::UniqueDual => unique_dual(y.unwrap(), x.unwrap(), u.unwrap(), tol),
    }
}

/// Options that override scenario fields from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Trial count for every sweep.
    pub trials: Option<usize>,
    pub label: Option<String>,
}

/// Resolves, validates and runs every check of a scenario.
///
/// Input errors (parse, references, tolerances) abort before any check runs;
/// a checker refusing its inputs is recorded per check.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    let (tol, tolerance_source) = config::resolve_tolerances(scenario.tolerances.as_ref())?;
    let objects = Objects::build(scenario)?;
    let seed = opts.seed.unwrap_or(scenario.seed);

    let mut bound = Vec::with_capacity(scenario.checks.len());
    for (i, c) in scenario.checks.iter().enumerate() {
        bound.push(match c {
            CheckSpec::Single(s) => Some(bind(&objects, i, s)?),
            CheckSpec::Sweep(_) => None,
        });
    }

    let mut checks = Vec::new();
    for (i, (c, b)) in scenario.checks.iter().zip(&bound).enumerate() {
        match (c, b) {
            (CheckSpec::Single(s), Some(b)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let outcome = match run_single(s, b, &tol, &mut rng) {
                    Ok(cert) => Outcome::Certificate(cert),
                    Err(e) => Outcome::Error(e.to_string()),
                };
                checks.push(CheckRecord {
                    theorem: s.theorem,
                    trial: i,
                    variant: s.label.clone().unwrap_or_else(|| format!("check_{i}")),
                    seed,
                    stream: i as u64,
                    expected: s.expect,
                    outcome,
                });
            }
            (CheckSpec::Sweep(sw), _) => {
                let trials = opts.trials.or(sw.trials).unwrap_or(suite::DEFAULT_TRIALS);
                checks.extend(suite::run_theorem(sw.sweep, seed, trials, &tol));
            }
            (CheckSpec::Single(_), None) => unreachable!("single checks are bound above"),
        }
    }

    let env = Environment {
        tool: crate::TOOL,
        version: env!("CARGO_PKG_VERSION"),
        tolerances: tol,
        tolerance_source,
        seed,
        trials: opts.trials,
        rng: RNG_DESCRIPTION,
        scenario: opts.label.clone(),
    };
    Ok(Report::new("run", env, checks))
}

/// A scenario holding generated objects as literals, for `gen`.
pub fn fragment(shape: &AlgebraShape, rank: usize, name: &str, parts: &[(&str, Generated)]) -> Scenario {
    use crate::json::{operator_to_json, vector_to_json};
    let mut objects = BTreeMap::new();
    for (part, g) in parts {
        let spec = match g {
            Generated::Frame(x) => ObjectSpec::Frame {
                vectors: x.vectors().iter().map(vector_to_json).collect(),
            },
            Generated::Operator(t) => ObjectSpec::Operator { rows: operator_to_json(t) },
            Generated::Diagonal(m) => ObjectSpec::DiagonalSymbol {
                entries: m.entries().iter().map(ElementJson::from_element).collect(),
            },
        };
        objects.insert(format!("{name}_{part}"), spec);
    }
    Scenario {
        algebra: shape.block_dims().to_vec(),
        rank,
        seed: 0,
        tolerances: None,
        objects,
        checks: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONB_DIAG: &str = r#"{
        "algebra": [1], "rank": 2,
        "objects": {
            "E": { "kind": "standard_basis" },
            "U": { "kind": "diagonal", "entries": [2, 3] }
        },
        "checks": [
            { "theorem": "riesz_invertibility", "x": "E", "y": "E", "u": "U", "expect": "verified" }
        ]
    }"#;

    #[test]
    fn orthonormal_basis_with_diagonal_symbol_verifies() {
        let report = run(&parse(ONB_DIAG).unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(report.checks.len(), 1);
        assert_eq!(report.checks[0].verdict(), Some(Verdict::Verified));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn undefined_reference_is_structured() {
        let text = ONB_DIAG.replace(r#""x": "E""#, r#""x": "F""#);
        match run(&parse(&text).unwrap(), &RunOptions::default()) {
            Err(HarnessError::UnresolvedReference { name, .. }) => assert_eq!(name, "F"),
            other => panic!("expected unresolved reference, got {other:?}"),
        }
    }

    #[test]
    fn missing_argument_is_reported() {
        let text = ONB_DIAG.replace(r#""u": "U", "#, "");
        assert!(matches!(
            run(&parse(&text).unwrap(), &RunOptions::default()),
            Err(HarnessError::MissingArgument { arg: "u", .. })
        ));
    }

    #[test]
    fn parse_error_names_the_field() {
        let text = ONB_DIAG.replace(r#""rank": 2"#, r#""rank": "two""#);
        match parse(&text) {
            Err(HarnessError::Parse { line, field, .. }) => {
                assert_eq!(field, "rank");
                assert_eq!(line, 2);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_object_field_is_rejected() {
        let text = ONB_DIAG.replace(r#""kind": "standard_basis""#, r#""kind": "standard_basis", "lenght": 2"#);
        assert!(matches!(parse(&text), Err(HarnessError::Parse { .. })));
    }

    #[test]
    fn frame_where_operator_expected() {
        let text = ONB_DIAG.replace(r#""u": "U""#, r#""u": "E""#);
        assert!(matches!(
            run(&parse(&text).unwrap(), &RunOptions::default()),
            Err(HarnessError::InvalidObject { .. })
        ));
    }

    #[test]
    fn generated_parts_resolve_by_dotted_name() {
        let text = r#"{
            "algebra": [2], "rank": 2,
            "objects": {
                "P": { "kind": "generate", "generator": "dual_pair", "seed": 5 },
                "I": { "kind": "identity", "len": 4 }
            },
            "checks": [ { "theorem": "dual_frame", "x": "P.x", "dual": "P.dual", "u": "I", "expect": "verified" } ]
        }"#;
        let report = run(&parse(text).unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(report.exit_code(), 0, "{}", report.to_json());
    }

    #[test]
    fn unexpected_verdict_fails_the_run() {
        let text = ONB_DIAG.replace(r#""expect": "verified""#, r#""expect": "hypothesis_not_met""#);
        let report = run(&parse(&text).unwrap(), &RunOptions::default()).unwrap();
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn sweep_honours_trial_override() {
        let text = r#"{ "algebra": [1], "rank": 1, "checks": [ { "sweep": "perturbation", "trials": 50 } ] }"#;
        let opts = RunOptions { trials: Some(3), ..Default::default() };
        let report = run(&parse(text).unwrap(), &opts).unwrap();
        // two variants per perturbation trial
        assert_eq!(report.checks.len(), 6);
        assert_eq!(report.exit_code(), 0);
    }
}
