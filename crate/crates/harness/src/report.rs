use std::collections::BTreeMap;

use cstar_frames::{Certificate, TheoremId, Tolerances, Verdict};
use serde::Serialize;

use crate::crosscheck::CrosscheckSummary;

/// Outcome of a single check.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Certificate(Certificate),
    /// The checker refused the inputs (a precondition error).
    Error(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub theorem: TheoremId,
    pub trial: usize,
    pub variant: String,
    pub seed: u64,
    pub stream: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl CheckRecord {
    pub fn verdict(&self) -> Option<Verdict> {
        match &self.outcome {
            Outcome::Certificate(c) => Some(c.verdict),
            Outcome::Error(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Certificate(c) => Some(c),
            Outcome::Error(_) => None,
        }
    }

    /// `false` when an expected verdict was given and not produced.
    pub fn as_expected(&self) -> bool {
        match self.expected {
            None => true,
            Some(e) => self.verdict() == Some(e),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub verified: usize,
    pub hypothesis_not_met: usize,
    #[serde(rename = "VIOLATION")]
    pub violation: usize,
    pub errors: usize,
    pub unexpected: usize,
}

impl Counts {
    fn add(&mut self, r: &CheckRecord) {
        self.total += 1;
        match r.verdict() {
            Some(Verdict::Verified) => self.verified += 1,
            Some(Verdict::HypothesisNotMet) => self.hypothesis_not_met += 1,
            Some(Verdict::Violation) => self.violation += 1,
            None => self.errors += 1,
        }
        if !r.as_expected() {
            self.unexpected += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub overall: Counts,
    pub per_theorem: BTreeMap<TheoremId, Counts>,
}

impl Summary {
    pub fn from_checks(checks: &[CheckRecord]) -> Self {
        let mut overall = Counts::default();
        let mut per_theorem: BTreeMap<TheoremId, Counts> = BTreeMap::new();
        for r in checks {
            overall.add(r);
            per_theorem.entry(r.theorem).or_default().add(r);
        }
        Self { overall, per_theorem }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerances: Tolerances,
    /// `default`, `env:CSTAR_TOLERANCES` or `scenario`.
    pub tolerance_source: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub rng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
}

pub const RNG_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha), seed_from_u64(seed), stream = theorem_index << 32 | trial";

/// Empirical status of the lower norm bound `K√(CC') ≤ ‖M‖` over Riesz trials.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundStatus {
    pub trials: usize,
    pub passed: usize,
    pub pass_rate: f64,
    pub upper_bound_failures: usize,
    pub counterexamples: Vec<LowerBoundCounterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundCounterexample {
    pub trial: usize,
    pub norm_m: f64,
    pub lower_bound: f64,
    pub constants: BTreeMap<String, f64>,
}

impl LowerBoundStatus {
    pub fn from_checks(checks: &[CheckRecord]) -> Option<Self> {
        let certs: Vec<(usize, &Certificate)> = checks
            .iter()
            .filter(|r| r.theorem == TheoremId::RieszNormBounds)
            .filter_map(|r| r.certificate().map(|c| (r.trial, c)))
            .collect();
        if certs.is_empty() {
            return None;
        }
        let mut passed = 0;
        let mut upper_bound_failures = 0;
        let mut counterexamples = Vec::new();
        for (trial, c) in &certs {
            if c.conclusion("upper_bound").is_some_and(|x| !x.pass) {
                upper_bound_failures += 1;
            }
            match c.conclusion("lower_bound") {
                Some(lb) if lb.pass => passed += 1,
                Some(lb) => counterexamples.push(LowerBoundCounterexample {
                    trial: *trial,
                    norm_m: lb.value,
                    lower_bound: lb.threshold,
                    constants: c.constants.clone(),
                }),
                None => {}
            }
        }
        Some(Self {
            trials: certs.len(),
            passed,
            pass_rate: passed as f64 / certs.len() as f64,
            upper_bound_failures,
            counterexamples,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub environment: Environment,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riesz_lower_bound: Option<LowerBoundStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscheck: Option<CrosscheckSummary>,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: &str, environment: Environment, checks: Vec<CheckRecord>) -> Self {
        Self {
            command: command.to_string(),
            environment,
            summary: Summary::from_checks(&checks),
            riesz_lower_bound: LowerBoundStatus::from_checks(&checks),
            crosscheck: None,
            checks,
        }
    }

    /// 1 on a violation, an unexpected verdict or a failed crosscheck;
    /// otherwise 2 if some checker rejected its inputs; otherwise 0.
    pub fn exit_code(&self) -> i32 {
        let c = &self.summary.overall;
        let crosscheck_failed = self.crosscheck.as_ref().is_some_and(|x| !x.passed);
        if c.violation > 0 || c.unexpected > 0 || crosscheck_failed {
            1
        } else if c.errors > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
