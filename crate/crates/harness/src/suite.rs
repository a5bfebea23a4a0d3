//! The seeded acceptance suite: constructive trials for every theorem.

use cstar_frames::certificates::{
    approximate_dual, dual_frame, frame_perturbation, lower_frame_condition, multiplier_properties,
    perturbation, riesz_injectivity, riesz_invertibility, riesz_norm_bounds, transformed_frame,
    unique_dual,
};
use cstar_frames::{random, AlgebraShape, Certificate, ModuleOperator, TheoremId, Tolerances, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::generators::{self, DEFAULT_FRACTION};
use crate::report::{CheckRecord, Environment, Outcome, Report, RNG_DESCRIPTION};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 200;

/// Shapes drawn for suite trials (block dimensions).
const SHAPES: [&[usize]; 5] = [&[1], &[2], &[2, 1], &[1, 1], &[3]];
/// Condition cap for generated invertible operators and frames.
const CONDITION: f64 = 20.0;
/// Sample counts for the sampled conclusions.
const NORM_FORM_SAMPLES: usize = 500;
const SANDWICH_SAMPLES: usize = 200;

/// Trials per theorem for a base count (the norm-bound theorem runs 2.5×).
pub fn trials_for(theorem: TheoremId, base: usize) -> usize {
    match theorem {
        TheoremId::RieszNormBounds => base * 5 / 2,
        _ => base,
    }
}

/// Stream id of one trial; keeps trials independent under a shared seed.
pub fn stream(theorem: TheoremId, trial: usize) -> u64 {
    let index = TheoremId::ALL.iter().position(|t| *t == theorem).expect("listed") as u64;
    (index << 32) | trial as u64
}

pub fn trial_rng(seed: u64, theorem: TheoremId, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream(theorem, trial));
    rng
}

fn shape(rng: &mut ChaCha8Rng) -> AlgebraShape {
    let dims = SHAPES[rng.random_range(0..SHAPES.len())];
    AlgebraShape::new(dims.to_vec()).expect("non-empty dims")
}

struct Case {
    variant: &'static str,
    expected: Verdict,
    result: cstar_frames::Result<Certificate>,
}

fn case(variant: &'static str, result: cstar_frames::Result<Certificate>) -> Case {
    Case {
        variant,
        expected: Verdict::Verified,
        result,
    }
}

/// Runs one trial of one theorem; a trial may produce several checks.
pub fn run_trial(theorem: TheoremId, seed: u64, trial: usize, tol: &Tolerances) -> Vec<CheckRecord> {
    let mut rng = trial_rng(seed, theorem, trial);
    let cases = build_cases(theorem, trial, &mut rng, tol);
    cases
        .into_iter()
        .map(|c| CheckRecord {
            theorem,
            trial,
            variant: c.variant.to_string(),
            seed,
            stream: stream(theorem, trial),
            expected: Some(c.expected),
            outcome: match c.result {
                Ok(cert) => Outcome::Certificate(cert),
                Err(e) => Outcome::Error(e.to_string()),
            },
        })
        .collect()
}

fn build_cases(theorem: TheoremId, trial: usize, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Vec<Case> {
    let s = shape(rng);
    let k = rng.random_range(1..=3usize);
    let extra = rng.random_range(1..=3usize);
    let n = k + extra;
    match theorem {
        TheoremId::MultiplierProperties => {
            let x = generators::frame(rng, &s, k, n, CONDITION);
            let y = generators::frame(rng, &s, k, n, CONDITION);
            let (variant, u) = match trial % 3 {
                0 => ("general_symbol", random::operator(rng, &s, n, n)),
                1 => ("positive_symbol", random::positive_operator(rng, &s, n)),
                _ => {
                    let a = random::vector(rng, &s, n);
                    let b = random::vector(rng, &s, n);
                    ("rank_one_symbol", ModuleOperator::theta(&a, &b).expect("same shape"))
                }
            };
            vec![case(variant, multiplier_properties(&u, &y, &x, tol))]
        }
        TheoremId::LowerFrameCondition => {
            let x = generators::riesz(rng, &s, k, CONDITION);
            let y = generators::riesz(rng, &s, k, CONDITION);
            let u = random::invertible_operator(rng, &s, k, CONDITION);
            vec![case(
                "riesz_pair",
                lower_frame_condition(&u, &y, &x, tol, rng, NORM_FORM_SAMPLES),
            )]
        }
        TheoremId::Perturbation => {
            let u = random::invertible_operator(rng, &s, k, CONDITION);
            let e = random::contraction(rng, &s, k, 1.0);
            let floor = u.min_singular_value();
            let inside = u.add(&e.scale_real(0.9 * floor)).expect("same ranks");
            let outside = u.add(&e.scale_real(1.1 * floor)).expect("same ranks");
            vec![
                case("lambda_0.9", perturbation(&u, &inside, tol, rng, SANDWICH_SAMPLES)),
                Case {
                    variant: "lambda_1.1",
                    expected: Verdict::HypothesisNotMet,
                    result: perturbation(&u, &outside, tol, rng, SANDWICH_SAMPLES),
                },
            ]
        }
        TheoremId::FramePerturbation => {
            let x = generators::frame(rng, &s, k, n, CONDITION);
            let result = generators::perturb_frame(rng, &x, DEFAULT_FRACTION)
                .map_err(to_core)
                .and_then(|y| {
                    let b = x.bounds();
                    let t = DEFAULT_FRACTION * (b.lower * b.lower) / (b.upper * b.upper);
                    let u = generators::near_identity(rng, &s, n, t);
                    frame_perturbation(&x, &y, &u, tol)
                });
            vec![case("constructive_0.8", result)]
        }
        TheoremId::TransformedFrame => {
            let y = generators::frame(rng, &s, k, n, CONDITION);
            let w = random::invertible_operator(rng, &s, k, 10.0);
            let b = y.bounds();
            let u = generators::near_identity(rng, &s, n, DEFAULT_FRACTION * b.lower / b.upper);
            vec![case("constructive_0.8", transformed_frame(&y, &w, &u, tol))]
        }
        TheoremId::DualFrame => {
            // scale to C = 2 so the dual's Bessel bound stays below D (see the contraction estimate)
            let raw = generators::frame(rng, &s, k, n, CONDITION);
            let x = raw.scale_real((2.0 / raw.bounds().lower).sqrt());
            let b = x.bounds();
            let g = (0.5 * (b.upper - 1.0 / b.lower)).max(0.0).sqrt();
            let result = generators::alternative_dual(rng, &x, g)
                .map_err(to_core)
                .and_then(|xd| {
                    let u = generators::near_identity(rng, &s, n, DEFAULT_FRACTION / (2.0 * b.upper));
                    dual_frame(&x, &xd, &u, tol)
                });
            vec![case("alternative_dual_0.8", result)]
        }
        TheoremId::ApproximateDual => {
            let y = generators::frame(rng, &s, k, n, CONDITION);
            let b = y.bounds();
            let result = generators::perturb_dual(rng, &y, DEFAULT_FRACTION)
                .map_err(to_core)
                .and_then(|x| {
                    if trial.is_multiple_of(4) {
                        approximate_dual(&y, &x, None, tol)
                    } else {
                        // U = (1-α)I + βK: ‖U‖ ≤ 1 - α + β < 1, ‖U - I‖ ≤ α + β = r
                        let r = DEFAULT_FRACTION * (b.lower / (4.0 * b.upper)).sqrt();
                        let u = ModuleOperator::identity(&s, n)
                            .scale_real(1.0 - 0.55 * r)
                            .add(&random::contraction(rng, &s, n, 0.45 * r))
                            .expect("same ranks");
                        approximate_dual(&y, &x, Some(&u), tol)
                    }
                });
            let variant = if trial.is_multiple_of(4) { "identity_symbol" } else { "contractive_symbol" };
            vec![case(variant, result)]
        }
        TheoremId::RieszInjectivity => {
            let x = generators::riesz(rng, &s, k, CONDITION);
            let y = generators::riesz(rng, &s, k, CONDITION);
            let u1 = random::operator(rng, &s, k, k);
            let (variant, u2) = if trial.is_multiple_of(10) {
                ("equal_symbols", u1.clone())
            } else {
                let d = random::operator(rng, &s, k, k).scale_real(1e-3);
                ("perturbed_symbol", u1.add(&d).expect("same ranks"))
            };
            vec![case(variant, riesz_injectivity(&x, &y, &u1, &u2, tol))]
        }
        TheoremId::RieszNormBounds => {
            let x = generators::riesz(rng, &s, k, CONDITION);
            let y = generators::riesz(rng, &s, k, CONDITION);
            let u = random::operator(rng, &s, k, k);
            vec![case("riesz_pair", riesz_norm_bounds(&x, &y, &u, tol))]
        }
        TheoremId::RieszInvertibility => {
            let x = generators::riesz(rng, &s, k, CONDITION);
            let y = generators::riesz(rng, &s, k, CONDITION);
            if trial % 10 == 9 {
                let u = generators::singular_operator(rng, &s, k);
                vec![case("singular_symbol", riesz_invertibility(&x, &y, &u, tol))]
            } else {
                let u = random::invertible_operator(rng, &s, k, CONDITION);
                vec![case("invertible_symbol", riesz_invertibility(&x, &y, &u, tol))]
            }
        }
        TheoremId::UniqueDual => {
            if trial.is_multiple_of(2) {
                // X a Riesz basis of A^k: unique dual, square invertible multiplier
                let y = generators::riesz(rng, &s, k, CONDITION);
                let x = generators::riesz(rng, &s, k, CONDITION);
                let u = random::invertible_operator(rng, &s, k, CONDITION);
                vec![case("unique_dual", unique_dual(&y, &x, &u, tol))]
            } else {
                // X redundant in A^k, Y a Riesz basis of A^n: neither side holds
                let y = generators::riesz(rng, &s, n, CONDITION);
                let x = generators::frame(rng, &s, k, n, CONDITION);
                let u = random::invertible_operator(rng, &s, n, CONDITION);
                vec![case("redundant_frame", unique_dual(&y, &x, &u, tol))]
            }
        }
    }
}

fn to_core(e: crate::error::HarnessError) -> cstar_frames::Error {
    match e {
        crate::error::HarnessError::Core(c) => c,
        other => cstar_frames::Error::InvalidShape(other.to_string()),
    }
}

/// All trials of one theorem, in trial order.
pub fn run_theorem(theorem: TheoremId, seed: u64, trials: usize, tol: &Tolerances) -> Vec<CheckRecord> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(theorem, seed, t, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The full suite, ordered by theorem then trial.
pub fn run_suite(seed: u64, base_trials: usize, tol: &Tolerances, tolerance_source: &str) -> Report {
    let checks: Vec<CheckRecord> = TheoremId::ALL
        .par_iter()
        .map(|&t| run_theorem(t, seed, trials_for(t, base_trials), tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let env = Environment {
        tool: crate::TOOL,
        version: env!("CARGO_PKG_VERSION"),
        tolerances: *tol,
        tolerance_source: tolerance_source.to_string(),
        seed,
        trials: Some(base_trials),
        rng: RNG_DESCRIPTION,
        scenario: None,
    };
    Report::new("suite", env, checks)
}
