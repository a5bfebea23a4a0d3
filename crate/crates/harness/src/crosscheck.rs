//! With `A = ℂ` the module machinery must collapse to ordinary Hilbert-space
//! frame theory. Each instance is computed twice: through the library, and
//! directly on `ℂ^k` with plain nalgebra matrices (frame matrix `F` with the
//! frame vectors as columns, `S = F F^*`, bounds from nalgebra's Hermitian
//! eigensolver, multiplier as the literal double sum).

use std::collections::BTreeMap;

use cstar_frames::{
    random, AlgebraElement, AlgebraShape, CMatrix, FrameSequence, ModuleOperator, ModuleVector, Multiplier,
    Tolerances, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{Environment, Report, RNG_DESCRIPTION};

pub const INSTANCES: usize = 100;
pub const AGREEMENT_TOL: f64 = 1e-10;
/// Direct draws are redrawn above this `D/C`, so inversions stay well conditioned.
const MAX_RATIO: f64 = 100.0;

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckSummary {
    pub instances: usize,
    pub tolerance: f64,
    /// Largest relative deviation per compared quantity, over all instances.
    pub max_deviation: BTreeMap<String, f64>,
    pub mercedes: TightFrameCheck,
    pub orthonormal_basis: TightFrameCheck,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TightFrameCheck {
    pub library_bounds: (f64, f64),
    pub direct_bounds: (f64, f64),
    pub expected_bound: f64,
    /// `‖S - expected·Id‖` for the library's frame operator.
    pub frame_operator_residual: f64,
    pub passed: bool,
}

/// `|a - b| / (1 + max(|a|, |b|))`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn rel_matrix(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let diff = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = a.iter().chain(b.iter()).map(|x| x.norm()).fold(0.0, f64::max);
    diff / (1.0 + scale)
}

fn scalar_shape() -> AlgebraShape {
    AlgebraShape::new(vec![1]).expect("non-empty")
}

/// Frame whose `n`-th vector is column `n` of `f`.
fn frame_from_columns(f: &CMatrix) -> FrameSequence {
    let shape = scalar_shape();
    let vectors = (0..f.ncols())
        .map(|n| {
            let coords = (0..f.nrows()).map(|i| AlgebraElement::scalar(&shape, f[(i, n)])).collect();
            ModuleVector::new(&shape, coords).expect("scalar coordinates")
        })
        .collect();
    FrameSequence::new(vectors).expect("positive length")
}

fn columns_of(x: &FrameSequence) -> CMatrix {
    CMatrix::from_fn(x.rank(), x.len(), |i, n| x.vector(n).coord(i).block(0)[(0, 0)])
}

fn operator_from_matrix(u: &CMatrix) -> ModuleOperator {
    let shape = scalar_shape();
    let entries = (0..u.nrows())
        .flat_map(|j| (0..u.ncols()).map(move |i| (j, i)))
        .map(|(j, i)| AlgebraElement::scalar(&shape, u[(j, i)]))
        .collect();
    ModuleOperator::from_entries(&shape, u.ncols(), u.nrows(), entries).expect("entry count")
}

/// `(λ_min, λ_max)` of a Hermitian matrix via nalgebra.
fn direct_bounds(s: &CMatrix) -> (f64, f64) {
    let ev = s.clone().symmetric_eigenvalues();
    (ev.min(), ev.max())
}

fn direct_norm(a: &CMatrix) -> f64 {
    a.clone().svd_unordered(false, false).singular_values.max()
}

/// `Σ_k Σ_j U_{kj} ⟨h, x_j⟩ y_k`, evaluated term by term.
fn double_sum(u: &CMatrix, y: &CMatrix, x: &CMatrix, h: &[C64]) -> Vec<C64> {
    let k = y.nrows();
    let mut out = vec![C64::new(0.0, 0.0); k];
    for kk in 0..y.ncols() {
        for j in 0..x.ncols() {
            let inner: C64 = (0..x.nrows()).map(|i| h[i] * x[(i, j)].conj()).sum();
            let coeff = u[(kk, j)] * inner;
            for (i, o) in out.iter_mut().enumerate() {
                *o += coeff * y[(i, kk)];
            }
        }
    }
    out
}

fn draw_frame(rng: &mut ChaCha8Rng, k: usize, n: usize) -> CMatrix {
    loop {
        let f = random::matrix(rng, k, n);
        let (lo, hi) = direct_bounds(&(&f * f.adjoint()));
        if lo > 0.0 && hi / lo <= MAX_RATIO {
            return f;
        }
    }
}

/// Relative deviations of one random instance, keyed by quantity.
fn instance(seed: u64, index: usize) -> BTreeMap<&'static str, f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let k = rng.random_range(1..=4usize);
    let n = rng.random_range(k..=8usize);
    let fx = draw_frame(&mut rng, k, n);
    let fy = draw_frame(&mut rng, k, n);
    let u = random::matrix(&mut rng, n, n);
    let h: Vec<C64> = random::matrix(&mut rng, k, 1).iter().copied().collect();

    let x = frame_from_columns(&fx);
    let y = frame_from_columns(&fy);
    let mut dev = BTreeMap::new();

    // frame operator and bounds
    let s = &fx * fx.adjoint();
    let (lo, hi) = direct_bounds(&s);
    let b = x.bounds();
    dev.insert("frame_operator", rel_matrix(&x.frame_operator().realization(), &s));
    dev.insert("lower_bound", rel(b.lower, lo));
    dev.insert("upper_bound", rel(b.upper, hi));

    // canonical dual and its bounds
    // Cholesky solve, a different route from the library's LU inverse
    let dual_direct = s.clone().cholesky().expect("positive definite draw").solve(&fx);
    let dual = x.canonical_dual().expect("frame");
    dev.insert("canonical_dual", rel_matrix(&columns_of(&dual), &dual_direct));
    let (dlo, dhi) = direct_bounds(&(&dual_direct * dual_direct.adjoint()));
    let db = dual.bounds();
    dev.insert("dual_bounds", rel(db.lower, dlo).max(rel(db.upper, dhi)));

    // reconstruction of h through the library against h itself
    let hv = ModuleVector::from_realization(&scalar_shape(), k, &cstar_frames::CVector::from_column_slice(&h))
        .expect("scalar vector");
    let rec = x.reconstruct(&hv).expect("frame");
    let rec_dev = [&rec.via_dual_coefficients, &rec.via_dual_vectors]
        .iter()
        .map(|v| {
            let got = v.realize();
            let diff = got.iter().zip(&h).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            diff / (1.0 + h.iter().map(|z| z.norm()).fold(0.0, f64::max))
        })
        .fold(0.0, f64::max);
    dev.insert("reconstruction", rec_dev);

    // multiplier: library operator against the double sum on every basis vector
    let m = Multiplier::new(operator_from_matrix(&u), &y, &x).expect("matching lengths");
    let direct_m = CMatrix::from_fn(k, k, |_, _| C64::new(0.0, 0.0));
    let direct_m = (0..k).fold(direct_m, |mut acc, col| {
        let mut e = vec![C64::new(0.0, 0.0); k];
        e[col] = C64::new(1.0, 0.0);
        for (row, v) in double_sum(&u, &fy, &fx, &e).into_iter().enumerate() {
            acc[(row, col)] = v;
        }
        acc
    });
    dev.insert("multiplier_matrix", rel_matrix(&m.operator().realization(), &direct_m));
    dev.insert("multiplier_factored", rel_matrix(&direct_m, &(&fy * &u * fx.adjoint())));
    dev.insert("multiplier_norm", rel(m.norm(), direct_norm(&direct_m)));
    let applied = m.apply(&hv).expect("rank k").realize();
    let direct_applied = double_sum(&u, &fy, &fx, &h);
    let scale = direct_applied.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = applied.iter().zip(&direct_applied).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    dev.insert("multiplier_apply", diff / (1.0 + scale));
    dev
}

/// The Mercedes frame: three unit vectors at 120° in ℝ², tight with bound 3/2.
pub fn mercedes() -> CMatrix {
    let angles = [90.0f64, 210.0, 330.0].map(f64::to_radians);
    CMatrix::from_fn(2, 3, |i, n| {
        let a = angles[n];
        C64::new(if i == 0 { a.cos() } else { a.sin() }, 0.0)
    })
}

fn tight_check(f: &CMatrix, expected: f64) -> TightFrameCheck {
    let x = frame_from_columns(f);
    let b = x.bounds();
    let direct = direct_bounds(&(f * f.adjoint()));
    let id = ModuleOperator::identity(x.shape(), x.rank()).scale_real(expected);
    let residual = x.frame_operator().sub(&id).expect("same ranks").norm();
    let passed = (b.lower - expected).abs() <= AGREEMENT_TOL
        && (b.upper - expected).abs() <= AGREEMENT_TOL
        && (direct.0 - expected).abs() <= AGREEMENT_TOL
        && (direct.1 - expected).abs() <= AGREEMENT_TOL
        && residual <= AGREEMENT_TOL;
    TightFrameCheck {
        library_bounds: (b.lower, b.upper),
        direct_bounds: direct,
        expected_bound: expected,
        frame_operator_residual: residual,
        passed,
    }
}

pub fn run_crosscheck(seed: u64, instances: usize) -> CrosscheckSummary {
    let per_instance: Vec<BTreeMap<&'static str, f64>> =
        (0..instances).into_par_iter().map(|i| instance(seed, i)).collect();
    let mut max_deviation = BTreeMap::new();
    let mut failures = Vec::new();
    for (i, devs) in per_instance.iter().enumerate() {
        for (&name, &d) in devs {
            let slot = max_deviation.entry(name.to_string()).or_insert(0.0f64);
            *slot = slot.max(d);
            if !(d <= AGREEMENT_TOL) {
                failures.push(format!("instance {i}: {name} deviates by {d:e}"));
            }
        }
    }
    let mercedes = tight_check(&mercedes(), 1.5);
    let orthonormal_basis = tight_check(&CMatrix::identity(3, 3), 1.0);
    if !mercedes.passed {
        failures.push("Mercedes frame bounds differ from (1.5, 1.5)".into());
    }
    if !orthonormal_basis.passed {
        failures.push("orthonormal basis frame operator differs from Id".into());
    }
    CrosscheckSummary {
        instances,
        tolerance: AGREEMENT_TOL,
        max_deviation,
        passed: failures.is_empty(),
        mercedes,
        orthonormal_basis,
        failures,
    }
}

/// Crosscheck wrapped in a report (no per-theorem checks).
pub fn crosscheck_report(seed: u64, tol: &Tolerances, tolerance_source: &str) -> Report {
    let env = Environment {
        tool: crate::TOOL,
        version: env!("CARGO_PKG_VERSION"),
        tolerances: *tol,
        tolerance_source: tolerance_source.to_string(),
        seed,
        trials: Some(INSTANCES),
        rng: RNG_DESCRIPTION,
        scenario: None,
    };
    let mut report = Report::new("crosscheck", env, Vec::new());
    report.crosscheck = Some(run_crosscheck(seed, INSTANCES));
    report
}
