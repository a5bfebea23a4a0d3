//! Constructive instance generators.
//!
//! Perturbation sizes are solved from computed norms so that a hypothesis
//! holds at a chosen fraction of its bound; nothing is rejection-sampled
//! against a theorem's hypothesis. Every emitted object is checked against
//! its structural predicate before it is handed out.

use std::fmt;
use std::str::FromStr;

use cstar_frames::{
    random, AlgebraElement, AlgebraShape, DiagonalSymbol, FrameSequence, ModuleOperator,
    ModuleVector,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Default cap on `D/C` for random frames and on condition numbers.
pub const DEFAULT_MAX_CONDITION: f64 = 100.0;
/// Default fraction of a hypothesis bound that generators aim for.
pub const DEFAULT_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    RandomFrame,
    RieszBasis,
    DualPair,
    NearIdentitySymbol,
    PerturbedSequence,
    CentralDiagonalSymbol,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::RandomFrame,
        GeneratorKind::RieszBasis,
        GeneratorKind::DualPair,
        GeneratorKind::NearIdentitySymbol,
        GeneratorKind::PerturbedSequence,
        GeneratorKind::CentralDiagonalSymbol,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::RandomFrame => "random_frame",
            GeneratorKind::RieszBasis => "riesz_basis",
            GeneratorKind::DualPair => "dual_pair",
            GeneratorKind::NearIdentitySymbol => "near_identity_symbol",
            GeneratorKind::PerturbedSequence => "perturbed_sequence",
            GeneratorKind::CentralDiagonalSymbol => "central_diagonal_symbol",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown generator kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbMode {
    /// `y_n = x_n - δ p_n` with `λ_max(S_{X-Y})` at a fraction of the frame-perturbation threshold.
    FramePerturbation,
    /// `x_n = ỹ_n + t p_n` with `Σ‖x_n - ỹ_n‖²` at a fraction of `1/(4D)`.
    ApproximateDual,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    /// Module rank `k`; defaults to the scenario rank.
    pub rank: Option<usize>,
    /// Sequence length `N`; defaults to `k` for Riesz bases and symbols, `k + 2` otherwise.
    pub len: Option<usize>,
    /// `‖U - I‖` for symbols; fraction of the bound for perturbed sequences.
    pub target: Option<f64>,
    pub mode: Option<PerturbMode>,
    pub max_condition: Option<f64>,
    /// `dual_pair`: take the standard basis as the frame.
    pub standard_basis: bool,
    /// `dual_pair`: emit the canonical dual instead of an alternative one.
    pub canonical: bool,
}

/// One generated object.
#[derive(Debug, Clone)]
pub enum Generated {
    Frame(FrameSequence),
    Operator(ModuleOperator),
    Diagonal(DiagonalSymbol),
}

// ---- building blocks ----

/// `n ≥ k` Gaussian vectors in `A^k`, keeping the best-conditioned of a few draws.
pub fn frame<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AlgebraShape,
    k: usize,
    n: usize,
    max_condition: f64,
) -> FrameSequence {
    let mut best: Option<(f64, FrameSequence)> = None;
    for _ in 0..16 {
        let x = FrameSequence::new((0..n).map(|_| random::vector(rng, shape, k)).collect())
            .expect("positive length");
        let b = x.bounds();
        let ratio = if b.lower > 0.0 { b.upper / b.lower } else { f64::INFINITY };
        if ratio <= max_condition {
            return x;
        }
        if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
            best = Some((ratio, x));
        }
    }
    best.expect("at least one draw").1
}

/// `{V e_n}` for a random invertible `V` with condition number at most `max_condition`.
pub fn riesz<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, k: usize, max_condition: f64) -> FrameSequence {
    let v = random::invertible_operator(rng, shape, k, max_condition);
    FrameSequence::riesz_from_operator(&v).expect("invertible by construction")
}

/// Reads a sequence off an analysis operator: `(h_n)_i = entry(n, i)^*`.
pub fn sequence_from_analysis(t: &ModuleOperator) -> FrameSequence {
    let vectors = (0..t.codomain_rank())
        .map(|n| {
            ModuleVector::new(
                t.shape(),
                (0..t.domain_rank()).map(|i| t.entry(n, i).adjoint()).collect(),
            )
            .expect("shape follows the operator")
        })
        .collect();
    FrameSequence::new(vectors).expect("positive length")
}

/// The dual `x̃_n + h_n` where `T_H = (Id - T_X S^{-1} T_X^*) G` and `‖G‖ = g_norm`.
///
/// `T_X^* T_H = 0`, so the reconstruction identity is unaffected, and the
/// dual's Bessel bound is at most `1/C + g_norm²`.
pub fn alternative_dual<R: Rng + ?Sized>(
    rng: &mut R,
    x: &FrameSequence,
    g_norm: f64,
) -> Result<FrameSequence> {
    let t = x.analysis_operator();
    let s_inv = x.frame_operator().invert()?;
    let n = x.len();
    let proj = ModuleOperator::identity(x.shape(), n).sub(&t.compose(&s_inv)?.compose(&t.adjoint())?)?;
    let g = random::operator(rng, x.shape(), x.rank(), n);
    let g = g.scale_real(g_norm / g.norm().max(f64::MIN_POSITIVE));
    let h = sequence_from_analysis(&proj.compose(&g)?);
    let canonical = x.canonical_dual()?;
    Ok(FrameSequence::new(
        canonical
            .vectors()
            .iter()
            .zip(h.vectors())
            .map(|(a, b)| a.add(b))
            .collect::<cstar_frames::Result<_>>()?,
    )?)
}

/// `Id + t K` with `‖K‖ = 1`, so `‖U - Id‖ = t`.
pub fn near_identity<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, n: usize, t: f64) -> ModuleOperator {
    ModuleOperator::identity(shape, n)
        .add(&random::contraction(rng, shape, n, t))
        .expect("square ranks")
}

/// `(1/D)((CD² - C²D)/(C² + D²))²`.
pub fn frame_perturbation_threshold(c: f64, d: f64) -> f64 {
    ((c * d * d - c * c * d) / (c * c + d * d)).powi(2) / d
}

fn random_sequence<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, k: usize, n: usize) -> FrameSequence {
    FrameSequence::new((0..n).map(|_| random::vector(rng, shape, k)).collect()).expect("positive length")
}

fn combine(a: &FrameSequence, b: &FrameSequence, t: f64) -> Result<FrameSequence> {
    Ok(FrameSequence::new(
        a.vectors()
            .iter()
            .zip(b.vectors())
            .map(|(u, v)| u.add(&v.scale_real(t)))
            .collect::<cstar_frames::Result<_>>()?,
    )?)
}

/// `Y = X - δP` with `λ_max(S_{δP}) = fraction · threshold(C, D)`.
pub fn perturb_frame<R: Rng + ?Sized>(rng: &mut R, x: &FrameSequence, fraction: f64) -> Result<FrameSequence> {
    let b = x.bounds();
    let threshold = frame_perturbation_threshold(b.lower, b.upper);
    let p = random_sequence(rng, x.shape(), x.rank(), x.len());
    let lambda_p = p.bounds().upper;
    let delta = (fraction * threshold / lambda_p).sqrt();
    combine(x, &p, -delta)
}

/// `X = Ỹ + tP` with `Σ‖x_n - ỹ_n‖² = fraction / (4D)`.
pub fn perturb_dual<R: Rng + ?Sized>(rng: &mut R, y: &FrameSequence, fraction: f64) -> Result<FrameSequence> {
    let d = y.bounds().upper;
    let dual = y.canonical_dual()?;
    let p = random_sequence(rng, y.shape(), y.rank(), y.len());
    let sigma_p: f64 = p.vectors().iter().map(|v| v.norm().powi(2)).sum();
    let t = (fraction / (4.0 * d) / sigma_p).sqrt();
    combine(&dual, &p, t)
}

pub fn central_symbol<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, n: usize) -> DiagonalSymbol {
    DiagonalSymbol::new((0..n).map(|_| random::central_element(rng, shape)).collect())
        .expect("central by construction")
}

/// A singular operator that is invertible in every block but one:
/// `A · diag(p, 1, …, 1) · B` with `p` rank-deficient in block 0 only.
pub fn singular_operator<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, n: usize) -> ModuleOperator {
    let a = random::invertible_operator(rng, shape, n, 20.0);
    let b = random::invertible_operator(rng, shape, n, 20.0);
    let mut blocks: Vec<_> = shape
        .block_dims()
        .iter()
        .map(|&d| cstar_frames::CMatrix::identity(d, d))
        .collect();
    let d0 = shape.block_dims()[0];
    blocks[0][(d0 - 1, d0 - 1)] = cstar_frames::C64::new(0.0, 0.0);
    let p = AlgebraElement::from_blocks(shape, blocks).expect("shape blocks");
    let mut diag = vec![AlgebraElement::one(shape); n];
    diag[0] = p;
    let mid = ModuleOperator::diagonal(shape, diag).expect("shape entries");
    a.compose(&mid).and_then(|m| m.compose(&b)).expect("square ranks")
}

// ---- scenario-facing entry point ----

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidGenerator(msg.into())
}

/// Generates the named parts of one instance from `seed`.
///
/// Part names: `frame` (random_frame, riesz_basis), `x`/`dual` (dual_pair),
/// `symbol` (near_identity_symbol, central_diagonal_symbol), and `x`/`y`
/// (perturbed_sequence; `x` is the base frame in frame-perturbation mode,
/// the perturbed sequence in approximate-dual mode).
pub fn generate(
    kind: GeneratorKind,
    shape: &AlgebraShape,
    default_rank: usize,
    seed: u64,
    params: &GenParams,
) -> Result<Vec<(&'static str, Generated)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.rank.unwrap_or(default_rank);
    if k == 0 {
        return Err(invalid("rank must be positive"));
    }
    let cap = params.max_condition.unwrap_or(DEFAULT_MAX_CONDITION);
    if cap.is_nan() || cap <= 1.0 {
        return Err(invalid("max_condition must exceed 1"));
    }
    let fraction = params.target.unwrap_or(DEFAULT_FRACTION);

    match kind {
        GeneratorKind::RandomFrame => {
            let n = params.len.unwrap_or(k + 2);
            if n < k {
                return Err(invalid(format!("a frame of A^{k} needs at least {k} vectors, got {n}")));
            }
            let x = frame(&mut rng, shape, k, n, cap);
            if !x.is_frame() {
                return Err(invalid("generated sequence is not a frame"));
            }
            Ok(vec![("frame", Generated::Frame(x))])
        }
        GeneratorKind::RieszBasis => {
            let n = params.len.unwrap_or(k);
            if n != k {
                return Err(invalid(format!("a Riesz basis of A^{k} has exactly {k} vectors, got {n}")));
            }
            let x = riesz(&mut rng, shape, k, cap);
            if !x.is_modular_riesz() {
                return Err(invalid("generated sequence is not a modular Riesz basis"));
            }
            Ok(vec![("frame", Generated::Frame(x))])
        }
        GeneratorKind::DualPair => {
            let x = if params.standard_basis {
                FrameSequence::standard_basis(shape, k)
            } else {
                let n = params.len.unwrap_or(k + 2);
                if n < k {
                    return Err(invalid(format!("a frame of A^{k} needs at least {k} vectors, got {n}")));
                }
                frame(&mut rng, shape, k, n, cap)
            };
            let dual = if params.canonical || x.len() == x.rank() {
                x.canonical_dual()?
            } else {
                let g = (x.bounds().upper).sqrt();
                alternative_dual(&mut rng, &x, g)?
            };
            if !x.is_dual_pair(&dual)? {
                return Err(invalid("generated pair fails the reconstruction identity"));
            }
            Ok(vec![("x", Generated::Frame(x)), ("dual", Generated::Frame(dual))])
        }
        GeneratorKind::NearIdentitySymbol => {
            let n = params.len.unwrap_or(k);
            let t = params.target.ok_or_else(|| invalid("near_identity_symbol needs `target` = ‖U - I‖"))?;
            if !(t >= 0.0) {
                return Err(invalid("target must be non-negative"));
            }
            let u = near_identity(&mut rng, shape, n, t);
            let got = u.minus_identity()?.norm();
            if (got - t).abs() > 0.01 * t {
                return Err(invalid(format!("‖U - I‖ = {got} misses target {t}")));
            }
            Ok(vec![("symbol", Generated::Operator(u))])
        }
        GeneratorKind::PerturbedSequence => {
            let n = params.len.unwrap_or(k + 2);
            if n < k {
                return Err(invalid(format!("a frame of A^{k} needs at least {k} vectors, got {n}")));
            }
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(invalid("target fraction must lie in (0, 1)"));
            }
            let base = frame(&mut rng, shape, k, n, cap);
            match params.mode.unwrap_or(PerturbMode::FramePerturbation) {
                PerturbMode::FramePerturbation => {
                    let b = base.bounds();
                    let threshold = frame_perturbation_threshold(b.lower, b.upper);
                    if !(threshold > 0.0) {
                        return Err(invalid("base frame is tight; the perturbation threshold is zero"));
                    }
                    let y = perturb_frame(&mut rng, &base, fraction)?;
                    let lambda = base.difference(&y)?.bounds().upper;
                    if !(lambda < threshold) {
                        return Err(invalid("perturbation overshoots the threshold"));
                    }
                    Ok(vec![("x", Generated::Frame(base)), ("y", Generated::Frame(y))])
                }
                PerturbMode::ApproximateDual => {
                    let x = perturb_dual(&mut rng, &base, fraction)?;
                    let d = base.bounds().upper;
                    let dual = base.canonical_dual()?;
                    let sigma: f64 = x.difference(&dual)?.vectors().iter().map(|v| v.norm().powi(2)).sum();
                    if !(sigma < 1.0 / (4.0 * d)) {
                        return Err(invalid("perturbation overshoots 1/(4D)"));
                    }
                    Ok(vec![("y", Generated::Frame(base)), ("x", Generated::Frame(x))])
                }
            }
        }
        GeneratorKind::CentralDiagonalSymbol => {
            let n = params.len.unwrap_or(k);
            if n == 0 {
                return Err(invalid("symbol length must be positive"));
            }
            let m = central_symbol(&mut rng, shape, n);
            if !m.entries().iter().all(AlgebraElement::in_center) {
                return Err(invalid("generated symbol is not central"));
            }
            Ok(vec![("symbol", Generated::Diagonal(m))])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> AlgebraShape {
        AlgebraShape::new(vec![2]).unwrap()
    }

    #[test]
    fn riesz_basis_on_m2() {
        let parts = generate(GeneratorKind::RieszBasis, &m2(), 3, 1, &GenParams::default()).unwrap();
        match &parts[0].1 {
            Generated::Frame(x) => assert!(x.is_modular_riesz()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn riesz_basis_with_wrong_length_is_infeasible() {
        let params = GenParams { len: Some(4), ..Default::default() };
        assert!(matches!(
            generate(GeneratorKind::RieszBasis, &m2(), 3, 1, &params),
            Err(HarnessError::InvalidGenerator(_))
        ));
    }

    #[test]
    fn dual_pair_of_standard_basis_is_itself() {
        for seed in [0, 7, 99] {
            let params = GenParams { standard_basis: true, ..Default::default() };
            let parts = generate(GeneratorKind::DualPair, &m2(), 2, seed, &params).unwrap();
            let (Generated::Frame(x), Generated::Frame(d)) = (&parts[0].1, &parts[1].1) else {
                panic!("frames expected")
            };
            assert!(d.approx_eq(x, 1e-14));
        }
    }

    #[test]
    fn near_identity_hits_target() {
        let params = GenParams { target: Some(0.3), len: Some(4), ..Default::default() };
        let parts = generate(GeneratorKind::NearIdentitySymbol, &m2(), 2, 3, &params).unwrap();
        let Generated::Operator(u) = &parts[0].1 else { panic!("operator expected") };
        let dist = u.minus_identity().unwrap().norm();
        assert!((0.297..=0.303).contains(&dist), "{dist}");
    }

    #[test]
    fn alternative_dual_differs_from_canonical() {
        let parts = generate(GeneratorKind::DualPair, &m2(), 2, 5, &GenParams::default()).unwrap();
        let (Generated::Frame(x), Generated::Frame(d)) = (&parts[0].1, &parts[1].1) else {
            panic!("frames expected")
        };
        assert!(x.is_dual_pair(d).unwrap());
        assert!(!d.approx_eq(&x.canonical_dual().unwrap(), 1e-6));
    }

    #[test]
    fn singular_operator_is_singular() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = singular_operator(&mut rng, &s, 3);
        assert!(!u.is_invertible_with(1e-10));
    }

    #[test]
    fn perturbed_sequences_respect_their_bounds() {
        for mode in [PerturbMode::FramePerturbation, PerturbMode::ApproximateDual] {
            let params = GenParams { mode: Some(mode), ..Default::default() };
            assert!(generate(GeneratorKind::PerturbedSequence, &m2(), 2, 11, &params).is_ok());
        }
    }
}
