#![allow(dead_code)]

use cstar_frames::{random, AlgebraShape, FrameSequence, ModuleOperator, ModuleVector, CMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shapes() -> impl Strategy<Value = AlgebraShape> {
    prop_oneof![
        Just(vec![1]),
        Just(vec![2]),
        Just(vec![2, 1]),
        Just(vec![3]),
        Just(vec![1, 1]),
    ]
    .prop_map(|d| AlgebraShape::new(d).unwrap())
}

/// Independent spectral norm from nalgebra's SVD.
pub fn svd_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

pub fn svd_min(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.min()
}

/// `n ≥ k` generic vectors in `A^k`, redrawn until `D/C ≤ 1e3`.
pub fn random_frame(rng: &mut ChaCha8Rng, shape: &AlgebraShape, k: usize, n: usize) -> FrameSequence {
    loop {
        let x = FrameSequence::new((0..n).map(|_| random::vector(rng, shape, k)).collect()).unwrap();
        let b = x.bounds();
        if b.lower * 1e3 >= b.upper {
            return x;
        }
    }
}

/// `V(e_n)` for a well-conditioned invertible `V`.
pub fn random_riesz(rng: &mut ChaCha8Rng, shape: &AlgebraShape, k: usize) -> FrameSequence {
    let v = random::invertible_operator(rng, shape, k, 20.0);
    FrameSequence::riesz_from_operator(&v).unwrap()
}

/// Reads the sequence off an analysis operator: `(h_n)_i = entry(n, i)^*`.
pub fn sequence_from_analysis(t: &ModuleOperator) -> FrameSequence {
    let vectors = (0..t.codomain_rank())
        .map(|n| {
            ModuleVector::new(
                t.shape(),
                (0..t.domain_rank()).map(|i| t.entry(n, i).adjoint()).collect(),
            )
            .unwrap()
        })
        .collect();
    FrameSequence::new(vectors).unwrap()
}

/// A non-canonical dual `x̃_n + h_n` with `T_H = (Id - T_X S^{-1} T_X^*) G`.
pub fn alternative_dual(rng: &mut ChaCha8Rng, x: &FrameSequence, scale: f64) -> FrameSequence {
    let t = x.analysis_operator();
    let s_inv = x.frame_operator().invert().unwrap();
    let n = x.len();
    let proj = ModuleOperator::identity(x.shape(), n)
        .sub(&t.compose(&s_inv).unwrap().compose(&t.adjoint()).unwrap())
        .unwrap();
    let g = random::operator(rng, x.shape(), x.rank(), n).scale_real(scale);
    let h = sequence_from_analysis(&proj.compose(&g).unwrap());
    let canonical = x.canonical_dual().unwrap();
    FrameSequence::new(
        canonical
            .vectors()
            .iter()
            .zip(h.vectors())
            .map(|(a, b)| a.add(b).unwrap())
            .collect(),
    )
    .unwrap()
}
