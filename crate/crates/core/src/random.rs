//! Gaussian samplers for algebra elements, module vectors and operators.
//!
//! Entries are independent standard complex normals (real and imaginary
//! parts each `N(0, 1/2)`). The caller supplies the generator, so any
//! seeded RNG gives reproducible draws.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{AlgebraElement, AlgebraShape, CMatrix, ModuleOperator, ModuleVector, C64};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    // column-major fill order, fixed so draws are reproducible
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape
        .block_dims()
        .iter()
        .map(|&d| matrix(rng, d, d))
        .collect();
    AlgebraElement::from_blocks(shape, blocks).expect("block sizes follow the shape")
}

/// Random element of the center: one complex normal per block.
pub fn central_element<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> AlgebraElement {
    let values: Vec<C64> = (0..shape.num_blocks()).map(|_| complex_normal(rng)).collect();
    AlgebraElement::central(shape, &values).expect("one value per block")
}

/// Random Hermitian element `(b + b*)/2`.
pub fn hermitian_element<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> AlgebraElement {
    let b = element(rng, shape);
    (&b + &b.adjoint()).scale_real(0.5)
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape, rank: usize) -> ModuleVector {
    let coords = (0..rank).map(|_| element(rng, shape)).collect();
    ModuleVector::new(shape, coords).expect("coordinates follow the shape")
}

pub fn operator<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AlgebraShape,
    domain_rank: usize,
    codomain_rank: usize,
) -> ModuleOperator {
    let entries = (0..domain_rank * codomain_rank)
        .map(|_| element(rng, shape))
        .collect();
    ModuleOperator::from_entries(shape, domain_rank, codomain_rank, entries)
        .expect("entry count follows the ranks")
}

/// Random operator rescaled to spectral norm `norm`.
pub fn contraction<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AlgebraShape,
    rank: usize,
    norm: f64,
) -> ModuleOperator {
    loop {
        let t = operator(rng, shape, rank, rank);
        let n = t.norm();
        if n > 1e-8 {
            return t.scale_real(norm / n);
        }
    }
}

/// Random positive operator `V*V`.
pub fn positive_operator<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AlgebraShape,
    rank: usize,
) -> ModuleOperator {
    let v = operator(rng, shape, rank, rank);
    v.adjoint().compose(&v).expect("square ranks")
}

/// Random invertible operator with condition number at most `max_condition`.
///
/// A few plain Gaussian draws are tried first; if none is conditioned well
/// enough, the last one is shifted by a multiple of the identity chosen so
/// that `(s + ‖G‖)/(s - ‖G‖) = max_condition`.
pub fn invertible_operator<R: Rng + ?Sized>(
    rng: &mut R,
    shape: &AlgebraShape,
    rank: usize,
    max_condition: f64,
) -> ModuleOperator {
    assert!(max_condition > 1.0, "condition cap must exceed 1");
    let mut t = operator(rng, shape, rank, rank);
    for _ in 0..8 {
        let min = t.min_singular_value();
        if min > 0.0 && t.norm() / min <= max_condition {
            return t;
        }
        t = operator(rng, shape, rank, rank);
    }
    let g = t.norm();
    let shift = g * (max_condition + 1.0) / (max_condition - 1.0);
    t.add(&ModuleOperator::identity(shape, rank).scale_real(shift))
        .expect("square ranks")
}
