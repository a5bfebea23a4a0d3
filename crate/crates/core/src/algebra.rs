//! The finite-dimensional C*-algebra `A = M_{d_1}(C) ⊕ ... ⊕ M_{d_r}(C)`.
//!
//! Elements are stored block by block. The norm is the largest block
//! spectral norm, the involution is the blockwise conjugate transpose and
//! the order is the blockwise Loewner order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::{INVERTIBILITY_REL, POSITIVITY_REL};
use crate::{CMatrix, C64};

/// Block sizes `(d_1, ..., d_r)` of the algebra.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape {
    dims: Arc<[usize]>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidShape("no blocks".into()));
        }
        if let Some(pos) = block_dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has dimension 0")));
        }
        Ok(Self {
            dims: block_dims.into(),
        })
    }

    /// The scalar algebra `C`.
    pub fn scalar() -> Self {
        Self { dims: Arc::new([1]) }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    /// Complex dimension `Σ d_i²`.
    pub fn complex_dim(&self) -> usize {
        self.dims.iter().map(|d| d * d).sum()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.dims.to_vec(),
                right: other.dims.to_vec(),
            })
        }
    }
}

impl fmt::Debug for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.dims)
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(shape: AlgebraShape) -> Self {
        shape.dims.to_vec()
    }
}

/// An element of `A`, one complex `d_i × d_i` matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(shape: &AlgebraShape, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch {
                context: "algebra element block count",
                expected: shape.num_blocks(),
                actual: blocks.len(),
            });
        }
        for (b, &d) in blocks.iter().zip(shape.block_dims()) {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::DimensionMismatch {
                    context: "algebra element block size",
                    expected: d,
                    actual: if b.nrows() != d { b.nrows() } else { b.ncols() },
                });
            }
        }
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Self::scalar(shape, C64::new(0.0, 0.0))
    }

    /// The unit `1_A`.
    pub fn one(shape: &AlgebraShape) -> Self {
        Self::scalar(shape, C64::new(1.0, 0.0))
    }

    /// `z · 1_A`.
    pub fn scalar(shape: &AlgebraShape, z: C64) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&d| CMatrix::identity(d, d) * z)
            .collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Central element with value `values[i]` times the identity in block `i`.
    pub fn central(shape: &AlgebraShape, values: &[C64]) -> Result<Self> {
        if values.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch {
                context: "central element block count",
                expected: shape.num_blocks(),
                actual: values.len(),
            });
        }
        let blocks = shape
            .block_dims()
            .iter()
            .zip(values)
            .map(|(&d, &z)| CMatrix::identity(d, d) * z)
            .collect();
        Ok(Self {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        Ok(self.zip_unchecked(other, f))
    }

    fn zip_unchecked(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    /// Product `ab`, blockwise.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    /// Complex scalar multiple.
    pub fn scale(&self, z: C64) -> Self {
        self.map_blocks(|a| a * z)
    }

    /// Real scalar multiple.
    pub fn scale_real(&self, t: f64) -> Self {
        self.map_blocks(|a| a.scale(t))
    }

    /// Involution `a ↦ a*`.
    pub fn adjoint(&self) -> Self {
        self.map_blocks(|a| a.adjoint())
    }

    /// C*-norm `max_i ‖a_i‖₂`.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::spectral_norm)
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Block-diagonal embedding into `M_{Σ d_i}(C)`.
    pub fn embed(&self) -> CMatrix {
        linalg::block_diagonal(&self.blocks)
    }

    /// Spectral norm of `a - a*`.
    pub fn hermitian_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::hermitian_defect)
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= POSITIVITY_REL * (1.0 + self.norm())
    }

    /// Smallest eigenvalue of the Hermitian part over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| linalg::hermitian_eigenvalues(b)[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest eigenvalue of the Hermitian part over all blocks.
    pub fn max_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| *linalg::hermitian_eigenvalues(b).last().unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `a ≥ 0` up to the positivity floor `1e-9·(1 + ‖a‖)`.
    pub fn is_positive(&self) -> bool {
        self.is_positive_with(POSITIVITY_REL)
    }

    pub fn is_positive_with(&self, rel: f64) -> bool {
        let eps = rel * (1.0 + self.norm());
        self.hermitian_defect() <= eps && self.min_eigenvalue() >= -eps
    }

    /// `self ≤ other` in the algebra order.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(other.sub(self)?.is_positive())
    }

    /// Positive square root.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::NotPositive {
                min_eigenvalue: self.min_eigenvalue(),
            });
        }
        Ok(self.map_blocks(|b| {
            let eig = linalg::hermitian_eigen(b);
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                eig.values.len(),
                eig.values.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)),
            ));
            &eig.vectors * d * eig.vectors.adjoint()
        }))
    }

    /// Smallest singular value over all blocks.
    pub fn min_singular_value(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::min_singular_value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Inverse; singular when some block has a singular value at or below `1e-10·‖a‖`.
    pub fn inv(&self) -> Result<Self> {
        let threshold = INVERTIBILITY_REL * self.norm();
        let min_sv = self.min_singular_value();
        if !(min_sv > threshold) {
            return Err(Error::Singular {
                what: "algebra element",
                min_sv,
                threshold,
            });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            blocks.push(linalg::inverse(b).ok_or(Error::Singular {
                what: "algebra element",
                min_sv,
                threshold,
            })?);
        }
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// Membership in the center `Z(A)`: every block is a multiple of its identity.
    pub fn in_center(&self) -> bool {
        let eps = POSITIVITY_REL * (1.0 + self.norm());
        self.blocks.iter().all(|b| {
            let d = b.nrows();
            let mean = b.trace() / d as f64;
            (b - CMatrix::identity(d, d) * mean)
                .iter()
                .all(|z| z.norm() <= eps)
        })
    }

    /// Distance to `other` in the C*-norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        self.zip_unchecked(other, |a, b| a * b)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a += b;
        }
    }
}

// Operator sugar; these panic on shape mismatch. Use the named methods for
// checked arithmetic.

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        AlgebraElement::add(self, rhs).expect("shape mismatch in +")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        AlgebraElement::sub(self, rhs).expect("shape mismatch in -")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        AlgebraElement::mul(self, rhs).expect("shape mismatch in *")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale_real(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn m2(entries: [f64; 4]) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &entries.map(|x| c(x, 0.0)))
    }

    fn shape(d: &[usize]) -> AlgebraShape {
        AlgebraShape::new(d.to_vec()).unwrap()
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
        assert_eq!(shape(&[2, 1]).complex_dim(), 5);
    }

    #[test]
    fn scalar_product() {
        let s = AlgebraShape::scalar();
        let a = AlgebraElement::scalar(&s, c(2.0, 0.0));
        let b = AlgebraElement::scalar(&s, c(3.0, 0.0));
        assert_eq!(a.mul(&b).unwrap().block(0)[(0, 0)], c(6.0, 0.0));
    }

    #[test]
    fn nilpotent_product() {
        let s = shape(&[2]);
        let a = AlgebraElement::from_blocks(&s, vec![m2([0.0, 1.0, 0.0, 0.0])]).unwrap();
        let b = AlgebraElement::from_blocks(&s, vec![m2([0.0, 0.0, 1.0, 0.0])]).unwrap();
        assert_eq!(a.mul(&b).unwrap().block(0), &m2([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = AlgebraElement::one(&shape(&[2]));
        let b = AlgebraElement::one(&shape(&[1]));
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch { .. })));
        assert!(a.leq(&b).is_err());
    }

    #[test]
    fn wrong_block_size_rejected() {
        let err = AlgebraElement::from_blocks(&shape(&[2]), vec![CMatrix::zeros(3, 3)]);
        assert!(err.is_err());
    }

    #[test]
    fn adjoint_and_norm_of_imaginary_unit() {
        let a = AlgebraElement::scalar(&AlgebraShape::scalar(), c(0.0, 1.0));
        assert_eq!(a.adjoint().block(0)[(0, 0)], c(0.0, -1.0));
        assert_relative_eq!(a.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn adjoint_and_norm_of_nilpotent() {
        let s = shape(&[2]);
        let a = AlgebraElement::from_blocks(&s, vec![m2([0.0, 2.0, 0.0, 0.0])]).unwrap();
        assert_eq!(a.adjoint().block(0), &m2([0.0, 0.0, 2.0, 0.0]));
        assert_relative_eq!(a.norm(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn order_examples() {
        let s = shape(&[2]);
        assert!(AlgebraElement::one(&shape(&[3, 1, 2])).is_positive());
        let d = AlgebraElement::from_blocks(&s, vec![m2([1.0, 0.0, 0.0, -1.0])]).unwrap();
        assert!(!d.is_positive());
        let a = AlgebraElement::one(&s);
        let b = AlgebraElement::from_blocks(&s, vec![m2([2.0, 0.0, 0.0, 3.0])]).unwrap();
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
    }

    #[test]
    fn non_hermitian_is_not_positive() {
        let s = shape(&[2]);
        let a = AlgebraElement::from_blocks(&s, vec![m2([1.0, 1.0, 0.0, 1.0])]).unwrap();
        assert!(!a.is_positive());
    }

    #[test]
    fn sqrt_and_inverse_of_diagonal() {
        let s = shape(&[2]);
        let a = AlgebraElement::from_blocks(&s, vec![m2([4.0, 0.0, 0.0, 9.0])]).unwrap();
        let r = a.sqrt().unwrap();
        assert!((r.block(0) - m2([2.0, 0.0, 0.0, 3.0])).norm() < 1e-14);
        let one = AlgebraElement::one(&shape(&[2, 1]));
        assert!(one.sqrt().unwrap().distance(&one).unwrap() < 1e-15);
        assert!(one.inv().unwrap().distance(&one).unwrap() < 1e-15);
    }

    #[test]
    fn sqrt_rejects_non_positive_and_inv_rejects_singular() {
        let s = shape(&[2]);
        let d = AlgebraElement::from_blocks(&s, vec![m2([1.0, 0.0, 0.0, -1.0])]).unwrap();
        assert!(matches!(d.sqrt(), Err(Error::NotPositive { .. })));
        let p = AlgebraElement::from_blocks(&s, vec![m2([1.0, 0.0, 0.0, 0.0])]).unwrap();
        assert!(matches!(p.inv(), Err(Error::Singular { .. })));
    }

    #[test]
    fn center_examples() {
        let s = shape(&[2, 3]);
        let z = AlgebraElement::central(&s, &[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!(z.in_center());
        let d = AlgebraElement::from_blocks(&shape(&[2]), vec![m2([1.0, 0.0, 0.0, 2.0])]).unwrap();
        assert!(!d.in_center());
    }
}
