//! The free Hilbert `A`-module `A^k`.
//!
//! The module action is coordinatewise left multiplication and the inner
//! product is `⟨x, y⟩ = Σ_i x_i y_i^*`, linear in the first argument.

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::{CVector, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector {
    shape: AlgebraShape,
    coords: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn new(shape: &AlgebraShape, coords: Vec<AlgebraElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "module rank",
                expected: 1,
                actual: 0,
            });
        }
        for c in &coords {
            shape.check_same(c.shape())?;
        }
        Ok(Self {
            shape: shape.clone(),
            coords,
        })
    }

    pub fn zero(shape: &AlgebraShape, rank: usize) -> Self {
        Self {
            shape: shape.clone(),
            coords: vec![AlgebraElement::zero(shape); rank],
        }
    }

    /// `e_n`: the unit in coordinate `n`, zero elsewhere.
    pub fn basis(shape: &AlgebraShape, rank: usize, n: usize) -> Self {
        let mut v = Self::zero(shape, rank);
        v.coords[n] = AlgebraElement::one(shape);
        v
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[AlgebraElement] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &AlgebraElement {
        &self.coords[i]
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        self.shape.check_same(&other.shape)?;
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch {
                context: "module rank",
                expected: self.rank(),
                actual: other.rank(),
            });
        }
        Ok(())
    }

    /// `⟨x, y⟩ = Σ_i x_i y_i^*`.
    pub fn inner(&self, other: &Self) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> AlgebraElement {
        let mut acc = AlgebraElement::zero(&self.shape);
        for (x, y) in self.coords.iter().zip(&other.coords) {
            acc.add_assign_unchecked(&x.mul_unchecked(&y.adjoint()));
        }
        acc
    }

    /// Left module action `a · x`.
    pub fn act(&self, a: &AlgebraElement) -> Result<Self> {
        self.shape.check_same(a.shape())?;
        Ok(Self {
            shape: self.shape.clone(),
            coords: self.coords.iter().map(|x| a.mul_unchecked(x)).collect(),
        })
    }

    /// Module norm `‖x‖ = ‖⟨x, x⟩‖_A^{1/2}`.
    pub fn norm(&self) -> f64 {
        // ⟨x,x⟩ is positive, so its norm is its top eigenvalue
        self.inner_unchecked(self).max_eigenvalue().max(0.0).sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale_real(&self, t: f64) -> Self {
        Self {
            shape: self.shape.clone(),
            coords: self.coords.iter().map(|a| a.scale_real(t)).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            coords: self.coords.iter().map(|a| a.scale(z)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement) -> Self {
        Self {
            shape: self.shape.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Largest entry modulus over all coordinates.
    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|a| a.max_abs()).fold(0.0, f64::max)
    }

    /// Coordinates in the complex realization of `A^k`.
    ///
    /// Ordering: block `b`, then row `r` of that block, then module
    /// coordinate `i`, then column `c`. Right multiplication by the operator
    /// coefficients acts on each `(b, r)` segment independently, which is
    /// what makes the operator realization block diagonal.
    pub fn realize(&self) -> CVector {
        let k = self.rank();
        let mut out = Vec::with_capacity(k * self.shape.complex_dim());
        for (b, &d) in self.shape.block_dims().iter().enumerate() {
            for r in 0..d {
                for x in &self.coords {
                    let blk = x.block(b);
                    for c in 0..d {
                        out.push(blk[(r, c)]);
                    }
                }
            }
        }
        CVector::from_vec(out)
    }

    /// Inverse of [`ModuleVector::realize`].
    pub fn from_realization(shape: &AlgebraShape, rank: usize, v: &CVector) -> Result<Self> {
        let expected = rank * shape.complex_dim();
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "realized vector length",
                expected,
                actual: v.len(),
            });
        }
        let mut coords = vec![AlgebraElement::zero(shape); rank];
        let mut blocks: Vec<Vec<crate::CMatrix>> = coords.iter().map(|a| a.blocks().to_vec()).collect();
        let mut idx = 0;
        for (b, &d) in shape.block_dims().iter().enumerate() {
            for r in 0..d {
                for coord_blocks in blocks.iter_mut() {
                    for c in 0..d {
                        coord_blocks[b][(r, c)] = v[idx];
                        idx += 1;
                    }
                }
            }
        }
        for (slot, bl) in coords.iter_mut().zip(blocks) {
            *slot = AlgebraElement::from_blocks(shape, bl)?;
        }
        Self::new(shape, coords)
    }
}

/// The standard basis `e_1, ..., e_N` of `A^N`.
pub fn standard_basis(shape: &AlgebraShape, n: usize) -> Vec<ModuleVector> {
    (0..n).map(|i| ModuleVector::basis(shape, n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CMatrix;
    use approx::assert_relative_eq;

    fn scalar_vec(values: &[f64]) -> ModuleVector {
        let s = AlgebraShape::scalar();
        ModuleVector::new(
            &s,
            values
                .iter()
                .map(|&v| AlgebraElement::scalar(&s, C64::new(v, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    fn scalar_of(a: &AlgebraElement) -> C64 {
        a.block(0)[(0, 0)]
    }

    #[test]
    fn scalar_inner_products() {
        let x = scalar_vec(&[1.0, 0.0]);
        let y = scalar_vec(&[0.0, 1.0]);
        assert_eq!(scalar_of(&x.inner(&y).unwrap()), C64::new(0.0, 0.0));
        let z = scalar_vec(&[1.0, 1.0]);
        assert_eq!(scalar_of(&z.inner(&z).unwrap()), C64::new(2.0, 0.0));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let x = scalar_vec(&[1.0, 0.0]);
        let y = scalar_vec(&[1.0]);
        assert!(x.inner(&y).is_err());
        assert!(ModuleVector::new(&AlgebraShape::scalar(), vec![]).is_err());
    }

    #[test]
    fn action_and_norm() {
        let s = AlgebraShape::scalar();
        let x = scalar_vec(&[1.0, 0.0]);
        let one = AlgebraElement::one(&s);
        assert_eq!(x.act(&one).unwrap(), x);
        let two = AlgebraElement::scalar(&s, C64::new(2.0, 0.0));
        let y = x.act(&two).unwrap();
        assert_eq!(y, scalar_vec(&[2.0, 0.0]));
        assert_relative_eq!(y.norm(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn matrix_coordinates_with_unit_gram() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        let p = |a: f64, b: f64| {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = C64::new(a, 0.0);
            m[(1, 1)] = C64::new(b, 0.0);
            AlgebraElement::from_blocks(&s, vec![m]).unwrap()
        };
        let x = ModuleVector::new(&s, vec![p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        let g = x.inner(&x).unwrap();
        assert!(g.distance(&AlgebraElement::one(&s)).unwrap() < 1e-15);
        assert_relative_eq!(x.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn standard_basis_is_orthonormal() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let e = standard_basis(&s, 3);
        let one = AlgebraElement::one(&s);
        let zero = AlgebraElement::zero(&s);
        assert_eq!(e[0].inner(&e[0]).unwrap(), one);
        assert_eq!(e[0].inner(&e[1]).unwrap(), zero);
        let scalar = standard_basis(&AlgebraShape::scalar(), 2);
        assert_eq!(scalar[0], scalar_vec(&[1.0, 0.0]));
        assert_eq!(scalar[1], scalar_vec(&[0.0, 1.0]));
    }

    #[test]
    fn realization_round_trips() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let x = crate::random::vector(&mut rng, &s, 3);
        let back = ModuleVector::from_realization(&s, 3, &x.realize()).unwrap();
        assert_eq!(back, x);
    }
}
