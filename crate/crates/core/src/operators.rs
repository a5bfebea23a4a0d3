//! Adjointable `A`-linear operators `A^k → A^{k'}`.
//!
//! An operator is a `k' × k` matrix over `A` whose coefficients act on the
//! right: `(Tx)_j = Σ_i x_i · t_{ji}`. Because the module action is on the
//! left, this gives `T(a·x) = a·T(x)` for free. The adjoint is
//! `(T^*)_{ij} = t_{ji}^*` and composition reverses the coefficient order:
//! `(TR)_{li} = Σ_j r_{ji} t_{lj}`. This convention lives in this file only.
//!
//! Norms and spectra are computed on the complex realization, which splits
//! into one matrix per algebra block (see [`ModuleOperator::block_realizations`]).

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg;
use crate::module_space::ModuleVector;
use crate::tolerance::{INVERTIBILITY_REL, POSITIVITY_REL};
use crate::{CMatrix, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleOperator {
    shape: AlgebraShape,
    domain_rank: usize,
    codomain_rank: usize,
    /// Row-major `codomain_rank × domain_rank`.
    entries: Vec<AlgebraElement>,
}

impl ModuleOperator {
    /// Builds an operator from row-major coefficients `t_{ji}` (`j` codomain, `i` domain).
    pub fn from_entries(
        shape: &AlgebraShape,
        domain_rank: usize,
        codomain_rank: usize,
        entries: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if domain_rank == 0 || codomain_rank == 0 {
            return Err(Error::DimensionMismatch {
                context: "operator rank",
                expected: 1,
                actual: 0,
            });
        }
        if entries.len() != domain_rank * codomain_rank {
            return Err(Error::DimensionMismatch {
                context: "operator entry count",
                expected: domain_rank * codomain_rank,
                actual: entries.len(),
            });
        }
        for e in &entries {
            shape.check_same(e.shape())?;
        }
        Ok(Self {
            shape: shape.clone(),
            domain_rank,
            codomain_rank,
            entries,
        })
    }

    pub fn zero(shape: &AlgebraShape, domain_rank: usize, codomain_rank: usize) -> Self {
        Self {
            shape: shape.clone(),
            domain_rank,
            codomain_rank,
            entries: vec![AlgebraElement::zero(shape); domain_rank * codomain_rank],
        }
    }

    pub fn identity(shape: &AlgebraShape, rank: usize) -> Self {
        let ones = vec![AlgebraElement::one(shape); rank];
        Self::diagonal_unchecked(shape, ones)
    }

    /// Diagonal operator `(a_n) ↦ (a_n m_n)`.
    pub fn diagonal(shape: &AlgebraShape, diag: Vec<AlgebraElement>) -> Result<Self> {
        for d in &diag {
            shape.check_same(d.shape())?;
        }
        if diag.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "operator rank",
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self::diagonal_unchecked(shape, diag))
    }

    fn diagonal_unchecked(shape: &AlgebraShape, diag: Vec<AlgebraElement>) -> Self {
        let n = diag.len();
        let mut op = Self::zero(shape, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            op.entries[i * n + i] = d;
        }
        op
    }

    /// Elementary operator `Θ_{x,y}(z) = ⟨z, x⟩ y`.
    pub fn theta(x: &ModuleVector, y: &ModuleVector) -> Result<Self> {
        x.shape().check_same(y.shape())?;
        let (k, kp) = (x.rank(), y.rank());
        let mut entries = Vec::with_capacity(k * kp);
        for j in 0..kp {
            for i in 0..k {
                entries.push(x.coord(i).adjoint().mul_unchecked(y.coord(j)));
            }
        }
        Ok(Self {
            shape: x.shape().clone(),
            domain_rank: k,
            codomain_rank: kp,
            entries,
        })
    }

    /// Operator whose columns are the given vectors: `e_i ↦ columns[i]`.
    pub fn from_columns(columns: &[ModuleVector]) -> Result<Self> {
        let first = columns.first().ok_or(Error::DimensionMismatch {
            context: "operator rank",
            expected: 1,
            actual: 0,
        })?;
        let (k, kp) = (columns.len(), first.rank());
        for c in columns {
            first.check_compatible(c)?;
        }
        let mut entries = Vec::with_capacity(k * kp);
        for j in 0..kp {
            for c in columns {
                entries.push(c.coord(j).clone());
            }
        }
        Self::from_entries(first.shape(), k, kp, entries)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn domain_rank(&self) -> usize {
        self.domain_rank
    }

    pub fn codomain_rank(&self) -> usize {
        self.codomain_rank
    }

    pub fn is_square(&self) -> bool {
        self.domain_rank == self.codomain_rank
    }

    /// Coefficient `t_{ji}` (`j` codomain index, `i` domain index).
    pub fn entry(&self, j: usize, i: usize) -> &AlgebraElement {
        &self.entries[j * self.domain_rank + i]
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    /// `T e_i`.
    pub fn column(&self, i: usize) -> ModuleVector {
        let coords = (0..self.codomain_rank)
            .map(|j| self.entry(j, i).clone())
            .collect();
        ModuleVector::new(&self.shape, coords).expect("codomain rank is positive")
    }

    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        self.shape.check_same(x.shape())?;
        if x.rank() != self.domain_rank {
            return Err(Error::DimensionMismatch {
                context: "operator domain",
                expected: self.domain_rank,
                actual: x.rank(),
            });
        }
        let coords = (0..self.codomain_rank)
            .map(|j| {
                let mut acc = AlgebraElement::zero(&self.shape);
                for i in 0..self.domain_rank {
                    acc.add_assign_unchecked(&x.coord(i).mul_unchecked(self.entry(j, i)));
                }
                acc
            })
            .collect();
        Ok(ModuleVector::new(&self.shape, coords).expect("codomain rank is positive"))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.shape.check_same(&inner.shape)?;
        if inner.codomain_rank != self.domain_rank {
            return Err(Error::DimensionMismatch {
                context: "operator composition",
                expected: self.domain_rank,
                actual: inner.codomain_rank,
            });
        }
        let (k, kp) = (inner.domain_rank, self.codomain_rank);
        let mut entries = Vec::with_capacity(k * kp);
        for l in 0..kp {
            for i in 0..k {
                let mut acc = AlgebraElement::zero(&self.shape);
                for j in 0..self.domain_rank {
                    acc.add_assign_unchecked(&inner.entry(j, i).mul_unchecked(self.entry(l, j)));
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            shape: self.shape.clone(),
            domain_rank: k,
            codomain_rank: kp,
            entries,
        })
    }

    pub fn adjoint(&self) -> Self {
        let (k, kp) = (self.domain_rank, self.codomain_rank);
        let mut entries = Vec::with_capacity(k * kp);
        for i in 0..k {
            for j in 0..kp {
                entries.push(self.entry(j, i).adjoint());
            }
        }
        Self {
            shape: self.shape.clone(),
            domain_rank: kp,
            codomain_rank: k,
            entries,
        }
    }

    fn check_same_type(&self, other: &Self) -> Result<()> {
        self.shape.check_same(&other.shape)?;
        if self.domain_rank != other.domain_rank || self.codomain_rank != other.codomain_rank {
            return Err(Error::DimensionMismatch {
                context: "operator sum",
                expected: self.domain_rank * self.codomain_rank,
                actual: other.domain_rank * other.codomain_rank,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_type(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_type(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement) -> Self {
        Self {
            shape: self.shape.clone(),
            domain_rank: self.domain_rank,
            codomain_rank: self.codomain_rank,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale_real(&self, t: f64) -> Self {
        self.scale(C64::new(t, 0.0))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            domain_rank: self.domain_rank,
            codomain_rank: self.codomain_rank,
            entries: self.entries.iter().map(|a| a.scale(z)).collect(),
        }
    }

    /// `self - Id`; requires a square operator.
    pub fn minus_identity(&self) -> Result<Self> {
        self.sub(&Self::identity(&self.shape, self.domain_rank))
    }

    /// One complex matrix per algebra block `b`, of size `k'd_b × kd_b`,
    /// whose `(j, i)` sub-block is `t_{ji}^T` restricted to block `b`.
    ///
    /// The full realization is `⊕_b (I_{d_b} ⊗ R_b)`; every norm and
    /// spectral quantity of `T` is already determined by the `R_b`.
    pub fn block_realizations(&self) -> Vec<CMatrix> {
        self.shape
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &d)| {
                let mut r = CMatrix::zeros(self.codomain_rank * d, self.domain_rank * d);
                for j in 0..self.codomain_rank {
                    for i in 0..self.domain_rank {
                        let blk = self.entry(j, i).block(b).transpose();
                        r.view_mut((j * d, i * d), (d, d)).copy_from(&blk);
                    }
                }
                r
            })
            .collect()
    }

    /// Inverse of [`ModuleOperator::block_realizations`].
    pub fn from_block_realizations(
        shape: &AlgebraShape,
        domain_rank: usize,
        codomain_rank: usize,
        blocks: &[CMatrix],
    ) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch {
                context: "block realization count",
                expected: shape.num_blocks(),
                actual: blocks.len(),
            });
        }
        for (r, &d) in blocks.iter().zip(shape.block_dims()) {
            if r.nrows() != codomain_rank * d || r.ncols() != domain_rank * d {
                return Err(Error::DimensionMismatch {
                    context: "block realization size",
                    expected: codomain_rank * d,
                    actual: r.nrows(),
                });
            }
        }
        let mut entries = Vec::with_capacity(domain_rank * codomain_rank);
        for j in 0..codomain_rank {
            for i in 0..domain_rank {
                let per_block = blocks
                    .iter()
                    .zip(shape.block_dims())
                    .map(|(r, &d)| r.view((j * d, i * d), (d, d)).transpose())
                    .collect();
                entries.push(AlgebraElement::from_blocks(shape, per_block)?);
            }
        }
        Self::from_entries(shape, domain_rank, codomain_rank, entries)
    }

    /// Faithful realization on the complex coordinate space of
    /// [`ModuleVector::realize`]: `realize(Tx) = realization(T) · realize(x)`.
    pub fn realization(&self) -> CMatrix {
        let blocks = self.block_realizations();
        let copies: Vec<CMatrix> = blocks
            .iter()
            .zip(self.shape.block_dims())
            .flat_map(|(r, &d)| std::iter::repeat_n(r.clone(), d))
            .collect();
        linalg::block_diagonal(&copies)
    }

    /// Operator norm `‖T‖`.
    pub fn norm(&self) -> f64 {
        self.block_realizations()
            .iter()
            .map(linalg::spectral_norm)
            .fold(0.0, f64::max)
    }

    /// `inf_{‖x‖=1} ‖Tx‖`, i.e. the smallest singular value of the realization.
    pub fn min_singular_value(&self) -> f64 {
        self.block_realizations()
            .iter()
            .map(linalg::min_singular_value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Spectral norm of `T - T^*` (infinite for non-square operators).
    pub fn self_adjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.block_realizations()
            .iter()
            .map(linalg::hermitian_defect)
            .fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint_defect() <= POSITIVITY_REL * (1.0 + self.norm())
    }

    /// `(λ_min, λ_max)` of a self-adjoint operator.
    pub fn spectral_bounds(&self) -> Result<(f64, f64)> {
        let defect = self.self_adjoint_defect();
        if !(defect <= POSITIVITY_REL * (1.0 + self.norm())) {
            return Err(Error::NotSelfAdjoint { defect });
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in self.block_realizations() {
            let ev = linalg::hermitian_eigenvalues(&r);
            lo = lo.min(ev[0]);
            hi = hi.max(*ev.last().unwrap());
        }
        Ok((lo, hi))
    }

    pub fn is_positive(&self) -> bool {
        self.is_positive_with(POSITIVITY_REL)
    }

    /// `T = T^*` and `λ_min ≥ -rel·(1 + ‖T‖)`.
    pub fn is_positive_with(&self, rel: f64) -> bool {
        let eps = rel * (1.0 + self.norm());
        self.self_adjoint_defect() <= eps
            && self
                .spectral_bounds()
                .map(|(lo, _)| lo >= -eps)
                .unwrap_or(false)
    }

    /// Invertibility test `σ_min(T) > rel·‖T‖` on a square operator.
    pub fn is_invertible_with(&self, rel: f64) -> bool {
        self.is_square() && self.min_singular_value() > rel * self.norm()
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with(INVERTIBILITY_REL)
    }

    pub fn invert_with(&self, rel: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse of non-square operator",
                expected: self.domain_rank,
                actual: self.codomain_rank,
            });
        }
        let threshold = rel * self.norm();
        let min_sv = self.min_singular_value();
        if !(min_sv > threshold) {
            return Err(Error::Singular {
                what: "operator",
                min_sv,
                threshold,
            });
        }
        let singular = Error::Singular {
            what: "operator",
            min_sv,
            threshold,
        };
        let inv: Vec<CMatrix> = self
            .block_realizations()
            .iter()
            .map(|r| linalg::inverse(r).ok_or_else(|| singular.clone()))
            .collect::<Result<_>>()?;
        Self::from_block_realizations(&self.shape, self.domain_rank, self.codomain_rank, &inv)
    }

    /// Complex rank of the full realization.
    pub fn complex_rank(&self, rel_tol: f64) -> usize {
        let top = self.norm();
        if top == 0.0 {
            return 0;
        }
        self.block_realizations()
            .iter()
            .zip(self.shape.block_dims())
            .map(|(r, &d)| {
                d * linalg::singular_values(r)
                    .iter()
                    .filter(|&&s| s > rel_tol * top)
                    .count()
            })
            .sum()
    }

    /// Writes `T = Σ_j Θ_{x_j, y_j}` with as few terms as the block ranks allow.
    ///
    /// In block `b` one elementary operator carries up to `d_b` rank-one
    /// pieces of `R_b` (one per row of the block), so the number of terms is
    /// `max_b ⌈rank(R_b) / d_b⌉`.
    pub fn finite_rank_decompose(&self) -> Vec<(ModuleVector, ModuleVector)> {
        const RANK_TOL: f64 = 1e-12;
        let top = self.norm();
        if top == 0.0 {
            return Vec::new();
        }
        let (k, kp) = (self.domain_rank, self.codomain_rank);
        let dims = self.shape.block_dims();

        // per block: right singular vectors v_s and images R_b v_s, largest first
        let pieces: Vec<Vec<(crate::CVector, crate::CVector)>> = self
            .block_realizations()
            .iter()
            .map(|r| {
                let svd = r.clone().svd(false, true);
                let v_t = svd.v_t.expect("requested");
                let mut order: Vec<usize> = (0..svd.singular_values.len())
                    .filter(|&s| svd.singular_values[s] > RANK_TOL * top)
                    .collect();
                order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
                order
                    .into_iter()
                    .map(|s| {
                        let v = v_t.row(s).adjoint();
                        let u = r * &v;
                        (v, u)
                    })
                    .collect()
            })
            .collect();

        let terms = pieces
            .iter()
            .zip(dims)
            .map(|(p, &d)| p.len().div_ceil(d))
            .max()
            .unwrap_or(0);

        let mut out = Vec::with_capacity(terms);
        for t in 0..terms {
            let mut xb: Vec<Vec<CMatrix>> = vec![Vec::new(); k];
            let mut yb: Vec<Vec<CMatrix>> = vec![Vec::new(); kp];
            for (b, &d) in dims.iter().enumerate() {
                let mut xs = vec![CMatrix::zeros(d, d); k];
                let mut ys = vec![CMatrix::zeros(d, d); kp];
                for r in 0..d {
                    if let Some((v, u)) = pieces[b].get(t * d + r) {
                        for (i, x) in xs.iter_mut().enumerate() {
                            for c in 0..d {
                                x[(r, c)] = v[i * d + c];
                            }
                        }
                        for (j, y) in ys.iter_mut().enumerate() {
                            for c in 0..d {
                                y[(r, c)] = u[j * d + c];
                            }
                        }
                    }
                }
                for (i, x) in xs.into_iter().enumerate() {
                    xb[i].push(x);
                }
                for (j, y) in ys.into_iter().enumerate() {
                    yb[j].push(y);
                }
            }
            let to_vec = |blocks: Vec<Vec<CMatrix>>| {
                let coords = blocks
                    .into_iter()
                    .map(|bl| AlgebraElement::from_blocks(&self.shape, bl).expect("block sizes"))
                    .collect();
                ModuleVector::new(&self.shape, coords).expect("positive rank")
            };
            out.push((to_vec(xb), to_vec(yb)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_space::standard_basis;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_op(rows: &[&[f64]]) -> ModuleOperator {
        let s = AlgebraShape::scalar();
        let kp = rows.len();
        let k = rows[0].len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| AlgebraElement::scalar(&s, C64::new(v, 0.0))))
            .collect();
        ModuleOperator::from_entries(&s, k, kp, entries).unwrap()
    }

    #[test]
    fn identity_basics() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let id = ModuleOperator::identity(&s, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = crate::random::vector(&mut rng, &s, 3);
        assert_eq!(id.apply(&x).unwrap(), x);
        assert_eq!(id.adjoint(), id);
        assert_relative_eq!(id.norm(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(id.min_singular_value(), 1.0, epsilon = 1e-14);
        assert_eq!(id.invert().unwrap(), id);
        assert!(id.is_positive());
    }

    #[test]
    fn scalar_adjoint_is_transpose() {
        let t = scalar_op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(t.adjoint(), scalar_op(&[&[0.0, 0.0], &[1.0, 0.0]]));
    }

    #[test]
    fn diagonal_norms_and_bounds() {
        let t = scalar_op(&[&[2.0, 0.0], &[0.0, 3.0]]);
        assert_relative_eq!(t.norm(), 3.0, epsilon = 1e-14);
        assert_relative_eq!(t.min_singular_value(), 2.0, epsilon = 1e-14);
        let (lo, hi) = t.spectral_bounds().unwrap();
        assert_relative_eq!(lo, 2.0, epsilon = 1e-14);
        assert_relative_eq!(hi, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn spectral_bounds_rejects_non_self_adjoint() {
        let t = scalar_op(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(t.spectral_bounds(), Err(Error::NotSelfAdjoint { .. })));
        assert!(!t.is_positive());
    }

    #[test]
    fn singular_and_non_square_inversion_fail() {
        let t = scalar_op(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(t.invert(), Err(Error::Singular { .. })));
        let w = scalar_op(&[&[1.0, 0.0]]);
        assert!(w.invert().is_err());
    }

    #[test]
    fn dimension_mismatch_in_apply_and_compose() {
        let t = scalar_op(&[&[1.0, 0.0]]);
        let x = ModuleVector::zero(&AlgebraShape::scalar(), 3);
        assert!(t.apply(&x).is_err());
        assert!(t.compose(&t).is_err());
    }

    #[test]
    fn theta_of_basis_vector_is_coordinate_projection() {
        let s = AlgebraShape::scalar();
        let e = standard_basis(&s, 2);
        let th = ModuleOperator::theta(&e[0], &e[0]).unwrap();
        assert_eq!(th, scalar_op(&[&[1.0, 0.0], &[0.0, 0.0]]));
        // z ⊥ x maps to zero
        assert_eq!(th.apply(&e[1]).unwrap(), ModuleVector::zero(&s, 2));
    }

    #[test]
    fn identity_realization_on_m2() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        let r = ModuleOperator::identity(&s, 1).realization();
        assert_eq!(r, CMatrix::identity(4, 4));
    }

    #[test]
    fn theta_of_unit_realizes_to_projection() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let e = standard_basis(&s, 3);
        let p = ModuleOperator::theta(&e[0], &e[0]).unwrap().realization();
        assert!((&p * &p - &p).norm() < 1e-15);
        assert!((&p - p.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn zero_operator_has_empty_decomposition() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        assert!(ModuleOperator::zero(&s, 2, 3).finite_rank_decompose().is_empty());
    }

    #[test]
    fn theta_decomposes_into_one_term() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = crate::random::vector(&mut rng, &s, 3);
        let y = crate::random::vector(&mut rng, &s, 2);
        let th = ModuleOperator::theta(&x, &y).unwrap();
        let parts = th.finite_rank_decompose();
        assert_eq!(parts.len(), 1);
        let back = ModuleOperator::theta(&parts[0].0, &parts[0].1).unwrap();
        assert!(back.sub(&th).unwrap().norm() <= 1e-9 * th.norm());
    }

    #[test]
    fn from_columns_places_vectors_as_images_of_basis() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cols: Vec<_> = (0..3).map(|_| crate::random::vector(&mut rng, &s, 2)).collect();
        let v = ModuleOperator::from_columns(&cols).unwrap();
        for (n, e) in standard_basis(&s, 3).iter().enumerate() {
            assert_eq!(v.apply(e).unwrap(), cols[n]);
        }
    }
}
