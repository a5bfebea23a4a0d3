//! Finite sequences in `A^k`: analysis, synthesis and frame operators,
//! optimal frame bounds, duals and modular Riesz bases.
//!
//! A sequence `{x_n}` is a frame when
//! `C⟨x,x⟩ ≤ Σ_n ⟨x,x_n⟩⟨x_n,x⟩ ≤ D⟨x,x⟩` in the algebra order. That is the
//! operator sandwich `C·Id ≤ S ≤ D·Id` for `S = T^*T`, so the optimal
//! constants are the extreme eigenvalues of `S`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::module_space::ModuleVector;
use crate::operators::ModuleOperator;
use crate::tolerance::{FRAME_REL, INVERTIBILITY_REL};

/// Tolerance for the reconstruction and dual-pair identities.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Optimal frame bounds `(C, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    /// Largest `C` with `C·Id ≤ S`, clamped at zero.
    pub lower: f64,
    /// Smallest `D` with `S ≤ D·Id`.
    pub upper: f64,
    pub optimal: bool,
    /// `lower > 1e-8 · upper`.
    pub is_frame: bool,
}

/// Outcome of the modular Riesz basis test.
#[derive(Debug, Clone, PartialEq)]
pub enum RieszStatus {
    Riesz,
    /// An invertible map `A^N → A^k` forces `N = k`.
    LengthMismatch { len: usize, rank: usize },
    SingularSynthesis { min_sv: f64 },
}

impl RieszStatus {
    pub fn is_riesz(&self) -> bool {
        matches!(self, RieszStatus::Riesz)
    }

    pub fn reason(&self) -> Option<String> {
        match self {
            RieszStatus::Riesz => None,
            RieszStatus::LengthMismatch { len, rank } => Some(format!(
                "sequence length {len} differs from module rank {rank}"
            )),
            RieszStatus::SingularSynthesis { min_sv } => Some(format!(
                "synthesis operator is singular (smallest singular value {min_sv:e})"
            )),
        }
    }
}

/// Both reconstruction sums of a vector.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `Σ_n ⟨x, S^{-1}x_n⟩ x_n`.
    pub via_dual_coefficients: ModuleVector,
    /// `Σ_n ⟨x, x_n⟩ S^{-1}x_n`.
    pub via_dual_vectors: ModuleVector,
    /// Larger of the two distances to `x`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FrameSequence {
    vectors: Vec<ModuleVector>,
    analysis: ModuleOperator,
    frame_operator: ModuleOperator,
    bounds: FrameBounds,
}

impl FrameSequence {
    pub fn new(vectors: Vec<ModuleVector>) -> Result<Self> {
        let first = vectors.first().ok_or(Error::DimensionMismatch {
            context: "sequence length",
            expected: 1,
            actual: 0,
        })?;
        for v in &vectors {
            first.check_compatible(v)?;
        }
        let shape = first.shape().clone();
        let k = first.rank();
        let n = vectors.len();

        // (T x)_n = ⟨x, x_n⟩ = Σ_i x_i (x_n)_i^*
        let mut entries = Vec::with_capacity(n * k);
        for v in &vectors {
            for i in 0..k {
                entries.push(v.coord(i).adjoint());
            }
        }
        let analysis = ModuleOperator::from_entries(&shape, k, n, entries)?;
        let frame_operator = analysis.adjoint().compose(&analysis)?;
        let (lo, hi) = frame_operator.spectral_bounds()?;
        let upper = hi.max(0.0);
        let lower = lo.max(0.0);
        let bounds = FrameBounds {
            lower,
            upper,
            optimal: true,
            is_frame: upper > 0.0 && lower > FRAME_REL * upper,
        };
        Ok(Self {
            vectors,
            analysis,
            frame_operator,
            bounds,
        })
    }

    /// The standard basis of `A^N` as a sequence.
    pub fn standard_basis(shape: &AlgebraShape, n: usize) -> Self {
        Self::new(crate::module_space::standard_basis(shape, n)).expect("basis is well formed")
    }

    /// `x_n = V(e_n)` for an invertible `V: A^N → A^k`.
    pub fn riesz_from_operator(v: &ModuleOperator) -> Result<Self> {
        if !v.is_square() {
            return Err(Error::NotRiesz(format!(
                "an invertible map A^{} → A^{} needs equal ranks",
                v.domain_rank(),
                v.codomain_rank()
            )));
        }
        let threshold = INVERTIBILITY_REL * v.norm();
        let min_sv = v.min_singular_value();
        if !(min_sv > threshold) {
            return Err(Error::Singular {
                what: "Riesz generator",
                min_sv,
                threshold,
            });
        }
        Self::new((0..v.domain_rank()).map(|n| v.column(n)).collect())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Rank `k` of the ambient module `A^k`.
    pub fn rank(&self) -> usize {
        self.vectors[0].rank()
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.vectors[0].shape()
    }

    pub fn vectors(&self) -> &[ModuleVector] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &ModuleVector {
        &self.vectors[n]
    }

    /// `T: A^k → A^N`, `x ↦ {⟨x, x_n⟩}`.
    pub fn analysis_operator(&self) -> &ModuleOperator {
        &self.analysis
    }

    /// `T^*: A^N → A^k`, `{a_n} ↦ Σ a_n x_n`.
    pub fn synthesis_operator(&self) -> ModuleOperator {
        self.analysis.adjoint()
    }

    /// `S = T^*T`.
    pub fn frame_operator(&self) -> &ModuleOperator {
        &self.frame_operator
    }

    pub fn bounds(&self) -> FrameBounds {
        self.bounds
    }

    pub fn is_frame(&self) -> bool {
        self.bounds.is_frame
    }

    fn require_frame(&self) -> Result<()> {
        if self.bounds.is_frame {
            Ok(())
        } else {
            Err(Error::NotAFrame {
                lower: self.bounds.lower,
                upper: self.bounds.upper,
            })
        }
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        self.vectors[0].check_compatible(&other.vectors[0])
    }

    fn check_same_length(&self, other: &Self) -> Result<()> {
        self.check_same_ambient(other)?;
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: "sequence length",
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }

    /// `{⟨x, x_n⟩}_n`.
    pub fn analyze(&self, x: &ModuleVector) -> Result<ModuleVector> {
        self.analysis.apply(x)
    }

    /// `Σ_n a_n x_n`.
    pub fn synthesize(&self, a: &ModuleVector) -> Result<ModuleVector> {
        if a.rank() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "synthesis coefficients",
                expected: self.len(),
                actual: a.rank(),
            });
        }
        a.shape().check_same(self.shape())?;
        let mut acc = ModuleVector::zero(self.shape(), self.rank());
        for (coef, v) in a.coords().iter().zip(&self.vectors) {
            acc = acc.add(&v.act(coef)?)?;
        }
        Ok(acc)
    }

    /// `{W x_n}`.
    pub fn map(&self, w: &ModuleOperator) -> Result<Self> {
        Self::new(
            self.vectors
                .iter()
                .map(|v| w.apply(v))
                .collect::<Result<_>>()?,
        )
    }

    /// `{x_n - y_n}`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same_length(other)?;
        Self::new(
            self.vectors
                .iter()
                .zip(&other.vectors)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn scale_real(&self, t: f64) -> Self {
        Self::new(self.vectors.iter().map(|v| v.scale_real(t)).collect())
            .expect("scaling keeps the sequence well formed")
    }

    /// Largest `‖x_n - y_n‖` over the sequence.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_length(other)?;
        Ok(self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.sub(b).map(|d| d.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max))
    }

    /// `{S^{-1} x_n}`.
    pub fn canonical_dual(&self) -> Result<Self> {
        self.require_frame()?;
        let s_inv = self.frame_operator.invert()?;
        self.map(&s_inv)
    }

    /// Both reconstruction sums; fails if either misses `x` by more than `1e-9·‖x‖`.
    pub fn reconstruct(&self, x: &ModuleVector) -> Result<Reconstruction> {
        let dual = self.canonical_dual()?;
        let mut first = ModuleVector::zero(self.shape(), self.rank());
        let mut second = first.clone();
        for (xn, dn) in self.vectors.iter().zip(dual.vectors()) {
            first = first.add(&xn.act(&x.inner(dn)?)?)?;
            second = second.add(&dn.act(&x.inner(xn)?)?)?;
        }
        let residual = first.sub(x)?.norm().max(second.sub(x)?.norm());
        let tolerance = RECONSTRUCTION_TOL * x.norm().max(f64::MIN_POSITIVE);
        if residual > tolerance {
            return Err(Error::Reconstruction {
                residual,
                tolerance,
            });
        }
        Ok(Reconstruction {
            via_dual_coefficients: first,
            via_dual_vectors: second,
            residual,
        })
    }

    /// `‖T_X^* T_{X^d} - Id‖` for `X = self`.
    pub fn dual_residual(&self, dual: &Self) -> Result<f64> {
        self.check_same_length(dual)?;
        let recon = self.synthesis_operator().compose(dual.analysis_operator())?;
        Ok(recon.minus_identity()?.norm())
    }

    /// `x = Σ_n ⟨x, x^d_n⟩ x_n` for all `x`, within `1e-9`.
    pub fn is_dual_pair(&self, dual: &Self) -> Result<bool> {
        Ok(self.dual_residual(dual)? <= RECONSTRUCTION_TOL)
    }

    pub fn riesz_status(&self) -> RieszStatus {
        if self.len() != self.rank() {
            return RieszStatus::LengthMismatch {
                len: self.len(),
                rank: self.rank(),
            };
        }
        let syn = self.synthesis_operator();
        let min_sv = syn.min_singular_value();
        if min_sv > INVERTIBILITY_REL * syn.norm() {
            RieszStatus::Riesz
        } else {
            RieszStatus::SingularSynthesis { min_sv }
        }
    }

    pub fn is_modular_riesz(&self) -> bool {
        self.riesz_status().is_riesz()
    }

    /// `max_{m,n} ‖⟨x_m, x̃_n⟩ - δ_{mn} 1_A‖` against the canonical dual.
    pub fn biorthogonality_residual(&self) -> Result<f64> {
        let dual = self.canonical_dual()?;
        let one = AlgebraElement::one(self.shape());
        let zero = AlgebraElement::zero(self.shape());
        let mut worst: f64 = 0.0;
        for (m, xm) in self.vectors.iter().enumerate() {
            for (n, dn) in dual.vectors().iter().enumerate() {
                let target = if m == n { &one } else { &zero };
                worst = worst.max(xm.inner(dn)?.distance(target)?);
            }
        }
        Ok(worst)
    }

    /// The analysis operator is onto `A^N`, i.e. `T T^*` is invertible.
    pub fn has_unique_dual(&self) -> Result<bool> {
        self.require_frame()?;
        let gram = self.analysis.compose(&self.synthesis_operator())?;
        Ok(gram.is_invertible_with(INVERTIBILITY_REL))
    }

    /// Approximate equality of the vectors, entrywise within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len()
            && self.check_same_ambient(other).is_ok()
            && self
                .vectors
                .iter()
                .zip(&other.vectors)
                .all(|(a, b)| a.sub(b).map(|d| d.max_abs() <= tol).unwrap_or(false))
    }
}
