//! Generalized Bessel multipliers `M_{U,Y,X} = T_Y^* U T_X`.
//!
//! `X` is the analysis side (a sequence in `E = A^k`), `Y` the synthesis
//! side (a sequence in `F = A^{k'}`) and `U` a symbol on `A^N`. A diagonal
//! symbol with central entries gives the classical Bessel multiplier
//! `x ↦ Σ_n m_n ⟨x, x_n⟩ y_n`.

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::module_space::ModuleVector;
use crate::operators::ModuleOperator;

/// Sequence of central elements `m = {m_n}` acting by `{a_n} ↦ {m_n a_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSymbol {
    entries: Vec<AlgebraElement>,
}

impl DiagonalSymbol {
    pub fn new(entries: Vec<AlgebraElement>) -> Result<Self> {
        let first = entries.first().ok_or(Error::DimensionMismatch {
            context: "diagonal symbol length",
            expected: 1,
            actual: 0,
        })?;
        let shape = first.shape().clone();
        for (index, m) in entries.iter().enumerate() {
            shape.check_same(m.shape())?;
            if !m.in_center() {
                return Err(Error::NotCentral { index });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `‖m‖_∞ = max_n ‖m_n‖`.
    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// The operator `{a_n} ↦ {m_n a_n}` on `A^N`.
    pub fn to_operator(&self) -> ModuleOperator {
        // central m_n commute with a_n, so the right-acting coefficient is m_n itself
        ModuleOperator::diagonal(self.entries[0].shape(), self.entries.clone())
            .expect("entries share a shape")
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|m| m.adjoint()).collect(),
        }
    }
}

/// A multiplier symbol on `A^N`.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Full(ModuleOperator),
    Diagonal(DiagonalSymbol),
}

impl Symbol {
    pub fn len(&self) -> usize {
        match self {
            Symbol::Full(u) => u.domain_rank(),
            Symbol::Diagonal(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> &AlgebraShape {
        match self {
            Symbol::Full(u) => u.shape(),
            Symbol::Diagonal(m) => m.entries()[0].shape(),
        }
    }

    pub fn to_operator(&self) -> ModuleOperator {
        match self {
            Symbol::Full(u) => u.clone(),
            Symbol::Diagonal(m) => m.to_operator(),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Symbol::Full(u) => Symbol::Full(u.adjoint()),
            Symbol::Diagonal(m) => Symbol::Diagonal(m.adjoint()),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Symbol::Full(u) => u.norm(),
            Symbol::Diagonal(m) => m.sup_norm(),
        }
    }
}

impl From<ModuleOperator> for Symbol {
    fn from(u: ModuleOperator) -> Self {
        Symbol::Full(u)
    }
}

impl From<DiagonalSymbol> for Symbol {
    fn from(m: DiagonalSymbol) -> Self {
        Symbol::Diagonal(m)
    }
}

/// Turns a diagonal symbol into the full operator it defines.
pub fn diagonal_to_full(m: &DiagonalSymbol) -> Symbol {
    Symbol::Full(m.to_operator())
}

#[derive(Debug, Clone)]
pub struct Multiplier {
    symbol: Symbol,
    synthesis_side: FrameSequence,
    analysis_side: FrameSequence,
    assembled: ModuleOperator,
}

impl Multiplier {
    /// `M_{U,Y,X}`; argument order follows the subscripts.
    pub fn new(symbol: impl Into<Symbol>, y: &FrameSequence, x: &FrameSequence) -> Result<Self> {
        let symbol = symbol.into();
        x.shape().check_same(y.shape())?;
        x.shape().check_same(symbol.shape())?;
        let u = symbol.to_operator();
        if !u.is_square() {
            return Err(Error::DimensionMismatch {
                context: "symbol must be square",
                expected: u.domain_rank(),
                actual: u.codomain_rank(),
            });
        }
        for (len, context) in [(x.len(), "analysis sequence length"), (y.len(), "synthesis sequence length")] {
            if len != u.domain_rank() {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: u.domain_rank(),
                    actual: len,
                });
            }
        }
        let assembled = y
            .synthesis_operator()
            .compose(&u)?
            .compose(x.analysis_operator())?;
        Ok(Self {
            symbol,
            synthesis_side: y.clone(),
            analysis_side: x.clone(),
            assembled,
        })
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    /// `X`.
    pub fn analysis_side(&self) -> &FrameSequence {
        &self.analysis_side
    }

    /// `Y`.
    pub fn synthesis_side(&self) -> &FrameSequence {
        &self.synthesis_side
    }

    /// The assembled operator `T_Y^* U T_X`.
    pub fn operator(&self) -> &ModuleOperator {
        &self.assembled
    }

    /// Applies the three factors in turn, without the assembled matrix.
    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        let coeffs = self.analysis_side.analyze(x)?;
        let mixed = self.symbol.to_operator().apply(&coeffs)?;
        self.synthesis_side.synthesize(&mixed)
    }

    /// `M_{U,Y,X}^* = M_{U^*,X,Y}`.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.symbol.adjoint(),
            &self.analysis_side,
            &self.synthesis_side,
        )
        .expect("swapping the sides keeps the multiplier well formed")
    }

    /// `√(D_X D_Y) · ‖U‖`.
    pub fn bessel_bound(&self) -> f64 {
        (self.analysis_side.bounds().upper * self.synthesis_side.bounds().upper).sqrt()
            * self.symbol.norm()
    }

    pub fn norm(&self) -> f64 {
        self.assembled.norm()
    }

    /// Positivity of `M_{U,X,X}`; errors unless both sides coincide.
    pub fn is_positive(&self) -> Result<bool> {
        if !self.analysis_side.approx_eq(&self.synthesis_side, 0.0) {
            return Err(Error::SequencesDiffer);
        }
        Ok(self.assembled.is_positive())
    }
}

/// `Σ_n m_n ⟨x, x_n⟩ y_n`, summed term by term.
pub fn diagonal_multiplier_sum(
    m: &DiagonalSymbol,
    y: &FrameSequence,
    x: &FrameSequence,
    v: &ModuleVector,
) -> Result<ModuleVector> {
    let mut acc = ModuleVector::zero(y.shape(), y.rank());
    for ((mn, xn), yn) in m.entries().iter().zip(x.vectors()).zip(y.vectors()) {
        let coef = mn.mul(&v.inner(xn)?)?;
        acc = acc.add(&yn.act(&coef)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use approx::assert_relative_eq;

    fn scalar(v: f64) -> AlgebraElement {
        AlgebraElement::scalar(&AlgebraShape::scalar(), C64::new(v, 0.0))
    }

    fn scalar_diag(values: &[f64]) -> ModuleOperator {
        ModuleOperator::diagonal(
            &AlgebraShape::scalar(),
            values.iter().map(|&v| scalar(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_symbol_on_onb_is_identity() {
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let m = Multiplier::new(ModuleOperator::identity(&s, 2), &onb, &onb).unwrap();
        assert_eq!(m.operator(), &ModuleOperator::identity(&s, 2));
    }

    #[test]
    fn diagonal_symbol_on_onb() {
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let m = Multiplier::new(scalar_diag(&[2.0, 3.0]), &onb, &onb).unwrap();
        assert_eq!(m.operator(), &scalar_diag(&[2.0, 3.0]));
        assert_relative_eq!(m.norm(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn unit_diagonal_symbol_is_identity() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let m = DiagonalSymbol::new(vec![AlgebraElement::one(&s); 3]).unwrap();
        assert_eq!(diagonal_to_full(&m), Symbol::Full(ModuleOperator::identity(&s, 3)));
    }

    #[test]
    fn non_central_entry_is_named() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        let mut blk = crate::CMatrix::identity(2, 2);
        blk[(0, 1)] = C64::new(1.0, 0.0);
        let bad = AlgebraElement::from_blocks(&s, vec![blk]).unwrap();
        let err = DiagonalSymbol::new(vec![AlgebraElement::one(&s), bad]).unwrap_err();
        assert_eq!(err, Error::NotCentral { index: 1 });
    }

    #[test]
    fn length_mismatch_rejected() {
        let s = AlgebraShape::scalar();
        let onb2 = FrameSequence::standard_basis(&s, 2);
        let id3 = ModuleOperator::identity(&s, 3);
        assert!(Multiplier::new(id3, &onb2, &onb2).is_err());
    }

    #[test]
    fn imaginary_symbol_adjoint() {
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 1);
        let u = ModuleOperator::diagonal(&s, vec![AlgebraElement::scalar(&s, C64::new(0.0, 1.0))]).unwrap();
        let m = Multiplier::new(u, &onb, &onb).unwrap();
        let adj = m.adjoint();
        assert_eq!(adj.operator().entry(0, 0).block(0)[(0, 0)], C64::new(0.0, -1.0));
    }

    #[test]
    fn positivity_examples() {
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let pos = Multiplier::new(ModuleOperator::identity(&s, 2), &onb, &onb).unwrap();
        assert!(pos.is_positive().unwrap());
        let neg = Multiplier::new(scalar_diag(&[1.0, -1.0]), &onb, &onb).unwrap();
        assert!(!neg.is_positive().unwrap());
        let other = onb.scale_real(2.0);
        let mixed = Multiplier::new(ModuleOperator::identity(&s, 2), &other, &onb).unwrap();
        assert_eq!(mixed.is_positive(), Err(Error::SequencesDiffer));
    }
}
