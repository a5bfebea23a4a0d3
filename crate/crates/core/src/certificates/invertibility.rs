//! Sufficient conditions for an invertible multiplier: perturbed frames,
//! transformed frames, dual pairs and approximate duals.

use super::{Builder, Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::linalg;
use crate::multipliers::Multiplier;
use crate::operators::ModuleOperator;
use crate::tolerance::Tolerances;

/// Absolute tolerance for `‖M·F - Id‖` when `F` is a claimed inverse.
const INVERSE_RESIDUAL: f64 = 1e-8;

/// `‖A·B - Id‖` and `‖B·A - Id‖`, whichever is larger.
fn inverse_residual(a: &ModuleOperator, b: &ModuleOperator) -> Result<f64> {
    let left = a.compose(b)?.minus_identity()?.norm();
    let right = b.compose(a)?.minus_identity()?.norm();
    Ok(left.max(right))
}

/// `{x_n}` frame, `{y_n}` close to it in the sense
/// `‖Σ⟨x, x_n-y_n⟩⟨x_n-y_n, x⟩‖ ≤ λ‖x‖²` with
/// `λ < (1/D)((CD² - C²D)/(C² + D²))²`, and `‖U - I‖ < C²/D²`
/// ⇒ `Y` is a frame and `M_{U,X,Y}` is invertible.
pub fn frame_perturbation(
    x: &FrameSequence,
    y: &FrameSequence,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    let mut b = Builder::new(TheoremId::FramePerturbation, tol);
    let bounds = x.bounds();
    let (c, d) = (bounds.lower, bounds.upper);
    b.constant("C", c);
    b.constant("D", d);
    if !b.hypothesis_holds("X_is_frame", bounds.is_frame) {
        return Ok(b.finish());
    }

    let diff = x.difference(y)?;
    let lambda = diff.bounds().upper;
    let threshold = ((c * d * d - c * c * d) / (c * c + d * d)).powi(2) / d;
    b.constant("lambda", lambda);
    b.constant("lambda_threshold", threshold);
    let lambda_ok = if threshold > tol.margin * d {
        b.hypothesis_lt("lambda_below_threshold", lambda, threshold)
    } else {
        // C = D: the admissible set collapses to Y = X
        b.note("zero-threshold degeneracy: tight frame admits only Y = X");
        let met = lambda <= tol.margin * d;
        b.hypothesis_special("lambda_below_threshold", lambda, threshold, met)
    };
    let dist = u.minus_identity()?.norm();
    b.constant("norm_U_minus_I", dist);
    let symbol_ok = b.hypothesis_lt("symbol_close_to_identity", dist, c * c / (d * d));
    if !(lambda_ok && symbol_ok) {
        return Ok(b.finish());
    }

    let yb = y.bounds();
    b.constant("C_Y", yb.lower);
    b.constant("D_Y", yb.upper);
    b.holds("Y_is_frame", yb.is_frame);

    let m_xy = Multiplier::new(u.clone(), x, y)?;
    let m_yx = Multiplier::new(u.clone(), y, x)?;
    b.invertible("M_UXY", m_xy.operator());
    b.invertible("M_UYX", m_yx.operator());

    let m_xx = Multiplier::new(u.clone(), x, x)?;
    let gap = m_xx.operator().sub(x.frame_operator())?.norm();
    b.constant("norm_M_UXX_minus_S_X", gap);
    b.report_at_most("M_UXX_close_to_frame_operator", gap, b.up(d * dist));
    Ok(b.finish())
}

/// `Y` frame, `W` invertible, `x_n = W y_n`, `‖U - I‖ < C/D` ⇒ the multipliers
/// are invertible with `M_{U,Y,X}^{-1} = (W^{-1})^* M_{U,Y,Y}^{-1}` and
/// `M_{U,X,Y}^{-1} = M_{U,Y,Y}^{-1} W^{-1}`.
pub fn transformed_frame(
    y: &FrameSequence,
    w: &ModuleOperator,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    let w_min = w.min_singular_value();
    let threshold = tol.invertibility * w.norm();
    if !w.is_square() || !(w_min > threshold) {
        return Err(Error::Singular {
            what: "transforming operator",
            min_sv: w_min,
            threshold,
        });
    }
    let mut b = Builder::new(TheoremId::TransformedFrame, tol);
    let bounds = y.bounds();
    let (c, d) = (bounds.lower, bounds.upper);
    b.constant("C", c);
    b.constant("D", d);
    if !b.hypothesis_holds("Y_is_frame", bounds.is_frame) {
        return Ok(b.finish());
    }
    let dist = u.minus_identity()?.norm();
    b.constant("norm_U_minus_I", dist);
    if !b.hypothesis_lt("symbol_close_to_identity", dist, c / d) {
        return Ok(b.finish());
    }

    let x = y.map(w)?;
    b.constant("C_X", x.bounds().lower);
    b.holds("X_is_frame", x.is_frame());

    let m_yx = Multiplier::new(u.clone(), y, &x)?;
    let m_xy = Multiplier::new(u.clone(), &x, y)?;
    let m_yy = Multiplier::new(u.clone(), y, y)?;
    let ok_yx = b.invertible("M_UYX", m_yx.operator());
    let ok_xy = b.invertible("M_UXY", m_xy.operator());
    let ok_yy = b.invertible("M_UYY", m_yy.operator());

    // T_X = T_Y W^*, so M_{U,Y,X} = M_{U,Y,Y} W^*
    let factored = m_yy.operator().compose(&w.adjoint())?;
    let fact_defect = factored.sub(m_yx.operator())?.norm();
    b.at_most(
        "factorization",
        fact_defect,
        tol.residual * (1.0 + m_yx.norm()),
    );

    if !(ok_yx && ok_xy && ok_yy) {
        return Ok(b.finish());
    }
    let w_inv = w.invert_with(tol.invertibility)?;
    let m_yy_inv = m_yy.operator().invert_with(tol.invertibility)?;
    let formula_yx = w_inv.adjoint().compose(&m_yy_inv)?;
    let formula_xy = m_yy_inv.compose(&w_inv)?;
    b.at_most(
        "inverse_formula_M_UYX",
        inverse_residual(m_yx.operator(), &formula_yx)?,
        INVERSE_RESIDUAL,
    );
    b.at_most(
        "inverse_formula_M_UXY",
        inverse_residual(m_xy.operator(), &formula_xy)?,
        INVERSE_RESIDUAL,
    );

    // independent route: dense inverse of the realization
    let dense = linalg::inverse(&m_yx.operator().realization());
    let agreement = match dense {
        Some(inv) => linalg::spectral_norm(&(inv - formula_yx.realization())) / formula_yx.norm(),
        None => f64::INFINITY,
    };
    b.at_most("inverse_formula_matches_dense_inverse", agreement, INVERSE_RESIDUAL);
    Ok(b.finish())
}

/// `(X, X^d)` dual pair, `‖U - I‖ < 1/(2D)` ⇒ `M_{U,X,X^d}` is invertible.
///
/// The contraction estimate `‖M_{U,X,X^d} - Id‖ ≤ D‖U - I‖` used to get
/// there needs `D_{X^d} ≤ D`; the sharp bound is `√(D D_{X^d})‖U - I‖`,
/// reported alongside.
pub fn dual_frame(
    x: &FrameSequence,
    xd: &FrameSequence,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    let residual = x.dual_residual(xd)?;
    if residual > crate::frames::RECONSTRUCTION_TOL {
        return Err(Error::NotDualPair { residual });
    }
    let mut b = Builder::new(TheoremId::DualFrame, tol);
    let d = x.bounds().upper;
    let d_dual = xd.bounds().upper;
    b.constant("D", d);
    b.constant("D_dual", d_dual);
    b.constant("dual_residual", residual);
    let dist = u.minus_identity()?.norm();
    b.constant("norm_U_minus_I", dist);
    if !b.hypothesis_lt("symbol_close_to_identity", dist, 1.0 / (2.0 * d)) {
        return Ok(b.finish());
    }

    let m = Multiplier::new(u.clone(), x, xd)?;
    let m_rev = Multiplier::new(u.clone(), xd, x)?;
    b.invertible("M_UXXd", m.operator());
    b.invertible("M_UXdX", m_rev.operator());

    let contraction = m.operator().minus_identity()?.norm();
    b.constant("norm_M_minus_I", contraction);
    b.at_most("contraction_bound", contraction, b.up(d * dist) + tol.residual);
    b.at_most("contraction_below_half", contraction, 0.5);
    b.report_at_most(
        "sharp_contraction_bound",
        contraction,
        b.up((d * d_dual).sqrt() * dist) + tol.residual,
    );
    Ok(b.finish())
}

/// `Y` frame with canonical dual `Ỹ`, `σ = Σ‖x_n - ỹ_n‖² < 1/(4D)` ⇒
/// `M_{I,Y,X}` invertible; with a symbol, `‖U‖ < 1` and `‖U - I‖ < √(C/4D)`
/// ⇒ `M_{U,Y,X}` invertible.
pub fn approximate_dual(
    y: &FrameSequence,
    x: &FrameSequence,
    u: Option<&ModuleOperator>,
    tol: &Tolerances,
) -> Result<Certificate> {
    let mut b = Builder::new(TheoremId::ApproximateDual, tol);
    let bounds = y.bounds();
    let (c, d) = (bounds.lower, bounds.upper);
    b.constant("C", c);
    b.constant("D", d);
    if !b.hypothesis_holds("Y_is_frame", bounds.is_frame) {
        return Ok(b.finish());
    }
    let dual = y.canonical_dual()?;
    let diff = x.difference(&dual)?;
    let sigma: f64 = diff.vectors().iter().map(|v| v.norm().powi(2)).sum();
    b.constant("sigma", sigma);
    let mut met = b.hypothesis_lt("sigma_below_quarter_inverse_D", sigma, 1.0 / (4.0 * d));
    if let Some(u) = u {
        let norm_u = u.norm();
        let dist = u.minus_identity()?.norm();
        b.constant("norm_U", norm_u);
        b.constant("norm_U_minus_I", dist);
        met &= b.hypothesis_lt("symbol_contractive", norm_u, 1.0);
        met &= b.hypothesis_lt("symbol_close_to_identity", dist, (c / (4.0 * d)).sqrt());
    }
    if !met {
        return Ok(b.finish());
    }

    let n = y.len();
    let id = ModuleOperator::identity(y.shape(), n);
    let m_plain = Multiplier::new(id, y, x)?;
    b.invertible("M_IYX", m_plain.operator());
    let gap = m_plain.operator().minus_identity()?.norm();
    b.constant("norm_M_IYX_minus_I", gap);
    b.at_most("M_IYX_within_half_of_identity", gap, 0.5);
    b.report_at_most(
        "M_IYX_proof_bound",
        gap,
        b.up((d * sigma).sqrt()) + tol.residual,
    );

    if let Some(u) = u {
        let m = Multiplier::new(u.clone(), y, x)?;
        b.invertible("M_UYX", m.operator());
        let gap = m.operator().minus_identity()?.norm();
        b.constant("norm_M_UYX_minus_I", gap);
        b.at_most("M_UYX_within_one_of_identity", gap, 1.0);
        let dist = u.minus_identity()?.norm();
        let proof = (d * sigma).sqrt() * u.norm() + (d / c).sqrt() * dist;
        b.report_at_most("M_UYX_proof_bound", gap, b.up(proof) + tol.residual);
    }
    Ok(b.finish())
}
