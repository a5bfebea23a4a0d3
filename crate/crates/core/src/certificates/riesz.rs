//! Multipliers between modular Riesz bases.

use super::{Builder, Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::multipliers::Multiplier;
use crate::operators::ModuleOperator;
use crate::tolerance::Tolerances;

/// Absolute tolerance for operator identities such as `M·M^{-1} = Id`.
const IDENTITY_RESIDUAL: f64 = 1e-8;

fn require_riesz(seq: &FrameSequence, name: &str) -> Result<()> {
    match seq.riesz_status().reason() {
        None => Ok(()),
        Some(why) => Err(Error::NotRiesz(format!("{name}: {why}"))),
    }
}

/// `U ↦ M_{U,Y,X}` is injective for Riesz bases `X`, `Y`; quantitatively
/// `‖U_1 - U_2‖ ≤ ‖M_1 - M_2‖ / √(C_X C_Y)`.
pub fn riesz_injectivity(
    x: &FrameSequence,
    y: &FrameSequence,
    u1: &ModuleOperator,
    u2: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    require_riesz(x, "X")?;
    require_riesz(y, "Y")?;
    let mut b = Builder::new(TheoremId::RieszInjectivity, tol);
    b.hypothesis_holds("riesz_bases", true);
    let m1 = Multiplier::new(u1.clone(), y, x)?;
    let m2 = Multiplier::new(u2.clone(), y, x)?;
    let eps = m1.operator().sub(m2.operator())?.norm();
    let delta = u1.sub(u2)?.norm();
    b.constant("norm_M1_minus_M2", eps);
    b.constant("norm_U1_minus_U2", delta);

    let (cx, cy) = (x.bounds().lower, y.bounds().lower);
    let kappa = 1.0 / (cx * cy).sqrt();
    let t_x = x.analysis_operator();
    let t_y_adj = y.synthesis_operator();
    let kappa_direct = 1.0 / (t_x.min_singular_value() * t_y_adj.min_singular_value());
    b.constant("kappa", kappa);
    b.constant("kappa_from_realizations", kappa_direct);
    b.at_most(
        "kappa_routes_agree",
        (kappa - kappa_direct).abs(),
        tol.residual * kappa,
    );
    b.at_most("recovery_bound", delta, b.up(kappa * eps) + tol.residual);

    // U = (T_Y^*)^{-1} M T_X^{-1}
    let recovered = t_y_adj
        .invert_with(tol.invertibility)?
        .compose(m1.operator())?
        .compose(&t_x.invert_with(tol.invertibility)?)?;
    b.at_most(
        "symbol_recovery",
        recovered.sub(u1)?.norm(),
        tol.residual * (1.0 + u1.norm()),
    );

    let distinct = delta > tol.residual * (1.0 + u1.norm().max(u2.norm()));
    if distinct {
        b.holds("distinct_symbols_give_distinct_multipliers", eps > 0.0);
    } else {
        b.note("symbols coincide within tolerance");
    }
    Ok(b.finish())
}

/// `K√(CC') ≤ ‖M_{U,Y,X}‖ ≤ √(DD')‖U‖` with `K = max_n ‖U e_n‖`.
pub fn riesz_norm_bounds(
    x: &FrameSequence,
    y: &FrameSequence,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    require_riesz(x, "X")?;
    require_riesz(y, "Y")?;
    let mut b = Builder::new(TheoremId::RieszNormBounds, tol);
    b.hypothesis_holds("riesz_bases", true);
    let m = Multiplier::new(u.clone(), y, x)?;
    let (bx, by) = (x.bounds(), y.bounds());
    let k = (0..u.domain_rank())
        .map(|n| u.column(n).norm())
        .fold(0.0, f64::max);
    let norm_m = m.norm();
    let upper = (bx.upper * by.upper).sqrt() * u.norm();
    let lower = k * (bx.lower * by.lower).sqrt();
    for (name, v) in [
        ("C", bx.lower),
        ("D", bx.upper),
        ("C_prime", by.lower),
        ("D_prime", by.upper),
        ("K", k),
        ("norm_U", u.norm()),
        ("norm_M", norm_m),
        ("upper_margin", upper - norm_m),
        ("lower_margin", norm_m - lower),
    ] {
        b.constant(name, v);
    }
    b.at_most("upper_bound", norm_m, b.up(upper) + tol.residual);
    b.at_least("lower_bound", norm_m, b.down(lower) - tol.residual);
    Ok(b.finish())
}

/// `U` is invertible iff `M_{U,Y,X}` is, and then
/// `M_{U,Y,X}^{-1} = M_{U^{-1},X̃,Ỹ}`.
pub fn riesz_invertibility(
    x: &FrameSequence,
    y: &FrameSequence,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    let mut b = Builder::new(TheoremId::RieszInvertibility, tol);
    let x_ok = b.hypothesis_holds("X_is_riesz", x.is_modular_riesz());
    let y_ok = b.hypothesis_holds("Y_is_riesz", y.is_modular_riesz());
    if !(x_ok && y_ok) {
        return Ok(b.finish());
    }
    let m = Multiplier::new(u.clone(), y, x)?;
    let op = m.operator();
    let u_min = u.min_singular_value();
    let m_min = op.min_singular_value();
    b.constant("U.min_sv", u_min);
    b.constant("M.min_sv", m_min);
    let u_inv = u.is_invertible_with(tol.invertibility);
    let m_inv = op.is_invertible_with(tol.invertibility);
    b.holds("invertibility_equivalence", u_inv == m_inv);
    if !(u_inv && m_inv) {
        b.note(if u_inv || m_inv {
            "exactly one of U, M is invertible"
        } else {
            "U and M both singular"
        });
        return Ok(b.finish());
    }

    let u_inverse = u.invert_with(tol.invertibility)?;
    let candidate = Multiplier::new(u_inverse, &x.canonical_dual()?, &y.canonical_dual()?)?;
    let c = candidate.operator();
    b.at_most(
        "M_times_candidate",
        op.compose(c)?.minus_identity()?.norm(),
        IDENTITY_RESIDUAL,
    );
    b.at_most(
        "candidate_times_M",
        c.compose(op)?.minus_identity()?.norm(),
        IDENTITY_RESIDUAL,
    );

    // converse: U · (T_X M^{-1} T_Y^*) = Id
    let right = x
        .analysis_operator()
        .compose(&op.invert_with(tol.invertibility)?.compose(&y.synthesis_operator())?)?;
    b.at_most(
        "converse_right_inverse",
        u.compose(&right)?.minus_identity()?.norm(),
        IDENTITY_RESIDUAL,
    );
    Ok(b.finish())
}

/// For `Y` Riesz, `X` a frame and `U` invertible: `X` has a unique dual iff
/// `M_{U,Y,X}` is invertible.
pub fn unique_dual(
    y: &FrameSequence,
    x: &FrameSequence,
    u: &ModuleOperator,
    tol: &Tolerances,
) -> Result<Certificate> {
    let u_min = u.min_singular_value();
    let threshold = tol.invertibility * u.norm();
    if !u.is_square() || !(u_min > threshold) {
        return Err(Error::Singular {
            what: "symbol",
            min_sv: u_min,
            threshold,
        });
    }
    require_riesz(y, "Y")?;
    if !x.is_frame() {
        let b = x.bounds();
        return Err(Error::NotAFrame {
            lower: b.lower,
            upper: b.upper,
        });
    }

    let mut b = Builder::new(TheoremId::UniqueDual, tol);
    b.hypothesis_holds("symbol_invertible", true);
    let unique = x.has_unique_dual()?;
    b.constant("X.len", x.len() as f64);
    b.constant("Y.len", y.len() as f64);
    b.constant("unique_dual", if unique { 1.0 } else { 0.0 });

    if x.len() != y.len() || x.len() != u.domain_rank() {
        // M_{U,Y,X} would need |X| = |Y| = N; no invertible multiplier exists
        b.note("structural mismatch: sequence lengths differ, multiplier not formed");
        b.holds("equivalence", !unique);
        return Ok(b.finish());
    }
    let m = Multiplier::new(u.clone(), y, x)?;
    let m_inv = m.operator().is_invertible_with(tol.invertibility);
    b.constant("M.min_sv", m.operator().min_singular_value());
    b.constant("M_invertible", if m_inv { 1.0 } else { 0.0 });
    b.holds("equivalence", unique == m_inv);
    Ok(b.finish())
}
