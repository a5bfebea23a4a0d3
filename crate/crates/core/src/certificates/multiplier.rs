//! Basic multiplier properties, the lower frame condition forced by an
//! invertible multiplier, and the perturbation lemma for invertibility.

use rand::Rng;

use super::{Builder, Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::frames::FrameSequence;
use crate::multipliers::Multiplier;
use crate::operators::ModuleOperator;
use crate::random;
use crate::tolerance::Tolerances;

/// Relative tolerance for the adjoint identity `M^* = M_{U^*,X,Y}`.
const ADJOINT_TOL: f64 = 1e-10;
/// Relative singular-value cutoff used for complex ranks.
const RANK_TOL: f64 = 1e-10;

/// Adjoint identity, Bessel bound, finite-rank propagation and positivity for `M_{U,Y,X}`.
pub fn multiplier_properties(
    u: &ModuleOperator,
    y: &FrameSequence,
    x: &FrameSequence,
    tol: &Tolerances,
) -> Result<Certificate> {
    let mut b = Builder::new(TheoremId::MultiplierProperties, tol);
    let m = Multiplier::new(u.clone(), y, x)?;
    let norm_m = m.norm();
    let scale = 1.0 + norm_m;
    b.constant("D_X", x.bounds().upper);
    b.constant("D_Y", y.bounds().upper);
    b.constant("norm_U", u.norm());
    b.constant("norm_M", norm_m);

    let adj = m.adjoint();
    let module_defect = adj.operator().sub(&m.operator().adjoint())?.norm();
    b.at_most("adjoint_identity", module_defect, ADJOINT_TOL * scale);
    let realized = adj.operator().realization() - m.operator().realization().adjoint();
    b.at_most(
        "adjoint_identity_realized",
        crate::linalg::spectral_norm(&realized),
        ADJOINT_TOL * scale,
    );

    b.at_most("bessel_bound", norm_m, b.up(m.bessel_bound()));

    // U = Σ Θ_{a_j,b_j}  ⇒  M = Σ Θ_{T_X^* a_j, T_Y^* b_j}
    let parts = u.finite_rank_decompose();
    let syn_x = x.synthesis_operator();
    let syn_y = y.synthesis_operator();
    let mut reassembled = ModuleOperator::zero(x.shape(), x.rank(), y.rank());
    for (a, c) in &parts {
        let term = ModuleOperator::theta(&syn_x.apply(a)?, &syn_y.apply(c)?)?;
        reassembled = reassembled.add(&term)?;
    }
    let terms = parts.len();
    b.constant("symbol_terms", terms as f64);
    b.at_most(
        "finite_rank_reassembly",
        reassembled.sub(m.operator())?.norm(),
        tol.residual * (1.0 + m.bessel_bound()),
    );
    let rank_m = m.operator().complex_rank(RANK_TOL);
    let rank_u = u.complex_rank(RANK_TOL);
    b.constant("rank_M", rank_m as f64);
    b.constant("rank_U", rank_u as f64);
    b.at_most("rank_propagation", rank_m as f64, rank_u as f64);
    b.at_most(
        "rank_bound_by_terms",
        rank_m as f64,
        (terms * x.shape().complex_dim()) as f64,
    );

    if u.is_positive_with(tol.positivity) {
        let mxx = Multiplier::new(u.clone(), x, x)?;
        let (lo, _) = mxx.operator().spectral_bounds()?;
        b.constant("M_UXX.min_eigenvalue", lo);
        b.holds(
            "positive_symbol_gives_positive_multiplier",
            mxx.operator().is_positive_with(tol.positivity),
        );
    } else {
        b.note("symbol is not positive; positivity clause not applicable");
    }
    Ok(b.finish())
}

/// An invertible `M_{U,Y,X}` with `X` Bessel forces the norm-form lower frame
/// inequality `‖⟨T_Y y, T_Y y⟩‖ ≥ ‖y‖² / (D‖U‖²‖M^{-1}‖²)` on `Y`.
pub fn lower_frame_condition<R: Rng + ?Sized>(
    u: &ModuleOperator,
    y: &FrameSequence,
    x: &FrameSequence,
    tol: &Tolerances,
    rng: &mut R,
    samples: usize,
) -> Result<Certificate> {
    let mut b = Builder::new(TheoremId::LowerFrameCondition, tol);
    let m = Multiplier::new(u.clone(), y, x)?;
    let op = m.operator();
    let d = x.bounds().upper;
    let norm_u = u.norm();
    let norm_m = op.norm();
    b.constant("D", d);
    b.constant("norm_U", norm_u);
    b.constant("norm_M", norm_m);

    if !b.hypothesis_holds("multiplier_square", op.is_square()) {
        return Ok(b.finish());
    }
    let min_sv = op.min_singular_value();
    b.constant("M.min_sv", min_sv);
    if !b.hypothesis_lt("multiplier_invertible", tol.invertibility * norm_m, min_sv) {
        return Ok(b.finish());
    }

    let norm_inv = op.invert_with(tol.invertibility)?.norm();
    let c = 1.0 / (d * norm_u * norm_u * norm_inv * norm_inv);
    b.constant("norm_M_inv", norm_inv);
    b.constant("c", c);

    let mut min_ratio = f64::INFINITY;
    for _ in 0..samples {
        let v = random::vector(rng, y.shape(), y.rank());
        let nv = v.norm();
        if nv == 0.0 {
            continue;
        }
        let tv = y.analyze(&v)?.norm();
        min_ratio = min_ratio.min(tv * tv / (nv * nv));
    }
    b.constant("sampled_min_ratio", min_ratio);
    b.at_least("norm_form_lower_frame_inequality", min_ratio, b.down(c));

    let order_witness = y.bounds().lower;
    b.constant("lambda_min_S_Y", order_witness);
    b.report_at_least("order_form_witness", order_witness, b.down(c));
    Ok(b.finish())
}

/// `‖U - W‖ < ‖U^{-1}‖^{-1}` ⇒ `W` invertible with
/// `‖x‖/(λ + ‖U‖) ≤ ‖W^{-1}x‖ ≤ ‖x‖/(‖U^{-1}‖^{-1} - λ)`.
pub fn perturbation<R: Rng + ?Sized>(
    u: &ModuleOperator,
    w: &ModuleOperator,
    tol: &Tolerances,
    rng: &mut R,
    samples: usize,
) -> Result<Certificate> {
    let norm_u = u.norm();
    let u_min = u.min_singular_value();
    let threshold = tol.invertibility * norm_u;
    if !u.is_square() || !(u_min > threshold) {
        return Err(Error::Singular {
            what: "reference operator",
            min_sv: u_min,
            threshold,
        });
    }
    let mut b = Builder::new(TheoremId::Perturbation, tol);
    let lambda = u.sub(w)?.norm();
    b.constant("lambda", lambda);
    b.constant("norm_U", norm_u);
    b.constant("inverse_norm_reciprocal", u_min);
    if !b.hypothesis_lt("lambda_below_inverse_norm_reciprocal", lambda, u_min) {
        return Ok(b.finish());
    }

    if !b.invertible("W", w) {
        return Ok(b.finish());
    }
    let w_inv = w.invert_with(tol.invertibility)?;
    let upper = 1.0 / (u_min - lambda);
    let lower = 1.0 / (lambda + norm_u);
    b.constant("sandwich_upper", upper);
    b.constant("sandwich_lower", lower);

    let inv_norm = w_inv.norm();
    b.at_most("inverse_norm_upper", inv_norm, b.up(upper));
    b.at_least("inverse_norm_lower", w_inv.min_singular_value(), b.down(lower));

    let realized_inv = crate::linalg::inverse(&w.realization())
        .map(|r| crate::linalg::spectral_norm(&r))
        .unwrap_or(f64::MAX);
    b.constant("realized_inverse_norm", realized_inv);
    b.at_most(
        "inverse_norm_routes_agree",
        (inv_norm - realized_inv).abs(),
        tol.residual * inv_norm,
    );

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..samples {
        let v = random::vector(rng, u.shape(), u.domain_rank());
        let nv = v.norm();
        if nv == 0.0 {
            continue;
        }
        let r = w_inv.apply(&v)?.norm() / nv;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    b.constant("sampled_min_ratio", lo);
    b.constant("sampled_max_ratio", hi);
    b.at_most("sampled_upper", hi, b.up(upper));
    b.at_least("sampled_lower", lo, b.down(lower));
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::Verdict;
    use crate::{AlgebraElement, AlgebraShape, C64};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_diag(values: &[f64]) -> ModuleOperator {
        let s = AlgebraShape::scalar();
        ModuleOperator::diagonal(
            &s,
            values
                .iter()
                .map(|&v| AlgebraElement::scalar(&s, C64::new(v, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn diagonal_perturbation_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tol = Tolerances::default();
        let u = scalar_diag(&[1.0, 1.0]);
        let w = scalar_diag(&[1.0, 0.5]);
        let cert = perturbation(&u, &w, &tol, &mut rng, 50).unwrap();
        assert_eq!(cert.verdict, Verdict::Verified);
        assert_relative_eq!(cert.constant("lambda").unwrap(), 0.5, epsilon = 1e-14);
        let c = cert.conclusion("inverse_norm_upper").unwrap();
        assert_relative_eq!(c.value, 2.0, epsilon = 1e-12);
        assert_relative_eq!(cert.constant("sandwich_upper").unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn unperturbed_sandwich_collapses_to_inverse_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tol = Tolerances::default();
        let u = scalar_diag(&[2.0, 4.0]);
        let cert = perturbation(&u, &u, &tol, &mut rng, 50).unwrap();
        assert_eq!(cert.verdict, Verdict::Verified);
        assert_relative_eq!(cert.constant("sandwich_lower").unwrap(), 0.25, epsilon = 1e-14);
        assert_relative_eq!(cert.constant("sandwich_upper").unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn singular_reference_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = scalar_diag(&[1.0, 0.0]);
        assert!(perturbation(&u, &u, &Tolerances::default(), &mut rng, 5).is_err());
    }

    #[test]
    fn large_perturbation_does_not_meet_hypothesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = scalar_diag(&[1.0, 1.0]);
        let w = scalar_diag(&[1.0, -0.2]);
        let cert = perturbation(&u, &w, &Tolerances::default(), &mut rng, 5).unwrap();
        assert_eq!(cert.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn lower_frame_condition_on_onb() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let id = ModuleOperator::identity(&s, 2);
        let cert = lower_frame_condition(&id, &onb, &onb, &Tolerances::default(), &mut rng, 100).unwrap();
        assert_eq!(cert.verdict, Verdict::Verified);
        assert_relative_eq!(cert.constant("c").unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(cert.constant("sampled_min_ratio").unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lower_frame_condition_with_scaled_synthesis_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let y = onb.scale_real(2.0);
        let id = ModuleOperator::identity(&s, 2);
        let cert = lower_frame_condition(&id, &y, &onb, &Tolerances::default(), &mut rng, 100).unwrap();
        assert_eq!(cert.verdict, Verdict::Verified);
        assert_relative_eq!(cert.constant("norm_M_inv").unwrap(), 0.5, epsilon = 1e-12);
        // D is the Bessel bound of the analysis side X = ONB, so c = 1/(1·1·1/4)
        assert_relative_eq!(cert.constant("c").unwrap(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(cert.constant("sampled_min_ratio").unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_multiplier_is_hypothesis_not_met() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let u = scalar_diag(&[1.0, 0.0]);
        let cert = lower_frame_condition(&u, &onb, &onb, &Tolerances::default(), &mut rng, 10).unwrap();
        assert_eq!(cert.verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn properties_of_diagonal_multiplier() {
        let s = AlgebraShape::scalar();
        let onb = FrameSequence::standard_basis(&s, 2);
        let cert = multiplier_properties(&scalar_diag(&[2.0, 3.0]), &onb, &onb, &Tolerances::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Verified);
        assert!(cert.conclusion("positive_symbol_gives_positive_multiplier").unwrap().pass);
    }
}
