//! Inner-product and operator invariants against dense oracles.

mod common;

use common::{rng, shapes, svd_min, svd_norm};
use cstar_frames::{random, ModuleOperator, ModuleVector};
use proptest::prelude::*;

/// `⟨x, y⟩` computed from embedded coordinates: `Σ_i E(x_i) E(y_i)^†`.
fn dense_inner(x: &ModuleVector, y: &ModuleVector) -> cstar_frames::CMatrix {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| a.embed() * b.embed().adjoint())
        .reduce(|acc, m| acc + m)
        .expect("positive rank")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn inner_product_matches_embedding(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::vector(&mut r, &shape, k);
        let y = random::vector(&mut r, &shape, k);
        let ip = x.inner(&y).unwrap();
        let dense = dense_inner(&x, &y);
        prop_assert!((ip.embed() - &dense).norm() <= 1e-12 * (1.0 + dense.norm()));
        prop_assert!((x.norm() - svd_norm(&dense_inner(&x, &x)).sqrt()).abs() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn inner_product_is_a_linear(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::vector(&mut r, &shape, k);
        let y = random::vector(&mut r, &shape, k);
        let a = random::element(&mut r, &shape);
        let lhs = x.act(&a).unwrap().inner(&y).unwrap();
        let rhs = &a * &x.inner(&y).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.norm()));
        // ⟨y, x⟩ = ⟨x, y⟩^*
        prop_assert!(y.inner(&x).unwrap().distance(&x.inner(&y).unwrap().adjoint()).unwrap() <= 1e-13 * (1.0 + rhs.norm()));
    }

    #[test]
    fn cauchy_schwarz(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::vector(&mut r, &shape, k);
        let y = random::vector(&mut r, &shape, k);
        let xy = x.inner(&y).unwrap();
        prop_assert!(xy.norm() <= x.norm() * y.norm() * (1.0 + 1e-12));
        // order form: ⟨x,y⟩⟨y,x⟩ ≤ ‖y‖²⟨x,x⟩
        let lhs = &xy * &xy.adjoint();
        let rhs = x.inner(&x).unwrap().scale_real(y.norm().powi(2));
        prop_assert!((&rhs - &lhs).is_positive());
    }

    #[test]
    fn realization_is_a_homomorphism(shape in shapes(), k in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::operator(&mut r, &shape, k, m);
        let s = random::operator(&mut r, &shape, m, k);
        let x = random::vector(&mut r, &shape, k);
        let rt = t.realization();
        let scale = 1.0 + rt.norm() * x.realize().norm();
        prop_assert!((t.apply(&x).unwrap().realize() - &rt * x.realize()).norm() <= 1e-12 * scale);
        let ts = t.compose(&s).unwrap().realization();
        prop_assert!((ts - &rt * s.realization()).norm() <= 1e-12 * (1.0 + rt.norm() * s.realization().norm()));
        prop_assert_eq!(t.adjoint().realization(), rt.adjoint());
    }

    #[test]
    fn adjoint_identity(shape in shapes(), k in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::operator(&mut r, &shape, k, m);
        let x = random::vector(&mut r, &shape, k);
        let y = random::vector(&mut r, &shape, m);
        let lhs = t.apply(&x).unwrap().inner(&y).unwrap();
        let rhs = x.inner(&t.adjoint().apply(&y).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * (1.0 + t.norm() * x.norm() * y.norm()));
    }

    #[test]
    fn operator_is_a_linear(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::operator(&mut r, &shape, k, k);
        let x = random::vector(&mut r, &shape, k);
        let a = random::element(&mut r, &shape);
        let lhs = t.apply(&x.act(&a).unwrap()).unwrap();
        let rhs = t.apply(&x).unwrap().act(&a).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * (1.0 + t.norm() * x.norm() * a.norm()));
    }

    #[test]
    fn operator_norm_two_ways(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::operator(&mut r, &shape, k, k);
        let n = t.norm();
        prop_assert!((n - svd_norm(&t.realization())).abs() <= 1e-12 * (1.0 + n));
        // sampled ratios never beat the norm
        for _ in 0..20 {
            let x = random::vector(&mut r, &shape, k);
            prop_assert!(t.apply(&x).unwrap().norm() <= n * x.norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn inverse_norm_is_reciprocal_min_singular_value(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random::invertible_operator(&mut r, &shape, k, 50.0);
        let inv = t.invert().unwrap();
        let dense_min = svd_min(&t.realization());
        prop_assert!((inv.norm() - 1.0 / dense_min).abs() <= 1e-9 * inv.norm());
        prop_assert!(t.compose(&inv).unwrap().minus_identity().unwrap().norm() <= 1e-10);
        // sandwich ‖x‖/‖T‖ ≤ ‖T^{-1}x‖ ≤ ‖x‖/σ_min
        let x = random::vector(&mut r, &shape, k);
        let v = inv.apply(&x).unwrap().norm();
        prop_assert!(v <= x.norm() / t.min_singular_value() * (1.0 + 1e-10));
        prop_assert!(v >= x.norm() / t.norm() * (1.0 - 1e-10));
    }

    #[test]
    fn finite_rank_decomposition_reassembles(shape in shapes(), k in 1usize..4, m in 1usize..4, terms in 1usize..3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut t = ModuleOperator::zero(&shape, k, m);
        for _ in 0..terms {
            let x = random::vector(&mut r, &shape, k);
            let y = random::vector(&mut r, &shape, m);
            t = t.add(&ModuleOperator::theta(&x, &y).unwrap()).unwrap();
        }
        let parts = t.finite_rank_decompose();
        prop_assert!(parts.len() <= terms);
        let mut back = ModuleOperator::zero(&shape, k, m);
        for (x, y) in &parts {
            back = back.add(&ModuleOperator::theta(x, y).unwrap()).unwrap();
        }
        prop_assert!(back.sub(&t).unwrap().norm() <= 1e-9 * t.norm());
    }

    #[test]
    fn positive_operator_spectrum(shape in shapes(), k in 1usize..4, seed in any::<u64>()) {
        let p = random::positive_operator(&mut rng(seed), &shape, k);
        prop_assert!(p.is_self_adjoint());
        prop_assert!(p.is_positive());
        let (lo, hi) = p.spectral_bounds().unwrap();
        let dense = p.realization().symmetric_eigenvalues();
        prop_assert!((lo - dense.min()).abs() <= 1e-10 * (1.0 + hi));
        prop_assert!((hi - dense.max()).abs() <= 1e-10 * (1.0 + hi));
    }
}

#[test]
fn theta_acts_as_rank_one_map() {
    let shape = cstar_frames::AlgebraShape::new(vec![2]).unwrap();
    let mut r = rng(3);
    let x = random::vector(&mut r, &shape, 2);
    let y = random::vector(&mut r, &shape, 3);
    let z = random::vector(&mut r, &shape, 2);
    // Θ_{x,y}(z) = ⟨z, x⟩ y
    let th = ModuleOperator::theta(&x, &y).unwrap();
    let direct = y.act(&z.inner(&x).unwrap()).unwrap();
    assert!(th.apply(&z).unwrap().sub(&direct).unwrap().norm() <= 1e-12 * (1.0 + direct.norm()));
}
