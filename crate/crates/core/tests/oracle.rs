use fraccob_core::oracle::{residual_of, rl_integral_all};
use fraccob_core::special::recip_gamma;
use fraccob_core::sweep::{example_demand, example_supply};
use fraccob_core::{
    hilfer_derivative, refinement, residual, rl_integral, DemandModel, GridFunction, Model,
};
use proptest::prelude::*;

fn gamma(x: f64) -> f64 {
    1.0 / recip_gamma(x)
}

/// `I^α t^k = Γ(k+1)/Γ(k+1+α) t^{k+α}`.
fn monomial_integral(k: f64, alpha: f64, t: f64) -> f64 {
    gamma(k + 1.0) / gamma(k + 1.0 + alpha) * t.powf(k + alpha)
}

#[test]
fn semigroup_on_monomials() {
    for k in [1.0, 2.0, 3.0] {
        let f = GridFunction::sample(0.0, 0.005, 401, |t| t.powf(k)).unwrap();
        let inner = rl_integral_all(&f, 0.4).unwrap();
        let composed = rl_integral(&inner, 0.3, 400).unwrap();
        let direct = rl_integral(&f, 0.7, 400).unwrap();
        let exact = monomial_integral(k, 0.7, 2.0);
        assert!(
            (composed - direct).abs() < 1e-4 * exact,
            "k={k}: {composed} vs {direct}"
        );
        assert!(
            (direct - exact).abs() < 1e-4 * exact,
            "k={k}: {direct} vs {exact}"
        );
    }
}

#[test]
fn order_zero_limit() {
    let f = GridFunction::sample(0.0, 0.01, 301, |t| 1.0 + t + 0.5 * t * t).unwrap();
    for k in [50, 150, 300] {
        let v = rl_integral(&f, 1e-3, k).unwrap();
        assert!(
            (v - f.values[k]).abs() < 1e-2 * f.values[k],
            "k={k}: {v} vs {}",
            f.values[k]
        );
    }
}

#[test]
fn integral_converges_at_second_order() {
    let err = |h: f64| {
        let n = (1.0 / h).round() as usize;
        let f = GridFunction::sample(0.0, h, n + 1, |t| t * t).unwrap();
        (rl_integral(&f, 0.5, n).unwrap() - monomial_integral(2.0, 0.5, 1.0)).abs()
    };
    let ratio = err(0.02) / err(0.01);
    assert!(ratio > 3.5, "ratio {ratio}");
}

#[test]
fn caputo_branch_matches_composition() {
    // ν = 1 is I^{1-μ} ∘ D; for t² the Caputo derivative is 2 t^{2-μ} / Γ(3-μ)
    let h = 0.005;
    for mu in [0.2, 0.5, 0.8] {
        let f = GridFunction::sample(0.0, h, 401, |t| t * t).unwrap();
        let derivative = GridFunction::sample(0.0, h, 401, |t| 2.0 * t).unwrap();
        for k in [100, 250, 398] {
            let hilfer = hilfer_derivative(&f, mu, 1.0, k).unwrap();
            let composed = rl_integral(&derivative, 1.0 - mu, k).unwrap();
            let exact = 2.0 * f.t(k).powf(2.0 - mu) / gamma(3.0 - mu);
            assert!(
                (hilfer - composed).abs() < 1e-4,
                "mu={mu} k={k}: {hilfer} vs {composed}"
            );
            assert!(
                (hilfer - exact).abs() < 1e-4,
                "mu={mu} k={k}: {hilfer} vs {exact}"
            );
        }
    }
}

#[test]
fn riemann_liouville_branch_matches_composition() {
    // ν = 0 is D ∘ I^{1-μ}; for 1 + t that gives t^{-μ}/Γ(1-μ) + t^{1-μ}/Γ(2-μ)
    let h = 0.005;
    for mu in [0.2, 0.5, 0.8] {
        let f = GridFunction::sample(0.0, h, 401, |t| 1.0 + t).unwrap();
        let integrated = rl_integral_all(&f, 1.0 - mu).unwrap();
        for k in [100, 250, 398] {
            let hilfer = hilfer_derivative(&f, mu, 0.0, k).unwrap();
            let q = &integrated.values;
            let composed = (q[k + 1] - q[k - 1]) / (2.0 * h);
            let t = f.t(k);
            let exact = t.powf(-mu) / gamma(1.0 - mu) + t.powf(1.0 - mu) / gamma(2.0 - mu);
            assert!(
                (hilfer - composed).abs() < 1e-3,
                "mu={mu} k={k}: {hilfer} vs {composed}"
            );
            assert!(
                (hilfer - exact).abs() < 1e-3 * exact,
                "mu={mu} k={k}: {hilfer} vs {exact}"
            );
        }
    }
}

#[test]
fn examples_refine_over_long_window() {
    for model in [example_demand(20.0), example_supply(20.0)] {
        for (mu, nu) in [(0.5, 0.5), (0.9, 0.2)] {
            let d = model.with_orders(mu, nu).derive().unwrap();
            let r = refinement(&d, 20.0, (0.5, 50.0), 0.02).unwrap();
            let ratio = r.ratio.unwrap();
            assert!(
                ratio > 2.5,
                "{:?} mu={mu} nu={nu}: ratio {ratio}",
                model.kind()
            );
            assert!(r.fine.max_residual < 1e-2, "{}", r.fine.max_residual);
        }
    }
}

#[test]
fn residual_detects_a_wrong_solution() {
    let d = example_demand(20.0).with_orders(0.5, 0.5).derive().unwrap();
    let good = residual(&d, 20.0, (0.5, 3.0), 0.01).unwrap();
    // the right equation with the wrong initial constant
    let wrong = |t: f64| fraccob_core::price_at(&d, 25.0, t).unwrap();
    let bad = residual_of(&wrong, d.mu, d.nu, d.lam, d.xi, 20.0, (0.5, 3.0), 0.01).unwrap();
    assert!(
        bad.max_residual > 100.0 * good.max_residual,
        "{} vs {}",
        bad.max_residual,
        good.max_residual
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn residual_refines_for_random_models(
        beta in -10.0f64..-0.5,
        beta1 in 0.5f64..10.0,
        alpha in 0.0f64..50.0,
        alpha1 in -20.0f64..20.0,
        mu in 0.1f64..=1.0,
        nu in 0.0f64..=1.0,
        c in -30.0f64..30.0,
    ) {
        let d = Model::Demand(DemandModel { alpha, beta, alpha1, beta1, mu, nu, c }).derive().unwrap();
        let r = refinement(&d, c, (0.5, 5.0), 0.02).unwrap();
        prop_assert!(r.ratio.is_none_or(|q| q > 2.5), "ratio {:?}", r.ratio);
    }
}
