mod common;

use fraccob_core::sweep::{example_demand, example_supply, table, DEFAULT_NUS};
use fraccob_core::{
    caputo_price, mittag_leffler, price_at, rl_price, DemandModel, DerivedParams, Model,
    SupplyModel,
};
use proptest::prelude::*;

const TABLE_TIMES: [f64; 3] = [100.0, 1000.0, 10000.0];

fn demand(alpha: f64, beta: f64, alpha1: f64, beta1: f64, mu: f64, nu: f64, c: f64) -> Model {
    Model::Demand(DemandModel {
        alpha,
        beta,
        alpha1,
        beta1,
        mu,
        nu,
        c,
    })
}

/// Downward demand, upward supply: `β < 0 < β₁`, so `β₁/β < 1` and `λ < 0`.
fn stable_demand() -> impl Strategy<Value = Model> {
    (
        0.0f64..50.0,
        -10.0f64..-0.5,
        -20.0f64..20.0,
        0.5f64..10.0,
        0.05f64..=1.0,
        0.0f64..=1.0,
        -30.0f64..30.0,
    )
        .prop_map(|(a, b, a1, b1, mu, nu, c)| demand(a, b, a1, b1, mu, nu, c))
}

fn stable_supply() -> impl Strategy<Value = Model> {
    (
        0.0f64..50.0,
        -10.0f64..-0.5,
        -20.0f64..20.0,
        0.5f64..10.0,
        0.2f64..5.0,
        0.05f64..=1.0,
        0.0f64..=1.0,
        -30.0f64..30.0,
    )
        .prop_map(|(alpha, beta, alpha1, beta1, delta, mu, nu, c)| {
            Model::Supply(SupplyModel {
                alpha,
                beta,
                alpha1,
                beta1,
                delta,
                mu,
                nu,
                c,
            })
        })
}

fn stable_model() -> impl Strategy<Value = Model> {
    prop_oneof![stable_demand(), stable_supply()]
}

fn ml(mu: f64, gamma: f64, z: f64) -> f64 {
    mittag_leffler(mu, gamma, z).unwrap()
}

/// `C E_μ(λt^μ) + ξ t^μ E_{μ,μ+1}(λt^μ)`.
fn caputo_reference(d: &DerivedParams, c: f64, t: f64) -> f64 {
    let tm = t.powf(d.mu);
    c * ml(d.mu, 1.0, d.lam * tm) + d.xi * tm * ml(d.mu, d.mu + 1.0, d.lam * tm)
}

/// `C t^{μ-1} E_{μ,μ}(λt^μ) + ξ t^μ E_{μ,μ+1}(λt^μ)`.
fn rl_reference(d: &DerivedParams, c: f64, t: f64) -> f64 {
    let tm = t.powf(d.mu);
    c * t.powf(d.mu - 1.0) * ml(d.mu, d.mu, d.lam * tm)
        + d.xi * tm * ml(d.mu, d.mu + 1.0, d.lam * tm)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

#[test]
fn tables_match_high_precision_values() {
    let reference = common::reference();
    for (name, model) in [
        ("demand", example_demand(20.0)),
        ("supply", example_supply(20.0)),
    ] {
        for mu in [0.1, 0.5, 0.9] {
            let t = table(&model, &[mu], &DEFAULT_NUS, &TABLE_TIMES).unwrap();
            for row in &t.rows {
                let expected = &reference.tables[name][&mu.to_string()][&row.nu.to_string()];
                for (v, e) in row.cells.iter().zip(expected) {
                    assert!(
                        common::rel_err(*v, *e) < 1e-10,
                        "{name} mu={mu} nu={}: {v} vs {e}",
                        row.nu
                    );
                }
            }
        }
    }
}

#[test]
fn equilibrium_fixed_point() {
    // ξ = 0 (α = α₁) and C = 0 leave p ≡ -ξ/λ = 0
    for (mu, nu) in [(0.3, 0.0), (0.7, 0.5), (1.0, 1.0)] {
        let d = demand(5.0, -2.0, 5.0, 3.0, mu, nu, 0.0).derive().unwrap();
        for t in [0.1, 1.0, 50.0, 1e6] {
            assert_eq!(price_at(&d, 0.0, t).unwrap(), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn caputo_reduction(model in stable_model(), t in 0.1f64..1000.0) {
        let d = model.with_orders(model.derive().unwrap().mu, 1.0).derive().unwrap();
        let c = model.c();
        let p = price_at(&d, c, t).unwrap();
        prop_assert!(close(p, caputo_price(&d, c, t).unwrap(), 1e-10));
        prop_assert!(close(p, caputo_reference(&d, c, t), 1e-10), "{p} vs {}", caputo_reference(&d, c, t));
    }

    #[test]
    fn riemann_liouville_reduction(model in stable_model(), t in 0.1f64..1000.0) {
        let d = model.with_orders(model.derive().unwrap().mu, 0.0).derive().unwrap();
        let c = model.c();
        let p = price_at(&d, c, t).unwrap();
        prop_assert!(close(p, rl_price(&d, c, t).unwrap(), 1e-10));
        prop_assert!(close(p, rl_reference(&d, c, t), 1e-10), "{p} vs {}", rl_reference(&d, c, t));
    }

    #[test]
    fn classical_limit(model in stable_model(), t in 0.1f64..1000.0) {
        let d = model.with_orders(1.0, 1.0).derive().unwrap();
        let c = model.c();
        let r = d.xi / d.lam;
        let expected = (c + r) * (d.lam * t).exp() - r;
        prop_assert!(close(price_at(&d, c, t).unwrap(), expected, 1e-8));
    }

    #[test]
    fn equilibrium_is_delta_free(model in stable_supply(), delta in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
        let Model::Supply(m) = model else { unreachable!() };
        let a = model.derive().unwrap();
        let b = Model::Supply(SupplyModel { delta, ..m }).derive().unwrap();
        prop_assert_eq!(a.p_e, b.p_e);
    }

    #[test]
    fn converges_to_equilibrium(model in stable_model(), mu in 0.5f64..=1.0, nu in prop_oneof![Just(1.0), 0.0f64..1.0]) {
        let d = model.with_orders(mu, nu).derive().unwrap();
        prop_assume!(d.lam <= -0.5);
        let c = model.c();
        let gaps: Vec<f64> = [1e5, 1e6, 1e7, 1e8]
            .iter()
            .map(|&t| price_at(&d, c, t).unwrap() - d.p_e)
            .collect();
        // the two decaying terms can cancel once; between same-sign samples the gap shrinks
        for w in gaps.windows(2) {
            if w[0].signum() == w[1].signum() {
                prop_assert!(w[1].abs() <= w[0].abs(), "{gaps:?}");
            }
        }
        prop_assert!(gaps[3].abs() <= gaps[0].abs(), "{gaps:?}");
        prop_assert!(gaps[3].abs() < 1e-2, "{gaps:?}");
    }

    #[test]
    fn limit_is_minus_xi_over_lambda(model in stable_model()) {
        let d = model.derive().unwrap();
        prop_assert!(d.stable);
        prop_assert!(close(-d.xi / d.lam, d.p_e, 1e-12));
    }
}
