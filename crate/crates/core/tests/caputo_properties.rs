use fracstep::caputo::{caputo_apply, l1_weights, truncation_bound};
use fracstep::mesh::{MeshStrategy, TimeMesh};
use fracstep::special::gamma;
use proptest::prelude::*;

mod common;
use common::{gauss_legendre_20, quadrature_caputo};

const ALPHAS: [f64; 4] = [0.4, 0.5, 0.6, 0.8];

fn families(alpha: f64) -> [MeshStrategy; 3] {
    [
        MeshStrategy::PowerLaw { alpha },
        MeshStrategy::Uniform,
        MeshStrategy::LegacyNonUniform,
    ]
}

#[test]
fn weights_are_monotone_and_positive() {
    for alpha in ALPHAS {
        for strategy in families(alpha) {
            for n_int in [1usize, 8, 32, 128] {
                let mesh = strategy.build(5.0, n_int).unwrap();
                let horizon_floor = mesh.horizon().powf(-alpha);
                for n in 0..n_int {
                    let w = l1_weights(&mesh, alpha, n).unwrap();
                    let chi = w.chi();
                    assert!(chi.windows(2).all(|p| p[0] <= p[1]), "{strategy:?} n={n}");
                    assert!(chi[0] > 0.0);
                    // the first weight is a mean of (t_{n+1} - ξ)^{-α} over [0, t_1]
                    let t_next = mesh.node(n + 1);
                    assert!(chi[0] > t_next.powf(-alpha) * (1.0 - 1e-12));
                    assert!(t_next.powf(-alpha) >= horizon_floor);
                }
                // literal floor on the last step
                let g = gamma(1.0 - alpha);
                let last = mesh.node(n_int);
                if n_int > 1 {
                    let lhs = (last - mesh.node(1)).powf(-alpha) / g;
                    assert!(lhs >= mesh.horizon().powf(-alpha) / g);
                }
            }
        }
    }
}

#[test]
fn linear_functions_are_reproduced() {
    let (a, b) = (1.75, -3.5);
    for alpha in ALPHAS {
        for strategy in families(alpha) {
            let mesh = strategy.build(12.0, 64).unwrap();
            let hist: Vec<f64> = mesh.nodes().iter().map(|t| a + b * t).collect();
            for n in 0..64 {
                let w = l1_weights(&mesh, alpha, n).unwrap();
                let t = mesh.node(n + 1);
                let exact = b * t.powf(1.0 - alpha) / gamma(2.0 - alpha);
                let got = caputo_apply(&hist[..n + 2], &w).unwrap();
                assert!(
                    ((got - exact) / exact).abs() <= 1e-10,
                    "{strategy:?} alpha={alpha} n={n}: {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn quadratic_error_within_truncation_bound() {
    for alpha in ALPHAS {
        for n_int in [16usize, 32, 64] {
            for horizon in [1.0, 10.0] {
                let mesh = TimeMesh::power_law(horizon, n_int, alpha).unwrap();
                let hist: Vec<f64> = mesh.nodes().iter().map(|t| t * t).collect();
                for n in 0..n_int {
                    let w = l1_weights(&mesh, alpha, n).unwrap();
                    let t = mesh.node(n + 1);
                    let exact = 2.0 * t.powf(2.0 - alpha) / gamma(3.0 - alpha);
                    let err = (caputo_apply(&hist[..n + 2], &w).unwrap() - exact).abs();
                    let bound = truncation_bound(&mesh, alpha, n + 1, 2.0).unwrap();
                    assert!(
                        err <= bound,
                        "alpha={alpha} N={n_int} n={n}: {err} > {bound}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_quadrature_oracle(
        alpha_idx in 0usize..4,
        strategy_idx in 0usize..3,
        n_int in 1usize..=8,
        horizon in 0.5f64..20.0,
        values in prop::collection::vec(-5.0f64..5.0, 9),
    ) {
        let alpha = ALPHAS[alpha_idx];
        let mesh = families(alpha)[strategy_idx].build(horizon, n_int).unwrap();
        let rule = gauss_legendre_20();
        let hist = &values[..=n_int];
        for n in 0..n_int {
            let (oracle, scale) = quadrature_caputo(mesh.nodes(), hist, alpha, n, &rule);
            let w = l1_weights(&mesh, alpha, n).unwrap();
            let got = caputo_apply(&hist[..n + 2], &w).unwrap() * gamma(1.0 - alpha);
            prop_assert!(
                (got - oracle).abs() <= 1e-10 * scale.max(1.0),
                "n={} got={} oracle={}", n, got, oracle
            );
        }
    }
}
