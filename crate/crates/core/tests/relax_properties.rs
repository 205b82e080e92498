use fracstep::mlf::exact_relaxation;
use fracstep::relax::{solve_relax, RelaxProblem, RelaxScheme};

mod common;
use common::log2_slope;

#[test]
fn implicit_sfdm_is_positive_and_non_increasing() {
    for gamma in [0.4, 0.5, 0.8] {
        for b in [1.0, 3.0, 5.0] {
            for n in [25, 100, 400] {
                let p = RelaxProblem::new(gamma, 10.0, b, 20.0).unwrap();
                let sol = solve_relax(&p, RelaxScheme::SfdmImplicit, n).unwrap();
                let u = sol.u();
                assert!(u.iter().all(|&v| v > 0.0), "gamma={gamma} B={b} N={n}");
                assert!(
                    u.windows(2).all(|w| w[1] <= w[0]),
                    "gamma={gamma} B={b} N={n}"
                );
            }
        }
    }
}

#[test]
fn convergence_slopes() {
    let ns = [25, 50, 100, 200];
    for gamma in [0.4, 0.5, 0.7] {
        let p = RelaxProblem::new(gamma, 10.0, 1.0, 20.0).unwrap();
        let exact = exact_relaxation(10.0, 1.0, gamma, 20.0).unwrap();
        let mre = |scheme, n| {
            let u = solve_relax(&p, scheme, n).unwrap().final_value();
            ((u - exact) / exact).abs()
        };
        let sfdm: Vec<f64> = ns
            .iter()
            .map(|&n| mre(RelaxScheme::SfdmImplicit, n))
            .collect();
        let uni: Vec<f64> = ns
            .iter()
            .map(|&n| mre(RelaxScheme::UniformImplicit, n))
            .collect();
        let s = log2_slope(&ns, &sfdm);
        let u = log2_slope(&ns, &uni);
        assert!(
            (s - (2.0 - gamma)).abs() <= 0.15,
            "gamma={gamma} sfdm slope {s}"
        );
        assert!((u - 1.0).abs() <= 0.15, "gamma={gamma} uniform slope {u}");
    }
}

#[test]
fn implicit_and_explicit_power_law_schemes_converge_together() {
    let p = RelaxProblem::new(0.5, 10.0, 1.0, 20.0).unwrap();
    let gaps: Vec<f64> = [100, 200, 400]
        .iter()
        .map(|&n| {
            let a = solve_relax(&p, RelaxScheme::SfdmImplicit, n).unwrap();
            let b = solve_relax(&p, RelaxScheme::SfdmExplicitVolterra, n).unwrap();
            a.u()
                .iter()
                .zip(b.u())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
}

#[test]
fn clock_time_quadrature_oscillates_at_large_coefficient() {
    let p = RelaxProblem::new(0.5, 10.0, 5.0, 10.0).unwrap();
    let sol = solve_relax(&p, RelaxScheme::ClockExplicitVolterra, 100).unwrap();
    assert!(sol.u().iter().any(|&v| v < 0.0));
}

#[test]
fn power_law_quadrature_is_monotone_at_moderate_coefficients() {
    for b in [3.0, 4.0] {
        let p = RelaxProblem::new(0.5, 10.0, b, 10.0).unwrap();
        let sol = solve_relax(&p, RelaxScheme::SfdmExplicitVolterra, 100).unwrap();
        let u = sol.u();
        assert!(u.iter().all(|&v| v >= 0.0), "B={b}");
        assert!(u.windows(2).all(|w| w[1] <= w[0]), "B={b}");
    }
}

#[test]
fn source_term_is_sampled_at_nodes() {
    // D^γ u = Γ(2) t^{1-γ}/Γ(2-γ) has solution u = t, reproduced exactly by L1
    let gamma = 0.6;
    let g = fracstep::special::gamma(2.0 - gamma);
    let p = RelaxProblem::new(gamma, 0.0, 0.0, 4.0)
        .unwrap()
        .with_source(move |t| t.powf(1.0 - gamma) / g);
    for scheme in [
        RelaxScheme::SfdmImplicit,
        RelaxScheme::UniformImplicit,
        RelaxScheme::LegacyImplicit,
    ] {
        let sol = solve_relax(&p, scheme, 50).unwrap();
        for (t, u) in sol.mesh().nodes().iter().zip(sol.u()) {
            assert!((u - t).abs() < 1e-10 * (1.0 + t), "{scheme}: {u} vs {t}");
        }
    }
}
