#![allow(dead_code)]

/// 20-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_20.
pub fn gauss_legendre_20() -> Vec<(f64, f64)> {
    const N: usize = 20;
    (0..N)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// ∫_lo^hi s^{-α} ds by Gauss-Legendre on panels [s, 2s] graded toward s = 0.
pub fn kernel_integral(lo: f64, hi: f64, alpha: f64, rule: &[(f64, f64)]) -> f64 {
    let panel = |a: f64, b: f64| -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        rule.iter()
            .map(|(x, w)| w * (mid + half * x).powf(-alpha))
            .sum::<f64>()
            * half
    };
    let mut total = 0.0;
    let mut b = hi;
    let floor = if lo > 0.0 { lo } else { hi * 1e-300 };
    while b > floor {
        let a = (0.5 * b).max(floor);
        total += panel(a, b);
        b = a;
    }
    total
}

/// Unnormalized L1 operator `Σ slope_k ∫ (t_{n+1} - ξ)^{-α} dξ` by quadrature,
/// with the sum of absolute terms as a scale.
pub fn quadrature_caputo(
    nodes: &[f64],
    hist: &[f64],
    alpha: f64,
    n: usize,
    rule: &[(f64, f64)],
) -> (f64, f64) {
    let target = nodes[n + 1];
    let mut value = 0.0;
    let mut scale = 0.0;
    for k in 0..=n {
        let (a, b) = (nodes[k], nodes[k + 1]);
        let slope = (hist[k + 1] - hist[k]) / (b - a);
        let term = slope * kernel_integral(target - b, target - a, alpha, rule);
        value += term;
        scale += term.abs();
    }
    (value, scale)
}

/// Least-squares slope of `-log2(err)` against `log2(n)`.
pub fn log2_slope(ns: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log2()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -sxy / sxx
}
