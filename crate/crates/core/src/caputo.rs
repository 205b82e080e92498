//! L1 discretization of the Caputo derivative on an arbitrary time mesh.
//!
//! For a target step `n` (derivative evaluated at `t_{n+1}`) the weights are
//! the interval means of the kernel,
//!
//! ```text
//! χ_k^n = 1/τ_{k+1} ∫_{t_k}^{t_{k+1}} (t_{n+1} - ξ)^{-α} dξ
//!       = [(t_{n+1} - t_k)^{1-α} - (t_{n+1} - t_{k+1})^{1-α}] / ((1-α) τ_{k+1}),
//! ```
//!
//! and the discrete operator is `Γ(1-α)^{-1} Σ_{k=0}^{n} (u_{k+1} - u_k) χ_k^n`.
//! On power-law meshes the same weights are evaluated from integer index
//! powers (`b_{k,j}`), which is what the solvers use there.

use crate::error::{check_open_order, Error, Result};
use crate::mesh::{index_power, MeshStrategy, TimeMesh};
use crate::special::gamma;

/// The weights `χ_0^n ..= χ_n^n` for one target step.
#[derive(Debug, Clone)]
pub struct CaputoWeights<'m> {
    n: usize,
    alpha: f64,
    chi: Vec<f64>,
    mesh: &'m TimeMesh,
}

impl<'m> CaputoWeights<'m> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn mesh(&self) -> &'m TimeMesh {
        self.mesh
    }
}

/// `a^β - b^β` for `a > b >= 0` with `a - b = d`, without cancellation.
#[inline]
pub(crate) fn pow_diff(a: f64, b: f64, d: f64, beta: f64) -> f64 {
    if b <= 0.0 {
        a.powf(beta)
    } else {
        b.powf(beta) * (beta * (d / b).ln_1p()).exp_m1()
    }
}

fn check_step(mesh: &TimeMesh, n: usize) -> Result<()> {
    if n >= mesh.intervals() {
        return Err(Error::InvalidInput(format!(
            "target step n = {n} out of range for a mesh with {} intervals",
            mesh.intervals()
        )));
    }
    Ok(())
}

/// Weights for step `n`. Uses the index-power form on power-law meshes and
/// the nodal form otherwise.
pub fn l1_weights(mesh: &TimeMesh, alpha: f64, n: usize) -> Result<CaputoWeights<'_>> {
    check_open_order("alpha", alpha)?;
    check_step(mesh, n)?;
    let mut chi = Vec::with_capacity(n + 1);
    fill_weights(mesh, alpha, n, &mut chi);
    Ok(CaputoWeights {
        n,
        alpha,
        chi,
        mesh,
    })
}

/// Weights from node differences, valid on any mesh.
pub fn l1_weights_nodal(mesh: &TimeMesh, alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_open_order("alpha", alpha)?;
    check_step(mesh, n)?;
    let mut chi = Vec::with_capacity(n + 1);
    fill_nodal(mesh.nodes(), alpha, n, &mut chi);
    Ok(chi)
}

/// Weights from the index-power form
/// `Δt_α^{(1-α)/α} [b_{n+1,k}^{1-α} - b_{n+1,k+1}^{1-α}] / ((1-α) Δt_α^{1/α} b_{k+1,k})`.
/// Only defined on power-law meshes.
pub fn l1_weights_power_law(mesh: &TimeMesh, alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_open_order("alpha", alpha)?;
    check_step(mesh, n)?;
    let MeshStrategy::PowerLaw { alpha: mesh_alpha } = mesh.strategy() else {
        return Err(Error::UnsupportedMesh(mesh.strategy().label()));
    };
    let mut chi = Vec::with_capacity(n + 1);
    fill_power_law(
        mesh.power_law_step().unwrap_or_default(),
        mesh_alpha,
        alpha,
        n,
        &mut chi,
    );
    Ok(chi)
}

/// Unchecked weight evaluation used by the solvers; `out` is overwritten.
pub(crate) fn fill_weights(mesh: &TimeMesh, alpha: f64, n: usize, out: &mut Vec<f64>) {
    match mesh.strategy() {
        MeshStrategy::PowerLaw { alpha: mesh_alpha } if mesh_alpha < 1.0 => fill_power_law(
            mesh.power_law_step().unwrap_or_default(),
            mesh_alpha,
            alpha,
            n,
            out,
        ),
        _ => fill_nodal(mesh.nodes(), alpha, n, out),
    }
}

fn fill_nodal(nodes: &[f64], alpha: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let beta = 1.0 - alpha;
    let target = nodes[n + 1];
    out.extend((0..=n).map(|k| {
        let tau = nodes[k + 1] - nodes[k];
        let a = target - nodes[k];
        let b = target - nodes[k + 1];
        pow_diff(a, b, tau, beta) / (beta * tau)
    }));
}

fn fill_power_law(dt: f64, mesh_alpha: f64, alpha: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let beta = 1.0 - alpha;
    let p = 1.0 / mesh_alpha;
    // clock-time unit: t_k = unit * k^{1/α_mesh}
    let unit = dt.powf(p);
    let scale = unit.powf(beta) / (beta * unit);
    let top = index_power(n + 1, p);
    let mut lo = 0.0; // k^p
    out.extend((0..=n).map(|k| {
        let hi = index_power(k + 1, p);
        let a = top - lo;
        let b = if k == n { 0.0 } else { top - hi };
        let w = scale * pow_diff(a, b, hi - lo, beta) / (hi - lo);
        lo = hi;
        w
    }));
}

/// `Γ(1-α)^{-1} Σ_{k=0}^{n} (u_{k+1} - u_k) χ_k^n` for a history
/// `u(t_0) ..= u(t_{n+1})`.
pub fn caputo_apply(u_hist: &[f64], w: &CaputoWeights<'_>) -> Result<f64> {
    let expected = w.n + 2;
    if u_hist.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: u_hist.len(),
        });
    }
    let sum: f64 = u_hist
        .windows(2)
        .zip(&w.chi)
        .map(|(pair, chi)| (pair[1] - pair[0]) * chi)
        .sum();
    Ok(sum / gamma(1.0 - w.alpha))
}

/// Local truncation bound at node `t_n` for a `C²` function with
/// `max |f''| <= f2max` on `[0, t_n]`:
/// `(1/(2(1-α)) + 1/8) τ_n^{2-α} f2max`.
pub fn truncation_bound(mesh: &TimeMesh, alpha: f64, n: usize, f2max: f64) -> Result<f64> {
    check_open_order("alpha", alpha)?;
    if n == 0 || n > mesh.intervals() {
        return Err(Error::InvalidInput(format!(
            "node index n = {n} must lie in 1..={}",
            mesh.intervals()
        )));
    }
    if f2max.is_nan() || f2max < 0.0 {
        return Err(Error::domain("f2max", f2max, "must be >= 0"));
    }
    let tau = mesh.step(n);
    Ok((0.5 / (1.0 - alpha) + 0.125) * tau.powf(2.0 - alpha) * f2max)
}
