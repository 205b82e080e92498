//! Time meshes on `[0, T]`.
//!
//! Three families are supported:
//!
//! * **power-law**: equal steps `Δt_α = T^α / N` on the transformed axis
//!   `t^α`, i.e. `t_k = T (k/N)^{1/α}`. Dense near `t = 0`, sparse late.
//! * **uniform**: `t_k = k T / N`.
//! * **legacy non-uniform**: linearly decreasing steps
//!   `τ_n = (N + 1 - n) μ` with `μ = 2T / (N (N + 1))`.
//!
//! Nodes are always generated from closed forms, never by accumulating steps,
//! so `t_N == T` and the even-indexed nodes of a 2N mesh reproduce the N mesh.

use serde::{Deserialize, Serialize};

use crate::error::{check_order, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeshStrategy {
    PowerLaw { alpha: f64 },
    Uniform,
    LegacyNonUniform,
}

impl MeshStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            MeshStrategy::PowerLaw { .. } => "power-law",
            MeshStrategy::Uniform => "uniform",
            MeshStrategy::LegacyNonUniform => "legacy",
        }
    }

    /// Builds the mesh of this family with `n` intervals on `[0, horizon]`.
    pub fn build(&self, horizon: f64, n: usize) -> Result<TimeMesh> {
        match *self {
            MeshStrategy::PowerLaw { alpha } => TimeMesh::power_law(horizon, n, alpha),
            MeshStrategy::Uniform => TimeMesh::uniform(horizon, n),
            MeshStrategy::LegacyNonUniform => TimeMesh::legacy_nonuniform(horizon, n),
        }
    }
}

/// Ordered nodes `0 = t_0 < t_1 < ... < t_N = T`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
    strategy: MeshStrategy,
    horizon: f64,
}

fn check_horizon_and_count(horizon: f64, n: usize) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(
            "T",
            horizon,
            "horizon must be positive and finite",
        ));
    }
    if n == 0 {
        return Err(Error::domain("N", 0.0, "need at least one interval"));
    }
    Ok(())
}

impl TimeMesh {
    /// Power-law mesh `t_k = T (k/N)^{1/α}`. With `α = 1` this is the
    /// uniform mesh node for node.
    pub fn power_law(horizon: f64, n: usize, alpha: f64) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        check_order("alpha", alpha)?;
        let inv = 1.0 / alpha;
        let nf = n as f64;
        let nodes = (0..=n)
            .map(|k| {
                if k == n {
                    horizon
                } else if alpha == 1.0 {
                    horizon * k as f64 / nf
                } else {
                    horizon * (k as f64 / nf).powf(inv)
                }
            })
            .collect();
        Ok(Self {
            nodes,
            strategy: MeshStrategy::PowerLaw { alpha },
            horizon,
        })
    }

    pub fn uniform(horizon: f64, n: usize) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        let nf = n as f64;
        let nodes = (0..=n)
            .map(|k| {
                if k == n {
                    horizon
                } else {
                    horizon * k as f64 / nf
                }
            })
            .collect();
        Ok(Self {
            nodes,
            strategy: MeshStrategy::Uniform,
            horizon,
        })
    }

    /// Steps `τ_n = (N + 1 - n) μ`; the partial sums give
    /// `t_n = T n (2N + 1 - n) / (N (N + 1))`.
    pub fn legacy_nonuniform(horizon: f64, n: usize) -> Result<Self> {
        check_horizon_and_count(horizon, n)?;
        let nf = n as f64;
        let denom = nf * (nf + 1.0);
        let nodes = (0..=n)
            .map(|k| {
                if k == n {
                    horizon
                } else {
                    let kf = k as f64;
                    horizon * (kf * (2.0 * nf + 1.0 - kf)) / denom
                }
            })
            .collect();
        Ok(Self {
            nodes,
            strategy: MeshStrategy::LegacyNonUniform,
            horizon,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> f64 {
        self.nodes[k]
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn strategy(&self) -> MeshStrategy {
        self.strategy
    }

    /// `τ_k = t_k - t_{k-1}` for `1 <= k <= N`.
    pub fn step(&self, k: usize) -> f64 {
        debug_assert!(k >= 1 && k < self.nodes.len());
        self.nodes[k] - self.nodes[k - 1]
    }

    /// All steps `τ_1 ..= τ_N`.
    pub fn steps(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `Δt_α = T^α / N` for power-law meshes.
    pub fn power_law_step(&self) -> Option<f64> {
        match self.strategy {
            MeshStrategy::PowerLaw { alpha } => {
                Some(self.horizon.powf(alpha) / self.intervals() as f64)
            }
            _ => None,
        }
    }
}

/// `b_{k,j} = k^{1/α} - j^{1/α}`.
pub fn b_coeff(k: usize, j: usize, alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(index_power(k, 1.0 / alpha) - index_power(j, 1.0 / alpha))
}

#[inline]
pub(crate) fn index_power(k: usize, p: f64) -> f64 {
    if p == 1.0 {
        k as f64
    } else {
        (k as f64).powf(p)
    }
}
