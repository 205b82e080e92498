//! Fractional relaxation `D^γ u + B u = f(t)`, `u(0) = A`.
//!
//! Two discretizations:
//!
//! * implicit L1 stepping on any mesh,
//!   `(χ_n^n/Γ(1-γ) + B) u_{n+1} = f(t_{n+1}) + Γ(1-γ)^{-1} [Σ_{k=1}^{n} (χ_k^n - χ_{k-1}^n) u_k + χ_0^n u_0]`;
//! * explicit left-endpoint product quadrature of the equivalent Volterra
//!   equation, `u_{k+1} = A + Γ(γ)^{-1} Σ_{j=0}^{k} w_{j,k+1} (f(t_j) - B u_j)`
//!   with `w_{j,k+1} = [(t_{k+1} - t_j)^γ - (t_{k+1} - t_{j+1})^γ] / γ`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::caputo::{fill_weights, pow_diff};
use crate::error::{check_order, Error, Result};
use crate::mesh::{MeshStrategy, TimeMesh};
use crate::special::gamma;

/// Source term `f(t)`.
pub type TimeSource = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct RelaxProblem {
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub source: Option<TimeSource>,
    pub horizon: f64,
}

impl fmt::Debug for RelaxProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelaxProblem")
            .field("gamma", &self.gamma)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("source", &self.source.as_ref().map(|_| "fn(t)"))
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl RelaxProblem {
    pub fn new(gamma: f64, a: f64, b: f64, horizon: f64) -> Result<Self> {
        let p = Self {
            gamma,
            a,
            b,
            source: None,
            horizon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_source(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(f));
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_order("gamma", self.gamma)?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::domain(
                "T",
                self.horizon,
                "horizon must be positive and finite",
            ));
        }
        if !self.a.is_finite() {
            return Err(Error::domain("A", self.a, "initial value must be finite"));
        }
        if !self.b.is_finite() {
            return Err(Error::domain(
                "B",
                self.b,
                "relaxation coefficient must be finite",
            ));
        }
        Ok(())
    }

    fn source_at(&self, t: f64) -> f64 {
        self.source.as_ref().map_or(0.0, |f| f(t))
    }

    fn check_mesh(&self, mesh: &TimeMesh) -> Result<()> {
        self.validate()?;
        check_horizon(mesh, self.horizon)
    }
}

pub(crate) fn check_horizon(mesh: &TimeMesh, horizon: f64) -> Result<()> {
    if (mesh.horizon() - horizon).abs() > 1e-12 * horizon {
        return Err(Error::HorizonMismatch {
            mesh: mesh.horizon(),
            problem: horizon,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelaxScheme {
    SfdmImplicit,
    UniformImplicit,
    /// Implicit stepping on the legacy non-uniform mesh.
    LegacyImplicit,
    SfdmExplicitVolterra,
    ClockExplicitVolterra,
}

impl RelaxScheme {
    pub const ALL: [RelaxScheme; 5] = [
        RelaxScheme::SfdmImplicit,
        RelaxScheme::UniformImplicit,
        RelaxScheme::LegacyImplicit,
        RelaxScheme::SfdmExplicitVolterra,
        RelaxScheme::ClockExplicitVolterra,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            RelaxScheme::SfdmImplicit => "sfdm-implicit",
            RelaxScheme::UniformImplicit => "uniform-implicit",
            RelaxScheme::LegacyImplicit => "legacy-implicit",
            RelaxScheme::SfdmExplicitVolterra => "sfdm-explicit",
            RelaxScheme::ClockExplicitVolterra => "clock-explicit",
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(
            self,
            RelaxScheme::SfdmExplicitVolterra | RelaxScheme::ClockExplicitVolterra
        )
    }

    /// Mesh family the scheme runs on; power-law meshes use the order `gamma`.
    pub fn strategy(&self, gamma: f64) -> MeshStrategy {
        match self {
            RelaxScheme::SfdmImplicit | RelaxScheme::SfdmExplicitVolterra => {
                MeshStrategy::PowerLaw { alpha: gamma }
            }
            RelaxScheme::UniformImplicit | RelaxScheme::ClockExplicitVolterra => {
                MeshStrategy::Uniform
            }
            RelaxScheme::LegacyImplicit => MeshStrategy::LegacyNonUniform,
        }
    }

    fn implicit_for(mesh: &TimeMesh) -> Self {
        match mesh.strategy() {
            MeshStrategy::PowerLaw { .. } => RelaxScheme::SfdmImplicit,
            MeshStrategy::Uniform => RelaxScheme::UniformImplicit,
            MeshStrategy::LegacyNonUniform => RelaxScheme::LegacyImplicit,
        }
    }
}

impl fmt::Display for RelaxScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for RelaxScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelaxScheme::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown relaxation scheme `{s}`")))
    }
}

/// Nodal values `u_0 ..= u_N` on the mesh they were computed on.
#[derive(Debug, Clone)]
pub struct RelaxSolution {
    mesh: TimeMesh,
    u: Vec<f64>,
    scheme: RelaxScheme,
}

impl RelaxSolution {
    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn scheme(&self) -> RelaxScheme {
        self.scheme
    }

    pub fn final_value(&self) -> f64 {
        self.u[self.u.len() - 1]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.u
    }
}

/// Builds the scheme's mesh with `n` intervals and solves.
pub fn solve_relax(p: &RelaxProblem, scheme: RelaxScheme, n: usize) -> Result<RelaxSolution> {
    p.validate()?;
    let mesh = scheme.strategy(p.gamma).build(p.horizon, n)?;
    if scheme.is_explicit() {
        solve_relax_explicit_volterra(p, &mesh)
    } else {
        solve_relax_implicit(p, &mesh)
    }
}

/// Implicit L1 stepping. `γ = 1` is backward Euler.
pub fn solve_relax_implicit(p: &RelaxProblem, mesh: &TimeMesh) -> Result<RelaxSolution> {
    p.check_mesh(mesh)?;
    let nodes = mesh.nodes();
    let n_int = mesh.intervals();
    let mut u = Vec::with_capacity(n_int + 1);
    u.push(p.a);

    if p.gamma == 1.0 {
        for n in 0..n_int {
            let tau = nodes[n + 1] - nodes[n];
            let next = (u[n] + tau * p.source_at(nodes[n + 1])) / (1.0 + p.b * tau);
            u.push(next);
        }
    } else {
        let inv_g = 1.0 / gamma(1.0 - p.gamma);
        let mut chi = Vec::with_capacity(n_int);
        for n in 0..n_int {
            fill_weights(mesh, p.gamma, n, &mut chi);
            let mut hist = chi[0] * u[0];
            for k in 1..=n {
                hist += (chi[k] - chi[k - 1]) * u[k];
            }
            let lhs = chi[n] * inv_g + p.b;
            if lhs == 0.0 {
                return Err(Error::SingularSystem { row: n + 1 });
            }
            u.push((p.source_at(nodes[n + 1]) + inv_g * hist) / lhs);
        }
    }

    Ok(RelaxSolution {
        mesh: mesh.clone(),
        u,
        scheme: RelaxScheme::implicit_for(mesh),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VolterraOptions {
    /// Build the full lower-triangular weight matrix before stepping.
    pub precompute: bool,
}

pub fn solve_relax_explicit_volterra(p: &RelaxProblem, mesh: &TimeMesh) -> Result<RelaxSolution> {
    solve_relax_explicit_volterra_with(p, mesh, VolterraOptions::default())
}

/// Explicit Volterra quadrature on power-law (S-FDM) or uniform (clock) meshes.
pub fn solve_relax_explicit_volterra_with(
    p: &RelaxProblem,
    mesh: &TimeMesh,
    opts: VolterraOptions,
) -> Result<RelaxSolution> {
    p.check_mesh(mesh)?;
    let scheme = match mesh.strategy() {
        MeshStrategy::PowerLaw { .. } => RelaxScheme::SfdmExplicitVolterra,
        MeshStrategy::Uniform => RelaxScheme::ClockExplicitVolterra,
        other @ MeshStrategy::LegacyNonUniform => {
            return Err(Error::UnsupportedMesh(other.label()))
        }
    };
    let nodes = mesh.nodes();
    let n_int = mesh.intervals();
    let inv_g = 1.0 / gamma(p.gamma);
    let forcing = |j: usize, u: f64| p.source_at(nodes[j]) - p.b * u;

    let mut u = Vec::with_capacity(n_int + 1);
    u.push(p.a);
    // g_j = f(t_j) - B u_j, kept alongside u
    let mut g = Vec::with_capacity(n_int + 1);
    g.push(forcing(0, p.a));

    if opts.precompute {
        let matrix = volterra_matrix(nodes, p.gamma);
        for (k, row) in matrix.iter().enumerate() {
            let s: f64 = row.iter().zip(&g).map(|(w, gj)| w * gj).sum();
            let next = p.a + inv_g * s;
            u.push(next);
            g.push(forcing(k + 1, next));
        }
    } else {
        let mut row = Vec::with_capacity(n_int);
        for k in 0..n_int {
            volterra_row(nodes, p.gamma, k, &mut row);
            let s: f64 = row.iter().zip(&g).map(|(w, gj)| w * gj).sum();
            let next = p.a + inv_g * s;
            u.push(next);
            g.push(forcing(k + 1, next));
        }
    }

    Ok(RelaxSolution {
        mesh: mesh.clone(),
        u,
        scheme,
    })
}

/// Weights `w_{j,k+1}`, `j = 0..=k`.
fn volterra_row(nodes: &[f64], gamma: f64, k: usize, out: &mut Vec<f64>) {
    out.clear();
    let target = nodes[k + 1];
    out.extend((0..=k).map(|j| {
        let a = target - nodes[j];
        let b = target - nodes[j + 1];
        pow_diff(a, b, nodes[j + 1] - nodes[j], gamma) / gamma
    }));
}

/// Lower-triangular matrix whose row `k` is [`volterra_row`] for step `k`.
pub fn volterra_matrix(nodes: &[f64], gamma: f64) -> Vec<Vec<f64>> {
    (0..nodes.len().saturating_sub(1))
        .map(|k| {
            let mut row = Vec::with_capacity(k + 1);
            volterra_row(nodes, gamma, k, &mut row);
            row
        })
        .collect()
}
