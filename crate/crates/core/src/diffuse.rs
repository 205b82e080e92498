//! One-dimensional time-fractional diffusion `∂^α u/∂t^α = D ∂²u/∂x² + f(x, t)`
//! on `[0, L]`, implicit L1 stepping on any time mesh, second-order central
//! differences on `M` equal space intervals.
//!
//! Zero-flux ends use mirror ghost nodes `u_{-1} = u_1`, `u_{M+1} = u_{M-1}`,
//! which makes the trapezoidal mass an exact discrete invariant when `f = 0`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::caputo::fill_weights;
use crate::error::{check_open_order, Error, Result};
use crate::mesh::{MeshStrategy, TimeMesh};
use crate::mlf::sine_mode;
use crate::relax::check_horizon;
use crate::special::gamma;
use crate::tridiag::Tridiagonal;

/// Source term `f(x, t)`.
pub type FieldSource = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialCondition {
    /// `sin(πx/L)`.
    Sine,
    /// `height` at `x = L/2`, zero elsewhere. Needs an even `M`.
    PointSource { height: f64 },
    /// Nodal values, `M + 1` of them.
    Custom { values: Vec<f64> },
}

impl InitialCondition {
    pub fn point_source() -> Self {
        InitialCondition::PointSource { height: 2.0 }
    }

    pub fn label(&self) -> &'static str {
        match self {
            InitialCondition::Sine => "sine",
            InitialCondition::PointSource { .. } => "point",
            InitialCondition::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// `u = 0` at both ends.
    Dirichlet0,
    /// `∂u/∂x = 0` at both ends.
    NeumannZeroFlux,
}

impl Boundary {
    pub fn label(&self) -> &'static str {
        match self {
            Boundary::Dirichlet0 => "dirichlet",
            Boundary::NeumannZeroFlux => "neumann",
        }
    }
}

/// `L²/π²`, the diffusivity for which the sine mode decays as `E_α(-t^α)`.
pub fn exact_diffusivity(length: f64) -> f64 {
    length * length / (PI * PI)
}

#[derive(Clone)]
pub struct DiffuseProblem {
    pub alpha: f64,
    pub diffusivity: f64,
    pub length: f64,
    /// Number of space intervals `M`.
    pub intervals: usize,
    pub horizon: f64,
    pub ic: InitialCondition,
    pub bc: Boundary,
    pub source: Option<FieldSource>,
}

impl fmt::Debug for DiffuseProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffuseProblem")
            .field("alpha", &self.alpha)
            .field("diffusivity", &self.diffusivity)
            .field("length", &self.length)
            .field("intervals", &self.intervals)
            .field("horizon", &self.horizon)
            .field("ic", &self.ic)
            .field("bc", &self.bc)
            .field("source", &self.source.as_ref().map(|_| "fn(x, t)"))
            .finish()
    }
}

impl DiffuseProblem {
    /// Sine initial data with homogeneous Dirichlet ends.
    pub fn new(
        alpha: f64,
        diffusivity: f64,
        length: f64,
        intervals: usize,
        horizon: f64,
    ) -> Result<Self> {
        let p = Self {
            alpha,
            diffusivity,
            length,
            intervals,
            horizon,
            ic: InitialCondition::Sine,
            bc: Boundary::Dirichlet0,
            source: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_ic(mut self, ic: InitialCondition) -> Result<Self> {
        self.ic = ic;
        self.validate()?;
        Ok(self)
    }

    pub fn with_bc(mut self, bc: Boundary) -> Self {
        self.bc = bc;
        self
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(f));
        self
    }

    pub fn dx(&self) -> f64 {
        self.length / self.intervals as f64
    }

    pub fn validate(&self) -> Result<()> {
        check_open_order("alpha", self.alpha)?;
        if !(self.diffusivity >= 0.0 && self.diffusivity.is_finite()) {
            return Err(Error::domain(
                "D",
                self.diffusivity,
                "diffusivity must be >= 0 and finite",
            ));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::domain(
                "L",
                self.length,
                "length must be positive and finite",
            ));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::domain(
                "T",
                self.horizon,
                "horizon must be positive and finite",
            ));
        }
        if self.intervals < 2 {
            return Err(Error::domain(
                "M",
                self.intervals as f64,
                "need at least two space intervals",
            ));
        }
        match &self.ic {
            InitialCondition::PointSource { height } => {
                if self.intervals % 2 != 0 {
                    return Err(Error::domain(
                        "M",
                        self.intervals as f64,
                        "a point source at L/2 needs an even number of intervals",
                    ));
                }
                if !height.is_finite() {
                    return Err(Error::domain("height", *height, "must be finite"));
                }
            }
            InitialCondition::Custom { values } => {
                if values.len() != self.intervals + 1 {
                    return Err(Error::LengthMismatch {
                        expected: self.intervals + 1,
                        actual: values.len(),
                    });
                }
            }
            InitialCondition::Sine => {}
        }
        Ok(())
    }

    pub fn xgrid(&self) -> Vec<f64> {
        let m = self.intervals as f64;
        (0..=self.intervals)
            .map(|i| self.length * i as f64 / m)
            .collect()
    }

    pub fn initial_profile(&self) -> Vec<f64> {
        match &self.ic {
            InitialCondition::Sine => self
                .xgrid()
                .into_iter()
                .map(|x| sine_mode(x, self.length))
                .collect(),
            InitialCondition::PointSource { height } => {
                let mut v = vec![0.0; self.intervals + 1];
                v[self.intervals / 2] = *height;
                v
            }
            InitialCondition::Custom { values } => values.clone(),
        }
    }
}

/// Field values `u(x_i, t_n)` stored row-major, one row per time node.
#[derive(Debug, Clone)]
pub struct DiffuseSolution {
    mesh: TimeMesh,
    xgrid: Vec<f64>,
    field: Vec<f64>,
}

impl DiffuseSolution {
    pub(crate) fn from_parts(mesh: TimeMesh, xgrid: Vec<f64>, field: Vec<f64>) -> Result<Self> {
        let expected = (mesh.intervals() + 1) * xgrid.len();
        if field.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: field.len(),
            });
        }
        Ok(Self { mesh, xgrid, field })
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn xgrid(&self) -> &[f64] {
        &self.xgrid
    }

    pub fn width(&self) -> usize {
        self.xgrid.len()
    }

    /// Flat row-major `(N + 1) × (M + 1)` storage.
    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let w = self.width();
        &self.field[n * w..(n + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.field.chunks_exact(self.width())
    }

    pub fn final_row(&self) -> &[f64] {
        self.row(self.mesh.intervals())
    }
}

/// Builds the `strategy` mesh with `n` intervals and solves.
pub fn solve_diffuse(
    p: &DiffuseProblem,
    strategy: MeshStrategy,
    n: usize,
) -> Result<DiffuseSolution> {
    p.validate()?;
    let mesh = strategy.build(p.horizon, n)?;
    solve_diffuse_implicit(p, &mesh)
}

pub fn solve_diffuse_implicit(p: &DiffuseProblem, mesh: &TimeMesh) -> Result<DiffuseSolution> {
    p.validate()?;
    check_horizon(mesh, p.horizon)?;

    let xgrid = p.xgrid();
    let width = xgrid.len();
    let n_int = mesh.intervals();
    let nodes = mesh.nodes();
    let r = p.diffusivity / (p.dx() * p.dx());
    let inv_g = 1.0 / gamma(1.0 - p.alpha);

    // unknown columns: interior only for Dirichlet, all nodes for zero flux
    let (first, last) = match p.bc {
        Boundary::Dirichlet0 => (1, width - 2),
        Boundary::NeumannZeroFlux => (0, width - 1),
    };
    let unknowns = last - first + 1;
    let mut lower = vec![-r; unknowns];
    let mut upper = vec![-r; unknowns];
    lower[0] = 0.0;
    upper[unknowns - 1] = 0.0;
    if p.bc == Boundary::NeumannZeroFlux {
        upper[0] = -2.0 * r;
        lower[unknowns - 1] = -2.0 * r;
    }
    let mut matrix = Tridiagonal::new(lower, vec![0.0; unknowns], upper)?;

    let mut field = Vec::with_capacity((n_int + 1) * width);
    field.extend(p.initial_profile());

    let mut chi = Vec::with_capacity(n_int);
    let mut hist = vec![0.0; width];
    for n in 0..n_int {
        fill_weights(mesh, p.alpha, n, &mut chi);

        for (h, u0) in hist.iter_mut().zip(&field[..width]) {
            *h = chi[0] * u0;
        }
        for k in 1..=n {
            let c = chi[k] - chi[k - 1];
            let row = &field[k * width..(k + 1) * width];
            for (h, u) in hist.iter_mut().zip(row) {
                *h += c * u;
            }
        }

        let lead = chi[n] * inv_g;
        matrix.diag.fill(lead + 2.0 * r);
        let t_next = nodes[n + 1];
        let mut rhs: Vec<f64> = (first..=last)
            .map(|i| {
                let f = p.source.as_ref().map_or(0.0, |s| s(xgrid[i], t_next));
                f + inv_g * hist[i]
            })
            .collect();
        matrix.factor()?.solve_in_place(&mut rhs)?;

        let start = field.len();
        field.resize(start + width, 0.0);
        field[start + first..=start + last].copy_from_slice(&rhs);
    }

    DiffuseSolution::from_parts(mesh.clone(), xgrid, field)
}

/// Trapezoidal integral of a nodal profile over `[0, L]`.
pub fn mass(row: &[f64], dx: f64, _bc: Boundary) -> f64 {
    match row {
        [] => 0.0,
        [only] => only * dx,
        [first, inner @ .., last] => dx * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Discrete gradient energy `Σ (u_{i+1} - u_i)² / Δx`.
pub fn gradient_energy(row: &[f64], dx: f64) -> f64 {
    row.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlf::exact_diffusion;

    fn example_two(n: usize, strategy: MeshStrategy) -> f64 {
        let p = DiffuseProblem::new(0.6, exact_diffusivity(10.0), 10.0, 100, 20.0).unwrap();
        let sol = solve_diffuse(&p, strategy, n).unwrap();
        let mut worst: f64 = 0.0;
        for (x, u) in sol.xgrid().iter().zip(sol.final_row()) {
            let e = exact_diffusion(*x, 20.0, 10.0, 0.6).unwrap();
            if e.abs() >= 1e-12 {
                worst = worst.max(((u - e) / e).abs());
            }
        }
        worst
    }

    #[test]
    fn table_two_values() {
        let sfdm = example_two(100, MeshStrategy::PowerLaw { alpha: 0.6 });
        assert!((sfdm / 8.0701e-4 - 1.0).abs() < 0.25, "{sfdm}");
        let uni = example_two(100, MeshStrategy::Uniform);
        assert!((uni / 0.0033 - 1.0).abs() < 0.25, "{uni}");
    }

    #[test]
    fn first_step_matches_closed_form() {
        // (Δt_α^{-1}/Γ(2-α) + 2r) u_i^1 - r (u_{i+1}^1 + u_{i-1}^1) = Δt_α^{-1}/Γ(2-α) u_i^0
        let (alpha, t, n) = (0.4, 3.0, 16usize);
        let p = DiffuseProblem::new(alpha, 0.7, 2.0, 20, t).unwrap();
        let sol = solve_diffuse(&p, MeshStrategy::PowerLaw { alpha }, n).unwrap();
        let c = n as f64 / t.powf(alpha) / gamma(2.0 - alpha);
        let r = 0.7 / (p.dx() * p.dx());
        let (u0, u1) = (sol.row(0), sol.row(1));
        for i in 1..20 {
            let lhs = (c + 2.0 * r) * u1[i] - r * (u1[i + 1] + u1[i - 1]);
            assert!((lhs - c * u0[i]).abs() < 1e-12 * c);
        }
    }

    #[test]
    fn constant_profile_is_steady_without_diffusion() {
        let p = DiffuseProblem::new(0.5, 0.0, 10.0, 10, 5.0)
            .unwrap()
            .with_ic(InitialCondition::Custom {
                values: vec![1.5; 11],
            })
            .unwrap()
            .with_bc(Boundary::NeumannZeroFlux);
        let sol = solve_diffuse(&p, MeshStrategy::Uniform, 30).unwrap();
        for v in sol.field() {
            assert!((v - 1.5).abs() < 1e-13);
        }
    }

    #[test]
    fn dirichlet_rows_have_zero_ends() {
        let p = DiffuseProblem::new(0.5, 1.0, 1.0, 8, 1.0).unwrap();
        let sol = solve_diffuse(&p, MeshStrategy::Uniform, 5).unwrap();
        for row in sol.rows().skip(1) {
            assert_eq!(row[0], 0.0);
            assert_eq!(row[8], 0.0);
        }
        assert_eq!(sol.row(0), p.initial_profile().as_slice());
    }

    #[test]
    fn odd_grid_rejects_point_source() {
        let p = DiffuseProblem::new(0.5, 1.0, 1.0, 9, 1.0).unwrap();
        assert!(p.with_ic(InitialCondition::point_source()).is_err());
    }

    #[test]
    fn mass_examples() {
        assert!((mass(&[3.0; 11], 1.0, Boundary::Dirichlet0) - 30.0).abs() < 1e-12);
        let p = DiffuseProblem::new(0.5, 1.0, 10.0, 100, 1.0).unwrap();
        let m = mass(&p.initial_profile(), p.dx(), Boundary::Dirichlet0);
        let exact = 20.0 / PI;
        assert!(((m - exact) / exact).abs() < 1e-3);
        let p = p.with_ic(InitialCondition::point_source()).unwrap();
        let m = mass(&p.initial_profile(), p.dx(), Boundary::NeumannZeroFlux);
        assert!((m - 2.0 * p.dx()).abs() < 1e-15);
    }

    #[test]
    fn horizon_mismatch_is_reported() {
        let p = DiffuseProblem::new(0.5, 1.0, 1.0, 8, 1.0).unwrap();
        let mesh = TimeMesh::uniform(2.0, 4).unwrap();
        assert!(matches!(
            solve_diffuse_implicit(&p, &mesh),
            Err(Error::HorizonMismatch { .. })
        ));
    }
}
