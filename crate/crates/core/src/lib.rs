//! Finite-difference solvers for time-fractional relaxation and diffusion
//! with the Caputo derivative, on power-law, uniform and legacy time meshes.

pub mod caputo;
pub mod diffuse;
pub mod error;
pub mod harness;
pub mod mesh;
pub mod mlf;
pub mod relax;
pub mod special;
pub mod tridiag;

pub use caputo::{caputo_apply, l1_weights, CaputoWeights};
pub use diffuse::{
    mass, solve_diffuse, solve_diffuse_implicit, Boundary, DiffuseProblem, DiffuseSolution,
    InitialCondition,
};
pub use error::{Error, Result};
pub use harness::{run_table, ErrorReport, ReferenceCache, Table, TableOverrides};
pub use mesh::{MeshStrategy, TimeMesh};
pub use mlf::{ml, MittagLeffler};
pub use relax::{
    solve_relax, solve_relax_explicit_volterra, solve_relax_implicit, RelaxProblem, RelaxScheme,
    RelaxSolution,
};
