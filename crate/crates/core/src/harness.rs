//! Error metrics, cached fine-grid references and the drivers that rerun the
//! four comparison tables (sine relaxation, sine diffusion, long-horizon
//! cost parity, point-source diffusion).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diffuse::{
    exact_diffusivity, solve_diffuse_implicit, Boundary, DiffuseProblem, DiffuseSolution,
    InitialCondition,
};
use crate::error::{Error, Result};
use crate::mesh::{MeshStrategy, TimeMesh};
use crate::mlf::{exact_diffusion, exact_relaxation};
use crate::relax::{solve_relax_implicit, RelaxProblem};

/// Exact values smaller than this are left out of relative errors.
pub const EXACT_FLOOR: f64 = 1e-12;

pub const DEFAULT_REFERENCE_NODES: usize = 5000;

/// `max |u - ū| / |ū|` over entries with `|ū| >= EXACT_FLOOR`.
pub fn mre(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::LengthMismatch {
            expected: exact.len(),
            actual: numeric.len(),
        });
    }
    numeric
        .iter()
        .zip(exact)
        .filter(|(_, e)| e.abs() >= EXACT_FLOOR)
        .map(|(u, e)| ((u - e) / e).abs())
        .reduce(f64::max)
        .ok_or(Error::DegenerateExact)
}

/// `max |u - u_ref|`.
pub fn mae1(coarse_final: &[f64], reference_final: &[f64]) -> Result<f64> {
    if coarse_final.len() != reference_final.len() {
        return Err(Error::LengthMismatch {
            expected: reference_final.len(),
            actual: coarse_final.len(),
        });
    }
    Ok(coarse_final
        .iter()
        .zip(reference_final)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// `log2(err_half / err_full)`.
pub fn convergence_rate(err_half: f64, err_full: f64) -> Result<f64> {
    if err_half.is_nan() || err_half <= 0.0 {
        return Err(Error::domain("err_half", err_half, "must be positive"));
    }
    if err_full.is_nan() || err_full <= 0.0 {
        return Err(Error::domain("err_full", err_full, "must be positive"));
    }
    Ok((err_half / err_full).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub scheme: String,
    pub strategy: String,
    pub alpha: f64,
    pub horizon: f64,
    /// Time intervals.
    pub n: usize,
    /// Space intervals; absent for the scalar relaxation problem.
    pub m: Option<usize>,
    pub mre: Option<f64>,
    pub mae1: Option<f64>,
    pub rate: Option<f64>,
    pub wall_time: f64,
    /// Time nodes, `n + 1`.
    pub node_count: usize,
}

impl ErrorReport {
    /// The error the table reports: MRE when known, else MAE1.
    pub fn error(&self) -> Option<f64> {
        self.mre.or(self.mae1)
    }

    /// Numerics only, for determinism checks.
    pub fn same_numerics(&self, other: &Self) -> bool {
        let a = Self {
            wall_time: 0.0,
            ..self.clone()
        };
        let b = Self {
            wall_time: 0.0,
            ..other.clone()
        };
        a == b
    }
}

/// Label for an implicit run on the given mesh family.
pub fn implicit_label(strategy: MeshStrategy) -> &'static str {
    match strategy {
        MeshStrategy::PowerLaw { .. } => "sfdm-implicit",
        MeshStrategy::Uniform => "uniform-implicit",
        MeshStrategy::LegacyNonUniform => "legacy-implicit",
    }
}

/// Fills `rate` from the preceding report of the same scheme when it used
/// exactly half as many intervals.
pub fn attach_rates(reports: &mut [ErrorReport]) {
    for i in 1..reports.len() {
        let (before, rest) = reports.split_at_mut(i);
        let (prev, cur) = (&before[i - 1], &mut rest[0]);
        let sibling = prev.scheme == cur.scheme
            && prev.alpha == cur.alpha
            && prev.horizon == cur.horizon
            && prev.n * 2 == cur.n;
        if sibling {
            if let (Some(h), Some(f)) = (prev.error(), cur.error()) {
                cur.rate = convergence_rate(h, f).ok();
            }
        }
    }
}

/// Runs `f` `repeats` times and returns its last output with the median wall time.
pub fn timed<T>(repeats: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let repeats = repeats.max(1);
    let mut times = Vec::with_capacity(repeats);
    let mut out = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let v = f()?;
        times.push(start.elapsed().as_secs_f64());
        out = Some(v);
    }
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    let median = if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    };
    Ok((out.expect("at least one repeat"), median))
}

// ---------------------------------------------------------------------------
// Reference cache

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    /// Computed and stored; also used when a stored entry failed validation.
    Computed,
    /// Problems with a source term are never cached.
    Bypassed,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    key: String,
    rows: usize,
    cols: usize,
    checksum: String,
    created_by: String,
    problem: serde_json::Value,
}

#[derive(Serialize)]
struct CacheKey<'a> {
    format: u32,
    alpha: f64,
    diffusivity: f64,
    length: f64,
    intervals: usize,
    horizon: f64,
    ic: &'a InitialCondition,
    bc: Boundary,
    strategy: MeshStrategy,
    n_ref: usize,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Directory of reference fields: `<key>.bin` holds little-endian `f64`s,
/// `<key>.json` the manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceCache {
    dir: PathBuf,
}

impl ReferenceCache {
    pub const ENV_VAR: &'static str = "FRACSTEP_CACHE";

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$FRACSTEP_CACHE`, or `./cache`.
    pub fn from_env() -> Self {
        Self::new(
            std::env::var_os(Self::ENV_VAR).map_or_else(|| PathBuf::from("cache"), PathBuf::from),
        )
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(
        p: &DiffuseProblem,
        strategy: MeshStrategy,
        n_ref: usize,
    ) -> Result<(String, serde_json::Value)> {
        let key = CacheKey {
            format: 1,
            alpha: p.alpha,
            diffusivity: p.diffusivity,
            length: p.length,
            intervals: p.intervals,
            horizon: p.horizon,
            ic: &p.ic,
            bc: p.bc,
            strategy,
            n_ref,
        };
        let value = serde_json::to_value(&key)?;
        let digest = Sha256::digest(serde_json::to_vec(&value)?);
        Ok((hex(&digest), value))
    }

    fn paths(&self, key: &str) -> (PathBuf, PathBuf) {
        (
            self.dir.join(format!("{key}.bin")),
            self.dir.join(format!("{key}.json")),
        )
    }

    fn load(&self, key: &str, mesh: &TimeMesh, xgrid: &[f64]) -> Option<DiffuseSolution> {
        let (bin, json) = self.paths(key);
        let manifest: Manifest = serde_json::from_slice(&fs::read(json).ok()?).ok()?;
        let bytes = fs::read(bin).ok()?;
        let rows = mesh.intervals() + 1;
        let cols = xgrid.len();
        if manifest.key != key
            || manifest.rows != rows
            || manifest.cols != cols
            || bytes.len() != rows * cols * 8
            || manifest.checksum != hex(&Sha256::digest(&bytes))
        {
            return None;
        }
        let field = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        DiffuseSolution::from_parts(mesh.clone(), xgrid.to_vec(), field).ok()
    }

    fn store(&self, key: &str, problem: serde_json::Value, sol: &DiffuseSolution) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let bytes: Vec<u8> = sol.field().iter().flat_map(|v| v.to_le_bytes()).collect();
        let manifest = Manifest {
            key: key.to_owned(),
            rows: sol.mesh().intervals() + 1,
            cols: sol.width(),
            checksum: hex(&Sha256::digest(&bytes)),
            created_by: concat!("fracstep ", env!("CARGO_PKG_VERSION")).to_owned(),
            problem,
        };
        let (bin, json) = self.paths(key);
        write_atomic(&bin, &bytes)?;
        write_atomic(&json, &serde_json::to_vec_pretty(&manifest)?)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Fine-grid solution used in place of an exact one. Loaded from `cache`
/// when a valid entry exists, otherwise computed and stored.
pub fn reference_solution(
    p: &DiffuseProblem,
    strategy: MeshStrategy,
    n_ref: usize,
    cache: Option<&ReferenceCache>,
) -> Result<(DiffuseSolution, CacheStatus)> {
    p.validate()?;
    let mesh = strategy.build(p.horizon, n_ref)?;
    let cache = match cache {
        Some(c) if p.source.is_none() => c,
        _ => return Ok((solve_diffuse_implicit(p, &mesh)?, CacheStatus::Bypassed)),
    };
    let (key, echo) = ReferenceCache::key(p, strategy, n_ref)?;
    if let Some(sol) = cache.load(&key, &mesh, &p.xgrid()) {
        return Ok((sol, CacheStatus::Hit));
    }
    let sol = solve_diffuse_implicit(p, &mesh)?;
    cache.store(&key, echo, &sol)?;
    Ok((sol, CacheStatus::Computed))
}

// ---------------------------------------------------------------------------
// Table drivers

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    T1,
    T2,
    T3,
    T4,
}

impl std::str::FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "table1" | "1" => Ok(Table::T1),
            "t2" | "table2" | "2" => Ok(Table::T2),
            "t3" | "table3" | "3" => Ok(Table::T3),
            "t4" | "table4" | "4" => Ok(Table::T4),
            _ => Err(Error::InvalidInput(format!("unknown table `{s}`"))),
        }
    }
}

/// Replacements for a table's default configuration. `None` keeps the default.
#[derive(Debug, Clone, Default)]
pub struct TableOverrides {
    pub alphas: Option<Vec<f64>>,
    pub horizons: Option<Vec<f64>>,
    /// Node counts per family (tables 1, 2, 4) or S-FDM counts per horizon (table 3).
    pub nodes: Option<Vec<usize>>,
    pub space_intervals: Option<usize>,
    pub reference_nodes: Option<usize>,
    pub repeats: Option<usize>,
    pub cache: Option<ReferenceCache>,
    /// Table 3: pick S-FDM node counts by parity search instead of the fixed ones.
    pub search: bool,
}

const T1_SFDM_NODES: [usize; 4] = [25, 50, 100, 200];
const T1_UNIFORM_NODES: [usize; 5] = [25, 50, 100, 200, 400];
const T3_HORIZONS: [f64; 6] = [1.0, 10.0, 50.0, 100.0, 200.0, 500.0];
const T3_UNIFORM_STEP: f64 = 0.1;
const T4_NODES: [usize; 3] = [20, 40, 80];
const T4_DIFFUSIVITY: f64 = 0.005;
const LENGTH: f64 = 10.0;
const SPACE_INTERVALS: usize = 100;

/// S-FDM node counts chosen for cost parity in the long-horizon comparison.
pub fn parity_nodes(alpha: f64, horizon: f64) -> Option<usize> {
    let row: [usize; 6] = if alpha == 0.4 {
        [6, 20, 45, 60, 80, 150]
    } else if alpha == 0.6 {
        [8, 40, 100, 200, 350, 700]
    } else if alpha == 0.8 {
        [10, 70, 250, 400, 700, 1500]
    } else {
        return None;
    };
    T3_HORIZONS
        .iter()
        .position(|&t| t == horizon)
        .map(|i| row[i])
}

pub fn run_table(which: Table, overrides: &TableOverrides) -> Result<Vec<ErrorReport>> {
    let mut reports = match which {
        Table::T1 => table_one(overrides)?,
        Table::T2 => table_two(overrides)?,
        Table::T3 => table_three(overrides)?,
        Table::T4 => table_four(overrides)?,
    };
    attach_rates(&mut reports);
    Ok(reports)
}

fn repeats(o: &TableOverrides) -> usize {
    o.repeats.unwrap_or(1)
}

fn table_one(o: &TableOverrides) -> Result<Vec<ErrorReport>> {
    let gammas = o.alphas.clone().unwrap_or_else(|| vec![0.5]);
    let horizons = o.horizons.clone().unwrap_or_else(|| vec![20.0]);
    let mut out = Vec::new();
    for &gamma in &gammas {
        for &horizon in &horizons {
            let p = RelaxProblem::new(gamma, 10.0, 1.0, horizon)?;
            let exact = exact_relaxation(p.a, p.b, gamma, horizon)?;
            for (strategy, default) in [
                (MeshStrategy::PowerLaw { alpha: gamma }, &T1_SFDM_NODES[..]),
                (MeshStrategy::Uniform, &T1_UNIFORM_NODES[..]),
            ] {
                for &n in o.nodes.as_deref().unwrap_or(default) {
                    let mesh = strategy.build(horizon, n)?;
                    let (sol, wall) = timed(repeats(o), || solve_relax_implicit(&p, &mesh))?;
                    out.push(ErrorReport {
                        scheme: implicit_label(strategy).to_owned(),
                        strategy: strategy.label().to_owned(),
                        alpha: gamma,
                        horizon,
                        n,
                        m: None,
                        mre: Some(mre(&[sol.final_value()], &[exact])?),
                        mae1: None,
                        rate: None,
                        wall_time: wall,
                        node_count: n + 1,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Sine-mode diffusion with the exact-solution diffusivity.
pub fn sine_problem(alpha: f64, horizon: f64, intervals: usize) -> Result<DiffuseProblem> {
    DiffuseProblem::new(alpha, exact_diffusivity(LENGTH), LENGTH, intervals, horizon)
}

/// Point-source diffusion with zero-flux ends.
pub fn point_source_problem(alpha: f64, horizon: f64, intervals: usize) -> Result<DiffuseProblem> {
    Ok(
        DiffuseProblem::new(alpha, T4_DIFFUSIVITY, LENGTH, intervals, horizon)?
            .with_ic(InitialCondition::point_source())?
            .with_bc(Boundary::NeumannZeroFlux),
    )
}

/// Exact final-time profile of the sine-mode problem.
pub fn sine_exact_profile(p: &DiffuseProblem) -> Result<Vec<f64>> {
    p.xgrid()
        .into_iter()
        .map(|x| exact_diffusion(x, p.horizon, p.length, p.alpha))
        .collect()
}

fn sine_report(
    p: &DiffuseProblem,
    exact: &[f64],
    strategy: MeshStrategy,
    n: usize,
    repeats: usize,
) -> Result<ErrorReport> {
    let mesh = strategy.build(p.horizon, n)?;
    let (sol, wall) = timed(repeats, || solve_diffuse_implicit(p, &mesh))?;
    Ok(ErrorReport {
        scheme: implicit_label(strategy).to_owned(),
        strategy: strategy.label().to_owned(),
        alpha: p.alpha,
        horizon: p.horizon,
        n,
        m: Some(p.intervals),
        mre: Some(mre(sol.final_row(), exact)?),
        mae1: None,
        rate: None,
        wall_time: wall,
        node_count: n + 1,
    })
}

fn table_two(o: &TableOverrides) -> Result<Vec<ErrorReport>> {
    let alphas = o.alphas.clone().unwrap_or_else(|| vec![0.6]);
    let horizons = o.horizons.clone().unwrap_or_else(|| vec![20.0]);
    let m = o.space_intervals.unwrap_or(SPACE_INTERVALS);
    let mut out = Vec::new();
    for &alpha in &alphas {
        for &horizon in &horizons {
            let p = sine_problem(alpha, horizon, m)?;
            let exact = sine_exact_profile(&p)?;
            for (strategy, default) in [
                (MeshStrategy::PowerLaw { alpha }, &T1_SFDM_NODES[..]),
                (MeshStrategy::Uniform, &T1_UNIFORM_NODES[..]),
            ] {
                for &n in o.nodes.as_deref().unwrap_or(default) {
                    out.push(sine_report(&p, &exact, strategy, n, repeats(o))?);
                }
            }
        }
    }
    Ok(out)
}

/// Smallest power-law node count whose final MRE is at most `target`,
/// by bisection on `[1, upper]`.
pub fn search_parity_nodes(p: &DiffuseProblem, target: f64, upper: usize) -> Result<usize> {
    let exact = sine_exact_profile(p)?;
    let strategy = MeshStrategy::PowerLaw { alpha: p.alpha };
    let err = |n: usize| -> Result<f64> {
        let sol = solve_diffuse_implicit(p, &strategy.build(p.horizon, n)?)?;
        mre(sol.final_row(), &exact)
    };
    if err(upper)? > target {
        return Ok(upper);
    }
    let (mut lo, mut hi) = (1usize, upper);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if err(mid)? <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

fn table_three(o: &TableOverrides) -> Result<Vec<ErrorReport>> {
    let alphas = o.alphas.clone().unwrap_or_else(|| vec![0.4, 0.6, 0.8]);
    let horizons = o.horizons.clone().unwrap_or_else(|| T3_HORIZONS.to_vec());
    if let Some(nodes) = &o.nodes {
        if nodes.len() != horizons.len() {
            return Err(Error::InvalidInput(format!(
                "table 3 takes one S-FDM node count per horizon: {} horizons, {} counts",
                horizons.len(),
                nodes.len()
            )));
        }
    }
    let m = o.space_intervals.unwrap_or(SPACE_INTERVALS);
    let mut out = Vec::new();
    for &alpha in &alphas {
        for (i, &horizon) in horizons.iter().enumerate() {
            let p = sine_problem(alpha, horizon, m)?;
            let exact = sine_exact_profile(&p)?;
            let n_uniform = ((horizon / T3_UNIFORM_STEP).round() as usize).max(1);
            let uniform = sine_report(&p, &exact, MeshStrategy::Uniform, n_uniform, repeats(o))?;
            let n_sfdm = if o.search {
                search_parity_nodes(&p, uniform.mre.unwrap_or(f64::INFINITY), n_uniform)?
            } else if let Some(nodes) = &o.nodes {
                nodes[i]
            } else {
                parity_nodes(alpha, horizon).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "no tabulated S-FDM node count for alpha = {alpha}, T = {horizon}; \
                         pass node counts or enable the parity search"
                    ))
                })?
            };
            let sfdm = sine_report(
                &p,
                &exact,
                MeshStrategy::PowerLaw { alpha },
                n_sfdm,
                repeats(o),
            )?;
            out.push(sfdm);
            out.push(uniform);
        }
    }
    Ok(out)
}

fn table_four(o: &TableOverrides) -> Result<Vec<ErrorReport>> {
    let alphas = o.alphas.clone().unwrap_or_else(|| vec![0.8, 0.6, 0.4]);
    let horizons = o.horizons.clone().unwrap_or_else(|| vec![10.0]);
    let nodes = o.nodes.clone().unwrap_or_else(|| T4_NODES.to_vec());
    let m = o.space_intervals.unwrap_or(SPACE_INTERVALS);
    let n_ref = o.reference_nodes.unwrap_or(DEFAULT_REFERENCE_NODES);

    let mut problems = Vec::new();
    for &alpha in &alphas {
        for &horizon in &horizons {
            problems.push(point_source_problem(alpha, horizon, m)?);
        }
    }

    // references are untimed, so build them concurrently
    let references: Vec<Result<DiffuseSolution>> = std::thread::scope(|s| {
        let handles: Vec<_> = problems
            .iter()
            .map(|p| {
                s.spawn(move || {
                    let strategy = MeshStrategy::PowerLaw { alpha: p.alpha };
                    reference_solution(p, strategy, n_ref, o.cache.as_ref()).map(|(sol, _)| sol)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("reference worker panicked"))
            .collect()
    });

    let mut out = Vec::new();
    for (p, reference) in problems.iter().zip(references) {
        let reference = reference?;
        let alpha = p.alpha;
        for strategy in [
            MeshStrategy::PowerLaw { alpha },
            MeshStrategy::Uniform,
            MeshStrategy::LegacyNonUniform,
        ] {
            for &n in &nodes {
                let mesh = strategy.build(p.horizon, n)?;
                let (sol, wall) = timed(repeats(o), || solve_diffuse_implicit(p, &mesh))?;
                out.push(ErrorReport {
                    scheme: implicit_label(strategy).to_owned(),
                    strategy: strategy.label().to_owned(),
                    alpha,
                    horizon: p.horizon,
                    n,
                    m: Some(m),
                    mre: None,
                    mae1: Some(mae1(sol.final_row(), reference.final_row())?),
                    rate: None,
                    wall_time: wall,
                    node_count: n + 1,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_examples() {
        assert_eq!(mre(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((mre(&[2.02, 4.0], &[2.0, 4.0]).unwrap() - 0.01).abs() < 1e-15);
        assert!(matches!(mre(&[1.0], &[0.0]), Err(Error::DegenerateExact)));
        assert!(mre(&[1.0], &[1.0, 2.0]).is_err());
        assert_eq!(mae1(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((mae1(&[1.5, 2.5], &[1.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boundary_zeros_are_masked() {
        let v = mre(&[1e-3, 1.1, 0.0], &[0.0, 1.0, 1e-13]).unwrap();
        assert!((v - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rate_examples() {
        assert!((convergence_rate(0.02, 0.01).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(convergence_rate(0.3, 0.3).unwrap(), 0.0);
        assert!((convergence_rate(8.4268e-4, 2.9577e-4).unwrap() - 1.5105).abs() < 5e-4);
        assert!(convergence_rate(0.0, 1.0).is_err());
        assert!(convergence_rate(1.0, -1.0).is_err());
    }

    #[test]
    fn rates_attach_only_to_halved_siblings() {
        let row = |scheme: &str, n: usize, e: f64| ErrorReport {
            scheme: scheme.into(),
            strategy: "uniform".into(),
            alpha: 0.5,
            horizon: 1.0,
            n,
            m: None,
            mre: Some(e),
            mae1: None,
            rate: None,
            wall_time: 0.0,
            node_count: n + 1,
        };
        let mut rows = vec![
            row("a", 10, 0.4),
            row("a", 20, 0.2),
            row("a", 30, 0.1),
            row("b", 60, 0.05),
        ];
        attach_rates(&mut rows);
        assert_eq!(rows[0].rate, None);
        assert!((rows[1].rate.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rows[2].rate, None);
        assert_eq!(rows[3].rate, None);
    }

    #[test]
    fn table_names_parse() {
        assert_eq!("table3".parse::<Table>().unwrap(), Table::T3);
        assert_eq!("T1".parse::<Table>().unwrap(), Table::T1);
        assert!("table9".parse::<Table>().is_err());
    }

    #[test]
    fn tabulated_parity_nodes() {
        assert_eq!(parity_nodes(0.4, 500.0), Some(150));
        assert_eq!(parity_nodes(0.8, 1.0), Some(10));
        assert_eq!(parity_nodes(0.5, 1.0), None);
        assert_eq!(parity_nodes(0.4, 3.0), None);
    }

    #[test]
    fn median_of_repeats() {
        let mut calls = 0;
        let (v, t) = timed(3, || {
            calls += 1;
            Ok(calls)
        })
        .unwrap();
        assert_eq!(v, 3);
        assert!(t >= 0.0);
    }
}
