use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use stefan_core::reconstruct::{self, PhysicalQuery};
use stefan_core::verify::{self, VerifyConfig};
use stefan_core::{DimensionlessSource, OracleRun, Problem, ProfileMode, SimilaritySolution, SolverOptions};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Verification { .. } => 4,
            CliError::Io { .. } | CliError::Csv { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Full-precision decimal: 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct CsvOut {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl CsvOut {
    fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = dir.join(name);
        let writer = csv::Writer::from_path(&path).map_err(|source| CliError::Csv {
            path: path.clone(),
            source,
        })?;
        let mut out = Self { path, writer };
        out.row(header.iter().map(|s| s.to_string()))?;
        Ok(out)
    }

    fn row(&mut self, fields: impl IntoIterator<Item = String>) -> Result<()> {
        self.writer
            .write_record(fields.into_iter().collect::<Vec<_>>())
            .map_err(|source| CliError::Csv {
                path: self.path.clone(),
                source,
            })
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush().map_err(|source| CliError::Io {
            path: self.path.clone(),
            source,
        })?;
        Ok(self.path)
    }
}

fn solver_error(e: impl std::fmt::Display) -> CliError {
    CliError::Solver(e.to_string())
}

/// Solves the configured problem and applies `solver.lambda_offset`.
fn solve_configured(cfg: &RunConfig) -> Result<SimilaritySolution> {
    let sol = SimilaritySolution::solve(&cfg.problem, cfg.solver).map_err(solver_error)?;
    if cfg.lambda_offset == 0.0 {
        return Ok(sol);
    }
    sol.with_lambda(sol.lambda() + cfg.lambda_offset).map_err(solver_error)
}

pub fn solve(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sol = solve_configured(cfg)?;
    let dims = sol.dimensionless();
    let params = sol.params();
    let residual = sol.lambda_residual().map_err(solver_error)?;
    let mut csv = CsvOut::create(
        out,
        "summary.csv",
        &["source", "ste", "delta", "p", "a_coef", "diffusivity", "lambda", "y_prime0", "lambda_residual"],
    )?;
    csv.row([
        cfg.problem.source.kind().to_string(),
        num(params.ste),
        num(params.delta),
        num(params.p),
        opt_num(dims.feedback),
        num(dims.a),
        num(sol.lambda()),
        num(sol.y_prime0()),
        num(residual),
    ])?;
    let path = csv.finish()?;
    println!("lambda = {:.12}", sol.lambda());
    println!("y'(0)  = {:.12}", sol.y_prime0());
    println!("Ste    = {:.12}", params.ste);
    if let Some(a) = dims.feedback {
        println!("A      = {a:.12}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn parse_times(list: &str) -> Result<Vec<f64>> {
    let times = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && t.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--t: `{}` is not a positive time", s.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(times)
}

pub fn profile(cfg: &RunConfig, out: &Path, times: &[f64], points: usize) -> Result<()> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2 (got {points})")));
    }
    if times.is_empty() {
        return Err(CliError::Usage("profile needs at least one time in --t".into()));
    }
    let sol = solve_configured(cfg)?;
    let mut csv = CsvOut::create(out, "profile.csv", &["t", "x", "eta", "y", "theta"])?;
    for &t in times {
        let front = reconstruct::front_position(&sol, t).map_err(solver_error)?;
        for i in 0..points {
            let x = if i + 1 == points {
                front
            } else {
                front * i as f64 / (points - 1) as f64
            };
            let q = PhysicalQuery::new(x, t);
            let eta = reconstruct::similarity_variable(&sol, q).map_err(solver_error)?;
            let y = sol.y(eta.min(sol.lambda())).map_err(solver_error)?;
            let theta = reconstruct::temperature(&sol, q).map_err(solver_error)?;
            csv.row([num(t), num(x), num(eta), num(y), num(theta)])?;
        }
    }
    let path = csv.finish()?;
    println!("wrote {} ({} rows)", path.display(), times.len() * points);
    Ok(())
}

pub fn verify(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sol = solve_configured(cfg)?;
    let vcfg = VerifyConfig {
        oracle: cfg.oracle,
        ..VerifyConfig::default()
    };
    let (report, run) = verify::run_checks_with_oracle(&sol, &vcfg);
    let mut csv = CsvOut::create(out, "verify.csv", &["check", "passed", "value", "tolerance", "detail"])?;
    for c in &report.checks {
        println!("{c}");
        csv.row([
            c.name.to_string(),
            c.passed.to_string(),
            num(c.value),
            num(c.tolerance),
            c.detail.clone(),
        ])?;
    }
    csv.finish()?;
    if let Some(run) = run {
        write_oracle_front(&sol, &run, out)?;
    }
    let failed = report.failures().count();
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    Ok(())
}

fn write_oracle_front(sol: &SimilaritySolution, run: &OracleRun, out: &Path) -> Result<()> {
    let mut csv = CsvOut::create(out, "oracle_front.csv", &["t", "front_numeric", "front_exact", "rel_err"])?;
    for (&t, &s) in run.times.iter().zip(&run.front) {
        let exact = reconstruct::front_position(sol, t).map_err(solver_error)?;
        csv.row([num(t), num(s), num(exact), num((s - exact).abs() / exact)])?;
    }
    csv.finish()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tuple {
    ste: f64,
    delta: f64,
    p: f64,
    a_coef: Option<f64>,
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn sweep_tuples(cfg: &RunConfig) -> Result<Vec<Tuple>> {
    if cfg.sweep.is_empty() {
        return Err(CliError::Usage("sweep needs at least one sweep.* list in the config".into()));
    }
    let dims = cfg.problem.dimensionless().map_err(solver_error)?;
    let m = &cfg.problem.material;
    let ste = sorted(cfg.sweep.ste.as_deref().unwrap_or(&[dims.ste]));
    let delta = sorted(cfg.sweep.delta.as_deref().unwrap_or(&[m.delta]));
    let p = sorted(cfg.sweep.p.as_deref().unwrap_or(&[m.p]));
    let a_coef: Vec<Option<f64>> = match dims.feedback {
        Some(a) => sorted(cfg.sweep.a_coef.as_deref().unwrap_or(&[a])).into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut tuples = Vec::with_capacity(ste.len() * delta.len() * p.len() * a_coef.len());
    for &ste in &ste {
        for &delta in &delta {
            for &p in &p {
                for &a_coef in &a_coef {
                    tuples.push(Tuple { ste, delta, p, a_coef });
                }
            }
        }
    }
    Ok(tuples)
}

fn solve_tuple(cfg: &RunConfig, t: Tuple) -> std::result::Result<(f64, f64, f64), String> {
    let source = match (&cfg.dimensionless_source, t.a_coef) {
        (DimensionlessSource::Feedback(_), Some(a)) => DimensionlessSource::Feedback(a),
        (other, _) => other.clone(),
    };
    let problem = Problem::from_dimensionless(t.ste, t.delta, t.p, source).map_err(|e| e.to_string())?;
    // Only λ and y'(0) are reported, so the profile table is not needed.
    let options = SolverOptions {
        mode: ProfileMode::Exact,
        ..cfg.solver
    };
    let sol = SimilaritySolution::solve(&problem, options).map_err(|e| e.to_string())?;
    let sol = if cfg.lambda_offset == 0.0 {
        sol
    } else {
        sol.with_lambda(sol.lambda() + cfg.lambda_offset).map_err(|e| e.to_string())?
    };
    let residual = sol.lambda_residual().map_err(|e| e.to_string())?;
    Ok((sol.lambda(), sol.y_prime0(), residual))
}

pub fn sweep(cfg: &RunConfig, out: &Path, workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let tuples = sweep_tuples(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<_> = pool.install(|| tuples.par_iter().map(|&t| solve_tuple(cfg, t)).collect());

    let mut csv = CsvOut::create(
        out,
        "sweep.csv",
        &["ste", "delta", "p", "a_coef", "lambda", "y_prime0", "lambda_residual", "status"],
    )?;
    let mut failures = 0;
    for (t, result) in tuples.iter().zip(&results) {
        let head = [num(t.ste), num(t.delta), num(t.p), opt_num(t.a_coef)];
        let tail = match result {
            Ok((lam, yp, res)) => [num(*lam), num(*yp), num(*res), "ok".to_string()],
            Err(msg) => {
                failures += 1;
                [String::new(), String::new(), String::new(), msg.clone()]
            }
        };
        csv.row(head.into_iter().chain(tail))?;
    }
    let path = csv.finish()?;
    println!("wrote {} ({} rows, {failures} failed)", path.display(), tuples.len());
    if failures == tuples.len() {
        return Err(CliError::Solver(format!("all {failures} sweep tuples failed")));
    }
    Ok(())
}
