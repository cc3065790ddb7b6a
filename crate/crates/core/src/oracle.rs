//! Front-fixing finite-difference solver for the moving-boundary problem.
//!
//! The liquid region `0 < x < s(t)` is mapped onto `ξ = x/s(t) ∈ [0, 1]`.
//! With `u = (θ - θ_f)/(θ₀ - θ_f)`, `S = s²` and `D = k₀/(ρc₀)` the system is
//!
//! ```text
//! (1 + δu^p) (u_t - ξ Ṡ/(2S) u_ξ) = (D/S) ((1 + δu^p) u_ξ)_ξ - H/(ρ c₀ (θ₀ - θ_f))
//! u(0, t) = 1,   u(1, t) = 0,   Ṡ = -2 k₀ (θ₀ - θ_f)/(ρ l) · u_ξ(1, t)
//! ```
//!
//! Space uses conservative central differences on a uniform ξ grid; time uses
//! a weighted (θ) scheme. Each step solves for `S^{n+1}` by secant iteration on
//! the discrete Stefan condition; for a trial `S` the field is obtained by
//! Picard iteration on the lagged coefficients. The flux-feedback source takes
//! `∂θ/∂x(0, t)` from the discrete field itself. Nothing from the similarity
//! solution enters the marching; it only provides the initial state at
//! `t_start` and the reference for [`compare`].

use thiserror::Error;

use crate::model::{ModelError, Problem, ProblemFingerprint, SourceSpec};
use crate::reconstruct::{self, PhysicalQuery, ReconstructError};
use crate::similarity::{SimilarityError, SimilaritySolution, SolverOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("nonlinear iteration failed to converge in step {step} (t = {t})")]
    NonConvergence { step: usize, t: f64 },
    #[error("front stopped advancing in step {step} (t = {t})")]
    FrontCollapse { step: usize, t: f64 },
    #[error("oracle run and similarity solution describe different problems")]
    MismatchedProblem,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Number of intervals on `ξ ∈ [0, 1]`.
    pub n_space: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Number of uniform time steps from `t_start` to `t_end`.
    pub n_time: usize,
    /// Implicitness weight: 0.5 is Crank-Nicolson, 1 is backward Euler.
    pub theta_scheme: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Store every k-th time level (the last one is always stored).
    pub record_every: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_space: 256,
            t_start: 0.01,
            t_end: 1.0,
            n_time: 4096,
            theta_scheme: 0.5,
            picard_tol: 1e-10,
            picard_max_iter: 50,
            record_every: 1,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(OracleError::InvalidConfig(m.to_string()));
        if self.n_space < 16 {
            return bad("n_space must be at least 16");
        }
        if self.n_time < 16 {
            return bad("n_time must be at least 16");
        }
        if !(self.t_start > 0.0 && self.t_start < self.t_end && self.t_end.is_finite()) {
            return bad("need 0 < t_start < t_end");
        }
        if !(0.5..=1.0).contains(&self.theta_scheme) {
            return bad("theta_scheme must lie in [0.5, 1]");
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iter == 0 {
            return bad("picard_tol and picard_max_iter must be positive");
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1");
        }
        Ok(())
    }

    /// The same run with space and time resolution multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_space: self.n_space * factor,
            n_time: self.n_time * factor,
            record_every: self.record_every * factor,
            ..*self
        }
    }
}

/// Output of a front-fixing run.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub times: Vec<f64>,
    /// Numerical front `s(tᵢ)`, m.
    pub front: Vec<f64>,
    /// Temperatures (K) at the `n_space + 1` grid nodes, one row per stored time.
    pub fields: Vec<Vec<f64>>,
    pub front_rel_err: f64,
    /// Max-norm temperature discrepancy, K.
    pub temp_max_err: f64,
    /// Largest number of nonlinear iterations used by any step.
    pub max_iterations: usize,
    fingerprint: ProblemFingerprint,
}

impl OracleRun {
    pub fn fingerprint(&self) -> &ProblemFingerprint {
        &self.fingerprint
    }

    /// ξ coordinates of the field columns.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.fields.first().map_or(1, |f| f.len() - 1);
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }
}

enum Forcing {
    None,
    /// `H/(ρc₀Δθ) = scale · β(η)/t`.
    Similarity { beta: crate::model::Beta, scale: f64 },
    /// `H/(ρc₀Δθ) = scale · u_ξ(0)/(s√t)`.
    Feedback { scale: f64 },
}

struct FrontFixing {
    n: usize,
    h: f64,
    xi: Vec<f64>,
    diffusivity: f64,
    /// `a = √D`, for η = x/(2a√t).
    a: f64,
    stefan: f64,
    delta: f64,
    p: f64,
    forcing: Forcing,
    theta: f64,
    tol: f64,
    max_iter: usize,
}

struct StepOutcome {
    u: Vec<f64>,
    s2: f64,
    iterations: usize,
}

impl FrontFixing {
    fn new(problem: &Problem, cfg: &OracleConfig) -> Self {
        let mat = problem.material;
        let span = problem.boundary.span();
        let n = cfg.n_space;
        let diffusivity = mat.k0 / (mat.rho * mat.c0);
        let forcing = match &problem.source {
            SourceSpec::None => Forcing::None,
            src @ (SourceSpec::Exponential | SourceSpec::Similarity { .. }) => Forcing::Similarity {
                beta: src.beta().expect("similarity-type source"),
                scale: mat.latent_heat / (mat.c0 * span),
            },
            SourceSpec::FluxFeedback { lambda0 } => Forcing::Feedback {
                scale: lambda0 / (mat.rho * mat.c0),
            },
        };
        Self {
            n,
            h: 1.0 / n as f64,
            xi: (0..=n).map(|i| i as f64 / n as f64).collect(),
            diffusivity,
            a: diffusivity.sqrt(),
            stefan: mat.k0 * span / (mat.rho * mat.latent_heat),
            delta: mat.delta,
            p: mat.p,
            forcing,
            theta: cfg.theta_scheme,
            tol: cfg.picard_tol,
            max_iter: cfg.picard_max_iter,
        }
    }

    #[inline]
    fn factor(&self, u: f64) -> f64 {
        1.0 + self.delta * u.max(0.0).powf(self.p)
    }

    /// Rate of change of `S = s²` from the one-sided front gradient.
    fn s2_rate(&self, u: &[f64]) -> f64 {
        let n = self.n;
        let grad = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * self.h);
        -2.0 * self.stefan * grad
    }

    /// Dimensionless source at every node, `H/(ρc₀Δθ)`.
    fn forcing(&self, u: &[f64], s2: f64, t: f64, out: &mut [f64]) {
        match &self.forcing {
            Forcing::None => out.fill(0.0),
            Forcing::Similarity { beta, scale } => {
                let stretch = s2.sqrt() / (2.0 * self.a * t.sqrt());
                for (o, &xi) in out.iter_mut().zip(&self.xi) {
                    *o = scale * beta.eval(xi * stretch) / t;
                }
            }
            Forcing::Feedback { scale } => {
                let grad0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * self.h);
                out.fill(scale * grad0 / (s2.sqrt() * t.sqrt()));
            }
        }
    }

    /// Explicit part `(D/S)(K u_ξ)_ξ + C ξ w u_ξ` at interior nodes, with the
    /// capacity `C` supplied per node.
    fn operator(&self, u: &[f64], s2: f64, w: f64, capacity: &[f64], out: &mut [f64]) {
        let h = self.h;
        let d = self.diffusivity / (s2 * h * h);
        for i in 1..self.n {
            let kp = self.factor(0.5 * (u[i] + u[i + 1]));
            let km = self.factor(0.5 * (u[i - 1] + u[i]));
            let diff = d * (kp * (u[i + 1] - u[i]) - km * (u[i] - u[i - 1]));
            let adv = capacity[i] * self.xi[i] * w * (u[i + 1] - u[i - 1]) / (2.0 * h);
            out[i] = diff + adv;
        }
    }

    /// Field at `t_new` for a trial `S^{n+1}`, by Picard iteration.
    fn solve_field(&self, u_old: &[f64], s2_old: f64, t_old: f64, s2: f64, t_new: f64, guess: &[f64]) -> Option<(Vec<f64>, usize)> {
        let n = self.n;
        let dt = t_new - t_old;
        let th = self.theta;
        let rate = (s2 - s2_old) / dt;
        let w_new = rate / (2.0 * s2);
        let w_old = rate / (2.0 * s2_old);
        let h = self.h;
        let d_new = self.diffusivity / (s2 * h * h);

        let mut u = guess.to_vec();
        let mut capacity = vec![0.0; n + 1];
        let mut explicit = vec![0.0; n + 1];
        let mut f_old = vec![0.0; n + 1];
        let mut f_new = vec![0.0; n + 1];
        let (mut lower, mut diag, mut upper, mut rhs) =
            (vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]);
        self.forcing(u_old, s2_old, t_old, &mut f_old);

        for iter in 1..=self.max_iter {
            for i in 0..=n {
                capacity[i] = self.factor(th * u[i] + (1.0 - th) * u_old[i]);
            }
            self.operator(u_old, s2_old, w_old, &capacity, &mut explicit);
            self.forcing(&u, s2, t_new, &mut f_new);
            for i in 1..n {
                let kp = self.factor(0.5 * (u[i] + u[i + 1]));
                let km = self.factor(0.5 * (u[i - 1] + u[i]));
                let adv = capacity[i] * self.xi[i] * w_new / (2.0 * h);
                lower[i] = -th * (d_new * km - adv);
                upper[i] = -th * (d_new * kp + adv);
                diag[i] = capacity[i] / dt + th * d_new * (kp + km);
                rhs[i] = capacity[i] / dt * u_old[i] + (1.0 - th) * explicit[i]
                    - th * f_new[i]
                    - (1.0 - th) * f_old[i];
            }
            // Dirichlet data u(0) = 1, u(1) = 0.
            rhs[1] -= lower[1];
            let next = thomas(&lower[1..n], &diag[1..n], &upper[1..n], &rhs[1..n]);
            let mut change: f64 = 0.0;
            for (i, v) in next.into_iter().enumerate() {
                change = change.max((v - u[i + 1]).abs());
                u[i + 1] = v;
            }
            u[0] = 1.0;
            u[n] = 0.0;
            if change <= self.tol {
                return Some((u, iter));
            }
        }
        None
    }

    fn step(&self, u_old: &[f64], s2_old: f64, t_old: f64, t_new: f64, s2_guess: f64) -> Option<StepOutcome> {
        let dt = t_new - t_old;
        let th = self.theta;
        let rate_old = self.s2_rate(u_old);
        let mut iterations = 0;
        let mut field = u_old.to_vec();

        // Residual of the discrete Stefan condition for a trial S.
        let residual = |s2: f64, field: &mut Vec<f64>, iterations: &mut usize| -> Option<f64> {
            let (u, it) = self.solve_field(u_old, s2_old, t_old, s2, t_new, field)?;
            *iterations += it;
            let r = s2 - s2_old - dt * (th * self.s2_rate(&u) + (1.0 - th) * rate_old);
            *field = u;
            Some(r)
        };

        let mut s_a = s2_guess;
        let mut r_a = residual(s_a, &mut field, &mut iterations)?;
        // Fixed-point update for the second secant point.
        let mut s_b = s_a - r_a;
        for _ in 0..self.max_iter {
            let r_b = residual(s_b, &mut field, &mut iterations)?;
            if r_b.abs() <= self.tol * s_b.abs() {
                return Some(StepOutcome {
                    u: field,
                    s2: s_b,
                    iterations,
                });
            }
            let denom = r_b - r_a;
            let next = if denom != 0.0 { s_b - r_b * (s_b - s_a) / denom } else { s_b - r_b };
            s_a = s_b;
            r_a = r_b;
            s_b = if next > 0.0 { next } else { 0.5 * s_b };
        }
        None
    }
}

/// Tridiagonal solve; `lower[0]` and `upper[last]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..m {
        let denom = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = d[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn initial_field(sol: &SimilaritySolution, n: usize, t: f64) -> Result<(Vec<f64>, f64)> {
    let front = reconstruct::front_position(sol, t)?;
    let bd = sol.problem().boundary;
    let mut theta = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = if i == n { front } else { front * i as f64 / n as f64 };
        theta.push(reconstruct::temperature(sol, PhysicalQuery::new(x, t))?);
    }
    theta[0] = bd.theta0;
    theta[n] = bd.theta_f;
    Ok((theta, front))
}

/// A run holding only the initial state at `t_start`.
pub fn initial_run(sol: &SimilaritySolution, cfg: &OracleConfig) -> Result<OracleRun> {
    cfg.validate()?;
    let (theta, front) = initial_field(sol, cfg.n_space, cfg.t_start)?;
    Ok(OracleRun {
        times: vec![cfg.t_start],
        front: vec![front],
        fields: vec![theta],
        front_rel_err: 0.0,
        temp_max_err: 0.0,
        max_iterations: 0,
        fingerprint: sol.problem().fingerprint(),
    })
}

/// Marches the PDE for `problem` from the state of `init` at `t_start`.
/// Error metrics are left at zero; see [`compare`].
pub fn march(problem: &Problem, init: &SimilaritySolution, cfg: &OracleConfig) -> Result<OracleRun> {
    if problem.fingerprint() != init.problem().fingerprint() {
        return Err(OracleError::MismatchedProblem);
    }
    let mut run = initial_run(init, cfg)?;
    let solver = FrontFixing::new(problem, cfg);
    let bd = problem.boundary;
    let span = bd.span();
    let mut u: Vec<f64> = run.fields[0].iter().map(|th| (th - bd.theta_f) / span).collect();
    let mut s2 = run.front[0] * run.front[0];
    let mut s2_prev: Option<f64> = None;
    let dt = (cfg.t_end - cfg.t_start) / cfg.n_time as f64;

    for step in 1..=cfg.n_time {
        let t_old = cfg.t_start + (step - 1) as f64 * dt;
        let t_new = if step == cfg.n_time { cfg.t_end } else { cfg.t_start + step as f64 * dt };
        let guess = match s2_prev {
            Some(prev) => 2.0 * s2 - prev,
            None => s2 + (t_new - t_old) * solver.s2_rate(&u),
        };
        let out = solver
            .step(&u, s2, t_old, t_new, guess)
            .ok_or(OracleError::NonConvergence { step, t: t_new })?;
        if !(out.s2 > s2) {
            return Err(OracleError::FrontCollapse { step, t: t_new });
        }
        s2_prev = Some(s2);
        s2 = out.s2;
        u = out.u;
        run.max_iterations = run.max_iterations.max(out.iterations);
        if step % cfg.record_every == 0 || step == cfg.n_time {
            run.times.push(t_new);
            run.front.push(s2.sqrt());
            run.fields.push(u.iter().map(|v| bd.theta_f + span * v).collect());
        }
    }
    Ok(run)
}

/// Solves the similarity problem for the initial state, marches the PDE and
/// fills in the error metrics against the similarity solution.
pub fn run_oracle(problem: &Problem, cfg: &OracleConfig) -> Result<OracleRun> {
    cfg.validate()?;
    let sol = SimilaritySolution::solve(problem, SolverOptions::default())?;
    let mut run = march(problem, &sol, cfg)?;
    let (front_rel_err, temp_max_err) = compare(&sol, &run)?;
    run.front_rel_err = front_rel_err;
    run.temp_max_err = temp_max_err;
    Ok(run)
}

/// `(max_t |s_num - s|/s, max |θ_num - θ|)` over every stored time level.
/// Nodes that the numerical front places beyond the exact front compare
/// against `θ_f`.
pub fn compare(sol: &SimilaritySolution, run: &OracleRun) -> Result<(f64, f64)> {
    if sol.problem().fingerprint() != run.fingerprint {
        return Err(OracleError::MismatchedProblem);
    }
    let theta_f = sol.problem().boundary.theta_f;
    let mut front_err: f64 = 0.0;
    let mut temp_err: f64 = 0.0;
    for ((&t, &s_num), field) in run.times.iter().zip(&run.front).zip(&run.fields) {
        let s_exact = reconstruct::front_position(sol, t)?;
        front_err = front_err.max((s_num - s_exact).abs() / s_exact);
        let n = field.len() - 1;
        for (i, &th) in field.iter().enumerate() {
            let x = s_num * i as f64 / n as f64;
            let exact = if x >= s_exact {
                theta_f
            } else {
                reconstruct::temperature(sol, PhysicalQuery::new(x, t))?
            };
            temp_err = temp_err.max((th - exact).abs());
        }
    }
    Ok((front_err, temp_err))
}

/// Relative front error of a run against an arbitrary coefficient λ,
/// `max_t |s_num - 2aλ√t| / (2aλ√t)`.
pub fn front_error_against(run: &OracleRun, a: f64, lambda: f64) -> f64 {
    run.times
        .iter()
        .zip(&run.front)
        .map(|(&t, &s)| {
            let s_ref = 2.0 * a * lambda * t.sqrt();
            (s - s_ref).abs() / s_ref
        })
        .fold(0.0, f64::max)
}

/// One level of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceLevel {
    pub n_space: usize,
    pub n_time: usize,
    pub final_front: f64,
    pub front_rel_err: f64,
    pub temp_max_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub levels: Vec<ConvergenceLevel>,
}

impl ConvergenceStudy {
    /// `log₂(|s₁ - s₂| / |s₂ - s₃|)` over consecutive triples of final fronts.
    pub fn self_convergence_orders(&self) -> Vec<f64> {
        self.levels
            .windows(3)
            .map(|w| {
                let d1 = (w[0].final_front - w[1].final_front).abs();
                let d2 = (w[1].final_front - w[2].final_front).abs();
                (d1 / d2).log2()
            })
            .collect()
    }

    /// `log₂(e_k / e_{k+1})` of the front error against the similarity solution.
    pub fn error_orders(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| (w[0].front_rel_err / w[1].front_rel_err).log2())
            .collect()
    }
}

/// Runs `levels` grids, each refining space and time by 2 relative to the
/// previous one, concurrently.
pub fn convergence_study(problem: &Problem, coarsest: &OracleConfig, levels: usize) -> Result<ConvergenceStudy> {
    coarsest.validate()?;
    let sol = SimilaritySolution::solve(problem, SolverOptions::default())?;
    let configs: Vec<OracleConfig> = (0..levels).map(|k| coarsest.refined(1 << k)).collect();
    let results: Vec<Result<ConvergenceLevel>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| {
                let sol = &sol;
                scope.spawn(move || {
                    let run = march(problem, sol, cfg)?;
                    let (front_rel_err, temp_max_err) = compare(sol, &run)?;
                    Ok(ConvergenceLevel {
                        n_space: cfg.n_space,
                        n_time: cfg.n_time,
                        final_front: *run.front.last().expect("at least one time level"),
                        front_rel_err,
                        temp_max_err,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("oracle thread panicked")).collect()
    });
    Ok(ConvergenceStudy {
        levels: results.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DimensionlessSource;

    fn coarse() -> OracleConfig {
        OracleConfig {
            n_space: 64,
            n_time: 256,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        for bad in [
            OracleConfig { n_space: 8, ..OracleConfig::default() },
            OracleConfig { n_time: 4, ..OracleConfig::default() },
            OracleConfig { t_start: 0.0, ..OracleConfig::default() },
            OracleConfig { t_end: 0.001, ..OracleConfig::default() },
            OracleConfig { theta_scheme: 0.3, ..OracleConfig::default() },
        ] {
            assert!(matches!(bad.validate(), Err(OracleError::InvalidConfig(_))));
        }
    }

    #[test]
    fn thomas_solves_small_system() {
        // [2 1 0; 1 2 1; 0 1 2] x = [4 8 8] → x = [1 2 3]
        let x = thomas(&[0.0, 1.0, 1.0], &[2.0, 2.0, 2.0], &[1.0, 1.0, 0.0], &[4.0, 8.0, 8.0]);
        for (a, b) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn unstepped_run_compares_exactly() {
        let pb = Problem::from_dimensionless(1.0, 1.0, 1.0, DimensionlessSource::Exponential).unwrap();
        let sol = SimilaritySolution::solve(&pb, SolverOptions::default()).unwrap();
        let run = initial_run(&sol, &coarse()).unwrap();
        assert_eq!(compare(&sol, &run).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn mismatched_problem_is_rejected() {
        let a = Problem::from_dimensionless(1.0, 1.0, 1.0, DimensionlessSource::Exponential).unwrap();
        let b = Problem::from_dimensionless(2.0, 1.0, 1.0, DimensionlessSource::Exponential).unwrap();
        let sol_a = SimilaritySolution::solve(&a, SolverOptions::default()).unwrap();
        let sol_b = SimilaritySolution::solve(&b, SolverOptions::default()).unwrap();
        let run = initial_run(&sol_a, &coarse()).unwrap();
        assert_eq!(compare(&sol_b, &run), Err(OracleError::MismatchedProblem));
        assert!(matches!(march(&b, &sol_a, &coarse()), Err(OracleError::MismatchedProblem)));
    }

    #[test]
    fn coarse_runs_track_the_front() {
        for src in [
            DimensionlessSource::None,
            DimensionlessSource::Exponential,
            DimensionlessSource::Feedback(1.0),
        ] {
            let pb = Problem::from_dimensionless(1.0, 1.0, 1.0, src).unwrap();
            let run = run_oracle(&pb, &coarse()).unwrap();
            assert!(run.front.windows(2).all(|w| w[1] > w[0]));
            assert!(run.front_rel_err < 0.01, "front error {}", run.front_rel_err);
            let eps = 1e-6;
            for field in &run.fields {
                assert!(field.iter().all(|&th| (-eps..=1.0 + eps).contains(&th)));
            }
        }
    }
}
