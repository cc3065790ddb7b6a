//! Invariant checks for a solved similarity profile.
//!
//! Every check returns a [`Check`] row instead of an error: a failure to even
//! evaluate a quantity (for instance Ψ leaving its admissible range because λ
//! is wrong) is itself a failed check.

use std::fmt;

use crate::model::Beta;
use crate::numerics::Tolerance;
use crate::oracle::{self, OracleConfig, OracleRun};
use crate::similarity::{
    phi_map, LambdaEquation, PsiProfile, SimilarityError, SimilaritySolution, SourceModel,
};

/// Tolerances of the check suite.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub root_residual: f64,
    pub fixed_face: f64,
    pub front_value: f64,
    /// Relative tolerance on `y'(λ) = -2λ/Ste`.
    pub stefan_rel: f64,
    pub ode_residual: f64,
    pub ode_nodes: usize,
    pub monotone_samples: usize,
    pub closed_form: f64,
    /// Oracle comparison, skipped when `None`.
    pub oracle: Option<OracleConfig>,
    pub oracle_front_rel: f64,
    /// Relative to `θ₀ - θ_f`.
    pub oracle_temp_rel: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            root_residual: 1e-8,
            fixed_face: 1e-10,
            front_value: 1e-8,
            stefan_rel: 1e-5,
            ode_residual: 1e-4,
            ode_nodes: 200,
            monotone_samples: 201,
            closed_form: 1e-9,
            oracle: None,
            oracle_front_rel: 0.01,
            oracle_temp_rel: 0.01,
        }
    }
}

/// Outcome of one check. `value` is the measured quantity, compared with
/// `tolerance`; it is `NaN` when the quantity could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn measured(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: value.is_finite() && value <= tolerance,
            value,
            tolerance,
            detail: String::new(),
        }
    }

    fn from_result<E: fmt::Display>(name: &'static str, result: Result<f64, E>, tolerance: f64) -> Self {
        match result {
            Ok(value) => Self::measured(name, value, tolerance),
            Err(e) => Self {
                name,
                passed: false,
                value: f64::NAN,
                tolerance,
                detail: e.to_string(),
            },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} = {:e} (tol {:e})", self.name, self.value, self.tolerance)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `|φ(λ) - (1 + δ/(p+1))|`.
pub fn root_residual(sol: &SimilaritySolution) -> Result<f64, SimilarityError> {
    Ok(sol.lambda_residual()?.abs())
}

/// `(|y(0) - 1|, |y(λ)|)` from the pointwise profile.
pub fn boundary_defects(sol: &SimilaritySolution) -> Result<(f64, f64), SimilarityError> {
    Ok(((sol.y_exact(0.0)? - 1.0).abs(), sol.y_exact(sol.lambda())?.abs()))
}

fn phi_of_y(sol: &SimilaritySolution, eta: f64) -> Result<f64, SimilarityError> {
    let params = sol.params();
    phi_map(params.delta, params.p, sol.y_exact(eta)?)
}

/// Relative defect of the Stefan condition `y'(λ) = -2λ/Ste`.
///
/// The slope is a fourth-order backward difference of `Φ(y)`. Since
/// `Φ'(0) = 1` this is `y'(λ)`, and `Φ(y)` stays smooth at the front even when
/// `y^p` does not (`p < 1`).
pub fn stefan_defect(sol: &SimilaritySolution) -> Result<f64, SimilarityError> {
    let lam = sol.lambda();
    let h = 0.01 * lam;
    let w = |k: f64| phi_of_y(sol, lam - k * h);
    let slope = (25.0 * w(0.0)? - 48.0 * w(1.0)? + 36.0 * w(2.0)? - 16.0 * w(3.0)? + 3.0 * w(4.0)?) / (12.0 * h);
    let want = -2.0 * lam / sol.params().ste;
    Ok((slope - want).abs() / want.abs())
}

/// Max-norm residual of `2η v + v' = rhs` with `v = (Φ(y))'` on `nodes`
/// equispaced interior points, using fourth-order central differences.
pub fn ode_residual(sol: &SimilaritySolution, nodes: usize) -> Result<f64, SimilarityError> {
    let lam = sol.lambda();
    let mut worst: f64 = 0.0;
    for i in 1..=nodes {
        let eta = lam * i as f64 / (nodes + 1) as f64;
        let dist = eta.min(lam - eta);
        let h = (0.01 * lam).min(0.5 * dist);
        let w = |k: f64| phi_of_y(sol, eta + k * h);
        let (wm2, wm1, w0, wp1, wp2) = (w(-2.0)?, w(-1.0)?, w(0.0)?, w(1.0)?, w(2.0)?);
        let d1 = (wm2 - 8.0 * wm1 + 8.0 * wp1 - wp2) / (12.0 * h);
        let d2 = (-wm2 + 16.0 * wm1 - 30.0 * w0 + 16.0 * wp1 - wp2) / (12.0 * h * h);
        worst = worst.max((2.0 * eta * d1 + d2 - sol.ode_rhs(eta)).abs());
    }
    Ok(worst)
}

/// Largest violation of: `0 ≤ y ≤ 1`, `y` strictly decreasing, Ψ strictly
/// decreasing. Zero when everything holds on `samples` equispaced points.
pub fn monotonicity_defect(sol: &SimilaritySolution, samples: usize) -> Result<f64, SimilarityError> {
    let lam = sol.lambda();
    let psi = sol.psi_profile();
    let samples = samples.max(2);
    let mut worst: f64 = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..samples {
        let eta = lam * i as f64 / (samples - 1) as f64;
        let y = sol.y_exact(eta)?;
        let ps = psi.evaluate(eta)?;
        worst = worst.max(-y).max(y - 1.0);
        if let Some((y_prev, ps_prev)) = prev {
            // A non-decrease counts as a violation of at least one ulp.
            if y >= y_prev {
                worst = worst.max((y - y_prev).max(f64::EPSILON));
            }
            if ps >= ps_prev {
                worst = worst.max((ps - ps_prev).max(f64::EPSILON));
            }
        }
        prev = Some((y, ps));
    }
    // `max(-0.0)` can leave a negative zero behind.
    Ok(worst + 0.0)
}

/// For the exponential source: the larger of the λ difference and the max
/// profile difference between the closed-form path and the general
/// quadrature path with `β = e^{-η²}/2`. `None` for other sources.
pub fn closed_form_gap(sol: &SimilaritySolution, samples: usize) -> Option<Result<f64, SimilarityError>> {
    if !matches!(sol.model(), SourceModel::Exponential) {
        return None;
    }
    let run = || {
        let general = SourceModel::General(Beta::gaussian(0.5, 1.0));
        let opts = sol.options();
        let tol = Tolerance {
            abs_tol: opts.root.abs_tol.min(1e-12),
            ..opts.root
        };
        let lam_q = LambdaEquation::with_quadrature(sol.params(), general.clone(), opts.quadrature).solve(tol)?;
        let psi_q = PsiProfile::with_quadrature(sol.lambda(), sol.params(), general, opts.quadrature)?;
        let mut gap = (lam_q - sol.lambda()).abs();
        let samples = samples.max(2);
        for i in 0..samples {
            let eta = sol.lambda() * i as f64 / (samples - 1) as f64;
            gap = gap.max((psi_q.y(eta)? - sol.y_exact(eta)?).abs());
        }
        Ok(gap)
    };
    Some(run())
}

/// Runs every check. The oracle comparison is included when `cfg.oracle` is
/// set and yields two rows, one for the front and one for the temperature.
pub fn run_checks(sol: &SimilaritySolution, cfg: &VerifyConfig) -> Report {
    run_checks_with_oracle(sol, cfg).0
}

/// As [`run_checks`], also returning the oracle run when one was made and
/// completed.
pub fn run_checks_with_oracle(sol: &SimilaritySolution, cfg: &VerifyConfig) -> (Report, Option<OracleRun>) {
    let mut checks = vec![Check::from_result("lambda_residual", root_residual(sol), cfg.root_residual)];
    let lam = sol.lambda();
    checks.push(Check::from_result(
        "fixed_face_value",
        sol.y_exact(0.0).map(|y| (y - 1.0).abs()),
        cfg.fixed_face,
    ));
    checks.push(Check::from_result("front_value", sol.y_exact(lam).map(f64::abs), cfg.front_value));
    checks.push(Check::from_result("stefan_condition", stefan_defect(sol), cfg.stefan_rel));
    checks.push(Check::from_result("ode_residual", ode_residual(sol, cfg.ode_nodes), cfg.ode_residual));
    checks.push(Check::from_result(
        "monotonicity",
        monotonicity_defect(sol, cfg.monotone_samples),
        0.0,
    ));
    if let Some(gap) = closed_form_gap(sol, cfg.monotone_samples) {
        checks.push(Check::from_result("closed_form_vs_quadrature", gap, cfg.closed_form));
    }
    let mut kept = None;
    if let Some(ocfg) = &cfg.oracle {
        let span = sol.problem().boundary.span();
        let outcome = oracle::march(sol.problem(), sol, ocfg)
            .and_then(|run| oracle::compare(sol, &run).map(|errs| (run, errs)));
        match outcome {
            Ok((mut run, (front, temp))) => {
                run.front_rel_err = front;
                run.temp_max_err = temp;
                checks.push(Check::measured("oracle_front", front, cfg.oracle_front_rel));
                checks.push(Check::measured("oracle_temperature", temp / span, cfg.oracle_temp_rel));
                kept = Some(run);
            }
            Err(e) => {
                checks.push(Check::from_result("oracle_front", Err(e.clone()), cfg.oracle_front_rel));
                checks.push(Check::from_result("oracle_temperature", Err(e), cfg.oracle_temp_rel));
            }
        }
    }
    (Report { checks }, kept)
}
