//! Similarity solutions `θ = θ_f + (θ₀ - θ_f) y(η)`, `s = 2aλ√t`.
//!
//! With `v = (1 + δ y^p) y'` both source models reduce to the first-order
//! equation `(v e^{η²})' = e^{η²} · rhs`, where `rhs = (4/Ste) β(η)` for the
//! similarity source and `rhs = A y'(0)` for the flux-feedback source. One
//! integration gives `y'(0)` from the Stefan condition `y'(λ) = -2λ/Ste`; a
//! second gives `Φ(y(η)) = Ψ(η)` with the increasing map
//! `Φ(x) = x + δ x^{p+1}/(p+1)` and a decreasing `Ψ`. Imposing `y(λ) = 0`
//! yields a monotone scalar equation `φ(λ) = 1 + δ/(p+1)` for λ.
//!
//! Source 1 (β general), with `I(x) = ∫₀ˣ β e^{ξ²}` and `J(x) = ∫₀ˣ β e^{ξ²} erf ξ`:
//!
//! ```text
//! (1+δ) y'(0) = -(2/Ste) (λ e^{λ²} + 2 I(λ))
//! φ₁(x)       = (√π/Ste) (x erf(x) e^{x²} + 2 J(x))
//! Ψ₁(η)       = 1 + δ/(p+1) - (√π/Ste) erf(η) (λ e^{λ²} + 2 I(λ)) + (2√π/Ste) (erf(η) I(η) - J(η))
//! ```
//!
//! Source 2 (feedback coefficient A), with `E(x) = ∫₀ˣ e^{z²}` and `K(x) = ∫₀ˣ e^{z²} erf z`:
//!
//! ```text
//! y'(0) = -2 λ e^{λ²} / (Ste (A E(λ) + 1 + δ))
//! φ₂(x) = √π x e^{x²} (A (erf(x) E(x) - K(x)) + (1+δ) erf(x)) / (Ste (A E(x) + 1 + δ))
//! Ψ₂(η) = 1 + δ/(p+1) - √π λ e^{λ²} (A (erf(η) E(η) - K(η)) + (1+δ) erf(η)) / (Ste (A E(λ) + 1 + δ))
//! ```
//!
//! For `β = e^{-η²}/2` the integrals are elementary (`I(x) = x/2`,
//! `∫₀ˣ erf = x erf x + (e^{-x²} - 1)/√π`), see [`solve_exponential_case`].

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{self, Beta, Dimensionless, ModelError, Problem, SourceSpec};
use crate::numerics::{self, Bracket, ChebyshevInterpolant, NumericsError, Tolerance};

/// Default number of Chebyshev nodes in the profile table.
pub const DEFAULT_TABLE_SIZE: usize = 129;

/// Slack accepted on Ψ values and η arguments before they count as out of range.
pub const PROFILE_SLACK: f64 = 1e-9;

/// Above this, `exp(x²)` overflows and the λ-equation is treated as `+∞`.
const EXP_ARG_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{equation}: {source}")]
    Equation {
        equation: &'static str,
        #[source]
        source: NumericsError,
    },
    #[error("eta = {eta} outside the liquid interval [0, {lambda}]")]
    EtaOutOfRange { eta: f64, lambda: f64 },
    #[error("Psi({eta}) = {psi} outside [0, {max}]")]
    PsiOutOfRange { eta: f64, psi: f64, max: f64 },
    #[error("{0} out of range")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, SimilarityError>;

fn ctx(equation: &'static str) -> impl Fn(NumericsError) -> SimilarityError {
    move |source| SimilarityError::Equation { equation, source }
}

/// The parameters that fully determine a dimensionless profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityParams {
    pub ste: f64,
    pub delta: f64,
    pub p: f64,
}

impl SimilarityParams {
    pub fn new(ste: f64, delta: f64, p: f64) -> Result<Self> {
        for (name, v) in [("ste", ste), ("delta", delta), ("p", p)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidInput(format!("{name} must be positive (got {v})")).into());
            }
        }
        Ok(Self { ste, delta, p })
    }

    /// `Φ(1) = 1 + δ/(p+1)`, the right-hand side of every λ-equation.
    pub fn target(&self) -> f64 {
        1.0 + self.delta / (self.p + 1.0)
    }
}

/// Dimensionless form of a [`SourceSpec`].
#[derive(Debug, Clone)]
pub enum SourceModel {
    None,
    Exponential,
    General(Beta),
    /// Flux feedback with coefficient `A`.
    Feedback(f64),
}

impl SourceModel {
    pub fn from_problem(source: &SourceSpec, dims: &Dimensionless) -> Self {
        match source {
            SourceSpec::None => SourceModel::None,
            SourceSpec::Exponential => SourceModel::Exponential,
            SourceSpec::Similarity { beta } => SourceModel::General(beta.clone()),
            SourceSpec::FluxFeedback { .. } => {
                SourceModel::Feedback(dims.feedback.expect("feedback source carries a coefficient"))
            }
        }
    }

    fn equation_name(&self) -> &'static str {
        match self {
            SourceModel::Feedback(_) => "flux-feedback lambda-equation",
            SourceModel::Exponential => "exponential-source lambda-equation",
            _ => "similarity-source lambda-equation",
        }
    }
}

/// `Φ(x) = x + δ x^{p+1}/(p+1)` on `[0, 1]`.
pub fn phi_map(delta: f64, p: f64, x: f64) -> Result<f64> {
    if !(x >= -PROFILE_SLACK && x <= 1.0 + PROFILE_SLACK) {
        return Err(SimilarityError::OutOfRange(format!("Phi argument {x}")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(phi_unchecked(delta, p, x))
}

#[inline]
fn phi_unchecked(delta: f64, p: f64, x: f64) -> f64 {
    x + delta / (p + 1.0) * x.powf(p + 1.0)
}

/// `Φ⁻¹(w)` for `w ∈ [0, 1 + δ/(p+1)]`.
pub fn phi_inverse(delta: f64, p: f64, w: f64) -> Result<f64> {
    let tol = Tolerance {
        abs_tol: PROFILE_SLACK,
        rel_tol: 1e-14,
        max_iter: 200,
    };
    let unit = Bracket::new(0.0, 1.0).expect("unit interval");
    numerics::invert_increasing(
        |x| phi_unchecked(delta, p, x),
        |x| 1.0 + delta * x.powf(p),
        w,
        unit,
        tol,
    )
    .map_err(ctx("Phi inversion"))
}

fn sqrt_pi() -> f64 {
    PI.sqrt()
}

/// Integrals of the source-1 profile for a general β.
struct BetaIntegrals<'a> {
    beta: &'a Beta,
    tol: Tolerance,
}

impl BetaIntegrals<'_> {
    /// `I(x) = ∫₀ˣ β(ξ) e^{ξ²} dξ`
    fn weighted(&self, x: f64) -> Result<f64> {
        numerics::integrate(|z| self.beta.eval(z) * (z * z).exp(), 0.0, x, self.tol)
            .map_err(ctx("source integral of beta*exp(eta^2)"))
    }

    /// `J(x) = ∫₀ˣ β(ξ) e^{ξ²} erf(ξ) dξ`
    fn weighted_erf(&self, x: f64) -> Result<f64> {
        numerics::integrate(|z| self.beta.eval(z) * (z * z).exp() * numerics::erf(z), 0.0, x, self.tol)
            .map_err(ctx("source integral of beta*exp(eta^2)*erf(eta)"))
    }
}

/// `E(x) = ∫₀ˣ e^{z²} dz`
fn exp_square_integral(x: f64, tol: Tolerance) -> Result<f64> {
    numerics::integrate(|z| (z * z).exp(), 0.0, x, tol).map_err(ctx("integral of exp(z^2)"))
}

/// `K(x) = ∫₀ˣ e^{z²} erf(z) dz`
fn exp_square_erf_integral(x: f64, tol: Tolerance) -> Result<f64> {
    numerics::integrate(|z| (z * z).exp() * numerics::erf(z), 0.0, x, tol)
        .map_err(ctx("integral of exp(z^2)*erf(z)"))
}

/// `∫₀ˣ erf(z) dz`
fn erf_antiderivative(x: f64) -> f64 {
    x * numerics::erf(x) + ((-x * x).exp() - 1.0) / sqrt_pi()
}

/// The monotone scalar equation `φ(x) = 1 + δ/(p+1)` determining λ.
#[derive(Debug, Clone)]
pub struct LambdaEquation {
    params: SimilarityParams,
    model: SourceModel,
    quad: Tolerance,
}

impl LambdaEquation {
    pub fn new(params: SimilarityParams, model: SourceModel) -> Self {
        Self::with_quadrature(params, model, Tolerance::quadrature())
    }

    pub fn with_quadrature(params: SimilarityParams, model: SourceModel, quad: Tolerance) -> Self {
        Self { params, model, quad }
    }

    pub fn target(&self) -> f64 {
        self.params.target()
    }

    /// The left side φ(x) for `x > 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x * x > EXP_ARG_LIMIT {
            return Ok(f64::INFINITY);
        }
        let SimilarityParams { ste, delta, .. } = self.params;
        let sp = sqrt_pi();
        let ex = (x * x).exp();
        let erf_x = numerics::erf(x);
        let value = match &self.model {
            SourceModel::None => sp / ste * x * erf_x * ex,
            SourceModel::Exponential => {
                sp / ste * x * erf_x * (ex + 1.0) - (1.0 - (-x * x).exp()) / ste
            }
            SourceModel::General(beta) => {
                let j = BetaIntegrals { beta, tol: self.quad }.weighted_erf(x)?;
                sp / ste * (x * erf_x * ex + 2.0 * j)
            }
            SourceModel::Feedback(a) => {
                let e = exp_square_integral(x, self.quad)?;
                let k = exp_square_erf_integral(x, self.quad)?;
                let one_delta = 1.0 + delta;
                sp * x * ex * (a * (erf_x * e - k) + one_delta * erf_x) / (ste * (a * e + one_delta))
            }
        };
        Ok(value)
    }

    pub fn residual(&self, x: f64) -> Result<f64> {
        Ok(self.evaluate(x)? - self.target())
    }

    /// Unique positive root, bracketed from `[1e-8, 1]` with upward doubling.
    pub fn solve(&self, tol: Tolerance) -> Result<f64> {
        let seed = Bracket::new(1e-8, 1.0).expect("seed bracket");
        let name = self.model.equation_name();
        numerics::find_root_increasing(
            |x| {
                self.evaluate(x).map_err(|e| match e {
                    SimilarityError::Equation { source, .. } => source,
                    _ => NumericsError::NonFinite { x },
                })
            },
            self.target(),
            seed,
            tol,
        )
        .map_err(ctx(name))
    }
}

#[derive(Debug, Clone)]
enum PsiShape {
    /// Source 1: `C = λ e^{λ²} + 2 I(λ)`.
    Similarity { model: SourceModel, c: f64 },
    /// Source 2: `C = √π λ e^{λ²} / (Ste (A E(λ) + 1 + δ))`.
    Feedback { a: f64, c: f64 },
}

/// The decreasing right-hand side Ψ of `Φ(y(η)) = Ψ(η)` on `[0, λ]`.
#[derive(Debug, Clone)]
pub struct PsiProfile {
    lambda: f64,
    params: SimilarityParams,
    shape: PsiShape,
    quad: Tolerance,
}

impl PsiProfile {
    pub fn new(lambda: f64, params: SimilarityParams, model: SourceModel) -> Result<Self> {
        Self::with_quadrature(lambda, params, model, Tolerance::quadrature())
    }

    pub fn with_quadrature(lambda: f64, params: SimilarityParams, model: SourceModel, quad: Tolerance) -> Result<Self> {
        if !(lambda > 0.0 && lambda * lambda <= EXP_ARG_LIMIT) {
            return Err(SimilarityError::OutOfRange(format!("lambda {lambda}")));
        }
        let el = lambda * (lambda * lambda).exp();
        let shape = match model {
            SourceModel::None => PsiShape::Similarity { model, c: el },
            SourceModel::Exponential => PsiShape::Similarity {
                model,
                c: el + lambda,
            },
            SourceModel::General(ref beta) => {
                let i = BetaIntegrals { beta, tol: quad }.weighted(lambda)?;
                PsiShape::Similarity {
                    c: el + 2.0 * i,
                    model,
                }
            }
            SourceModel::Feedback(a) => {
                let e = exp_square_integral(lambda, quad)?;
                let c = sqrt_pi() * el / (params.ste * (a * e + 1.0 + params.delta));
                PsiShape::Feedback { a, c }
            }
        };
        Ok(Self {
            lambda,
            params,
            shape,
            quad,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn check_eta(&self, eta: f64) -> Result<f64> {
        let slack = PROFILE_SLACK * self.lambda;
        if !(eta >= -slack && eta <= self.lambda + slack) {
            return Err(SimilarityError::EtaOutOfRange {
                eta,
                lambda: self.lambda,
            });
        }
        Ok(eta.clamp(0.0, self.lambda))
    }

    /// Ψ(η) without range clamping.
    pub fn evaluate(&self, eta: f64) -> Result<f64> {
        let eta = self.check_eta(eta)?;
        let SimilarityParams { ste, delta, .. } = self.params;
        let sp = sqrt_pi();
        let erf_eta = numerics::erf(eta);
        let base = self.params.target();
        let value = match &self.shape {
            PsiShape::Similarity { model, c } => {
                let local = match model {
                    SourceModel::None => 0.0,
                    // erf(η) I(η) - J(η) = ½ (η erf η - ∫₀^η erf)
                    SourceModel::Exponential => 0.5 * (eta * erf_eta - erf_antiderivative(eta)),
                    SourceModel::General(beta) => {
                        let ints = BetaIntegrals { beta, tol: self.quad };
                        erf_eta * ints.weighted(eta)? - ints.weighted_erf(eta)?
                    }
                    SourceModel::Feedback(_) => unreachable!("feedback handled by its own shape"),
                };
                base - sp / ste * erf_eta * c + 2.0 * sp / ste * local
            }
            PsiShape::Feedback { a, c } => {
                let e = exp_square_integral(eta, self.quad)?;
                let k = exp_square_erf_integral(eta, self.quad)?;
                base - c * (a * (erf_eta * e - k) + (1.0 + delta) * erf_eta)
            }
        };
        Ok(value)
    }

    /// `y(η) = Φ⁻¹(Ψ(η))`, with Ψ clamped into `[0, Φ(1)]` when within slack.
    pub fn y(&self, eta: f64) -> Result<f64> {
        let psi = self.evaluate(eta)?;
        let max = self.params.target();
        if !(psi >= -PROFILE_SLACK && psi <= max + PROFILE_SLACK) {
            return Err(SimilarityError::PsiOutOfRange { eta, psi, max });
        }
        phi_inverse(self.params.delta, self.params.p, psi.clamp(0.0, max))
    }
}

/// Pointwise or tabulated profile evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProfileMode {
    /// Barycentric Chebyshev interpolation of a precomputed table.
    #[default]
    Table,
    /// `Φ⁻¹(Ψ(η))` evaluated at every query.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub root: Tolerance,
    pub quadrature: Tolerance,
    pub table_size: usize,
    pub mode: ProfileMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            root: Tolerance::default(),
            quadrature: Tolerance::quadrature(),
            table_size: DEFAULT_TABLE_SIZE,
            mode: ProfileMode::Table,
        }
    }
}

/// A solved similarity profile together with the problem it solves.
#[derive(Debug, Clone)]
pub struct SimilaritySolution {
    problem: Problem,
    dimensionless: Dimensionless,
    params: SimilarityParams,
    model: SourceModel,
    psi: PsiProfile,
    y_prime0: f64,
    table: Option<ChebyshevInterpolant>,
    options: SolverOptions,
}

impl SimilaritySolution {
    pub fn solve(problem: &Problem, options: SolverOptions) -> Result<Self> {
        let dims = problem.dimensionless()?;
        let params = SimilarityParams::new(dims.ste, problem.material.delta, problem.material.p)?;
        let model = SourceModel::from_problem(&problem.source, &dims);
        let lambda =
            LambdaEquation::with_quadrature(params, model.clone(), options.quadrature).solve(options.root)?;
        let mut sol = Self::assemble(problem.clone(), dims, params, model, lambda, options)?;
        if options.mode == ProfileMode::Table {
            sol.build_table()?;
        }
        Ok(sol)
    }

    /// The profile for an arbitrary λ (not necessarily a root), evaluated
    /// pointwise. Used to probe the verification checks.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        let options = SolverOptions {
            mode: ProfileMode::Exact,
            ..self.options
        };
        Self::assemble(
            self.problem.clone(),
            self.dimensionless,
            self.params,
            self.model.clone(),
            lambda,
            options,
        )
    }

    fn assemble(
        problem: Problem,
        dimensionless: Dimensionless,
        params: SimilarityParams,
        model: SourceModel,
        lambda: f64,
        options: SolverOptions,
    ) -> Result<Self> {
        let psi = PsiProfile::with_quadrature(lambda, params, model.clone(), options.quadrature)?;
        let y_prime0 = match &psi.shape {
            PsiShape::Similarity { c, .. } => -2.0 * c / (params.ste * (1.0 + params.delta)),
            PsiShape::Feedback { c, .. } => -2.0 * c / sqrt_pi(),
        };
        Ok(Self {
            problem,
            dimensionless,
            params,
            model,
            psi,
            y_prime0,
            table: None,
            options,
        })
    }

    fn build_table(&mut self) -> Result<()> {
        let size = self.options.table_size.max(2);
        let table = ChebyshevInterpolant::from_fn(0.0, self.lambda(), size, |eta| self.psi.y(eta))?;
        self.table = Some(table);
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        self.psi.lambda
    }

    pub fn y_prime0(&self) -> f64 {
        self.y_prime0
    }

    pub fn params(&self) -> SimilarityParams {
        self.params
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn dimensionless(&self) -> Dimensionless {
        self.dimensionless
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    pub fn psi_profile(&self) -> &PsiProfile {
        &self.psi
    }

    pub fn lambda_equation(&self) -> LambdaEquation {
        LambdaEquation::with_quadrature(self.params, self.model.clone(), self.options.quadrature)
    }

    /// `φ(λ) - (1 + δ/(p+1))`.
    pub fn lambda_residual(&self) -> Result<f64> {
        self.lambda_equation().residual(self.lambda())
    }

    /// Exact pointwise `y(η) = Φ⁻¹(Ψ(η))`.
    pub fn y_exact(&self, eta: f64) -> Result<f64> {
        self.psi.y(eta)
    }

    /// `y(η)` using the table when one was built.
    pub fn y(&self, eta: f64) -> Result<f64> {
        match &self.table {
            Some(table) => {
                self.psi.check_eta(eta)?;
                Ok(table.eval(eta.clamp(0.0, self.lambda())).clamp(0.0, 1.0))
            }
            None => self.y_exact(eta),
        }
    }

    /// The dimensionless source term on the right of the profile ODE
    /// `2η v + v' = rhs(η)` with `v = (1 + δ y^p) y'`.
    pub fn ode_rhs(&self, eta: f64) -> f64 {
        let ste = self.params.ste;
        match &self.model {
            SourceModel::None => 0.0,
            SourceModel::Exponential => 4.0 / ste * 0.5 * (-eta * eta).exp(),
            SourceModel::General(beta) => 4.0 / ste * beta.eval(eta),
            SourceModel::Feedback(a) => a * self.y_prime0,
        }
    }
}

fn dimensionless_solution(params: SimilarityParams, model: SourceModel, tol: Tolerance) -> Result<SimilaritySolution> {
    let source = match model {
        SourceModel::None => model::DimensionlessSource::None,
        SourceModel::Exponential => model::DimensionlessSource::Exponential,
        SourceModel::General(beta) => model::DimensionlessSource::Similarity(beta),
        SourceModel::Feedback(a) => model::DimensionlessSource::Feedback(a),
    };
    let problem = Problem::from_dimensionless(params.ste, params.delta, params.p, source)?;
    let options = SolverOptions {
        root: tol,
        mode: ProfileMode::Exact,
        ..SolverOptions::default()
    };
    SimilaritySolution::solve(&problem, options)
}

/// λ for the similarity source with a general β.
pub fn solve_lambda_source1(ste: f64, delta: f64, p: f64, beta: &Beta, tol: Tolerance) -> Result<f64> {
    let params = SimilarityParams::new(ste, delta, p)?;
    LambdaEquation::new(params, SourceModel::General(beta.clone())).solve(tol)
}

/// λ for the flux-feedback source with coefficient `a_coef`.
pub fn solve_lambda_source2(ste: f64, delta: f64, p: f64, a_coef: f64, tol: Tolerance) -> Result<f64> {
    let params = SimilarityParams::new(ste, delta, p)?;
    if !(a_coef > 0.0 && a_coef.is_finite()) {
        return Err(ModelError::InvalidInput(format!("feedback coefficient must be positive (got {a_coef})")).into());
    }
    LambdaEquation::new(params, SourceModel::Feedback(a_coef)).solve(tol)
}

pub fn y_profile_source1(lambda: f64, ste: f64, delta: f64, p: f64, beta: &Beta, eta: f64) -> Result<f64> {
    let params = SimilarityParams::new(ste, delta, p)?;
    PsiProfile::new(lambda, params, SourceModel::General(beta.clone()))?.y(eta)
}

pub fn y_profile_source2(lambda: f64, ste: f64, delta: f64, p: f64, a_coef: f64, eta: f64) -> Result<f64> {
    let params = SimilarityParams::new(ste, delta, p)?;
    PsiProfile::new(lambda, params, SourceModel::Feedback(a_coef))?.y(eta)
}

/// `y'(0) = -(2/(Ste (1+δ))) (λ e^{λ²} + 2 ∫₀^λ β e^{ξ²})`.
pub fn y_prime_at_zero_source1(lambda: f64, ste: f64, delta: f64, beta: &Beta) -> Result<f64> {
    let i = BetaIntegrals {
        beta,
        tol: Tolerance::quadrature(),
    }
    .weighted(lambda)?;
    Ok(-2.0 / (ste * (1.0 + delta)) * (lambda * (lambda * lambda).exp() + 2.0 * i))
}

/// `y'(0) = -2 λ e^{λ²} / (Ste (A ∫₀^λ e^{z²} + 1 + δ))`.
pub fn y_prime_at_zero_source2(lambda: f64, ste: f64, delta: f64, a_coef: f64) -> Result<f64> {
    let e = exp_square_integral(lambda, Tolerance::quadrature())?;
    Ok(-2.0 * lambda * (lambda * lambda).exp() / (ste * (a_coef * e + 1.0 + delta)))
}

/// Closed-form treatment of `β(η) = e^{-η²}/2`: λ solves
/// `(√π/Ste) x erf(x) (e^{x²} + 1) - (1 - e^{-x²})/Ste = 1 + δ/(p+1)` and
/// `Ψ(η) = 1 + δ/(p+1) - (√π/Ste) λ (e^{λ²} + 1) erf(η) + (1 - e^{-η²})/Ste`.
pub fn solve_exponential_case(ste: f64, delta: f64, p: f64, tol: Tolerance) -> Result<SimilaritySolution> {
    dimensionless_solution(SimilarityParams::new(ste, delta, p)?, SourceModel::Exponential, tol)
}

/// For `p = 1`, `Φ⁻¹(w) = (√(1 + 2δw) - 1)/δ`.
pub fn phi_inverse_quadratic(delta: f64, w: f64) -> f64 {
    2.0 * w / (1.0 + (1.0 + 2.0 * delta * w).sqrt())
}
