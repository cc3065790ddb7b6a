//! Physical fields from a solved similarity profile.

use thiserror::Error;

use crate::model::SourceSpec;
use crate::similarity::{SimilarityError, SimilaritySolution};

/// Relative slack past the front within which queries return `θ_f`.
pub const FRONT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("x = {x} lies beyond the front s(t) = {front}")]
    OutOfDomain { x: f64, front: f64 },
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
}

pub type Result<T> = std::result::Result<T, ReconstructError>;

/// A point `(x, t)` in the liquid region, metres and seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalQuery {
    pub x: f64,
    pub t: f64,
}

impl PhysicalQuery {
    pub fn new(x: f64, t: f64) -> Self {
        Self { x, t }
    }
}

fn positive_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ReconstructError::InvalidInput(format!("time must be positive (got {t})")))
    }
}

/// `η = x/(2a√t)`.
pub fn similarity_variable(sol: &SimilaritySolution, q: PhysicalQuery) -> Result<f64> {
    positive_time(q.t)?;
    Ok(q.x / (2.0 * sol.dimensionless().a * q.t.sqrt()))
}

/// `s(t) = 2aλ√t`.
pub fn front_position(sol: &SimilaritySolution, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(ReconstructError::InvalidInput(format!("time must be non-negative (got {t})")));
    }
    Ok(2.0 * sol.dimensionless().a * sol.lambda() * t.sqrt())
}

/// `θ(x, t) = θ_f + (θ₀ - θ_f) y(x/(2a√t))` for `0 ≤ x ≤ s(t)`.
pub fn temperature(sol: &SimilaritySolution, q: PhysicalQuery) -> Result<f64> {
    positive_time(q.t)?;
    if !(q.x >= 0.0) {
        return Err(ReconstructError::InvalidInput(format!("x must be non-negative (got {})", q.x)));
    }
    let bd = sol.problem().boundary;
    let front = front_position(sol, q.t)?;
    if q.x >= front {
        if q.x > front * (1.0 + FRONT_SLACK) {
            return Err(ReconstructError::OutOfDomain { x: q.x, front });
        }
        return Ok(bd.theta_f);
    }
    let eta = similarity_variable(sol, q)?.min(sol.lambda());
    Ok(bd.theta_f + bd.span() * sol.y(eta)?)
}

/// `∂θ/∂x(0, t) = (θ₀ - θ_f) y'(0) / (2a√t)`, negative.
pub fn fixed_face_flux(sol: &SimilaritySolution, t: f64) -> Result<f64> {
    positive_time(t)?;
    let bd = sol.problem().boundary;
    Ok(bd.span() * sol.y_prime0() / (2.0 * sol.dimensionless().a * t.sqrt()))
}

/// The heat source `H(x, t)` of the active model, W/m³.
pub fn source_field(sol: &SimilaritySolution, q: PhysicalQuery) -> Result<f64> {
    positive_time(q.t)?;
    let mat = sol.problem().material;
    match &sol.problem().source {
        SourceSpec::None => Ok(0.0),
        SourceSpec::FluxFeedback { lambda0 } => Ok(lambda0 / q.t.sqrt() * fixed_face_flux(sol, q.t)?),
        source @ (SourceSpec::Exponential | SourceSpec::Similarity { .. }) => {
            let beta = source.beta().expect("similarity-type source");
            let eta = similarity_variable(sol, q)?;
            Ok(mat.rho * mat.latent_heat / q.t * beta.eval(eta))
        }
    }
}
