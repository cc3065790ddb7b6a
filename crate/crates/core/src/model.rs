//! Material, boundary and source data for the one-phase melting problem,
//! together with the derived dimensionless groups.
//!
//! Units are SI throughout: temperatures in K, lengths in m, times in s.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Relative slack (of `θ₀ - θ_f`) accepted on temperature arguments.
pub const TEMPERATURE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ModelError::InvalidInput(msg.into()))
}

/// Thermal data of the phase-change material.
///
/// Conductivity and specific heat share the nonlinear factor
/// `1 + delta * u^p` with `u = (θ - θ_f)/(θ₀ - θ_f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Density ρ, kg/m³.
    pub rho: f64,
    /// Specific heat at the phase-change temperature, J/(kg·K).
    pub c0: f64,
    /// Conductivity at the phase-change temperature, W/(m·K).
    pub k0: f64,
    /// Latent heat l, J/kg.
    pub latent_heat: f64,
    pub delta: f64,
    pub p: f64,
}

impl Material {
    pub fn new(rho: f64, c0: f64, k0: f64, latent_heat: f64, delta: f64, p: f64) -> Result<Self> {
        let m = Self {
            rho,
            c0,
            k0,
            latent_heat,
            delta,
            p,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rho", self.rho),
            ("c0", self.c0),
            ("k0", self.k0),
            ("latent_heat", self.latent_heat),
            ("delta", self.delta),
            ("p", self.p),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(format!("material.{name} must be positive and finite (got {v})"));
            }
        }
        Ok(())
    }

    /// Diffusivity scale `a = √(k₀/(ρ c₀))`, m/s^½.
    pub fn diffusivity_scale(&self) -> f64 {
        (self.k0 / (self.rho * self.c0)).sqrt()
    }

    /// The shared factor `1 + δ u^p` for a normalized temperature `u ∈ [0, 1]`.
    #[inline]
    pub fn nonlinear_factor(&self, u: f64) -> f64 {
        1.0 + self.delta * u.powf(self.p)
    }
}

/// Fixed-face and phase-change temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    /// Imposed temperature at x = 0, K.
    pub theta0: f64,
    /// Phase-change temperature, K.
    pub theta_f: f64,
}

impl BoundaryData {
    pub fn new(theta0: f64, theta_f: f64) -> Result<Self> {
        let b = Self { theta0, theta_f };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta0.is_finite() && self.theta_f.is_finite()) {
            return invalid("boundary temperatures must be finite");
        }
        if self.theta0 <= self.theta_f {
            return invalid(format!(
                "boundary.theta0 must exceed boundary.theta_f (got theta0 = {}, theta_f = {})",
                self.theta0, self.theta_f
            ));
        }
        Ok(())
    }

    pub fn span(&self) -> f64 {
        self.theta0 - self.theta_f
    }

    /// Normalized temperature `(θ - θ_f)/(θ₀ - θ_f)`, validated against the
    /// range with a small slack and clamped into `[0, 1]`.
    pub fn normalize(&self, theta: f64) -> Result<f64> {
        let span = self.span();
        let slack = TEMPERATURE_SLACK * span;
        if !(theta >= self.theta_f - slack && theta <= self.theta0 + slack) {
            return invalid(format!(
                "temperature {theta} outside [{}, {}]",
                self.theta_f, self.theta0
            ));
        }
        Ok(((theta - self.theta_f) / span).clamp(0.0, 1.0))
    }
}

/// Dimensionless source profile β(η). Callers guarantee `β ≥ 0`, integrability
/// near 0, and integrability of `β(η) exp(η²)` at infinity.
pub type BetaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A named β profile. The name participates in problem fingerprints.
#[derive(Clone)]
pub struct Beta {
    name: String,
    f: BetaFn,
}

impl Beta {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `β ≡ 0`.
    pub fn zero() -> Self {
        Self::new("zero", |_| 0.0)
    }

    /// `β(η) = amplitude · exp(-decay · η²)`.
    pub fn gaussian(amplitude: f64, decay: f64) -> Self {
        Self::new(format!("gaussian({amplitude:?},{decay:?})"), move |eta| {
            amplitude * (-decay * eta * eta).exp()
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, eta: f64) -> f64 {
        (self.f)(eta)
    }
}

impl fmt::Debug for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Beta").field(&self.name).finish()
    }
}

/// Heat source models.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    /// `H = (ρ l / t) β(x / (2a√t))` for a general β.
    Similarity { beta: Beta },
    /// The similarity source with `β(η) = exp(-η²)/2`, solved in closed form.
    Exponential,
    /// `H = (λ₀/√t) ∂θ/∂x(0, t)`: feedback on the fixed-face heat flux.
    FluxFeedback { lambda0: f64 },
    /// `H = 0`.
    None,
}

impl SourceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SourceSpec::FluxFeedback { lambda0 } if !(*lambda0 > 0.0 && lambda0.is_finite()) => {
                invalid(format!("source.lambda0 must be positive (got {lambda0})"))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SourceSpec::Similarity { .. } => "similarity",
            SourceSpec::Exponential => "exponential",
            SourceSpec::FluxFeedback { .. } => "feedback",
            SourceSpec::None => "none",
        }
    }

    /// β for the similarity-type sources, `None` otherwise.
    pub fn beta(&self) -> Option<Beta> {
        match self {
            SourceSpec::Similarity { beta } => Some(beta.clone()),
            SourceSpec::Exponential => Some(Beta::new("exponential", |eta| 0.5 * (-eta * eta).exp())),
            _ => None,
        }
    }
}

/// Derived dimensionless groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensionless {
    /// Stefan number `c₀(θ₀ - θ_f)/l`.
    pub ste: f64,
    /// Diffusivity scale `a = √(k₀/(ρc₀))`, m/s^½.
    pub a: f64,
    /// Feedback coefficient `A = 2λ₀/(ρc₀a)`, only for the flux-feedback source.
    pub feedback: Option<f64>,
}

pub fn stefan_number(mat: &Material, bd: &BoundaryData) -> Result<f64> {
    bd.validate()?;
    if !(mat.c0 > 0.0 && mat.latent_heat > 0.0) {
        return invalid("material.c0 and material.latent_heat must be positive");
    }
    Ok(mat.c0 * bd.span() / mat.latent_heat)
}

pub fn feedback_coefficient(mat: &Material, lambda0: f64) -> Result<f64> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return invalid(format!("source.lambda0 must be positive (got {lambda0})"));
    }
    Ok(2.0 * lambda0 / (mat.rho * mat.c0 * mat.diffusivity_scale()))
}

/// `k(θ) = k₀ (1 + δ u^p)`.
pub fn conductivity(mat: &Material, bd: &BoundaryData, theta: f64) -> Result<f64> {
    Ok(mat.k0 * mat.nonlinear_factor(bd.normalize(theta)?))
}

/// `c(θ) = c₀ (1 + δ u^p)`.
pub fn specific_heat(mat: &Material, bd: &BoundaryData, theta: f64) -> Result<f64> {
    Ok(mat.c0 * mat.nonlinear_factor(bd.normalize(theta)?))
}

/// A complete problem: material, boundary temperatures and heat source.
#[derive(Debug, Clone)]
pub struct Problem {
    pub material: Material,
    pub boundary: BoundaryData,
    pub source: SourceSpec,
}

/// Equality key for two problems. General β profiles compare by name.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFingerprint {
    material: Material,
    boundary: BoundaryData,
    source_kind: &'static str,
    source_detail: String,
}

impl Problem {
    pub fn new(material: Material, boundary: BoundaryData, source: SourceSpec) -> Result<Self> {
        material.validate()?;
        boundary.validate()?;
        source.validate()?;
        Ok(Self {
            material,
            boundary,
            source,
        })
    }

    /// Builds a problem with unit material (`ρ = c₀ = k₀ = 1`, so `a = 1`),
    /// `θ_f = 0`, `θ₀ = 1` and the latent heat chosen to realize `ste`.
    /// A feedback source given by its dimensionless coefficient `A` maps to
    /// `λ₀ = A/2`.
    pub fn from_dimensionless(ste: f64, delta: f64, p: f64, source: DimensionlessSource) -> Result<Self> {
        if !(ste > 0.0 && ste.is_finite()) {
            return invalid(format!("ste must be positive (got {ste})"));
        }
        let material = Material::new(1.0, 1.0, 1.0, 1.0 / ste, delta, p)?;
        let boundary = BoundaryData::new(1.0, 0.0)?;
        let source = match source {
            DimensionlessSource::None => SourceSpec::None,
            DimensionlessSource::Exponential => SourceSpec::Exponential,
            DimensionlessSource::Similarity(beta) => SourceSpec::Similarity { beta },
            DimensionlessSource::Feedback(a_coef) => {
                if !(a_coef > 0.0 && a_coef.is_finite()) {
                    return invalid(format!("feedback coefficient A must be positive (got {a_coef})"));
                }
                SourceSpec::FluxFeedback { lambda0: 0.5 * a_coef }
            }
        };
        Self::new(material, boundary, source)
    }

    pub fn dimensionless(&self) -> Result<Dimensionless> {
        let ste = stefan_number(&self.material, &self.boundary)?;
        let feedback = match self.source {
            SourceSpec::FluxFeedback { lambda0 } => Some(feedback_coefficient(&self.material, lambda0)?),
            _ => None,
        };
        Ok(Dimensionless {
            ste,
            a: self.material.diffusivity_scale(),
            feedback,
        })
    }

    pub fn fingerprint(&self) -> ProblemFingerprint {
        let source_detail = match &self.source {
            SourceSpec::Similarity { beta } => beta.name().to_string(),
            SourceSpec::FluxFeedback { lambda0 } => format!("{lambda0:?}"),
            _ => String::new(),
        };
        ProblemFingerprint {
            material: self.material,
            boundary: self.boundary,
            source_kind: self.source.kind(),
            source_detail,
        }
    }
}

/// Source selection for [`Problem::from_dimensionless`].
#[derive(Debug, Clone)]
pub enum DimensionlessSource {
    None,
    Exponential,
    Similarity(Beta),
    /// Feedback coefficient `A`.
    Feedback(f64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_material(delta: f64, p: f64) -> Material {
        Material::new(1.0, 1.0, 1.0, 1.0, delta, p).unwrap()
    }

    #[test]
    fn stefan_number_examples() {
        let m = Material::new(1.0, 1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(stefan_number(&m, &BoundaryData::new(2.0, 1.0).unwrap()).unwrap(), 0.5);
        let m = unit_material(1.0, 1.0);
        assert_eq!(stefan_number(&m, &BoundaryData::new(274.15, 273.15).unwrap()).unwrap(), 1.0);
        let water = Material::new(1000.0, 2000.0, 0.6, 334_000.0, 0.1, 1.0).unwrap();
        let ste = stefan_number(&water, &BoundaryData::new(25.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(ste, 2000.0 * 25.0 / 334_000.0, max_relative = 1e-15);
        assert!((ste - 0.1497).abs() < 1e-4);
    }

    #[test]
    fn stefan_number_rejects_inverted_boundary() {
        let m = unit_material(1.0, 1.0);
        let bd = BoundaryData {
            theta0: 1.0,
            theta_f: 1.0,
        };
        let err = stefan_number(&m, &bd).unwrap_err();
        assert!(err.to_string().contains("theta0"));
        assert!(BoundaryData::new(0.0, 1.0).is_err());
    }

    #[test]
    fn feedback_coefficient_examples() {
        let m = unit_material(1.0, 1.0);
        assert_eq!(feedback_coefficient(&m, 0.5).unwrap(), 1.0);
        let m = Material::new(1.0, 4.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(feedback_coefficient(&m, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        let m = Material::new(1000.0, 4200.0, 0.6, 334_000.0, 1.0, 1.0).unwrap();
        let a = (0.6f64 / 4.2e6).sqrt();
        let want = 20.0 / (4.2e6 * a);
        assert_relative_eq!(feedback_coefficient(&m, 10.0).unwrap(), want, max_relative = 1e-14);
        assert!((want - 0.012_599).abs() < 1e-6);
        assert!(feedback_coefficient(&m, 0.0).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let bd = BoundaryData::new(10.0, 0.0).unwrap();
        let m = Material::new(1.0, 3.0, 2.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(conductivity(&m, &bd, 0.0).unwrap(), 2.0);
        assert_eq!(conductivity(&m, &bd, 10.0).unwrap(), 4.0);
        assert_eq!(conductivity(&m, &bd, 5.0).unwrap(), 2.0 * 1.25);
        assert_eq!(specific_heat(&m, &bd, 5.0).unwrap(), 3.0 * 1.25);
        // Within slack is accepted, beyond is not.
        assert_eq!(conductivity(&m, &bd, -1e-9).unwrap(), 2.0);
        assert!(conductivity(&m, &bd, -1e-6).is_err());
        assert!(specific_heat(&m, &bd, 10.1).is_err());
    }

    #[test]
    fn invalid_material_and_source() {
        assert!(Material::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(Material::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        let err = Problem::new(
            unit_material(1.0, 1.0),
            BoundaryData::new(1.0, 0.0).unwrap(),
            SourceSpec::FluxFeedback { lambda0: 0.0 },
        )
        .unwrap_err();
        assert!(err.to_string().contains("lambda0"));
    }

    #[test]
    fn dimensionless_round_trip() {
        let pb = Problem::from_dimensionless(2.5, 1.0, 1.0, DimensionlessSource::Feedback(0.7)).unwrap();
        let d = pb.dimensionless().unwrap();
        assert_relative_eq!(d.ste, 2.5, max_relative = 1e-15);
        assert_eq!(d.a, 1.0);
        assert_relative_eq!(d.feedback.unwrap(), 0.7, max_relative = 1e-15);
    }

    #[test]
    fn fingerprints_distinguish_sources() {
        let a = Problem::from_dimensionless(1.0, 1.0, 1.0, DimensionlessSource::Exponential).unwrap();
        let b = Problem::from_dimensionless(1.0, 1.0, 1.0, DimensionlessSource::None).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }

    proptest! {
        #[test]
        fn coefficient_factors_agree(delta in 0.01f64..10.0, p in 0.1f64..4.0, s in 0.0f64..=1.0) {
            let m = Material::new(2.0, 3.0, 5.0, 7.0, delta, p).unwrap();
            let bd = BoundaryData::new(300.0, 250.0).unwrap();
            let th = 250.0 + 50.0 * s;
            let k = conductivity(&m, &bd, th).unwrap();
            let c = specific_heat(&m, &bd, th).unwrap();
            prop_assert!((k / m.k0 - c / m.c0).abs() <= 1e-14 * (k / m.k0));
            prop_assert!(k >= m.k0 && c >= m.c0);
        }

        #[test]
        fn conductivity_nondecreasing(delta in 0.01f64..10.0, p in 0.1f64..4.0, s in 0.0f64..1.0, ds in 0.0f64..1.0) {
            let m = Material::new(1.0, 1.0, 1.0, 1.0, delta, p).unwrap();
            let bd = BoundaryData::new(1.0, 0.0).unwrap();
            let s2 = (s + ds).min(1.0);
            prop_assert!(conductivity(&m, &bd, s).unwrap() <= conductivity(&m, &bd, s2).unwrap());
        }

        #[test]
        fn stefan_number_homogeneous(span in 0.1f64..100.0, alpha in 0.1f64..10.0) {
            let m = Material::new(1.0, 4.0, 1.0, 3.0, 1.0, 1.0).unwrap();
            let s1 = stefan_number(&m, &BoundaryData::new(span, 0.0).unwrap()).unwrap();
            let s2 = stefan_number(&m, &BoundaryData::new(alpha * span, 0.0).unwrap()).unwrap();
            prop_assert!((s2 - alpha * s1).abs() <= 1e-12 * s2);
        }
    }
}
