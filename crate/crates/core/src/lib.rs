//! Explicit similarity solutions of the one-phase melting (Stefan) problem
//! with temperature-dependent conductivity and specific heat
//! `k, c ∝ 1 + δ ((θ - θ_f)/(θ₀ - θ_f))^p`, under either a similarity-type
//! heat source `H = (ρl/t) β(x/(2a√t))` or a source fed back from the
//! fixed-face heat flux `H = (λ₀/√t) ∂θ/∂x(0, t)`.
//!
//! The crate also ships an independent front-fixing finite-difference solver
//! ([`oracle`]) that integrates the moving-boundary PDE directly and is used
//! to check the closed-form constructions.

pub mod errata;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod reconstruct;
pub mod similarity;
pub mod verify;

pub use model::{
    BoundaryData, Beta, Dimensionless, DimensionlessSource, Material, ModelError, Problem, SourceSpec,
};
pub use numerics::{Bracket, NumericsError, Tolerance};
pub use oracle::{OracleConfig, OracleError, OracleRun};
pub use reconstruct::{PhysicalQuery, ReconstructError};
pub use verify::{Check, Report, VerifyConfig};
pub use similarity::{
    ProfileMode, SimilarityError, SimilarityParams, SimilaritySolution, SolverOptions, SourceModel,
};
