//! Alternative sign conventions for the source-1 formulas, kept as negative
//! controls.
//!
//! Each function here evaluates a variant that differs from the forms in
//! [`crate::similarity`] by a sign or a factor. None of them satisfies the
//! profile ODE together with its boundary conditions, and the tests and the
//! acceptance suite check that this failure is visible:
//!
//! * [`flipped_psi_source1`] uses `2 I(λ) - λ e^{λ²}` in place of
//!   `2 I(λ) + λ e^{λ²}`. With λ from the correct λ-equation, `Ψ(λ)` ends up
//!   `2√π λ erf(λ) e^{λ²}/Ste` away from zero, so `y(λ) ≠ 0`.
//! * [`flipped_exponential_lambda`] and [`flipped_exponential_psi`] are the
//!   correct exponential-case formulas with β replaced by `-β`. They agree with
//!   each other but describe the opposite source, so the root differs from
//!   the physical one (by about 26% at `Ste = δ = p = 1`) and a
//!   finite-difference run drifts away from it.
//! * [`doubled_y_prime0_source1`] carries an extra factor of two.

use std::f64::consts::PI;

use crate::model::Beta;
use crate::numerics::{self, Bracket, Tolerance};
use crate::similarity::{Result, SimilarityError, SimilarityParams};

fn weighted(beta: &Beta, x: f64, tol: Tolerance) -> Result<f64> {
    numerics::integrate(|z| beta.eval(z) * (z * z).exp(), 0.0, x, tol).map_err(|source| {
        SimilarityError::Equation {
            equation: "flipped-sign source integral",
            source,
        }
    })
}

fn weighted_erf(beta: &Beta, x: f64, tol: Tolerance) -> Result<f64> {
    numerics::integrate(|z| beta.eval(z) * (z * z).exp() * numerics::erf(z), 0.0, x, tol).map_err(|source| {
        SimilarityError::Equation {
            equation: "flipped-sign source integral",
            source,
        }
    })
}

/// Ψ₁ with the sign of `λ e^{λ²}` reversed.
pub fn flipped_psi_source1(lambda: f64, params: SimilarityParams, beta: &Beta, eta: f64) -> Result<f64> {
    let tol = Tolerance::quadrature();
    let sp = PI.sqrt();
    let ste = params.ste;
    let erf_eta = numerics::erf(eta);
    let c = 2.0 * weighted(beta, lambda, tol)? - lambda * (lambda * lambda).exp();
    let local = erf_eta * weighted(beta, eta, tol)? - weighted_erf(beta, eta, tol)?;
    Ok(params.target() - sp / ste * erf_eta * c + 2.0 * sp / ste * local)
}

/// Left side of the exponential-case λ-equation with β replaced by `-β`:
/// `(1 - e^{-x²})/Ste + (√π/Ste) x erf(x) (e^{x²} - 1)`.
pub fn flipped_exponential_lhs(params: SimilarityParams, x: f64) -> f64 {
    let ste = params.ste;
    (1.0 - (-x * x).exp()) / ste + PI.sqrt() / ste * x * numerics::erf(x) * ((x * x).exp() - 1.0)
}

/// Root of [`flipped_exponential_lhs`] ` = 1 + δ/(p+1)`.
pub fn flipped_exponential_lambda(params: SimilarityParams, tol: Tolerance) -> Result<f64> {
    let seed = Bracket::new(1e-8, 1.0).expect("seed bracket");
    numerics::find_root_increasing(|x| Ok(flipped_exponential_lhs(params, x)), params.target(), seed, tol).map_err(
        |source| SimilarityError::Equation {
            equation: "flipped-sign exponential lambda-equation",
            source,
        },
    )
}

/// `Ψ(η) = 1 + δ/(p+1) + (e^{-η²} - 1)/Ste + (√π/Ste) λ erf(η) (1 - e^{λ²})`.
pub fn flipped_exponential_psi(lambda: f64, params: SimilarityParams, eta: f64) -> f64 {
    let ste = params.ste;
    params.target() + ((-eta * eta).exp() - 1.0) / ste
        + PI.sqrt() / ste * lambda * numerics::erf(eta) * (1.0 - (lambda * lambda).exp())
}

/// `y'(0)` for source 1 with prefactor `4/(Ste (1+δ))` instead of `2/(Ste (1+δ))`.
pub fn doubled_y_prime0_source1(lambda: f64, ste: f64, delta: f64, beta: &Beta) -> Result<f64> {
    let i = weighted(beta, lambda, Tolerance::quadrature())?;
    Ok(-4.0 / (ste * (1.0 + delta)) * (2.0 * i + lambda * (lambda * lambda).exp()))
}

/// `Φ⁻¹(w)` on `[0, ∞)`, so that values of Ψ above `Φ(1)` still map to a
/// (non-physical) `y > 1` instead of an error.
pub fn phi_inverse_unbounded(delta: f64, p: f64, w: f64) -> Result<f64> {
    if !(w >= 0.0 && w.is_finite()) {
        return Err(SimilarityError::OutOfRange(format!("Phi value {w}")));
    }
    let phi = |x: f64| x + delta / (p + 1.0) * x.powf(p + 1.0);
    // Φ(x) ≥ x, so [0, max(w, 1)] always contains the preimage.
    let domain = Bracket::new(0.0, w.max(1.0)).expect("non-empty domain");
    let tol = Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-14,
        max_iter: 200,
    };
    numerics::invert_increasing(phi, |x| 1.0 + delta * x.powf(p), w, domain, tol).map_err(|source| {
        SimilarityError::Equation {
            equation: "Phi inversion",
            source,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DimensionlessSource, Problem};
    use crate::similarity::{self, SimilaritySolution, SolverOptions};
    use approx::assert_relative_eq;

    fn exponential_beta() -> Beta {
        Beta::gaussian(0.5, 1.0)
    }

    fn unit_params() -> SimilarityParams {
        SimilarityParams::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn flipped_psi_misses_the_front() {
        let params = unit_params();
        let beta = exponential_beta();
        let lambda = similarity::solve_lambda_source1(1.0, 1.0, 1.0, &beta, Tolerance::default()).unwrap();
        let psi = flipped_psi_source1(lambda, params, &beta, lambda).unwrap();
        let expected = 2.0 * PI.sqrt() * lambda * numerics::erf(lambda) * (lambda * lambda).exp();
        assert_relative_eq!(psi, expected, max_relative = 1e-8);
        let y_end = phi_inverse_unbounded(1.0, 1.0, psi).unwrap();
        assert!(y_end > 0.1, "y(lambda) = {y_end}");
    }

    #[test]
    fn flipped_psi_starts_at_one() {
        let params = unit_params();
        let psi0 = flipped_psi_source1(0.7, params, &exponential_beta(), 0.0).unwrap();
        assert_relative_eq!(psi0, params.target(), max_relative = 1e-15);
    }

    #[test]
    fn flipped_exponential_pair_is_self_consistent() {
        let params = unit_params();
        let lam = flipped_exponential_lambda(params, Tolerance::default()).unwrap();
        assert!(flipped_exponential_psi(lam, params, lam).abs() < 1e-8);

        let correct = similarity::solve_exponential_case(1.0, 1.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(lam, 0.8136962525265086, max_relative = 1e-9);
        assert!((lam - correct.lambda()) / correct.lambda() > 0.25);
    }

    #[test]
    fn flipped_exponential_matches_negated_beta() {
        // The flipped pair is what the general formulas give for β = -e^{-η²}/2.
        let params = unit_params();
        let neg = Beta::gaussian(-0.5, 1.0);
        let lam = flipped_exponential_lambda(params, Tolerance::default()).unwrap();
        for eta in [0.0, 0.2 * lam, 0.6 * lam, lam] {
            let tol = Tolerance::quadrature();
            let c = lam * (lam * lam).exp() + 2.0 * weighted(&neg, lam, tol).unwrap();
            let local = numerics::erf(eta) * weighted(&neg, eta, tol).unwrap() - weighted_erf(&neg, eta, tol).unwrap();
            let general = params.target() - PI.sqrt() * numerics::erf(eta) * c + 2.0 * PI.sqrt() * local;
            assert_relative_eq!(flipped_exponential_psi(lam, params, eta), general, epsilon = 1e-12);
        }
    }

    #[test]
    fn doubled_slope_is_twice_the_derived_one() {
        let beta = exponential_beta();
        let good = similarity::y_prime_at_zero_source1(0.6, 2.0, 0.5, &beta).unwrap();
        let bad = doubled_y_prime0_source1(0.6, 2.0, 0.5, &beta).unwrap();
        assert_relative_eq!(bad, 2.0 * good, max_relative = 1e-14);

        // Only the derived slope reproduces the Stefan condition through the
        // integrated flux (1+δ) y'(0) e^{-λ²} + (4/Ste) e^{-λ²} I(λ) = -2λ/Ste.
        let pb = Problem::from_dimensionless(2.0, 0.5, 1.0, DimensionlessSource::Similarity(beta.clone())).unwrap();
        let sol = SimilaritySolution::solve(&pb, SolverOptions::default()).unwrap();
        let lam = sol.lambda();
        let i = weighted(&beta, lam, Tolerance::quadrature()).unwrap();
        let flux = |slope: f64| (-lam * lam).exp() * (1.5 * slope + 2.0 * i);
        assert_relative_eq!(flux(sol.y_prime0()), -lam, max_relative = 1e-10);
        let wrong = doubled_y_prime0_source1(lam, 2.0, 0.5, &beta).unwrap();
        assert!((flux(wrong) + lam).abs() > 0.1 * lam);
    }

    #[test]
    fn unbounded_inverse() {
        for w in [0.0, 0.3, 1.5, 10.0] {
            let x = phi_inverse_unbounded(1.0, 2.0, w).unwrap();
            assert_relative_eq!(x + x.powi(3) / 3.0, w, epsilon = 1e-11);
        }
        assert!(phi_inverse_unbounded(1.0, 1.0, -1.0).is_err());
    }
}
