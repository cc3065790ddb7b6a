//! Acceptance suite. Runs each criterion on its own thread and prints one
//! PASS/FAIL line per criterion, in order. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use stefan_core::errata;
use stefan_core::oracle::{self, convergence_study, front_error_against, OracleConfig};
use stefan_core::similarity::{
    self, phi_inverse, phi_map, LambdaEquation, PsiProfile, SimilarityParams, SourceModel,
};
use stefan_core::verify;
use stefan_core::{Beta, DimensionlessSource, Problem, ProfileMode, SimilaritySolution, SolverOptions, Tolerance};

type Outcome = Result<String, String>;

const STE: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];
const DELTA: [f64; 3] = [0.1, 1.0, 5.0];
const P: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_options() -> SolverOptions {
    SolverOptions {
        mode: ProfileMode::Exact,
        ..SolverOptions::default()
    }
}

fn solve(ste: f64, delta: f64, p: f64, source: DimensionlessSource) -> Result<SimilaritySolution, String> {
    let pb = Problem::from_dimensionless(ste, delta, p, source).map_err(|e| e.to_string())?;
    SimilaritySolution::solve(&pb, exact_options()).map_err(|e| format!("Ste={ste} δ={delta} p={p}: {e}"))
}

fn sources() -> Vec<(&'static str, DimensionlessSource)> {
    vec![
        ("exponential", DimensionlessSource::Exponential),
        ("A=0.5", DimensionlessSource::Feedback(0.5)),
        ("A=1", DimensionlessSource::Feedback(1.0)),
        ("A=2", DimensionlessSource::Feedback(2.0)),
    ]
}

/// Every case of the parameter grid, solved.
fn grid() -> Result<Vec<(String, SimilaritySolution)>, String> {
    let mut out = Vec::new();
    for (name, src) in sources() {
        for ste in STE {
            for delta in DELTA {
                for p in P {
                    let label = format!("{name} Ste={ste} δ={delta} p={p}");
                    out.push((label, solve(ste, delta, p, src.clone())?));
                }
            }
        }
    }
    Ok(out)
}

/// Bisection on an increasing function, independent of the library root finder.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn classical_reduction() -> Outcome {
    let tol = Tolerance::default();
    let lam = similarity::solve_lambda_source1(1.0, 1e-12, 1.0, &Beta::zero(), tol).map_err(|e| e.to_string())?;
    let reference = bisect(|x| PI.sqrt() * x * libm::erf(x) * (x * x).exp() - 1.0, 0.0, 2.0);
    ensure((reference - 0.620063).abs() < 1e-6, || format!("reference root {reference}"))?;
    ensure((lam - reference).abs() <= 1e-4, || format!("λ = {lam}, reference {reference}"))?;

    let sol = solve(1.0, 1e-12, 1.0, DimensionlessSource::Similarity(Beta::zero()))?;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let eta = lam * i as f64 / 99.0;
        let neumann = 1.0 - libm::erf(eta) / libm::erf(reference);
        worst = worst.max((sol.y(eta).map_err(|e| e.to_string())? - neumann).abs());
    }
    ensure(worst <= 1e-6, || format!("profile max error {worst:e}"))?;
    Ok(format!("λ = {lam:.9}, Neumann bisection {reference:.9}, profile error {worst:.1e}"))
}

fn root_residuals() -> Outcome {
    let cases = grid()?;
    let (mut res, mut y0, mut yl, mut stefan): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (label, sol) in &cases {
        let r = verify::root_residual(sol).map_err(|e| format!("{label}: {e}"))?;
        let (a, b) = verify::boundary_defects(sol).map_err(|e| format!("{label}: {e}"))?;
        let s = verify::stefan_defect(sol).map_err(|e| format!("{label}: {e}"))?;
        ensure(r <= 1e-8, || format!("{label}: residual {r:e}"))?;
        ensure(a <= 1e-10, || format!("{label}: |y(0)-1| = {a:e}"))?;
        ensure(b <= 1e-8, || format!("{label}: |y(λ)| = {b:e}"))?;
        ensure(s <= 1e-4, || format!("{label}: Stefan condition defect {s:e}"))?;
        res = res.max(r);
        y0 = y0.max(a);
        yl = yl.max(b);
        stefan = stefan.max(s);
    }
    Ok(format!(
        "{} cases; max residual {res:.1e}, |y(0)-1| {y0:.1e}, |y(λ)| {yl:.1e}, Stefan {stefan:.1e}",
        cases.len()
    ))
}

fn ode_residuals() -> Outcome {
    let cases = grid()?;
    let mut worst: f64 = 0.0;
    for (label, sol) in &cases {
        let r = verify::ode_residual(sol, 200).map_err(|e| format!("{label}: {e}"))?;
        ensure(r <= 1e-4, || format!("{label}: ODE residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("{} cases; max ODE residual {worst:.1e}", cases.len()))
}

fn pde_oracle() -> Outcome {
    let fine = OracleConfig {
        n_space: 256,
        n_time: 4096,
        t_start: 0.01,
        t_end: 1.0,
        ..OracleConfig::default()
    };
    let coarsest = OracleConfig {
        n_space: 64,
        n_time: 1024,
        ..fine
    };
    let mut parts = Vec::new();
    for (name, src) in [
        ("exponential", DimensionlessSource::Exponential),
        ("A=1", DimensionlessSource::Feedback(1.0)),
    ] {
        let pb = Problem::from_dimensionless(1.0, 1.0, 1.0, src).map_err(|e| e.to_string())?;
        let study = convergence_study(&pb, &coarsest, 3).map_err(|e| format!("{name}: {e}"))?;
        let finest = study.levels.last().expect("three levels");
        ensure(finest.n_space == fine.n_space && finest.n_time == fine.n_time, || "grid mismatch".into())?;
        let span = pb.boundary.span();
        ensure(finest.front_rel_err <= 0.01, || {
            format!("{name}: front error {:e}", finest.front_rel_err)
        })?;
        ensure(finest.temp_max_err <= 0.01 * span, || {
            format!("{name}: temperature error {:e}", finest.temp_max_err)
        })?;
        let order = study.self_convergence_orders()[0];
        ensure(order >= 1.8, || format!("{name}: self-convergence order {order:.3}"))?;
        parts.push(format!(
            "{name}: front {:.1e}, temp {:.1e}, order {order:.2}",
            finest.front_rel_err,
            finest.temp_max_err / span
        ));
    }
    Ok(parts.join("; "))
}

fn errata_arbitration() -> Outcome {
    let params = SimilarityParams::new(1.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let beta = Beta::gaussian(0.5, 1.0);
    let lam = similarity::solve_lambda_source1(1.0, 1.0, 1.0, &beta, Tolerance::default()).map_err(|e| e.to_string())?;

    let flipped = errata::flipped_psi_source1(lam, params, &beta, lam).map_err(|e| e.to_string())?;
    let y_flipped = errata::phi_inverse_unbounded(1.0, 1.0, flipped).map_err(|e| e.to_string())?;
    ensure(y_flipped > 1e-2, || format!("flipped-sign |y(λ)| = {y_flipped:e}"))?;

    let corrected = PsiProfile::new(lam, params, SourceModel::General(beta.clone())).map_err(|e| e.to_string())?;
    let y_corrected = corrected.y(lam).map_err(|e| e.to_string())?.abs();
    ensure(y_corrected <= 1e-8, || format!("corrected |y(λ)| = {y_corrected:e}"))?;

    // The oracle follows the corrected root and stays away from the flipped one
    // at every refinement level.
    let lam_flipped = errata::flipped_exponential_lambda(params, Tolerance::default()).map_err(|e| e.to_string())?;
    let pb = Problem::from_dimensionless(1.0, 1.0, 1.0, DimensionlessSource::Exponential).map_err(|e| e.to_string())?;
    let sol = SimilaritySolution::solve(&pb, SolverOptions::default()).map_err(|e| e.to_string())?;
    let a = sol.dimensionless().a;
    let mut gaps = Vec::new();
    for (n_space, n_time) in [(64, 1024), (128, 2048)] {
        let cfg = OracleConfig {
            n_space,
            n_time,
            ..OracleConfig::default()
        };
        let run = oracle::march(&pb, &sol, &cfg).map_err(|e| e.to_string())?;
        let good = front_error_against(&run, a, sol.lambda());
        let bad = front_error_against(&run, a, lam_flipped);
        ensure(good <= 0.01, || format!("corrected front error {good:e} at n={n_space}"))?;
        ensure(bad > 0.05, || format!("flipped front error {bad:e} at n={n_space}"))?;
        gaps.push(bad);
    }
    Ok(format!(
        "flipped |y(λ)| = {y_flipped:.3}, corrected {y_corrected:.1e}; oracle vs flipped λ: {:.1}% / {:.1}%",
        100.0 * gaps[0],
        100.0 * gaps[1]
    ))
}

fn consistency_limits() -> Outcome {
    let tol = Tolerance {
        abs_tol: 1e-13,
        ..Tolerance::default()
    };
    let mut worst_a: f64 = 0.0;
    let mut worst_cf: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for ste in STE {
        for delta in DELTA {
            for p in P {
                let l2 = similarity::solve_lambda_source2(ste, delta, p, 1e-10, tol).map_err(|e| e.to_string())?;
                let l1 = similarity::solve_lambda_source1(ste, delta, p, &Beta::zero(), tol).map_err(|e| e.to_string())?;
                worst_a = worst_a.max((l2 - l1).abs());

                let params = SimilarityParams::new(ste, delta, p).map_err(|e| e.to_string())?;
                let closed = similarity::solve_exponential_case(ste, delta, p, tol).map_err(|e| e.to_string())?;
                let general = SourceModel::General(Beta::gaussian(0.5, 1.0));
                let lq = LambdaEquation::new(params, general.clone()).solve(tol).map_err(|e| e.to_string())?;
                worst_cf = worst_cf.max((lq - closed.lambda()).abs());
                let psi_q = PsiProfile::new(closed.lambda(), params, general).map_err(|e| e.to_string())?;
                for i in 0..=50 {
                    let eta = closed.lambda() * i as f64 / 50.0;
                    let a = closed.y(eta).map_err(|e| e.to_string())?;
                    let b = psi_q.y(eta).map_err(|e| e.to_string())?;
                    worst_cf = worst_cf.max((a - b).abs());
                }
            }
        }
    }
    for delta in DELTA {
        let target = 1.0 + delta / 2.0;
        for i in 0..=200 {
            let w = target * i as f64 / 200.0;
            let generic = phi_inverse(delta, 1.0, w).map_err(|e| e.to_string())?;
            let quad = similarity::phi_inverse_quadratic(delta, w);
            // Independent check of the quadratic form itself.
            ensure((quad + 0.5 * delta * quad * quad - w).abs() <= 1e-13, || format!("Φ(quadratic) ≠ {w}"))?;
            worst_q = worst_q.max((generic - quad).abs());
        }
    }
    ensure(worst_a <= 1e-8, || format!("A→0 gap {worst_a:e}"))?;
    ensure(worst_cf <= 1e-9, || format!("closed-form gap {worst_cf:e}"))?;
    ensure(worst_q <= 1e-10, || format!("quadratic inverse gap {worst_q:e}"))?;
    Ok(format!("A→0 {worst_a:.1e}, closed form {worst_cf:.1e}, quadratic Φ⁻¹ {worst_q:.1e}"))
}

fn monotonicity() -> Outcome {
    // λ strictly increasing in Ste along every (source, δ, p) slice.
    let mut slices = 0;
    for (name, src) in sources().into_iter().chain([("none", DimensionlessSource::None)]) {
        for delta in DELTA {
            for p in P {
                let mut prev = 0.0;
                for ste in STE {
                    let lam = solve(ste, delta, p, src.clone())?.lambda();
                    ensure(lam > prev, || format!("{name} δ={delta} p={p}: λ not increasing at Ste={ste}"))?;
                    prev = lam;
                }
                slices += 1;
            }
        }
    }
    // Φ strictly increasing on [0, 1].
    for delta in DELTA {
        for p in P {
            let mut prev = -1.0;
            for i in 0..=1000 {
                let v = phi_map(delta, p, i as f64 / 1000.0).map_err(|e| e.to_string())?;
                ensure(v > prev, || format!("Φ not increasing (δ={delta}, p={p})"))?;
                prev = v;
            }
        }
    }
    // Ψ decreasing, y decreasing and within [0, 1] for every grid case.
    let cases = grid()?;
    for (label, sol) in &cases {
        let d = verify::monotonicity_defect(sol, 201).map_err(|e| format!("{label}: {e}"))?;
        ensure(d == 0.0, || format!("{label}: monotonicity defect {d:e}"))?;
    }
    Ok(format!("{slices} Ste slices, Φ on 12 (δ, p) pairs, y/Ψ on {} cases", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("1 classical reduction", classical_reduction, Duration::from_secs(1)),
        ("2 root residuals and boundary conditions", root_residuals, Duration::from_secs(30)),
        ("3 ODE residual", ode_residuals, Duration::from_secs(60)),
        ("4 PDE oracle agreement", pde_oracle, Duration::from_secs(300)),
        ("5 errata arbitration", errata_arbitration, Duration::from_secs(300)),
        ("6 consistency limits", consistency_limits, Duration::from_secs(60)),
        ("7 monotonicity", monotonicity, Duration::from_secs(60)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f, _)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let out = f();
                    (out, start.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO)))
            .collect()
    });

    let mut failed = 0;
    for ((name, _, budget), (outcome, elapsed)) in criteria.iter().zip(results) {
        let outcome = outcome.and_then(|msg| {
            if elapsed <= *budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; exceeded the {budget:?} budget"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({:.2} s): {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2} s): {msg}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
