//! Scalar numerics used by the similarity solver.
//!
//! Everything here is a pure function of its inputs: the error function,
//! adaptive Gauss-Kronrod quadrature, bracketed root finding for strictly
//! increasing functions, safeguarded Newton inversion of increasing maps, and
//! barycentric Chebyshev interpolation for bulk profile evaluation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

/// Maximum number of bisection levels in [`integrate`].
pub const MAX_SUBDIVISION_DEPTH: u32 = 60;

/// Upper cap for bracket expansion in [`find_root_increasing`]. `exp(x^2)`
/// overflows near 26.6, so no finite λ-equation has a root above this.
pub const BRACKET_CAP: f64 = 50.0;

const LOWER_FLOOR: f64 = f64::MIN_POSITIVE;
const MAX_SEGMENTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("adaptive quadrature on [{a}, {b}] hit the subdivision limit with estimated error {error:e}")]
    MaxSubdivisionsExceeded { a: f64, b: f64, error: f64 },
    #[error("bracket expansion passed the cap {cap} without reaching target {target}")]
    BracketExpansionFailed { cap: f64, target: f64 },
    #[error("target {target} is not bracketed: g({lo:e}) = {value} already exceeds it")]
    NotBracketed { lo: f64, value: f64, target: f64 },
    #[error("value {value} lies outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-finite function value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Absolute/relative stopping tolerances plus an iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(NumericsError::InvalidTolerance("abs_tol must be positive"));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(NumericsError::InvalidTolerance("rel_tol must be positive"));
        }
        if max_iter == 0 {
            return Err(NumericsError::InvalidTolerance("max_iter must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// Tolerance used for the integrals inside the λ-equations and profiles.
    pub fn quadrature() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_iter: 200,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(NumericsError::InvalidBracket { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The error function `(2/√π) ∫₀ˣ exp(-u²) du`.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) with the
// embedded 7-point Gauss rule at the odd indices.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct RuleEstimate {
    value: f64,
    error: f64,
}

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> RuleEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    // Roundoff floor: the difference cannot resolve below a few ulps of the
    // absolute integrand mass.
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    RuleEstimate {
        value,
        error: raw.max(floor),
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of a smooth integrand.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol * |result|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let first = gauss_kronrod_15(&mut f, a, b);
    if !first.value.is_finite() {
        return Err(NumericsError::NonFinite { x: 0.5 * (a + b) });
    }
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
        depth: 0,
    });

    while total_err > tol.abs_tol.max(tol.rel_tol * total.abs()) {
        let worst = heap.pop().expect("heap holds at least one segment");
        if worst.depth >= MAX_SUBDIVISION_DEPTH || heap.len() + 2 > MAX_SEGMENTS {
            return Err(NumericsError::MaxSubdivisionsExceeded {
                a,
                b,
                error: total_err,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod_15(&mut f, worst.a, mid);
        let right = gauss_kronrod_15(&mut f, mid, worst.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(NumericsError::NonFinite { x: mid });
        }
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        for (lo, hi, est) in [(worst.a, mid, left), (mid, worst.b, right)] {
            heap.push(Segment {
                a: lo,
                b: hi,
                value: est.value,
                error: est.error,
                depth: worst.depth + 1,
            });
        }
    }
    // Resum to shed the drift of the running update.
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Finds `x` with `g(x) = target` for a continuous, strictly increasing `g`.
///
/// The seed bracket is widened as needed: `lo` is halved toward `0⁺` while
/// `g(lo) > target`, and `hi` is doubled (up to [`BRACKET_CAP`]) while
/// `g(hi) < target`. The root is then isolated by bisection.
pub fn find_root_increasing<F>(mut g: F, target: f64, seed: Bracket, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut eval = |x: f64| -> Result<f64> {
        let v = g(x)?;
        if v.is_nan() {
            Err(NumericsError::NonFinite { x })
        } else {
            Ok(v)
        }
    };

    let mut lo = seed.lo;
    let mut hi = seed.hi.min(BRACKET_CAP);
    let mut g_lo = eval(lo)?;
    while g_lo > target {
        if lo <= LOWER_FLOOR {
            return Err(NumericsError::NotBracketed {
                lo,
                value: g_lo,
                target,
            });
        }
        hi = lo;
        lo = if lo > 0.0 { 0.5 * lo } else { lo - (hi - lo).max(1.0) };
        g_lo = eval(lo)?;
    }
    let mut g_hi = eval(hi)?;
    while g_hi < target {
        if hi >= BRACKET_CAP {
            return Err(NumericsError::BracketExpansionFailed {
                cap: BRACKET_CAP,
                target,
            });
        }
        lo = hi;
        g_lo = g_hi;
        hi = (2.0 * hi).min(BRACKET_CAP);
        g_hi = eval(hi)?;
    }

    for _ in 0..tol.max_iter {
        let (best, residual) = if (g_lo - target).abs() <= (g_hi - target).abs() {
            (lo, (g_lo - target).abs())
        } else {
            (hi, (g_hi - target).abs())
        };
        let width = hi - lo;
        if residual <= tol.abs_tol && width <= tol.rel_tol * best.abs() {
            return Ok(best);
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            // Bracket exhausted at machine resolution.
            if residual <= tol.abs_tol {
                return Ok(best);
            }
            if !g_hi.is_finite() {
                // The target sits past the overflow edge of `g`.
                return Err(NumericsError::BracketExpansionFailed {
                    cap: BRACKET_CAP,
                    target,
                });
            }
            return Err(NumericsError::NoConvergence {
                iterations: tol.max_iter,
                residual,
            });
        }
        let g_mid = eval(mid)?;
        if g_mid < target {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    let residual = (g_lo - target).abs().min((g_hi - target).abs());
    if !residual.is_finite() {
        return Err(NumericsError::BracketExpansionFailed {
            cap: BRACKET_CAP,
            target,
        });
    }
    Err(NumericsError::NoConvergence {
        iterations: tol.max_iter,
        residual,
    })
}

/// Solves `F(x) = w` on `domain` for strictly increasing `F` with derivative
/// `F_deriv`, using Newton steps that fall back to bisection whenever they
/// would leave the current bracket.
///
/// Targets within `abs_tol` outside `[F(lo), F(hi)]` are clamped to the
/// corresponding endpoint.
pub fn invert_increasing<F, D>(f: F, f_deriv: D, w: f64, domain: Bracket, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (domain.lo, domain.hi);
    let (f_lo, f_hi) = (f(a), f(b));
    if w.is_nan() || w < f_lo - tol.abs_tol || w > f_hi + tol.abs_tol {
        return Err(NumericsError::OutOfRange {
            value: w,
            min: f_lo,
            max: f_hi,
        });
    }
    if w <= f_lo {
        return Ok(a);
    }
    if w >= f_hi {
        return Ok(b);
    }

    let mut x = a + (w - f_lo) / (f_hi - f_lo) * (b - a);
    for _ in 0..tol.max_iter {
        let r = f(x) - w;
        if r == 0.0 {
            return Ok(x);
        }
        if r < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = f_deriv(x);
        let newton = x - r / d;
        let next = if d > 0.0 && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            a + 0.5 * (b - a)
        };
        let step = (next - x).abs();
        x = next;
        if r.abs() <= tol.abs_tol && step <= tol.rel_tol * x.abs() + f64::MIN_POSITIVE {
            return Ok(x);
        }
        if b - a <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
    }
    let residual = (f(x) - w).abs();
    if residual <= tol.abs_tol {
        Ok(x)
    } else {
        Err(NumericsError::NoConvergence {
            iterations: tol.max_iter,
            residual,
        })
    }
}

/// Barycentric interpolant on Chebyshev points of the second kind.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevInterpolant {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ChebyshevInterpolant {
    /// Samples `f` at `size` Chebyshev points on `[lo, hi]` (endpoints included).
    pub fn from_fn<F, E>(lo: f64, hi: f64, size: usize, mut f: F) -> std::result::Result<Self, E>
    where
        F: FnMut(f64) -> std::result::Result<f64, E>,
    {
        assert!(size >= 2, "Chebyshev table needs at least two nodes");
        assert!(lo < hi, "Chebyshev table needs a non-empty interval");
        let n = size - 1;
        let mut nodes = Vec::with_capacity(size);
        let mut values = Vec::with_capacity(size);
        // Ordered from `lo` to `hi`; the endpoints are set exactly.
        for j in 0..=n {
            let x = match j {
                0 => lo,
                _ if j == n => hi,
                _ => {
                    let c = -(std::f64::consts::PI * j as f64 / n as f64).cos();
                    0.5 * (lo + hi) + 0.5 * (hi - lo) * c
                }
            };
            nodes.push(x);
            values.push(f(x)?);
        }
        Ok(Self {
            lo,
            hi,
            nodes,
            values,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len() - 1;
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&xj, &fj)) in self.nodes.iter().zip(&self.values).enumerate() {
            let diff = x - xj;
            if diff == 0.0 {
                return fj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            let t = w / diff;
            num += t * fj;
            den += t;
        }
        num / den
    }
}
