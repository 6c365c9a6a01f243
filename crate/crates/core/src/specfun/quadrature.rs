//! Adaptive quadrature on finite intervals.
//!
//! Each interval is integrated with the tanh-sinh (double exponential) rule,
//! refining the step by halving until successive estimates agree. Endpoint
//! singularities of integrable power type are absorbed by the rule itself. An
//! interval that does not settle within [`MAX_LEVEL`] halvings is bisected and
//! both halves are integrated independently, down to `max_depth` bisections.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

/// Tolerances and refinement cap for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 60 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1 {
            return domain(format!(
                "quadrature spec needs abs_tol > 0, rel_tol > 0, max_depth >= 1 \
                 (got {abs_tol}, {rel_tol}, {max_depth})"
            ));
        }
        Ok(Self { abs_tol, rel_tol, max_depth })
    }

    /// Same tolerances, tightened or loosened uniformly.
    pub fn with_tolerance(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..self }
    }
}

/// An integral estimate and its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Abscissae run over t ∈ [-T_MAX, T_MAX]; at T_MAX the distance of a node to
// the interval end is ~1e-300 relative to the half width.
const T_MAX: f64 = 6.0;
const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 7;

/// Integrates `f` over `[lo, hi]` to within `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, spec: QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_error(f, lo, hi, spec).map(|e| e.value)
}

/// As [`integrate`], also returning the error estimate and evaluation count.
pub fn integrate_with_error<F>(f: F, lo: f64, hi: f64, spec: QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return domain(format!("integrate requires finite lo < hi, got [{lo}, {hi}]"));
    }
    QuadratureSpec::new(spec.abs_tol, spec.rel_tol, spec.max_depth)?;
    let mut evaluations = 0;
    let (value, error) = adapt(&f, lo, hi, spec.abs_tol, &spec, 0, &mut evaluations)?;
    Ok(Estimate { value, error, evaluations })
}

fn adapt<F>(
    f: &F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    spec: &QuadratureSpec,
    depth: u32,
    evaluations: &mut usize,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let (value, error, settled) = tanh_sinh(f, lo, hi, abs_tol, spec.rel_tol, evaluations)?;
    if settled {
        return Ok((value, error));
    }
    if depth >= spec.max_depth {
        return Err(Error::NonConvergence { what: "adaptive quadrature", estimate: value, error });
    }
    let mid = 0.5 * (lo + hi);
    if !(lo < mid && mid < hi) {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature (interval below resolution)",
            estimate: value,
            error,
        });
    }
    let local = 0.5 * abs_tol.max(spec.rel_tol * value.abs());
    let (left, left_err) = adapt(f, lo, mid, local, spec, depth + 1, evaluations)?;
    let (right, right_err) = adapt(f, mid, hi, local, spec, depth + 1, evaluations)?;
    Ok((left + right, left_err + right_err))
}

/// Tanh-sinh rule with step halving. Returns `(estimate, error, settled)`.
fn tanh_sinh<F>(
    f: &F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    evaluations: &mut usize,
) -> Result<(f64, f64, bool)>
where
    F: Fn(f64) -> f64,
{
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (lo + hi);

    let mut eval = |x: f64| -> Result<f64> {
        *evaluations += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            domain(format!("integrand is not finite at x = {x}"))
        }
    };

    let mut sum = FRAC_PI_2 * eval(center)?;

    // Weighted sum over the nodes ±t, excluding nodes that round onto an end.
    let mut pair = |t: f64| -> Result<f64> {
        let s = FRAC_PI_2 * t.sinh();
        let c = 2.0 / (1.0 + (2.0 * s).exp()); // 1 - tanh(s)
        let w = FRAC_PI_2 * t.cosh() * c * (2.0 - c);
        let dx = half * c;
        let mut acc = 0.0;
        let left = lo + dx;
        if left > lo && left < hi {
            acc += w * eval(left)?;
        }
        let right = hi - dx;
        if right < hi && right > lo {
            acc += w * eval(right)?;
        }
        Ok(acc)
    };

    let mut k = 1.0;
    while k <= T_MAX {
        sum += pair(k)?;
        k += 1.0;
    }
    let mut h = 1.0;
    let mut previous = half * h * sum;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += pair(t)?;
            t += 2.0 * h;
        }
        let current = half * h * sum;
        error = (current - previous).abs();
        previous = current;
        if level >= MIN_LEVEL && error <= abs_tol.max(rel_tol * current.abs()) {
            return Ok((current, error, true));
        }
    }
    Ok((previous, error, false))
}
