//! Distance laws given a beacon: the k-th nearest node is known to sit at
//! distance `s`.
//!
//! The `k-1` closer nodes are then uniform in `B(o, s)` and the `N-k` farther
//! ones uniform in the shell `B(o, R) \ B(o, s)`. Moments are defined by
//! quadrature of the conditional density; the closed forms are exposed
//! separately so callers can compare them.

use serde::Serialize;

use crate::distance::{invert_cdf, pdf_unchecked};
use crate::error::{domain, Result};
use crate::geometry::NetworkSpec;
use crate::specfun::{
    appell_f1, integrate, ln_beta_unchecked, ln_pochhammer_quotient, reg_inc_beta, MomentValue,
    QuadratureSpec,
};

/// The revealed rank `k` and its distance `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeaconCondition {
    rank: u32,
    distance: f64,
}

impl BeaconCondition {
    pub fn new(spec: &NetworkSpec, rank: u32, distance: f64) -> Result<Self> {
        if rank < 1 || rank > spec.nodes() {
            return domain(format!("beacon rank must satisfy 1 <= k <= N = {}, got {rank}", spec.nodes()));
        }
        if !(distance > 0.0 && distance < spec.radius()) {
            return domain(format!("beacon distance must lie in (0, {}), got {distance}", spec.radius()));
        }
        Ok(Self { rank, distance })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }
}

/// Which side of the beacon a rank falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Inner,
    Outer,
}

fn branch(cond: &BeaconCondition, n: u32, spec: &NetworkSpec) -> Result<Branch> {
    if n < 1 || n > spec.nodes() {
        return domain(format!("rank must satisfy 1 <= n <= N = {}, got {n}", spec.nodes()));
    }
    if n == cond.rank {
        return domain(format!("rank n = k = {n} is degenerate: the conditional law is a point mass at s"));
    }
    Ok(if n < cond.rank { Branch::Inner } else { Branch::Outer })
}

/// Support `[lo, hi]` of the conditional law of rank `n`.
pub fn cond_support(spec: &NetworkSpec, cond: &BeaconCondition, n: u32) -> Result<(f64, f64)> {
    Ok(match branch(cond, n, spec)? {
        Branch::Inner => (0.0, cond.distance),
        Branch::Outer => (cond.distance, spec.radius()),
    })
}

fn inner_spec(spec: &NetworkSpec, cond: &BeaconCondition) -> NetworkSpec {
    NetworkSpec::new(spec.dim(), cond.distance, cond.rank - 1)
        .expect("inner population is non-empty whenever an inner rank exists")
}

/// Shell coordinate `q = (r^d - s^d)/(R^d - s^d)`.
fn shell_fraction(spec: &NetworkSpec, s: f64, r: f64) -> f64 {
    let d = spec.dim() as i32;
    let sd = s.powi(d);
    ((r.powi(d) - sd) / (spec.radius().powi(d) - sd)).clamp(0.0, 1.0)
}

fn check_window(spec: &NetworkSpec, r: f64) -> Result<()> {
    if !(0.0..=spec.radius()).contains(&r) {
        return domain(format!("distance {r} outside [0, {}]", spec.radius()));
    }
    Ok(())
}

/// Density of `R_n` given `R_k = s`. Zero inside the window but outside the
/// branch support.
pub fn cond_pdf(spec: &NetworkSpec, cond: &BeaconCondition, n: u32, r: f64) -> Result<f64> {
    let b = branch(cond, n, spec)?;
    check_window(spec, r)?;
    let s = cond.distance;
    match b {
        Branch::Inner => {
            if r > s {
                return Ok(0.0);
            }
            Ok(pdf_unchecked(&inner_spec(spec, cond), n, r))
        }
        Branch::Outer => {
            if r < s {
                return Ok(0.0);
            }
            Ok(outer_pdf(spec, s, cond.rank, n, r))
        }
    }
}

fn outer_pdf(spec: &NetworkSpec, s: f64, k: u32, n: u32, r: f64) -> f64 {
    let d = spec.dim() as f64;
    let big_n = spec.nodes();
    let span = spec.radius().powi(spec.dim() as i32) - s.powi(spec.dim() as i32);
    let q = shell_fraction(spec, s, r);
    let far = (big_n - n) as f64;
    let near = (n - k - 1) as f64;
    let ln_b = ln_beta_unchecked(far + 1.0, (n - k) as f64);
    let mut ln = d.ln() + (d - 1.0) * r.ln() - span.ln() - ln_b;
    if far > 0.0 {
        if q >= 1.0 {
            return 0.0;
        }
        ln += far * (-q).ln_1p();
    }
    if near > 0.0 {
        if q <= 0.0 {
            return 0.0;
        }
        ln += near * q.ln();
    }
    ln.exp()
}

/// Conditional cdf `Pr(R_n <= r | R_k = s)`.
pub fn cond_cdf(spec: &NetworkSpec, cond: &BeaconCondition, n: u32, r: f64) -> Result<f64> {
    let b = branch(cond, n, spec)?;
    check_window(spec, r)?;
    let s = cond.distance;
    match b {
        Branch::Inner => {
            if r >= s {
                return Ok(1.0);
            }
            let p = (r / s).powi(spec.dim() as i32);
            Ok(1.0 - reg_inc_beta(1.0 - p, (cond.rank - n) as f64, n as f64)?)
        }
        Branch::Outer => {
            if r <= s {
                return Ok(0.0);
            }
            let q = shell_fraction(spec, s, r);
            let far = (spec.nodes() - n) as f64;
            Ok(1.0 - reg_inc_beta(1.0 - q, far + 1.0, (n - cond.rank) as f64)?)
        }
    }
}

pub fn cond_quantile(spec: &NetworkSpec, cond: &BeaconCondition, n: u32, u: f64) -> Result<f64> {
    let (lo, hi) = cond_support(spec, cond, n)?;
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {u}"));
    }
    invert_cdf(|r| cond_cdf(spec, cond, n, r), |r| cond_pdf(spec, cond, n, r).unwrap_or(0.0), lo, hi, u)
}

/// Density of `R_n` given the nearest node at distance `s`, for `n >= 2`.
pub fn cond_pdf_given_nearest(spec: &NetworkSpec, s: f64, n: u32, r: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("rank must be at least 2 when conditioning on the nearest node, got {n}"));
    }
    let cond = BeaconCondition::new(spec, 1, s)?;
    cond_pdf(spec, &cond, n, r)
}

/// `E[R_n^γ | R_k = s]` by quadrature of the conditional density.
///
/// For `n = k` the law is a point mass and the moment is `s^γ`. The inner
/// branch diverges when `n + γ/d <= 0`.
pub fn cond_moment(spec: &NetworkSpec, cond: &BeaconCondition, n: u32, gamma: f64) -> Result<MomentValue> {
    cond_moment_with(spec, cond, n, gamma, QuadratureSpec::default())
}

pub fn cond_moment_with(
    spec: &NetworkSpec,
    cond: &BeaconCondition,
    n: u32,
    gamma: f64,
    quad: QuadratureSpec,
) -> Result<MomentValue> {
    if n == cond.rank {
        return Ok(MomentValue::Finite(cond.distance.powf(gamma)));
    }
    let (lo, hi) = cond_support(spec, cond, n)?;
    if n < cond.rank && n as f64 + gamma / spec.dim() as f64 <= 0.0 {
        return Ok(MomentValue::Infinite);
    }
    let s = cond.distance;
    let value = match branch(cond, n, spec)? {
        Branch::Inner => {
            let inner = inner_spec(spec, cond);
            integrate(|r| r.powf(gamma) * pdf_unchecked(&inner, n, r), lo, hi, quad)?
        }
        Branch::Outer => {
            // Same integral in the shell coordinate q, where the law is
            // Beta(n-k, N-n+1); avoids cancellation in r^d - s^d near r = s.
            let d = spec.dim() as f64;
            let sd = s.powi(spec.dim() as i32);
            let span = spec.radius().powi(spec.dim() as i32) - sd;
            let (a, b) = ((n - cond.rank) as f64, (spec.nodes() - n + 1) as f64);
            let ln_b = ln_beta_unchecked(a, b);
            integrate(
                |q| {
                    let ln_w = (a - 1.0) * q.ln() + (b - 1.0) * (-q).ln_1p() - ln_b;
                    (sd + q * span).powf(gamma / d) * ln_w.exp()
                },
                0.0,
                1.0,
                quad,
            )?
        }
    };
    Ok(MomentValue::Finite(value))
}

/// Denominator used by the inner-branch closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerDenominator {
    /// `(k+1)^[γ/d]`, as commonly printed.
    KPlusOne,
    /// `k^[γ/d]`, the moment of the inner law (`k-1` points in `B(o,s)`).
    K,
}

/// Inner-branch closed form `s^γ n^[γ/d] / m^[γ/d]` with `m = k` or `k + 1`.
pub fn cond_moment_inner_closed_form(
    spec: &NetworkSpec,
    cond: &BeaconCondition,
    n: u32,
    gamma: f64,
    denominator: InnerDenominator,
) -> Result<MomentValue> {
    if branch(cond, n, spec)? != Branch::Inner {
        return domain("inner closed form requires n < k");
    }
    let step = gamma / spec.dim() as f64;
    if n as f64 + step <= 0.0 {
        return Ok(MomentValue::Infinite);
    }
    let m = match denominator {
        InnerDenominator::KPlusOne => cond.rank as f64 + 1.0,
        InnerDenominator::K => cond.rank as f64,
    };
    let ln = gamma * cond.distance.ln() + ln_pochhammer_quotient(n as f64, m, step);
    Ok(MomentValue::Finite(ln.exp()))
}

/// Outer-branch closed form
/// `s^γ / ((n-k) B(N-n+1, n-k)) · F1(n-k; n-N, -γ/d; n-k+1; 1, 1-(R/s)^d)`.
pub fn cond_moment_outer_appell(
    spec: &NetworkSpec,
    cond: &BeaconCondition,
    n: u32,
    gamma: f64,
) -> Result<f64> {
    if branch(cond, n, spec)? != Branch::Outer {
        return domain("outer closed form requires n > k");
    }
    let d = spec.dim() as f64;
    let s = cond.distance;
    let gap = (n - cond.rank) as f64;
    let far = (spec.nodes() - n) as f64;
    let y = 1.0 - (spec.radius() / s).powi(spec.dim() as i32);
    let f1 = appell_f1(gap, -far, -gamma / d, gap + 1.0, 1.0, y)?;
    let ln_front = gamma * s.ln() - gap.ln() - ln_beta_unchecked(far + 1.0, gap);
    Ok(ln_front.exp() * f1)
}

/// Quadrature moment next to both closed forms, for side-by-side reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalMomentReport {
    pub branch: Branch,
    pub quadrature: MomentValue,
    /// The closed form as commonly printed: `(k+1)` denominator on the inner
    /// branch, the Appell F1 expression on the outer branch.
    pub printed_closed_form: MomentValue,
    /// The closed form implied by the conditional density.
    pub corrected_closed_form: MomentValue,
}

pub fn cond_moment_report(
    spec: &NetworkSpec,
    cond: &BeaconCondition,
    n: u32,
    gamma: f64,
) -> Result<ConditionalMomentReport> {
    let b = branch(cond, n, spec)?;
    let quadrature = cond_moment(spec, cond, n, gamma)?;
    let (printed, corrected) = match b {
        Branch::Inner => (
            cond_moment_inner_closed_form(spec, cond, n, gamma, InnerDenominator::KPlusOne)?,
            cond_moment_inner_closed_form(spec, cond, n, gamma, InnerDenominator::K)?,
        ),
        Branch::Outer => {
            let v = MomentValue::Finite(cond_moment_outer_appell(spec, cond, n, gamma)?);
            (v, v)
        }
    };
    Ok(ConditionalMomentReport {
        branch: b,
        quadrature,
        printed_closed_form: printed,
        corrected_closed_form: corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{pdf_rn, NthNeighborQuery};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn inner_single_point_is_theorem_one() {
        let spec = NetworkSpec::new(2, 1.0, 6).unwrap();
        let cond = BeaconCondition::new(&spec, 2, 0.45).unwrap();
        let one = NthNeighborQuery::new(NetworkSpec::new(2, 0.45, 1).unwrap(), 1).unwrap();
        for i in 0..=30 {
            let r = 0.45 * i as f64 / 30.0;
            assert_abs_diff_eq!(
                cond_pdf(&spec, &cond, 1, r).unwrap(),
                pdf_rn(&one, r).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn outer_uniform_shell() {
        let spec = NetworkSpec::new(1, 1.0, 2).unwrap();
        let cond = BeaconCondition::new(&spec, 1, 0.5).unwrap();
        for &r in &[0.5, 0.6, 0.9, 1.0] {
            assert_abs_diff_eq!(cond_pdf(&spec, &cond, 2, r).unwrap(), 2.0, epsilon = 1e-13);
        }
        assert_eq!(cond_pdf(&spec, &cond, 2, 0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(cond_moment(&spec, &cond, 2, 1.0).unwrap().value(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn given_nearest_beta_shell() {
        let spec = NetworkSpec::new(1, 1.0, 3).unwrap();
        for i in 0..=40 {
            let r = 0.2 + 0.8 * i as f64 / 40.0;
            let q = (r - 0.2) / 0.8;
            let want = 2.0 * (1.0 - q) / 0.8;
            assert_abs_diff_eq!(cond_pdf_given_nearest(&spec, 0.2, 2, r).unwrap(), want, epsilon = 1e-12);
        }
        assert!(cond_pdf_given_nearest(&spec, 0.2, 1, 0.5).is_err());
    }

    #[test]
    fn inner_mean_one_point() {
        let spec = NetworkSpec::new(1, 1.0, 5).unwrap();
        let cond = BeaconCondition::new(&spec, 2, 0.6).unwrap();
        assert_abs_diff_eq!(cond_moment(&spec, &cond, 1, 1.0).unwrap().value(), 0.3, epsilon = 1e-12);
        let k = cond_moment_inner_closed_form(&spec, &cond, 1, 1.0, InnerDenominator::K).unwrap();
        assert_abs_diff_eq!(k.value(), 0.3, epsilon = 1e-14);
        let k1 = cond_moment_inner_closed_form(&spec, &cond, 1, 1.0, InnerDenominator::KPlusOne).unwrap();
        assert_abs_diff_eq!(k1.value(), 0.2, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_and_out_of_range() {
        let spec = NetworkSpec::new(2, 1.0, 10).unwrap();
        let cond = BeaconCondition::new(&spec, 4, 0.4).unwrap();
        assert!(cond_pdf(&spec, &cond, 4, 0.4).is_err());
        assert!(cond_pdf(&spec, &cond, 5, 1.2).is_err());
        assert_abs_diff_eq!(cond_moment(&spec, &cond, 4, 2.0).unwrap().value(), 0.16, epsilon = 1e-15);
        assert!(BeaconCondition::new(&spec, 4, 0.0).is_err());
        assert!(BeaconCondition::new(&spec, 4, 1.0).is_err());
        assert!(BeaconCondition::new(&spec, 11, 0.5).is_err());
    }

    #[test]
    fn inner_divergence_marker() {
        let spec = NetworkSpec::new(2, 1.0, 10).unwrap();
        let cond = BeaconCondition::new(&spec, 4, 0.4).unwrap();
        assert_eq!(cond_moment(&spec, &cond, 1, -2.0).unwrap(), MomentValue::Infinite);
        // The outer branch is bounded away from the origin.
        assert!(!cond_moment(&spec, &cond, 6, -7.0).unwrap().is_infinite());
    }

    #[test]
    fn outer_appell_cross_check() {
        let spec = NetworkSpec::new(2, 1.0, 10).unwrap();
        let cond = BeaconCondition::new(&spec, 3, 0.4).unwrap();
        let quad = cond_moment(&spec, &cond, 6, 1.0).unwrap().value();
        let f1 = cond_moment_outer_appell(&spec, &cond, 6, 1.0).unwrap();
        assert_relative_eq!(quad, f1, max_relative = 1e-6);
    }

    #[test]
    fn cdf_matches_support() {
        let spec = NetworkSpec::new(3, 2.0, 8).unwrap();
        let cond = BeaconCondition::new(&spec, 4, 1.1).unwrap();
        assert_eq!(cond_cdf(&spec, &cond, 2, 0.0).unwrap(), 0.0);
        assert_eq!(cond_cdf(&spec, &cond, 2, 1.1).unwrap(), 1.0);
        assert_eq!(cond_cdf(&spec, &cond, 6, 1.1).unwrap(), 0.0);
        assert_abs_diff_eq!(cond_cdf(&spec, &cond, 6, 2.0).unwrap(), 1.0, epsilon = 1e-15);
        let r = cond_quantile(&spec, &cond, 6, 0.3).unwrap();
        assert!((cond_cdf(&spec, &cond, 6, r).unwrap() - 0.3).abs() < 1e-10);
    }
}
