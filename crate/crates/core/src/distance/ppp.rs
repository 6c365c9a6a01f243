//! Poisson counterparts of the binomial distance law: a PPP on the ball
//! conditioned to hold at least N points, and the infinite-PPP limit.
//!
//! Poisson weights are combined in log space; the normalizer
//! `Pr(Φ(B(o,R)) >= N)` underflows long before its logarithm does.

use super::invert_cdf;
use crate::error::{domain, Error, Result};
use crate::specfun::{ln_gamma_unchecked, ln_poisson_pmf, ln_poisson_upper_tail, unit_ball_volume_unchecked};

/// Rank-`n` distance in a PPP of intensity `lambda` on the `dim`-ball of
/// `radius`, conditioned on at least `level` points in the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedPppQuery {
    lambda: f64,
    dim: u32,
    radius: f64,
    level: u32,
    rank: u32,
    ln_normalizer: f64,
}

impl ConditionedPppQuery {
    pub fn new(lambda: f64, dim: u32, radius: f64, level: u32, rank: u32) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("intensity must be positive, got {lambda}"));
        }
        if dim < 1 {
            return domain("dimension must be at least 1");
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("radius must be positive, got {radius}"));
        }
        if level < 1 || rank < 1 || rank > level {
            return domain(format!("ranks must satisfy 1 <= n <= N, got n={rank}, N={level}"));
        }
        let mut q = Self { lambda, dim, radius, level, rank, ln_normalizer: 0.0 };
        q.ln_normalizer = ln_poisson_upper_tail(level as u64, q.mean_count(radius));
        if !q.ln_normalizer.is_finite() {
            return Err(Error::NotComputable(format!(
                "Pr(at least {level} points) is not representable for mean {}",
                q.mean_count(radius)
            )));
        }
        Ok(q)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `λ c_d r^d`, the mean number of points within distance `r`.
    pub fn mean_count(&self, r: f64) -> f64 {
        self.lambda * unit_ball_volume_unchecked(self.dim) * r.powi(self.dim as i32)
    }

    /// `Pr(Φ(B(o,R)) >= N)`, the acceptance rate of the conditioning event.
    pub fn acceptance_probability(&self) -> f64 {
        self.ln_normalizer.exp()
    }

    fn shell_mean(&self, r: f64) -> f64 {
        let c = self.lambda * unit_ball_volume_unchecked(self.dim);
        let d = self.dim as i32;
        (c * (self.radius.powi(d) - r.powi(d))).max(0.0)
    }

    fn check_support(&self, r: f64) -> Result<()> {
        if !(0.0..=self.radius).contains(&r) {
            return domain(format!("distance {r} outside the support [0, {}]", self.radius));
        }
        Ok(())
    }
}

fn finite_or_not_computable(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NotComputable(format!("{what} evaluated to {v}")))
    }
}

/// Conditioned density
/// `λ d c_d r^(d-1) A_{n-1}(r) (1 - Σ_{k<N-n} B_k(r)) / Pr(Φ(B(o,R)) >= N)`.
pub fn conditioned_ppp_pdf(q: &ConditionedPppQuery, r: f64) -> Result<f64> {
    q.check_support(r)?;
    let d = q.dim as f64;
    let rate = q.lambda * d * unit_ball_volume_unchecked(q.dim);
    let inner = q.mean_count(r);
    let shell = ln_poisson_upper_tail((q.level - q.rank) as u64, q.shell_mean(r));
    if r == 0.0 {
        // r^(d-1) A_{n-1}(r) → 1 only for d = 1, n = 1.
        if q.dim == 1 && q.rank == 1 {
            return finite_or_not_computable((rate.ln() + shell - q.ln_normalizer).exp(), "pdf");
        }
        return Ok(0.0);
    }
    let ln =
        rate.ln() + (d - 1.0) * r.ln() + ln_poisson_pmf((q.rank - 1) as u64, inner) + shell - q.ln_normalizer;
    finite_or_not_computable(ln.exp(), "conditioned PPP pdf")
}

/// Conditioned ccdf `Σ_{k<n} A_k(r) (1 - Σ_{l<N-k} B_l(r)) / Pr(Φ(B(o,R)) >= N)`.
pub fn conditioned_ppp_ccdf(q: &ConditionedPppQuery, r: f64) -> Result<f64> {
    q.check_support(r)?;
    let inner = q.mean_count(r);
    let shell = q.shell_mean(r);
    let mut terms: Vec<f64> = (0..q.rank)
        .map(|k| ln_poisson_pmf(k as u64, inner) + ln_poisson_upper_tail((q.level - k) as u64, shell))
        .filter(|t| *t > f64::NEG_INFINITY)
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    terms.iter_mut().for_each(|t| *t = (*t - top).exp());
    let ln_sum = top + terms.iter().sum::<f64>().ln();
    let v = finite_or_not_computable((ln_sum - q.ln_normalizer).exp(), "conditioned PPP ccdf")?;
    Ok(v.clamp(0.0, 1.0))
}

pub fn conditioned_ppp_cdf(q: &ConditionedPppQuery, r: f64) -> Result<f64> {
    Ok(1.0 - conditioned_ppp_ccdf(q, r)?)
}

pub fn conditioned_ppp_quantile(q: &ConditionedPppQuery, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {u}"));
    }
    invert_cdf(|r| conditioned_ppp_cdf(q, r), |r| conditioned_ppp_pdf(q, r).unwrap_or(0.0), 0.0, q.radius, u)
}

fn check_limit_args(lambda: f64, d: u32, n: u32, r: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("intensity must be positive, got {lambda}"));
    }
    if d < 1 || n < 1 {
        return domain("dimension and rank must be at least 1");
    }
    if !(r >= 0.0) {
        return domain(format!("distance must be non-negative, got {r}"));
    }
    Ok(())
}

/// Generalized gamma density `e^(-λc_d r^d) d (λc_d r^d)^n / (r Γ(n))` of the
/// rank-`n` distance in an infinite PPP.
pub fn ppp_limit_pdf(lambda: f64, d: u32, n: u32, r: f64) -> Result<f64> {
    check_limit_args(lambda, d, n, r)?;
    let c = lambda * unit_ball_volume_unchecked(d);
    if r == 0.0 {
        return Ok(if d == 1 && n == 1 { c } else { 0.0 });
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    let u = c * r.powi(d as i32);
    let ln = -u + (d as f64).ln() + n as f64 * u.ln() - r.ln() - ln_gamma_unchecked(n as f64);
    Ok(ln.exp())
}

/// `Pr(R_n <= r) = Pr(Poisson(λ c_d r^d) >= n)`.
pub fn ppp_limit_cdf(lambda: f64, d: u32, n: u32, r: f64) -> Result<f64> {
    check_limit_args(lambda, d, n, r)?;
    if r.is_infinite() {
        return Ok(1.0);
    }
    let u = lambda * unit_ball_volume_unchecked(d) * r.powi(d as i32);
    Ok(ln_poisson_upper_tail(n as u64, u).exp())
}

pub fn ppp_limit_quantile(lambda: f64, d: u32, n: u32, u: f64) -> Result<f64> {
    check_limit_args(lambda, d, n, 0.0)?;
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {u}"));
    }
    let mut hi = (n as f64 / (lambda * unit_ball_volume_unchecked(d))).powf(1.0 / d as f64);
    while ppp_limit_cdf(lambda, d, n, hi)? < u {
        hi *= 2.0;
    }
    invert_cdf(
        |r| ppp_limit_cdf(lambda, d, n, r),
        |r| ppp_limit_pdf(lambda, d, n, r).unwrap_or(0.0),
        0.0,
        hi,
        u,
    )
}
