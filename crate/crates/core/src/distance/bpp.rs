//! Distance from the centre of a binomial network to its n-th nearest node.
//!
//! With `p = (r/R)^d`, the rank-n distance satisfies
//! `Pr(R_n > r) = I_{1-p}(N-n+1, n)`, i.e. `(R_n/R)^d ~ Beta(n, N-n+1)`.

use rand::Rng;

use super::invert_cdf;
use crate::error::{domain, Result};
use crate::geometry::{sample_unit_radius, NetworkSpec};
use crate::specfun::{ln_beta_unchecked, ln_pochhammer_quotient, reg_inc_beta, MomentValue};

/// The rank-`n` distance in a given network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NthNeighborQuery {
    spec: NetworkSpec,
    rank: u32,
}

impl NthNeighborQuery {
    pub fn new(spec: NetworkSpec, rank: u32) -> Result<Self> {
        if rank < 1 || rank > spec.nodes() {
            return domain(format!("neighbor rank must satisfy 1 <= n <= N = {}, got {rank}", spec.nodes()));
        }
        Ok(Self { spec, rank })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    fn check_support(&self, r: f64) -> Result<()> {
        if !(0.0..=self.spec.radius()).contains(&r) {
            return domain(format!("distance {r} outside the support [0, {}]", self.spec.radius()));
        }
        Ok(())
    }
}

/// How a rank-n distance is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    /// Draw all N radii and select the n-th smallest.
    #[default]
    OrderStatistics,
    /// Invert the cdf at a single uniform.
    Quantile,
}

/// `Pr(R_n > r) = I_{1-p}(N-n+1, n)`.
pub fn ccdf_rn(q: &NthNeighborQuery, r: f64) -> Result<f64> {
    q.check_support(r)?;
    let p = q.spec.volume_fraction(r);
    let (big_n, n) = (q.spec.nodes() as f64, q.rank as f64);
    reg_inc_beta(1.0 - p, big_n - n + 1.0, n)
}

pub fn cdf_rn(q: &NthNeighborQuery, r: f64) -> Result<f64> {
    Ok(1.0 - ccdf_rn(q, r)?)
}

/// Generalized beta density `(d/R)(1-p)^(N-n) p^(n-1/d) / B(N-n+1, n)`.
pub fn pdf_rn(q: &NthNeighborQuery, r: f64) -> Result<f64> {
    q.check_support(r)?;
    Ok(pdf_unchecked(&q.spec, q.rank, r))
}

pub(crate) fn pdf_unchecked(spec: &NetworkSpec, rank: u32, r: f64) -> f64 {
    let d = spec.dim() as f64;
    let (big_n, n) = (spec.nodes() as f64, rank as f64);
    let ln_norm = (d / spec.radius()).ln() - ln_beta_unchecked(big_n - n + 1.0, n);
    let outer = big_n - n;
    let inner = n - 1.0 / d;
    let ratio = r / spec.radius();
    if ratio == 0.0 {
        return if inner == 0.0 { ln_norm.exp() } else { 0.0 };
    }
    if ratio >= 1.0 {
        return if outer == 0.0 { ln_norm.exp() } else { 0.0 };
    }
    let ln_p = d * ratio.ln();
    let mut ln = ln_norm + inner * ln_p;
    if outer > 0.0 {
        ln += outer * (-ratio.powi(spec.dim() as i32)).ln_1p();
    }
    ln.exp()
}

/// The `u`-quantile of `R_n`, accurate to `|cdf(r) - u| <= 1e-10`.
pub fn quantile_rn(q: &NthNeighborQuery, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0, 1), got {u}"));
    }
    let spec = q.spec;
    let rank = q.rank;
    invert_cdf(|r| cdf_rn(q, r), |r| pdf_unchecked(&spec, rank, r), 0.0, spec.radius(), u)
}

/// `E[R_n^γ] = R^γ n^[γ/d] / (N+1)^[γ/d]`, infinite when `n + γ/d <= 0`.
pub fn moment_rn(q: &NthNeighborQuery, gamma: f64) -> MomentValue {
    moment_of(&q.spec, q.rank, gamma)
}

pub(crate) fn moment_of(spec: &NetworkSpec, rank: u32, gamma: f64) -> MomentValue {
    let step = gamma / spec.dim() as f64;
    let n = rank as f64;
    if n + step <= 0.0 {
        return MomentValue::Infinite;
    }
    let ln = gamma * spec.radius().ln() + ln_pochhammer_quotient(n, spec.nodes() as f64 + 1.0, step);
    MomentValue::Finite(ln.exp())
}

/// Mean distance `E[R_n]`.
pub fn mean_rn(q: &NthNeighborQuery) -> f64 {
    moment_rn(q, 1.0).value()
}

/// `Var[R_n] = E[R_n²] - E[R_n]²`.
pub fn variance_rn(q: &NthNeighborQuery) -> f64 {
    let m1 = moment_rn(q, 1.0).value();
    let m2 = moment_rn(q, 2.0).value();
    (m2 - m1 * m1).max(0.0)
}

/// Mean gap `E[R_j - R_i]` between the i-th and j-th nearest nodes.
pub fn mean_internodal(spec: &NetworkSpec, i: u32, j: u32) -> Result<f64> {
    if !(1 <= i && i < j && j <= spec.nodes()) {
        return domain(format!(
            "internodal ranks must satisfy 1 <= i < j <= N = {}, got i={i}, j={j}",
            spec.nodes()
        ));
    }
    let far = moment_of(spec, j, 1.0).value();
    let near = moment_of(spec, i, 1.0).value();
    Ok(far - near)
}

/// Probability that the ball of radius `r` about the centre holds no node.
pub fn void_probability(spec: &NetworkSpec, r: f64) -> Result<f64> {
    if !(0.0..=spec.radius()).contains(&r) {
        return domain(format!("radius {r} outside [0, {}]", spec.radius()));
    }
    let p = spec.volume_fraction(r);
    if p >= 1.0 {
        return Ok(0.0);
    }
    Ok((spec.nodes() as f64 * (-p).ln_1p()).exp())
}

/// Nearest-node density `(dN/r)(1-(r/R)^d)^(N-1) (r/R)^d`.
pub fn nearest_pdf(spec: &NetworkSpec, r: f64) -> Result<f64> {
    if !(0.0..=spec.radius()).contains(&r) {
        return domain(format!("radius {r} outside [0, {}]", spec.radius()));
    }
    let d = spec.dim() as f64;
    let big_n = spec.nodes() as f64;
    let big_r = spec.radius();
    if r == 0.0 {
        return Ok(if spec.dim() == 1 { big_n / big_r } else { 0.0 });
    }
    let p = spec.volume_fraction(r);
    if p >= 1.0 {
        return Ok(if spec.nodes() == 1 { d / big_r } else { 0.0 });
    }
    Ok(d * big_n / r * ((big_n - 1.0) * (-p).ln_1p()).exp() * p)
}

/// Farthest-node density `(dN/r)(r/R)^(Nd)`.
pub fn farthest_pdf(spec: &NetworkSpec, r: f64) -> Result<f64> {
    if !(0.0..=spec.radius()).contains(&r) {
        return domain(format!("radius {r} outside [0, {}]", spec.radius()));
    }
    let d = spec.dim() as f64;
    let big_n = spec.nodes() as f64;
    let big_r = spec.radius();
    if r == 0.0 {
        return Ok(if spec.dim() == 1 && spec.nodes() == 1 { 1.0 / big_r } else { 0.0 });
    }
    Ok(d * big_n / r * (big_n * d * (r / big_r).ln()).exp())
}

/// Draws one realization of `R_n`.
pub fn sample_rn<R: Rng + ?Sized>(q: &NthNeighborQuery, method: SamplingMethod, rng: &mut R) -> Result<f64> {
    match method {
        SamplingMethod::OrderStatistics => {
            let mut radii: Vec<f64> = (0..q.spec.nodes())
                .map(|_| q.spec.radius() * sample_unit_radius(q.spec.dim(), rng))
                .collect();
            let idx = q.rank as usize - 1;
            let (_, nth, _) = radii.select_nth_unstable_by(idx, f64::total_cmp);
            Ok(*nth)
        }
        SamplingMethod::Quantile => {
            let mut u: f64 = rng.random();
            while u == 0.0 {
                u = rng.random();
            }
            quantile_rn(q, u)
        }
    }
}
