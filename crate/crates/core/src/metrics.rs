//! Network metrics built on the distance laws: per-hop energy, mean
//! interference at the centre, noise-limited connectivity and an outage
//! lower bound under slotted ALOHA.

use serde::{Deserialize, Serialize};

use crate::distance::{cdf_rn, moment_of, NthNeighborQuery};
use crate::error::{domain, Result};
use crate::geometry::NetworkSpec;
use crate::specfun::{ln_gamma_ratio, MomentValue};

/// Path-loss law: `r^-α` or `min(1, r^-α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PathLoss {
    #[default]
    Singular,
    Bounded,
}

impl PathLoss {
    /// Received power at distance `r` for unit transmit power.
    pub fn gain(self, r: f64, alpha: f64) -> f64 {
        match self {
            PathLoss::Singular => r.powf(-alpha),
            PathLoss::Bounded => {
                if r <= 1.0 {
                    1.0
                } else {
                    r.powf(-alpha)
                }
            }
        }
    }
}

/// Channel-access and link parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// ALOHA transmit probability.
    pub aloha: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Noise power.
    pub noise: f64,
    /// SINR threshold.
    pub theta: f64,
    pub pathloss: PathLoss,
}

impl MetricConfig {
    pub fn new(aloha: f64, alpha: f64, noise: f64, theta: f64, pathloss: PathLoss) -> Result<Self> {
        let cfg = Self { aloha, alpha, noise, theta, pathloss };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.aloha) {
            return domain(format!("ALOHA probability must lie in [0, 1], got {}", self.aloha));
        }
        if !(self.alpha > 0.0) {
            return domain(format!("path-loss exponent must be positive, got {}", self.alpha));
        }
        if !(self.noise >= 0.0) {
            return domain(format!("noise power must be non-negative, got {}", self.noise));
        }
        if !(self.theta > 0.0) {
            return domain(format!("threshold must be positive, got {}", self.theta));
        }
        Ok(())
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }
}

/// Mean energy `E[R_n^α]` to deliver a packet from the n-th nearest node.
pub fn mean_hop_energy(spec: &NetworkSpec, n: u32, alpha: f64) -> Result<MomentValue> {
    if !(alpha > 0.0) {
        return domain(format!("path-loss exponent must be positive, got {alpha}"));
    }
    let q = NthNeighborQuery::new(*spec, n)?;
    Ok(moment_of(q.spec(), q.rank(), alpha))
}

/// Mean interference at the centre, `p Σ_n E[g(R_n)]`.
///
/// Singular law: infinite for `d <= α`, else `N p d R^-α / (d - α)`.
/// Bounded law (requires `R > 1`): `(N p d / R^d) [1/d + (R^(d-α) - 1)/(d - α)]`,
/// with `ln R` replacing the fraction at `d = α`.
pub fn mean_interference(spec: &NetworkSpec, cfg: &MetricConfig) -> Result<MomentValue> {
    cfg.validate()?;
    let d = spec.dim() as f64;
    let big_n = spec.nodes() as f64;
    let big_r = spec.radius();
    let (p, alpha) = (cfg.aloha, cfg.alpha);
    match cfg.pathloss {
        PathLoss::Singular => {
            if d <= alpha {
                return Ok(MomentValue::Infinite);
            }
            Ok(MomentValue::Finite(big_n * p * d * big_r.powf(-alpha) / (d - alpha)))
        }
        PathLoss::Bounded => {
            if !(big_r > 1.0) {
                return domain(format!("bounded path-loss interference requires R > 1, got R = {big_r}"));
            }
            let ln_r = big_r.ln();
            let gap = d - alpha;
            // (R^gap - 1)/gap, continuous through gap = 0.
            let shell = if gap == 0.0 { ln_r } else { (gap * ln_r).exp_m1() / gap };
            Ok(MomentValue::Finite(big_n * p * d / big_r.powf(d) * (1.0 / d + shell)))
        }
    }
}

/// `Σ_{n=1}^k Γ(n-x)/Γ(n) = Γ(k-x)/Γ(k) · (k-x)/(1-x)` for `x < 1`.
pub fn gamma_ratio_partial_sum(k: u32, x: f64) -> Result<f64> {
    if k < 1 {
        return domain("partial sum needs k >= 1");
    }
    if !(x < 1.0) {
        return domain(format!("gamma-ratio sum requires x < 1, got {x}"));
    }
    let k = k as f64;
    Ok(ln_gamma_ratio(k, -x)?.exp() * (k - x) / (1.0 - x))
}

/// Probability that the n-th nearest node reaches the centre with received
/// power above `N0 Θ` (noise only).
pub fn connectivity_prob(spec: &NetworkSpec, cfg: &MetricConfig, n: u32) -> Result<f64> {
    cfg.validate()?;
    let q = NthNeighborQuery::new(*spec, n)?;
    let level = cfg.noise * cfg.theta;
    if level == 0.0 {
        return Ok(1.0);
    }
    if cfg.pathloss == PathLoss::Bounded && level >= 1.0 {
        return Ok(0.0);
    }
    // Connected iff R_n < (N0 Θ)^(-1/α).
    let reach = level.powf(-1.0 / cfg.alpha);
    if reach >= spec.radius() {
        return Ok(1.0);
    }
    cdf_rn(&q, reach)
}

/// Outage lower bound from the nearest interferer alone:
/// `p (1 - (1 - Θ^(d/α)/R^d)^N)` for `Θ <= R^α`, else `p`.
///
/// The desired link has unit length and unit power and the system is
/// interference-limited; the bound is stated for the singular law.
pub fn outage_lower_bound(spec: &NetworkSpec, cfg: &MetricConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.pathloss != PathLoss::Singular {
        return domain("the nearest-interferer outage bound is defined for the singular path-loss law");
    }
    let d = spec.dim() as f64;
    let big_r = spec.radius();
    let reach = cfg.theta.powf(1.0 / cfg.alpha);
    if reach > big_r {
        return Ok(cfg.aloha);
    }
    let frac = (reach / big_r).powf(d);
    let void = if frac >= 1.0 { 0.0 } else { (spec.nodes() as f64 * (-frac).ln_1p()).exp() };
    Ok(cfg.aloha * (1.0 - void))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::E;

    fn cfg(p: f64, alpha: f64, pathloss: PathLoss) -> MetricConfig {
        MetricConfig::new(p, alpha, 0.0, 1.0, pathloss).unwrap()
    }

    #[test]
    fn energy_examples() {
        let s = NetworkSpec::new(1, 1.0, 5).unwrap();
        assert_abs_diff_eq!(mean_hop_energy(&s, 3, 1.0).unwrap().value(), 0.5, epsilon = 1e-15);
        let s = NetworkSpec::new(2, 1.0, 1).unwrap();
        assert_abs_diff_eq!(mean_hop_energy(&s, 1, 2.0).unwrap().value(), 0.5, epsilon = 1e-15);
        assert!(mean_hop_energy(&s, 2, 2.0).is_err());
    }

    #[test]
    fn interference_examples() {
        let s = NetworkSpec::new(2, 1.0, 10).unwrap();
        assert_eq!(mean_interference(&s, &cfg(0.5, 4.0, PathLoss::Singular)).unwrap(), MomentValue::Infinite);
        assert_eq!(mean_interference(&s, &cfg(0.5, 2.0, PathLoss::Singular)).unwrap(), MomentValue::Infinite);
        let s = NetworkSpec::new(3, 1.0, 10).unwrap();
        assert_relative_eq!(
            mean_interference(&s, &cfg(0.5, 2.0, PathLoss::Singular)).unwrap().value(),
            15.0,
            max_relative = 1e-15
        );
        let s = NetworkSpec::new(2, 2.0, 20).unwrap();
        assert_relative_eq!(
            mean_interference(&s, &cfg(0.1, 4.0, PathLoss::Bounded)).unwrap().value(),
            0.875,
            max_relative = 1e-14
        );
        let s = NetworkSpec::new(2, E, 10).unwrap();
        assert_relative_eq!(
            mean_interference(&s, &cfg(1.0, 2.0, PathLoss::Bounded)).unwrap().value(),
            20.0 / (E * E) * 1.5,
            max_relative = 1e-14
        );
        let s = NetworkSpec::new(2, 1.0, 10).unwrap();
        assert!(mean_interference(&s, &cfg(1.0, 2.0, PathLoss::Bounded)).is_err());
    }

    #[test]
    fn gamma_sum_examples() {
        for &x in &[-1.5, 0.0, 0.3, 2.0 / 3.0, 0.99] {
            let g1 = crate::specfun::ln_gamma(1.0 - x).unwrap().exp();
            assert_relative_eq!(gamma_ratio_partial_sum(1, x).unwrap(), g1, max_relative = 1e-13);
        }
        assert_relative_eq!(gamma_ratio_partial_sum(10, 0.0).unwrap(), 10.0, max_relative = 1e-15);
        // Five-term sum, frozen from a 30-digit evaluation.
        assert_relative_eq!(
            gamma_ratio_partial_sum(5, 2.0 / 3.0).unwrap(),
            5.016_119_478_568_005,
            max_relative = 1e-13
        );
        assert!(gamma_ratio_partial_sum(3, 1.0).is_err());
        assert!(gamma_ratio_partial_sum(3, 1.5).is_err());
    }

    #[test]
    fn connectivity_branches() {
        let s = NetworkSpec::new(2, 1.0, 25).unwrap();
        let base = MetricConfig::new(1.0, 4.0, 0.01, 1.0, PathLoss::Singular).unwrap();
        // Θ <= R^-α / N0 = 100.
        for &theta in &[0.01, 1.0, 99.0, 100.0] {
            assert_eq!(connectivity_prob(&s, &base.with_theta(theta), 5).unwrap(), 1.0);
        }
        let theta = 1e3;
        let reach = (0.01f64 * theta).powf(-0.25);
        let q = NthNeighborQuery::new(s, 1).unwrap();
        assert_abs_diff_eq!(
            connectivity_prob(&s, &base.with_theta(theta), 1).unwrap(),
            cdf_rn(&q, reach).unwrap(),
            epsilon = 1e-15
        );
        let silent = MetricConfig::new(1.0, 4.0, 0.0, 1e9, PathLoss::Singular).unwrap();
        assert_eq!(connectivity_prob(&s, &silent, 25).unwrap(), 1.0);
    }

    #[test]
    fn outage_bound_branches() {
        let s = NetworkSpec::new(2, 1.0, 5).unwrap();
        let c = MetricConfig::new(0.35, 4.0, 0.0, 2.0, PathLoss::Singular).unwrap();
        assert_eq!(outage_lower_bound(&s, &c).unwrap(), 0.35);
        assert_abs_diff_eq!(outage_lower_bound(&s, &c.with_theta(1.0)).unwrap(), 0.35, epsilon = 1e-15);
        let v = outage_lower_bound(&s, &c.with_theta(0.25)).unwrap();
        assert_abs_diff_eq!(v, 0.35 * (1.0 - 0.5f64.powi(5)), epsilon = 1e-15);
        let b = MetricConfig { pathloss: PathLoss::Bounded, ..c };
        assert!(outage_lower_bound(&s, &b).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(MetricConfig::new(1.5, 4.0, 0.0, 1.0, PathLoss::Singular).is_err());
        assert!(MetricConfig::new(0.5, 0.0, 0.0, 1.0, PathLoss::Singular).is_err());
        assert!(MetricConfig::new(0.5, 4.0, -1.0, 1.0, PathLoss::Singular).is_err());
        assert!(MetricConfig::new(0.5, 4.0, 0.0, 0.0, PathLoss::Singular).is_err());
    }
}
