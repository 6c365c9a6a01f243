//! A single handle over the four distance laws.

use rand::Rng;

use crate::conditional::{cond_cdf, cond_pdf, cond_quantile, cond_support, BeaconCondition};
use crate::distance::{
    ccdf_rn, cdf_rn, conditioned_ppp_ccdf, conditioned_ppp_cdf, conditioned_ppp_pdf,
    conditioned_ppp_quantile, pdf_rn, ppp_limit_cdf, ppp_limit_pdf, ppp_limit_quantile, quantile_rn,
    sample_rn, ConditionedPppQuery, NthNeighborQuery, SamplingMethod,
};
use crate::error::{domain, Result};
use crate::geometry::NetworkSpec;

/// Distance to the n-th nearest node under one of the supported models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceLaw {
    Bpp(NthNeighborQuery),
    ConditionedPpp(ConditionedPppQuery),
    PppLimit { lambda: f64, dim: u32, rank: u32 },
    Conditional { spec: NetworkSpec, beacon: BeaconCondition, rank: u32 },
}

impl DistanceLaw {
    pub fn ppp_limit(lambda: f64, dim: u32, rank: u32) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("intensity must be positive, got {lambda}"));
        }
        if dim < 1 || rank < 1 {
            return domain("dimension and rank must be at least 1");
        }
        Ok(Self::PppLimit { lambda, dim, rank })
    }

    pub fn conditional(spec: NetworkSpec, beacon: BeaconCondition, rank: u32) -> Result<Self> {
        cond_support(&spec, &beacon, rank)?;
        Ok(Self::Conditional { spec, beacon, rank })
    }

    /// Closed support `[lo, hi]`; `hi` is infinite for the PPP limit.
    pub fn support(&self) -> Result<(f64, f64)> {
        match self {
            Self::Bpp(q) => Ok((0.0, q.spec().radius())),
            Self::ConditionedPpp(q) => Ok((0.0, q.radius())),
            Self::PppLimit { .. } => Ok((0.0, f64::INFINITY)),
            Self::Conditional { spec, beacon, rank } => cond_support(spec, beacon, *rank),
        }
    }

    pub fn pdf(&self, r: f64) -> Result<f64> {
        match self {
            Self::Bpp(q) => pdf_rn(q, r),
            Self::ConditionedPpp(q) => conditioned_ppp_pdf(q, r),
            Self::PppLimit { lambda, dim, rank } => ppp_limit_pdf(*lambda, *dim, *rank, r),
            Self::Conditional { spec, beacon, rank } => cond_pdf(spec, beacon, *rank, r),
        }
    }

    pub fn cdf(&self, r: f64) -> Result<f64> {
        match self {
            Self::Bpp(q) => cdf_rn(q, r),
            Self::ConditionedPpp(q) => conditioned_ppp_cdf(q, r),
            Self::PppLimit { lambda, dim, rank } => ppp_limit_cdf(*lambda, *dim, *rank, r),
            Self::Conditional { spec, beacon, rank } => cond_cdf(spec, beacon, *rank, r),
        }
    }

    pub fn ccdf(&self, r: f64) -> Result<f64> {
        match self {
            Self::Bpp(q) => ccdf_rn(q, r),
            Self::ConditionedPpp(q) => conditioned_ppp_ccdf(q, r),
            _ => Ok(1.0 - self.cdf(r)?),
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        match self {
            Self::Bpp(q) => quantile_rn(q, u),
            Self::ConditionedPpp(q) => conditioned_ppp_quantile(q, u),
            Self::PppLimit { lambda, dim, rank } => ppp_limit_quantile(*lambda, *dim, *rank, u),
            Self::Conditional { spec, beacon, rank } => cond_quantile(spec, beacon, *rank, u),
        }
    }

    /// One draw; order statistics for the BPP, inversion otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        if let Self::Bpp(q) = self {
            return sample_rn(q, SamplingMethod::OrderStatistics, rng);
        }
        let mut u: f64 = rng.random();
        while u == 0.0 {
            u = rng.random();
        }
        self.quantile(u)
    }
}
