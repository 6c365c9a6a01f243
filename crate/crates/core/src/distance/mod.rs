//! Distance distributions to the n-th nearest node from the centre.

mod bpp;
mod ppp;

pub use bpp::{
    ccdf_rn, cdf_rn, farthest_pdf, mean_internodal, mean_rn, moment_rn, nearest_pdf, pdf_rn, quantile_rn,
    sample_rn, variance_rn, void_probability, NthNeighborQuery, SamplingMethod,
};
pub use ppp::{
    conditioned_ppp_ccdf, conditioned_ppp_cdf, conditioned_ppp_pdf, conditioned_ppp_quantile, ppp_limit_cdf,
    ppp_limit_pdf, ppp_limit_quantile, ConditionedPppQuery,
};

pub(crate) use bpp::{moment_of, pdf_unchecked};

use crate::error::{Error, Result};

const QUANTILE_TOL: f64 = 1e-10;
const BISECTION_STEPS: usize = 200;
const NEWTON_STEPS: usize = 8;

/// Inverts a continuous cdf on `[lo, hi]` by bisection, then polishes with
/// Newton steps that stay inside the bracket.
pub(crate) fn invert_cdf<C, P>(cdf: C, pdf: P, lo: f64, hi: f64, u: f64) -> Result<f64>
where
    C: Fn(f64) -> Result<f64>,
    P: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if cdf(mid)? < u {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a) <= 4.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let mut x = 0.5 * (a + b);
    let mut gap = cdf(x)? - u;
    for _ in 0..NEWTON_STEPS {
        if gap.abs() <= QUANTILE_TOL * 1e-3 {
            break;
        }
        let slope = pdf(x);
        if !(slope > 0.0) {
            break;
        }
        let next = x - gap / slope;
        if !(next > a && next < b) {
            break;
        }
        let next_gap = cdf(next)? - u;
        if next_gap.abs() >= gap.abs() {
            break;
        }
        x = next;
        gap = next_gap;
    }
    if gap.abs() <= QUANTILE_TOL {
        Ok(x)
    } else {
        Err(Error::NonConvergence { what: "quantile inversion", estimate: x, error: gap.abs() })
    }
}
