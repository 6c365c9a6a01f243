//! Poisson probabilities in log space.

use super::gamma::ln_gamma_unchecked;

const TAIL_EPS: f64 = 1e-17;

/// `ln Pr(X = k)` for `X ~ Poisson(mu)`, `mu >= 0`.
pub fn ln_poisson_pmf(k: u64, mu: f64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let k = k as f64;
    -mu + k * mu.ln() - ln_gamma_unchecked(k + 1.0)
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Pr(X >= m)` for `X ~ Poisson(mu)`.
///
/// Sums whichever tail is short: the upper tail directly when `m > mu`,
/// otherwise the complement of the lower tail (which is then at most about
/// one half, so the subtraction is benign).
pub fn ln_poisson_upper_tail(m: u64, mu: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if mu == 0.0 {
        return f64::NEG_INFINITY;
    }
    if m as f64 > mu {
        // Terms decrease monotonically from k = m.
        let mut term = ln_poisson_pmf(m, mu);
        let mut acc = term;
        let ln_mu = mu.ln();
        let mut k = m;
        loop {
            k += 1;
            term += ln_mu - (k as f64).ln();
            acc = ln_add_exp(acc, term);
            if term < acc + TAIL_EPS.ln() {
                break;
            }
        }
        acc
    } else {
        // Lower tail Σ_{k<m}, summed downwards from k = m-1.
        let mut term = ln_poisson_pmf(m - 1, mu);
        let mut acc = term;
        let ln_mu = mu.ln();
        let mut k = m - 1;
        while k > 0 {
            term += (k as f64).ln() - ln_mu;
            k -= 1;
            acc = ln_add_exp(acc, term);
            if term < acc + TAIL_EPS.ln() {
                break;
            }
        }
        (-acc.exp()).ln_1p()
    }
}
