//! Regularized incomplete beta function and the beta density.

use super::gamma::ln_beta_unchecked;
use super::MomentValue;
use crate::error::{domain, Error, Result};

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;
const CF_MIN_ITER: usize = 10_000;

/// Continued fraction for `I_x(a, b)` (modified Lentz). Converges quickly for
/// `x < (a + 1)/(a + b + 2)`.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    // Iterations needed grow like sqrt(max(a, b)).
    let max_iter = CF_MIN_ITER.max(10 * a.max(b).sqrt() as usize);
    for m in 1..=max_iter {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence { what: "incomplete beta continued fraction", estimate: h, error: f64::NAN })
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("reg_inc_beta requires 0 <= x <= 1, got {x}"));
    }
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("reg_inc_beta requires a, b > 0, got a={a}, b={b}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta_unchecked(a, b);
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_continued_fraction(x, a, b)? / a
    } else {
        1.0 - ln_front.exp() * beta_continued_fraction(1.0 - x, b, a)? / b
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Beta density `x^(a-1) (1-x)^(b-1) / B(a, b)`.
///
/// Returns [`MomentValue::Infinite`] at an endpoint where the density has a
/// pole (`x = 0` with `a < 1`, `x = 1` with `b < 1`).
pub fn beta_density(x: f64, a: f64, b: f64) -> Result<MomentValue> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("beta_density requires 0 <= x <= 1, got {x}"));
    }
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return domain(format!("beta_density requires a, b > 0, got a={a}, b={b}"));
    }
    let lnb = ln_beta_unchecked(a, b);
    let edge = |exponent: f64| -> Option<MomentValue> {
        if exponent < 0.0 {
            Some(MomentValue::Infinite)
        } else if exponent > 0.0 {
            Some(MomentValue::Finite(0.0))
        } else {
            None
        }
    };
    if x == 0.0 {
        if let Some(v) = edge(a - 1.0) {
            return Ok(v);
        }
        return Ok(MomentValue::Finite((-lnb).exp()));
    }
    if x == 1.0 {
        if let Some(v) = edge(b - 1.0) {
            return Ok(v);
        }
        return Ok(MomentValue::Finite((-lnb).exp()));
    }
    let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - lnb;
    Ok(MomentValue::Finite(ln_pdf.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Binomial tail: I_{1-p}(N-n+1, n) = Σ_{k<n} C(N,k) p^k (1-p)^(N-k).
    fn binomial_lower_tail(big_n: u32, n: u32, p: f64) -> f64 {
        let mut total = 0.0;
        let mut coef = 1.0f64;
        for k in 0..n {
            if k > 0 {
                coef *= (big_n - k + 1) as f64 / k as f64;
            }
            total += coef * p.powi(k as i32) * (1.0 - p).powi((big_n - k) as i32);
        }
        total
    }

    #[test]
    fn uniform_and_boundaries() {
        for &x in &[0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            assert_abs_diff_eq!(reg_inc_beta(x, 1.0, 1.0).unwrap(), x, epsilon = 1e-15);
        }
        assert_eq!(reg_inc_beta(0.0, 3.5, 0.2).unwrap(), 0.0);
        assert_eq!(reg_inc_beta(1.0, 3.5, 0.2).unwrap(), 1.0);
    }

    #[test]
    fn polynomial_value() {
        // ∫_0^0.25 12 t (1-t)^2 dt = 6t² - 8t³ + 3t⁴ at t = 1/4.
        let t: f64 = 0.25;
        let exact = 6.0 * t * t - 8.0 * t.powi(3) + 3.0 * t.powi(4);
        assert_abs_diff_eq!(exact, 0.261_718_75, epsilon = 1e-15);
        assert_abs_diff_eq!(reg_inc_beta(0.25, 2.0, 3.0).unwrap(), exact, epsilon = 1e-14);
    }

    #[test]
    fn matches_binomial_tail() {
        for &big_n in &[1u32, 3, 10, 50, 200] {
            for n in [1, big_n.div_ceil(2), big_n] {
                for i in 1..40 {
                    let p = i as f64 / 40.0;
                    let got = reg_inc_beta(1.0 - p, (big_n - n + 1) as f64, n as f64).unwrap();
                    let want = binomial_lower_tail(big_n, n, p);
                    assert_abs_diff_eq!(got, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn large_parameters() {
        // I_{1-p}(N, 1) = (1-p)^N exactly.
        let big_n = 1e6;
        for &p in &[1e-7, 1e-6, 3e-6, 1e-5] {
            let x = 1.0 - p;
            let got = reg_inc_beta(x, big_n, 1.0).unwrap();
            // 1 - x is exact; p itself is not representable as 1 - x.
            let want = (big_n * x.ln()).exp();
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(reg_inc_beta(-0.1, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(1.1, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 0.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 1.0, -2.0).is_err());
    }

    #[test]
    fn density_examples() {
        assert_abs_diff_eq!(beta_density(0.3, 1.0, 1.0).unwrap().value(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(beta_density(0.5, 2.0, 2.0).unwrap().value(), 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(beta_density(0.25, 0.5, 1.0).unwrap().value(), 1.0, epsilon = 1e-14);
        assert_eq!(beta_density(0.0, 0.5, 2.0).unwrap(), MomentValue::Infinite);
        assert_eq!(beta_density(1.0, 2.0, 0.5).unwrap(), MomentValue::Infinite);
        assert_eq!(beta_density(0.0, 2.0, 2.0).unwrap(), MomentValue::Finite(0.0));
        assert!(beta_density(1.5, 2.0, 2.0).is_err());
    }
}
