//! Log-gamma, log-beta and rising Pochhammer ratios.

use std::f64::consts::PI;

use super::MomentValue;
use crate::error::{domain, Result};

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_25,
    14.136_097_974_741_747_17,
    -0.491_913_816_097_620_199_8,
    3.399_464_998_481_188_87e-5,
    4.652_362_892_704_857_57e-5,
    -9.837_447_530_487_956_47e-5,
    1.580_887_032_249_124_89e-4,
    -2.102_644_417_241_048_83e-4,
    2.174_396_181_152_126_43e-4,
    -1.643_181_065_367_638_90e-4,
    8.441_822_398_385_274_33e-5,
    -2.619_083_840_158_140_87e-5,
    3.689_918_265_953_162_70e-6,
];

/// Above this argument the Stirling series is used instead of Lanczos.
const STIRLING_CUTOFF: f64 = 10.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Tail of the Stirling series, `ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)]`.
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0
                    + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 * (1.0 / 156.0)))))))
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma requires a finite x > 0, got {x}"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        0.0
    } else if x < STIRLING_CUTOFF {
        ln_gamma_lanczos(x)
    } else {
        (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
    }
}

/// `ln Γ(x + q) - ln Γ(x)`, computed without cancellation when both
/// arguments are large.
pub fn ln_gamma_ratio(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0) || !(x + q > 0.0) {
        return domain(format!("ln_gamma_ratio requires x > 0 and x + q > 0, got x={x}, q={q}"));
    }
    Ok(ln_gamma_ratio_unchecked(x, q))
}

pub(crate) fn ln_gamma_ratio_unchecked(x: f64, q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let y = x + q;
    if x >= STIRLING_CUTOFF && y >= STIRLING_CUTOFF {
        (x - 0.5) * (q / x).ln_1p() + q * y.ln() - q + (stirling_correction(y) - stirling_correction(x))
    } else {
        ln_gamma_unchecked(y) - ln_gamma_unchecked(x)
    }
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return domain(format!("ln_beta requires a, b > 0, got a={a}, b={b}"));
    }
    Ok(ln_beta_unchecked(a, b))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    // Pair the smaller argument with the ratio so large arguments cancel analytically.
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    ln_gamma_unchecked(small) - ln_gamma_ratio_unchecked(large, small)
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_beta(a, b)?.exp())
}

/// Largest integer increment handled by the exact product path.
const MAX_PRODUCT_TERMS: f64 = 64.0;

fn small_integer(q: f64) -> Option<i64> {
    (q.fract() == 0.0 && q.abs() <= MAX_PRODUCT_TERMS).then_some(q as i64)
}

/// Rising Pochhammer symbol with real increment, `Γ(x+q)/Γ(x)`.
///
/// The result is [`MomentValue::Infinite`] whenever `x + q <= 0`; this is the
/// divergent branch of the distance moments, not an error.
pub fn pochhammer_rising(x: f64, q: f64) -> Result<MomentValue> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("pochhammer_rising requires x > 0, got {x}"));
    }
    if !q.is_finite() {
        return domain(format!("pochhammer_rising requires a finite increment, got {q}"));
    }
    if x + q <= 0.0 {
        return Ok(MomentValue::Infinite);
    }
    if let Some(m) = small_integer(q) {
        let value = if m >= 0 {
            (0..m).map(|i| x + i as f64).product::<f64>()
        } else {
            1.0 / (1..=-m).map(|i| x - i as f64).product::<f64>()
        };
        if value.is_finite() {
            return Ok(MomentValue::Finite(value));
        }
    }
    let v = ln_gamma_ratio_unchecked(x, q).exp();
    if v.is_finite() {
        Ok(MomentValue::Finite(v))
    } else {
        Err(crate::Error::NotComputable(format!("pochhammer_rising({x}, {q}) overflows")))
    }
}

/// `ln(Γ(x+q)/Γ(x)) - ln(Γ(y+q)/Γ(y))`, the log of a ratio of two rising
/// Pochhammer symbols sharing an increment. Requires `x + q > 0`, `y + q > 0`.
pub(crate) fn ln_pochhammer_quotient(x: f64, y: f64, q: f64) -> f64 {
    if let Some(m) = small_integer(q) {
        let ratio: f64 = if m >= 0 {
            (0..m).map(|i| (x + i as f64) / (y + i as f64)).product()
        } else {
            (1..=-m).map(|i| (y - i as f64) / (x - i as f64)).product()
        };
        return ratio.ln();
    }
    ln_gamma_ratio_unchecked(x, q) - ln_gamma_ratio_unchecked(y, q)
}

/// Volume of the unit ball in `d` dimensions, via `c_d = c_{d-2} 2π/d`.
pub(crate) fn unit_ball_volume_unchecked(d: u32) -> f64 {
    let mut c = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        c *= 2.0 * PI / k as f64;
        k += 2;
    }
    c
}
