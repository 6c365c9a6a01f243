//! Appell hypergeometric function F1 via its Euler integral.

use super::gamma::ln_beta_unchecked;
use super::quadrature::{integrate, QuadratureSpec};
use crate::error::{domain, Result};

/// Appell `F1(a; b1, b2; c; x, y)` for `c > a > 0`, `x <= 1`, `y <= 1`.
///
/// Evaluated as
/// `Γ(c)/(Γ(a)Γ(c-a)) ∫₀¹ t^(a-1) (1-t)^(c-a-1) (1-xt)^(-b1) (1-yt)^(-b2) dt`.
/// The integral continues F1 analytically in `y` to large negative values.
/// An argument equal to one folds its factor into the `(1-t)` power, which
/// must stay integrable.
pub fn appell_f1(a: f64, b1: f64, b2: f64, c: f64, x: f64, y: f64) -> Result<f64> {
    appell_f1_with(a, b1, b2, c, x, y, QuadratureSpec::default())
}

pub fn appell_f1_with(a: f64, b1: f64, b2: f64, c: f64, x: f64, y: f64, spec: QuadratureSpec) -> Result<f64> {
    if !(a > 0.0) || !(c > a) {
        return domain(format!("appell_f1 requires c > a > 0, got a={a}, c={c}"));
    }
    if !(x <= 1.0) || !(y <= 1.0) {
        return domain(format!("appell_f1 requires x <= 1 and y <= 1, got x={x}, y={y}"));
    }
    let b1_terminates = b1 <= 0.0 && b1.fract() == 0.0;
    if !(b1_terminates || x.abs() < 1.0) {
        return domain(format!("appell_f1 at x={x} requires b1 to be a non-positive integer, got {b1}"));
    }

    // Exponent of (1 - t) after folding in unit arguments.
    let mut tail = c - a - 1.0;
    let (mut bx, mut by) = (b1, b2);
    if x == 1.0 {
        tail -= b1;
        bx = 0.0;
    }
    if y == 1.0 {
        tail -= b2;
        by = 0.0;
    }
    if tail <= -1.0 {
        return domain(format!("appell_f1 integrand is not integrable at t = 1 (exponent {tail})"));
    }
    if x == 0.0 && y == 0.0 {
        return Ok(1.0);
    }

    let head = a - 1.0;
    // ln of the integrand at t = 1 - u, given ln t and ln(1 - t).
    let ln_integrand = |ln_t: f64, ln_u: f64, t: f64| {
        let mut ln = head * ln_t + tail * ln_u;
        if bx != 0.0 {
            ln -= bx * (-x * t).ln_1p();
        }
        if by != 0.0 {
            ln -= by * (-y * t).ln_1p();
        }
        ln.exp()
    };
    // Each half is integrated from its own endpoint so that a singular
    // factor sits at the origin, where the abscissae resolve it.
    let left = integrate(|t| ln_integrand(t.ln(), (-t).ln_1p(), t), 0.0, 0.5, spec)?;
    let right = integrate(|u| ln_integrand((-u).ln_1p(), u.ln(), 1.0 - u), 0.0, 0.5, spec)?;
    let integral = left + right;
    Ok(integral * (-ln_beta_unchecked(a, c - a)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin_is_one() {
        assert_eq!(appell_f1(1.5, 2.0, 0.3, 4.0, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn vanishing_parameters() {
        // b1 = 0 and y = 0: every series term past (0,0) vanishes.
        let v = appell_f1(1.0, 0.0, 0.7, 2.0, 0.6, 0.0).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn elementary_case() {
        // F1(2; -1, 1/2; 3; 1, -3) = 2 ∫ t (1-t) (1+3t)^(-1/2) dt = 88/405.
        let v = appell_f1(2.0, -1.0, 0.5, 3.0, 1.0, -3.0).unwrap();
        assert_relative_eq!(v, 88.0 / 405.0, max_relative = 1e-10);
    }

    #[test]
    fn domain_errors() {
        assert!(appell_f1(2.0, 1.0, 0.0, 2.0, 0.5, 0.0).is_err());
        assert!(appell_f1(0.0, 1.0, 0.0, 2.0, 0.5, 0.0).is_err());
        assert!(appell_f1(1.0, 1.0, 0.0, 2.0, 1.5, 0.0).is_err());
        // x = 1 with b1 > 0: (1-t)^(c-a-1-b1) = (1-t)^(-1) is not integrable.
        assert!(appell_f1(1.0, 1.0, 0.0, 2.0, 1.0, 0.0).is_err());
        // x = 1 with b1 = 1/2 is non-terminating: rejected by the precondition.
        assert!(appell_f1(1.0, 0.5, 0.0, 3.0, 1.0, 0.0).is_err());
    }
}
