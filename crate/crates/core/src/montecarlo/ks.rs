use crate::error::{domain, Result};

/// One-sample Kolmogorov-Smirnov statistic of sorted `samples` against `cdf`:
/// `max_i max(i/n - F(x_i), F(x_i) - (i-1)/n)`.
pub fn ks_test<F>(samples: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if samples.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    let n = samples.len() as f64;
    let mut stat: f64 = 0.0;
    let mut previous = f64::NEG_INFINITY;
    for (i, &x) in samples.iter().enumerate() {
        if x < previous {
            return domain("KS samples must be sorted ascending");
        }
        previous = x;
        let f = cdf(x)?;
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        stat = stat.max(above).max(below);
    }
    Ok(stat.clamp(0.0, 1.0))
}

/// Asymptotic KS critical value `sqrt(-ln(level/2)/2)/sqrt(n)`.
pub fn ks_critical(n: u64, level: f64) -> f64 {
    (-(0.5 * level).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Upper 1% point of chi-square with `df` degrees of freedom
/// (Wilson-Hilferty).
pub fn chi_square_critical_1pct(df: usize) -> f64 {
    const Z_99: f64 = 2.326_347_874_040_841;
    let k = df as f64;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + Z_99 * h.sqrt()).powi(3)
}

/// Two-sample chi-square homogeneity statistic over shared bins.
/// Returns `(statistic, degrees of freedom)`; bins empty in both samples are
/// dropped.
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> Result<(f64, usize)> {
    if a.len() != b.len() {
        return domain("histograms must share bins");
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return domain("histograms must be non-empty");
    }
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut stat = 0.0;
    let mut bins = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (x as f64, y as f64);
        if x + y > 0.0 {
            stat += (ka * x - kb * y).powi(2) / (x + y);
            bins += 1;
        }
    }
    if bins < 2 {
        return domain("need at least two occupied bins");
    }
    Ok((stat, bins - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn plug_in_quantiles() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let stat = ks_test(&xs, Ok).unwrap();
        assert!(stat <= 1.0 / n as f64);
    }

    #[test]
    fn degenerate_sample() {
        let xs = vec![0.0; 50];
        assert_abs_diff_eq!(ks_test(&xs, Ok).unwrap(), 1.0, epsilon = 1e-15);
        assert!(ks_test(&[], Ok).is_err());
        assert!(ks_test(&[0.5, 0.1], Ok).is_err());
    }

    #[test]
    fn critical_values() {
        assert_abs_diff_eq!(ks_critical(1, 0.01), 1.627_624, epsilon = 1e-6);
        assert_abs_diff_eq!(ks_critical(100, 0.05), 0.135_810, epsilon = 1e-6);
        // Tabulated upper 1% points.
        assert_abs_diff_eq!(chi_square_critical_1pct(10), 23.209, epsilon = 0.05);
        assert_abs_diff_eq!(chi_square_critical_1pct(19), 36.191, epsilon = 0.05);
    }

    #[test]
    fn chi_square_homogeneity() {
        let (s, df) = two_sample_chi_square(&[10, 20, 30], &[10, 20, 30]).unwrap();
        assert_eq!(df, 2);
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
        let (s, _) = two_sample_chi_square(&[100, 0], &[0, 100]).unwrap();
        assert_abs_diff_eq!(s, 200.0, epsilon = 1e-9);
    }
}
