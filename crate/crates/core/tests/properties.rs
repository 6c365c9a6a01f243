use bppdist::conditional::{
    cond_cdf, cond_moment, cond_pdf, cond_pdf_given_nearest, cond_support, BeaconCondition,
};
use bppdist::distance::{
    ccdf_rn, cdf_rn, mean_rn, moment_rn, pdf_rn, quantile_rn, variance_rn, NthNeighborQuery,
};
use bppdist::geometry::{density, sample_uniform_in_ball, unit_ball_volume};
use bppdist::metrics::{
    connectivity_prob, mean_hop_energy, mean_interference, outage_lower_bound, MetricConfig, PathLoss,
};
use bppdist::montecarlo::{ks_critical, ks_test, sample_bpp_distances, SimConfig};
use bppdist::specfun::{appell_f1, beta_density, integrate, pochhammer_rising, reg_inc_beta, QuadratureSpec};
use bppdist::NetworkSpec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn query(d: u32, r: f64, big_n: u32, n: u32) -> NthNeighborQuery {
    NthNeighborQuery::new(NetworkSpec::new(d, r, big_n).unwrap(), n).unwrap()
}

// Gauss hypergeometric series, summed until terms are negligible.
fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..10_000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn binomial(top: f64, k: u32) -> f64 {
    (0..k).map(|i| (top - i as f64) / (i as f64 + 1.0)).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inc_beta_reflection(k in 1u32..(1 << 20), a in 0.05f64..200.0, b in 0.05f64..200.0) {
        // Dyadic x keeps 1 - x exact.
        let x = k as f64 / (1u32 << 20) as f64;
        let s = reg_inc_beta(x, a, b).unwrap() + reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((s - 1.0).abs() <= 1e-12, "sum {s}");
    }

    #[test]
    fn pochhammer_product_rule(x in 0.1f64..50.0, q in -0.09f64..8.0, r in -0.009f64..8.0) {
        let lhs = pochhammer_rising(x, q + r).unwrap().value();
        let rhs = pochhammer_rising(x, q).unwrap().value() * pochhammer_rising(x + q, r).unwrap().value();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn appell_reduces_with_vanishing_b2(a in 0.2f64..4.0, gap in 0.2f64..4.0, m in 0u32..6, x in -0.9f64..1.0) {
        let b1 = -(m as f64);
        let c = a + gap;
        let f1 = appell_f1(a, b1, 0.0, c, x, 0.3).unwrap();
        let want = hyp2f1(a, b1, c, x);
        prop_assert!((f1 - want).abs() <= 1e-8 * want.abs().max(1.0), "{f1} vs {want}");
    }

    #[test]
    fn appell_on_diagonal(a in 0.2f64..4.0, gap in 0.2f64..4.0, b1 in -2.0f64..2.0, b2 in -2.0f64..2.0, x in -0.8f64..0.8) {
        let c = a + gap;
        let f1 = appell_f1(a, b1, b2, c, x, x).unwrap();
        let want = hyp2f1(a, b1 + b2, c, x);
        prop_assert!((f1 - want).abs() <= 1e-8 * want.abs().max(1.0), "{f1} vs {want}");
    }

    #[test]
    fn density_times_volume_is_count(d in 1u32..12, r in 0.01f64..100.0, big_n in 1u32..10_000) {
        let spec = NetworkSpec::new(d, r, big_n).unwrap();
        let got = density(&spec) * unit_ball_volume(d).unwrap() * r.powi(d as i32);
        prop_assert!((got - big_n as f64).abs() <= 1e-12 * big_n as f64);
    }

    #[test]
    fn line_mirror_symmetry(r_max in 0.1f64..10.0, big_n in 1u32..60, n_seed in 0u32..1000, t in 0.001f64..0.999) {
        let n = 1 + n_seed % big_n;
        let r = t * r_max;
        let a = pdf_rn(&query(1, r_max, big_n, n), r).unwrap();
        let b = pdf_rn(&query(1, r_max, big_n, big_n - n + 1), r_max - r).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn integer_ratio_moments_are_binomial(d in 1u32..5, m in 1u32..5, big_n in 1u32..80, n_seed in 0u32..1000, r in 0.2f64..5.0) {
        let n = 1 + n_seed % big_n;
        let gamma = (m * d) as f64;
        let got = moment_rn(&query(d, r, big_n, n), gamma).value();
        let want = r.powf(gamma) * binomial((n + m - 1) as f64, m) / binomial((big_n + m) as f64, m);
        prop_assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn quantile_inverts_cdf(d in 1u32..6, big_n in 1u32..200, n_seed in 0u32..1000, u in 0.001f64..0.999) {
        let q = query(d, 1.5, big_n, 1 + n_seed % big_n);
        let r = quantile_rn(&q, u).unwrap();
        prop_assert!((cdf_rn(&q, r).unwrap() - u).abs() <= 1e-9);
        prop_assert!((cdf_rn(&q, r).unwrap() + ccdf_rn(&q, r).unwrap() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn outage_bound_is_monotone(theta in 0.01f64..10.0, big_n in 2u32..40, p in 0.05f64..0.95) {
        let bound = |n: u32, p: f64, th: f64| {
            let spec = NetworkSpec::new(2, 1.0, n).unwrap();
            outage_lower_bound(&spec, &MetricConfig::new(p, 4.0, 0.0, th, PathLoss::Singular).unwrap()).unwrap()
        };
        let base = bound(big_n, p, theta);
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(bound(big_n, p, theta * 1.5) >= base);
        prop_assert!(bound(big_n + 1, p, theta) >= base);
        prop_assert!(bound(big_n, (p + 0.04).min(1.0), theta) >= base);
    }

    #[test]
    fn interference_matches_moment_sum(d in 2u32..5, frac in 0.05f64..0.95, big_n in 1u32..150, p in 0.01f64..1.0, r in 0.5f64..3.0) {
        let alpha = frac * d as f64;
        let spec = NetworkSpec::new(d, r, big_n).unwrap();
        let cfg = MetricConfig::new(p, alpha, 0.0, 1.0, PathLoss::Singular).unwrap();
        let closed = mean_interference(&spec, &cfg).unwrap().value();
        let sum: f64 = (1..=big_n).map(|n| moment_rn(&query(d, r, big_n, n), -alpha).value()).sum::<f64>() * p;
        prop_assert!((closed - sum).abs() <= 1e-9 * closed, "{closed} vs {sum}");
    }
}

#[test]
fn beta_density_normalizes() {
    let grid = [0.5, 1.0, 1.5, 2.0, 5.0, 10.5];
    let quad = QuadratureSpec::default();
    for &a in &grid {
        for &b in &grid {
            // Each half is integrated from its own endpoint so poles sit at the origin.
            let left = integrate(|x| beta_density(x, a, b).unwrap().value(), 0.0, 0.5, quad).unwrap();
            let right = integrate(|t| beta_density(t, b, a).unwrap().value(), 0.0, 0.5, quad).unwrap();
            assert!((left + right - 1.0).abs() <= 1e-9, "a={a} b={b}: {}", left + right);
        }
    }
}

#[test]
fn ball_radii_follow_volume_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let count = 100_000;
    for d in [1u32, 2, 3, 5] {
        let radius = 2.5;
        let mut u: Vec<f64> = (0..count)
            .map(|_| {
                let p = sample_uniform_in_ball(d, radius, &mut rng);
                assert_eq!(p.dim(), d as usize);
                (p.norm() / radius).powi(d as i32)
            })
            .collect();
        u.sort_by(f64::total_cmp);
        let ks = ks_test(&u, |x| Ok(x.clamp(0.0, 1.0))).unwrap();
        assert!(ks <= ks_critical(count as u64, 0.01), "d={d}: {ks}");
    }
}

#[test]
fn mean_scales_as_power_of_rank() {
    for d in [1u32, 2, 3] {
        let scaled = |n: u32| mean_rn(&query(d, 1.0, 500, n)) / (n as f64).powf(1.0 / d as f64);
        let change = (scaled(200) / scaled(100) - 1.0).abs();
        assert!(change < 0.01, "d={d}: {change}");
    }
}

#[test]
fn high_dimension_concentrates_near_boundary() {
    for n in 1..=10 {
        let m = mean_rn(&query(200, 3.0, 10, n));
        assert!((m / 3.0 - 1.0).abs() < 0.02, "n={n}: {m}");
    }
}

#[test]
fn hop_energy_scales_as_power_of_rank() {
    let spec = NetworkSpec::new(2, 1.0, 500).unwrap();
    let scaled: Vec<f64> =
        (100..=200).map(|n| mean_hop_energy(&spec, n, 4.0).unwrap().value() / (n as f64).powi(2)).collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi / lo - 1.0 < 0.03, "spread {}", hi / lo - 1.0);
}

#[test]
fn connectivity_is_monotone() {
    let spec = NetworkSpec::new(2, 1.0, 25).unwrap();
    let mut prev_theta = [1.0; 25];
    for &theta in &[10.0, 200.0, 1000.0, 5000.0, 1e5] {
        let cfg = MetricConfig::new(1.0, 4.0, 1e-4, theta, PathLoss::Singular).unwrap();
        let mut prev_n = 1.0;
        for n in 1..=25 {
            let c = connectivity_prob(&spec, &cfg, n).unwrap();
            assert!(c <= prev_n + 1e-15 && c <= prev_theta[n as usize - 1] + 1e-15);
            prev_n = c;
            prev_theta[n as usize - 1] = c;
        }
    }
}

#[test]
fn outer_branch_near_origin_drops_one_node() {
    let (big_n, s) = (12u32, 1e-4);
    let spec = NetworkSpec::new(2, 1.0, big_n).unwrap();
    let cond = BeaconCondition::new(&spec, 1, s).unwrap();
    for n in [2u32, 5, 12] {
        let reduced = query(2, 1.0, big_n - 1, n - 1);
        for r in [0.1, 0.4, 0.7, 0.95] {
            let got = cond_pdf(&spec, &cond, n, r).unwrap();
            let want = pdf_rn(&reduced, r).unwrap();
            assert!((got - want).abs() <= 1e-4 * want.max(1.0), "n={n} r={r}: {got} vs {want}");
        }
    }
}

#[test]
fn conditional_vanishes_off_branch() {
    let spec = NetworkSpec::new(3, 2.0, 9).unwrap();
    let cond = BeaconCondition::new(&spec, 4, 1.2).unwrap();
    for n in [1u32, 3, 5, 9] {
        let (lo, hi) = cond_support(&spec, &cond, n).unwrap();
        for r in [0.0, 0.3, 0.9, 1.19, 1.21, 1.6, 1.99] {
            let p = cond_pdf(&spec, &cond, n, r).unwrap();
            if r < lo || r > hi {
                assert_eq!(p, 0.0, "n={n} r={r}");
            }
        }
        assert_eq!(cond_cdf(&spec, &cond, n, 0.0).unwrap(), 0.0);
        assert!((cond_cdf(&spec, &cond, n, 2.0).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn given_nearest_cases() {
    let spec = NetworkSpec::new(1, 1.0, 3).unwrap();
    let cond = BeaconCondition::new(&spec, 1, 0.2).unwrap();
    for r in [0.25, 0.5, 0.9] {
        let got = cond_pdf_given_nearest(&spec, 0.2, 2, r).unwrap();
        assert_eq!(got, cond_pdf(&spec, &cond, 2, r).unwrap());
        let q = (r - 0.2) / 0.8;
        assert!((got - 2.0 * (1.0 - q) / 0.8).abs() <= 1e-12, "r={r}: {got}");
    }
    let spec = NetworkSpec::new(2, 1.5, 8).unwrap();
    for n in 2..=8 {
        let mass = integrate(
            |r| cond_pdf_given_nearest(&spec, 0.6, n, r).unwrap(),
            0.6,
            1.5,
            QuadratureSpec::default(),
        )
        .unwrap();
        assert!((mass - 1.0).abs() <= 1e-9, "n={n}: {mass}");
    }
    assert!(cond_pdf_given_nearest(&spec, 0.6, 1, 0.7).is_err());
}

#[test]
fn conditional_moment_averages_to_marginal() {
    let spec = NetworkSpec::new(2, 1.0, 6).unwrap();
    let k = 3;
    let marginal_k = query(2, 1.0, 6, k);
    for n in [1u32, 5] {
        let avg = integrate(
            |s| {
                let cond = BeaconCondition::new(&spec, k, s).unwrap();
                cond_moment(&spec, &cond, n, 1.0).unwrap().value() * pdf_rn(&marginal_k, s).unwrap()
            },
            0.0,
            1.0,
            QuadratureSpec::default(),
        )
        .unwrap();
        let want = mean_rn(&query(2, 1.0, 6, n));
        assert!((avg - want).abs() <= 1e-6, "n={n}: {avg} vs {want}");
    }
}

#[test]
fn simulated_variances_match() {
    let sim = SimConfig::new(5, 100_000, 1).unwrap();
    for d in [1u32, 2, 3] {
        let spec = NetworkSpec::new(d, 1.0, 10).unwrap();
        let draws = sample_bpp_distances(&spec, &sim.fork(d as u64)).unwrap();
        for n in 1..=10u32 {
            let col = draws.column(n as usize);
            let m = col.iter().sum::<f64>() / col.len() as f64;
            let var = col.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (col.len() - 1) as f64;
            let want = variance_rn(&query(d, 1.0, 10, n));
            let se = bppdist::montecarlo::variance_std_error(&col);
            assert!((var - want).abs() <= 5.0 * se, "d={d} n={n}: {var} vs {want} (se {se})");
        }
    }
}
