//! Validation suites: each check compares a Monte Carlo estimate or an
//! independent numerical evaluation against the analytic result.
//!
//! Statistical thresholds are widened by `sqrt(1000 / trials)` when fewer than
//! 1000 trials are requested, and a warning row records the widening.

use clap::ValueEnum;
use serde::Serialize;

use crate::conditional::{
    cond_moment, cond_moment_inner_closed_form, cond_moment_outer_appell, cond_pdf, BeaconCondition,
    InnerDenominator,
};
use crate::distance::{
    cdf_rn, conditioned_ppp_pdf, mean_rn, moment_rn, pdf_rn, variance_rn, ConditionedPppQuery,
    NthNeighborQuery,
};
use crate::error::Result;
use crate::geometry::NetworkSpec;
use crate::metrics::{
    connectivity_prob, gamma_ratio_partial_sum, mean_interference, outage_lower_bound, MetricConfig, PathLoss,
};
use crate::montecarlo::{
    chi_square_critical_1pct, ks_critical, ks_test, sample_bpp_distances, simulate_conditional_slice,
    simulate_conditioned_ppp, simulate_connectivity_sweep, simulate_interference, simulate_outage_sweep,
    two_sample_chi_square, variance_std_error, EmpiricalSummary, SimConfig,
};
use crate::specfun::{integrate, ln_gamma_ratio, MomentValue, QuadratureSpec};
use crate::table::{Cell, OutputTable};

const KS_LEVEL: f64 = 0.01;
const FULL_POWER_TRIALS: u64 = 1000;
const MEAN_Z: f64 = 4.0;
const VARIANCE_Z: f64 = 5.0;
/// Interference and slicing checks use this many trials per requested trial.
const HEAVY_FACTOR: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Distances,
    Interference,
    Connectivity,
    Outage,
    CondPpp,
    Conditional,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_table(&self) -> OutputTable {
        let mut t = OutputTable::new(["check", "statistic", "threshold", "status"]);
        for c in &self.checks {
            let threshold = c.threshold.map_or(Cell::from("-"), Cell::from);
            t.push(vec![c.name.as_str().into(), c.statistic.into(), threshold, c.status.as_str().into()])
                .expect("four cells per row");
        }
        t
    }
}

struct Runner {
    sim: SimConfig,
    widen: f64,
    report: ValidationReport,
}

impl Runner {
    fn push(&mut self, name: String, statistic: f64, threshold: Option<f64>, status: Status) {
        self.report.checks.push(Check { name, statistic, threshold, status });
    }

    /// Passes when `statistic <= threshold`; NaN fails.
    fn at_most(&mut self, name: String, statistic: f64, threshold: f64) {
        let status = if statistic <= threshold { Status::Pass } else { Status::Fail };
        self.push(name, statistic, Some(threshold), status);
    }

    fn info(&mut self, name: String, value: f64) {
        self.push(name, value, None, Status::Info);
    }

    /// Records an error from an analytic or simulation step as a failed row.
    fn guard<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(format!("{name}: {e}"), f64::NAN, None, Status::Fail);
                None
            }
        }
    }

    fn ks_threshold(&self, n: u64) -> f64 {
        ks_critical(n, KS_LEVEL) * self.widen
    }
}

/// Runs `suite` with the given simulation settings.
pub fn run_suite(suite: Suite, sim: &SimConfig) -> Result<ValidationReport> {
    sim.validate()?;
    let widen = if sim.trials < FULL_POWER_TRIALS {
        (FULL_POWER_TRIALS as f64 / sim.trials as f64).sqrt()
    } else {
        1.0
    };
    let mut run = Runner { sim: *sim, widen, report: ValidationReport::default() };
    if sim.trials < FULL_POWER_TRIALS {
        run.push(
            format!("underpowered: statistical thresholds widened by sqrt({FULL_POWER_TRIALS}/trials) = {widen:.6}"),
            sim.trials as f64,
            Some(FULL_POWER_TRIALS as f64),
            Status::Warn,
        );
    }
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Distances,
            Suite::Interference,
            Suite::Connectivity,
            Suite::Outage,
            Suite::CondPpp,
            Suite::Conditional,
        ],
        ref one => std::slice::from_ref(one),
    };
    for s in suites {
        match s {
            Suite::Distances => distances(&mut run),
            Suite::Interference => interference(&mut run),
            Suite::Connectivity => connectivity(&mut run),
            Suite::Outage => outage(&mut run),
            Suite::CondPpp => cond_ppp(&mut run),
            Suite::Conditional => conditional(&mut run),
            Suite::All => unreachable!(),
        }
    }
    Ok(run.report)
}

fn spec(d: u32, r: f64, n: u32) -> NetworkSpec {
    NetworkSpec::new(d, r, n).expect("suite parameters are valid")
}

fn query(s: NetworkSpec, n: u32) -> NthNeighborQuery {
    NthNeighborQuery::new(s, n).expect("suite parameters are valid")
}

/// Counts of `a` and `b` over bins holding equal shares of the pooled sample.
fn pooled_histograms(a: &[f64], b: &[f64], bins: usize) -> (Vec<u64>, Vec<u64>) {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let edges: Vec<f64> = (1..bins).map(|i| pooled[i * pooled.len() / bins]).collect();
    let count = |xs: &[f64]| {
        let mut h = vec![0u64; bins];
        for &x in xs {
            h[edges.partition_point(|&e| e <= x)] += 1;
        }
        h
    };
    (count(a), count(b))
}

fn distances(run: &mut Runner) {
    const BIG_N: u32 = 10;
    let trials = run.sim.trials;
    for d in 1..=3u32 {
        let s = spec(d, 1.0, BIG_N);
        let Some(m) = run.guard("distances", sample_bpp_distances(&s, &run.sim.fork(100 + d as u64))) else {
            continue;
        };
        for n in 1..=BIG_N {
            let q = query(s, n);
            let col = m.column(n as usize);
            let Some(sum) = run.guard("distances", EmpiricalSummary::from_samples(&col, run.sim.seed, 0.0))
            else {
                continue;
            };
            let z = (sum.mean - mean_rn(&q)).abs() / sum.std_error();
            run.at_most(format!("distances/mean d={d} N={BIG_N} n={n} (z)"), z, MEAN_Z * run.widen);
            let z = (sum.variance - variance_rn(&q)).abs() / variance_std_error(&col);
            run.at_most(format!("distances/variance d={d} N={BIG_N} n={n} (z)"), z, VARIANCE_Z * run.widen);
        }
        let ks_ranks: &[u32] = if d == 2 { &[1, 3, 10] } else { &[3] };
        for &n in ks_ranks {
            let q = query(s, n);
            let sorted = m.sorted_column(n as usize);
            if let Some(stat) = run.guard("distances/ks", ks_test(&sorted, |r| cdf_rn(&q, r))) {
                let thr = run.ks_threshold(trials);
                run.at_most(format!("distances/ks d={d} N={BIG_N} n={n}"), stat, thr);
            }
        }
        if d == 1 && trials >= 2 {
            // R_n and R - R_{N-n+1} share a law on the line; compare them on
            // disjoint halves of the trials.
            let half = (trials / 2) as usize;
            const BINS: usize = 20;
            for n in [1u32, 3, 5] {
                let direct: Vec<f64> = (0..half).map(|t| m.row(t)[n as usize - 1]).collect();
                let mirrored: Vec<f64> =
                    (half..2 * half).map(|t| 1.0 - m.row(t)[(BIG_N - n) as usize]).collect();
                let (a, b) = pooled_histograms(&direct, &mirrored, BINS);
                if let Some((stat, df)) = run.guard("distances/symmetry", two_sample_chi_square(&a, &b)) {
                    let thr = chi_square_critical_1pct(df) * run.widen;
                    run.at_most(
                        format!(
                            "distances/symmetry d=1 N={BIG_N} n={n} vs {} (chi2, df={df})",
                            BIG_N - n + 1
                        ),
                        stat,
                        thr,
                    );
                }
            }
        }
    }
    let s = spec(1, 1.0, 1);
    if let Some(m) = run.guard("distances", sample_bpp_distances(&s, &run.sim.fork(110))) {
        if let Some(stat) = run.guard("distances/ks", ks_test(&m.sorted_column(1), Ok)) {
            let thr = run.ks_threshold(trials);
            run.at_most("distances/ks d=1 N=1 uniform".into(), stat, thr);
        }
    }
}

fn interference(run: &mut Runner) {
    let heavy = run.sim.with_trials(run.sim.trials.saturating_mul(HEAVY_FACTOR));
    let base = MetricConfig { aloha: 0.5, alpha: 2.0, noise: 0.0, theta: 1.0, pathloss: PathLoss::Singular };

    let s3 = spec(3, 1.0, 10);
    let want = mean_interference(&s3, &base).map(MomentValue::value);
    if let (Some(want), Some(sum)) = (
        run.guard("interference", want),
        run.guard("interference", simulate_interference(&s3, &base, &heavy.fork(200))),
    ) {
        let rel = (sum.mean - want).abs() / want;
        run.at_most(
            "interference/singular d=3 alpha=2 N=10 p=0.5 (relative error)".into(),
            rel,
            0.02 * run.widen,
        );
        run.info("interference/singular d=3 alpha=2 empirical mean".into(), sum.mean);
        run.info("interference/singular d=3 alpha=2 standard error".into(), sum.std_error());
        run.info("interference/singular d=3 alpha=2 sample variance".into(), sum.variance);
        run.info(
            "interference/singular d=3 alpha=2 trimmed mean (0.5% each tail)".into(),
            sum.trimmed_mean.unwrap_or(f64::NAN),
        );
    }

    let s2 = spec(2, 1.0, 10);
    let cfg = MetricConfig { alpha: 4.0, ..base };
    if let Some(v) = run.guard("interference", mean_interference(&s2, &cfg)) {
        let status = if v.is_infinite() { Status::Pass } else { Status::Fail };
        run.push("interference/singular d=2 alpha=4 is infinite".into(), v.value(), None, status);
    }

    let sb = spec(2, 2.0, 20);
    let cfg = MetricConfig { aloha: 0.1, alpha: 4.0, pathloss: PathLoss::Bounded, ..base };
    if let (Some(want), Some(sum)) = (
        run.guard("interference", mean_interference(&sb, &cfg)),
        run.guard("interference", simulate_interference(&sb, &cfg, &heavy.fork(201))),
    ) {
        let z = (sum.mean - want.value()).abs() / sum.std_error();
        run.at_most("interference/bounded d=2 alpha=4 N=20 p=0.1 R=2 (z)".into(), z, MEAN_Z * run.widen);
    }

    let flat = MetricConfig { alpha: 0.0, ..base };
    if let Some(sum) = run.guard("interference", simulate_interference(&s2, &flat, &run.sim.fork(202))) {
        let z = (sum.mean - 5.0).abs() / sum.std_error().max(f64::MIN_POSITIVE);
        run.at_most("interference/alpha=0 mean equals pN (z)".into(), z, MEAN_Z * run.widen);
    }
    let silent = MetricConfig { aloha: 0.0, ..base };
    if let Some(sum) = run.guard("interference", simulate_interference(&s2, &silent, &run.sim.fork(203))) {
        run.at_most("interference/p=0 is identically zero".into(), sum.mean.abs().max(sum.variance), 0.0);
    }

    // Term-by-term moments against the closed form.
    let sum: f64 = (1..=10).map(|n| moment_rn(&query(s3, n), -2.0).value()).sum::<f64>() * 0.5;
    run.at_most(
        "interference/moment sum equals closed form (relative error)".into(),
        (sum - 15.0).abs() / 15.0,
        1e-9,
    );

    let mut worst: f64 = 0.0;
    for k in 1..=200u32 {
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            let direct: f64 = (1..=k).map(|n| ln_gamma_ratio(n as f64, -x).map_or(f64::NAN, f64::exp)).sum();
            let closed = gamma_ratio_partial_sum(k, x).unwrap_or(f64::NAN);
            worst = worst.max(((closed - direct) / direct).abs());
        }
    }
    run.at_most("interference/gamma-ratio partial sum, k<=200 (max relative error)".into(), worst, 1e-10);

    // One-sided values move by the slope times the offset; their average is
    // the two-sided limit.
    let at = |alpha: f64| {
        mean_interference(&sb, &MetricConfig { alpha, ..cfg }).map_or(f64::NAN, MomentValue::value)
    };
    let h = 1e-6;
    let (below, centre, above) = (at(2.0 - h), at(2.0), at(2.0 + h));
    run.info("interference/bounded law at alpha=d-1e-6 minus log branch".into(), below - centre);
    run.info("interference/bounded law at alpha=d+1e-6 minus log branch".into(), above - centre);
    run.at_most(
        "interference/bounded law two-sided limit at alpha=d vs log branch".into(),
        (0.5 * (below + above) - centre).abs(),
        1e-8,
    );
}

fn connectivity(run: &mut Runner) {
    let s = spec(2, 1.0, 25);
    let cfg = MetricConfig { aloha: 1.0, alpha: 4.0, noise: 0.01, theta: 1.0, pathloss: PathLoss::Singular };
    let ranks = [1u32, 5, 10, 25];
    let thetas = [200.0, 1000.0, 5000.0];
    if let Some(grid) =
        run.guard("connectivity", simulate_connectivity_sweep(&s, &cfg, &ranks, &thetas, &run.sim.fork(300)))
    {
        for (row, &n) in grid.iter().zip(&ranks) {
            for (sum, &theta) in row.iter().zip(&thetas) {
                let want = connectivity_prob(&s, &cfg.with_theta(theta), n).unwrap_or(f64::NAN);
                run.at_most(
                    format!("connectivity/d=2 N=25 n={n} theta={theta} (absolute error)"),
                    (sum.mean - want).abs(),
                    0.01 * run.widen,
                );
            }
        }
    }

    let mut off_one: f64 = 0.0;
    for theta in [1e-2, 1.0, 50.0, 100.0] {
        for n in 1..=25 {
            off_one = off_one
                .max((1.0 - connectivity_prob(&s, &cfg.with_theta(theta), n).unwrap_or(f64::NAN)).abs());
        }
    }
    run.at_most("connectivity/equals 1 below the noise threshold".into(), off_one, 0.0);

    let grid: Vec<f64> = (0..=60).map(|i| 10f64.powf(-2.0 + i as f64 / 10.0)).collect();
    let mut rise: f64 = 0.0;
    for n in 1..=25u32 {
        let mut prev = f64::INFINITY;
        for &theta in &grid {
            let p = connectivity_prob(&s, &cfg.with_theta(theta), n).unwrap_or(f64::NAN);
            rise = rise.max(p - prev);
            if n > 1 {
                let lower = connectivity_prob(&s, &cfg.with_theta(theta), n - 1).unwrap_or(f64::NAN);
                rise = rise.max(p - lower);
            }
            prev = p;
        }
    }
    run.at_most("connectivity/nonincreasing in n and theta (max increase)".into(), rise, 0.0);
}

fn outage(run: &mut Runner) {
    let base = MetricConfig { aloha: 0.35, alpha: 4.0, noise: 0.0, theta: 1.0, pathloss: PathLoss::Singular };
    let thetas: Vec<f64> = (0..7).map(|i| 10f64.powf(-2.0 + 0.5 * i as f64)).collect();
    for big_n in [5u32, 10] {
        let s = spec(2, 1.0, big_n);
        let Some(sweep) =
            run.guard("outage", simulate_outage_sweep(&s, &base, &thetas, &run.sim.fork(400 + big_n as u64)))
        else {
            continue;
        };
        for (sum, &theta) in sweep.iter().zip(&thetas) {
            let bound = outage_lower_bound(&s, &base.with_theta(theta)).unwrap_or(f64::NAN);
            let sigma = sum.std_error();
            run.at_most(
                format!("outage/N={big_n} theta={theta:.6e} bound minus empirical (vs 2 sigma)"),
                bound - sum.mean,
                2.0 * sigma * run.widen,
            );
            if big_n == 5 && theta == thetas[0] {
                run.at_most(
                    format!("outage/bound tight at N=5 theta={theta:.6e} (gap)"),
                    sum.mean - bound,
                    0.05 * run.widen,
                );
            }
        }
    }

    let mut fall: f64 = 0.0;
    for &theta in &thetas {
        for big_n in 1..=20u32 {
            for p in [0.1, 0.35, 0.7, 1.0] {
                let c = MetricConfig { aloha: p, theta, ..base };
                let v = outage_lower_bound(&spec(2, 1.0, big_n), &c).unwrap_or(f64::NAN);
                let more_n = outage_lower_bound(&spec(2, 1.0, big_n + 1), &c).unwrap_or(f64::NAN);
                let more_t =
                    outage_lower_bound(&spec(2, 1.0, big_n), &c.with_theta(theta * 1.5)).unwrap_or(f64::NAN);
                let more_p = outage_lower_bound(
                    &spec(2, 1.0, big_n),
                    &MetricConfig { aloha: (p + 0.1).min(1.0), ..c },
                )
                .unwrap_or(f64::NAN);
                fall = fall.max(v - more_n).max(v - more_t).max(v - more_p);
            }
        }
    }
    run.at_most("outage/bound nondecreasing in theta, N and p (max decrease)".into(), fall, 0.0);
}

fn cond_ppp(run: &mut Runner) {
    let cases = [(3.18, 10u32, 1u32), (3.18, 10, 5), (3.18, 10, 10), (3.18, 1, 1)];
    for (i, &(lambda, level, rank)) in cases.iter().enumerate() {
        let Some(q) = run.guard("cond-ppp", ConditionedPppQuery::new(lambda, 2, 1.0, level, rank)) else {
            continue;
        };
        let label = format!("lambda={lambda} d=2 R=1 N={level} n={rank}");
        if let Some(mass) = run.guard(
            "cond-ppp",
            integrate(
                |r| conditioned_ppp_pdf(&q, r).unwrap_or(f64::NAN),
                0.0,
                1.0,
                QuadratureSpec::default(),
            ),
        ) {
            run.at_most(format!("cond-ppp/normalization {label}"), (mass - 1.0).abs(), 1e-8);
        }
        if let Some((sum, _)) =
            run.guard("cond-ppp", simulate_conditioned_ppp(&q, &run.sim.fork(500 + i as u64)))
        {
            let thr = run.ks_threshold(sum.count);
            run.at_most(format!("cond-ppp/ks {label}"), sum.ks_statistic.unwrap_or(f64::NAN), thr);
        }
    }
}

fn conditional(run: &mut Runner) {
    let s = spec(2, 1.0, 10);
    let quad = QuadratureSpec::default();

    // Law of total expectation over the beacon distance.
    let k = 4;
    for n in [2u32, 7] {
        let beacon = query(s, k);
        let total = integrate(
            |t| {
                let c = match BeaconCondition::new(&s, k, t) {
                    Ok(c) => c,
                    Err(_) => return f64::NAN,
                };
                cond_moment(&s, &c, n, 1.0).map_or(f64::NAN, MomentValue::value)
                    * pdf_rn(&beacon, t).unwrap_or(f64::NAN)
            },
            0.0,
            1.0,
            quad,
        );
        if let Some(total) = run.guard("conditional/total expectation", total) {
            let want = mean_rn(&query(s, n));
            run.at_most(
                format!("conditional/total expectation d=2 N=10 k={k} n={n} (relative error)"),
                ((total - want) / want).abs(),
                1e-6,
            );
        }
    }

    // Inner branch against the unconditional law of k-1 points in B(o, s).
    let (k, dist) = (5u32, 0.6);
    let c = BeaconCondition::new(&s, k, dist).expect("valid beacon");
    let inner = spec(2, dist, k - 1);
    let mut worst: f64 = 0.0;
    for n in 1..k {
        for i in 0..=100 {
            let r = dist * i as f64 / 100.0;
            let a = cond_pdf(&s, &c, n, r).unwrap_or(f64::NAN);
            let b = pdf_rn(&query(inner, n), r).unwrap_or(f64::NAN);
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    run.at_most(
        "conditional/inner branch equals unconditional law of k-1 points in B(o,s)".into(),
        worst,
        1e-12,
    );

    // Outer branch: quadrature against the Appell F1 form.
    for &(k, n, dist, gamma) in
        &[(3u32, 6u32, 0.4, 1.0), (3, 4, 0.4, 1.0), (2, 10, 0.7, 2.0), (1, 2, 0.3, 1.0)]
    {
        let c = BeaconCondition::new(&s, k, dist).expect("valid beacon");
        let q = run.guard("conditional/outer", cond_moment(&s, &c, n, gamma));
        let f = run.guard("conditional/outer", cond_moment_outer_appell(&s, &c, n, gamma));
        if let (Some(q), Some(f)) = (q, f) {
            run.at_most(
                format!("conditional/outer quadrature vs Appell F1 k={k} n={n} s={dist} gamma={gamma} (relative error)"),
                ((q.value() - f) / f).abs(),
                1e-6,
            );
        }
    }

    // Inner-branch denominator: k versus k+1, resolved by slicing BPP draws
    // on R_k near s.
    let (k, n, dist, h) = (4u32, 2u32, 0.5, 0.01);
    let c = BeaconCondition::new(&s, k, dist).expect("valid beacon");
    let closed = |den, at: f64| {
        let b = BeaconCondition::new(&s, k, at).expect("valid beacon");
        cond_moment_inner_closed_form(&s, &b, n, 1.0, den).map_or(f64::NAN, MomentValue::value)
    };
    if let Some(qv) = run.guard("conditional/denominator", cond_moment(&s, &c, n, 1.0)) {
        run.info(format!("conditional/E[R_{n}|R_{k}={dist}] quadrature"), qv.value());
    }
    run.info(
        format!("conditional/E[R_{n}|R_{k}={dist}] closed form with (k+1) denominator"),
        closed(InnerDenominator::KPlusOne, dist),
    );
    run.info(
        format!("conditional/E[R_{n}|R_{k}={dist}] closed form with k denominator"),
        closed(InnerDenominator::K, dist),
    );

    let heavy = run.sim.with_trials(run.sim.trials.saturating_mul(HEAVY_FACTOR)).fork(600);
    match simulate_conditional_slice(&s, k, dist, h, n, &heavy) {
        Ok(slice) if slice.summary.count >= 2 => {
            let avg = |den| {
                slice.beacon_distances.iter().map(|&t| closed(den, t)).sum::<f64>()
                    / slice.beacon_distances.len() as f64
            };
            let se = slice.summary.std_error();
            let z_k = (slice.summary.mean - avg(InnerDenominator::K)).abs() / se;
            let z_k1 = (slice.summary.mean - avg(InnerDenominator::KPlusOne)).abs() / se;
            run.info(
                format!("conditional/slice |R_{k}-{dist}|<={h} accepted samples"),
                slice.summary.count as f64,
            );
            run.at_most("conditional/slice mean vs k denominator (z)".to_string(), z_k, MEAN_Z * run.widen);
            let status = if z_k1 > MEAN_Z * run.widen {
                Status::Pass
            } else if run.sim.trials < FULL_POWER_TRIALS {
                Status::Warn
            } else {
                Status::Fail
            };
            run.push(
                "conditional/slice mean rejects (k+1) denominator (z must exceed threshold)".into(),
                z_k1,
                Some(MEAN_Z * run.widen),
                status,
            );
        }
        Ok(_) | Err(_) => {
            run.push(
                "conditional/slice skipped: too few realizations in the slice".into(),
                0.0,
                None,
                Status::Warn,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_rows_pass_at_low_power() {
        let sim = SimConfig::new(1, 200, 1).unwrap();
        let report = run_suite(Suite::Conditional, &sim).unwrap();
        assert_eq!(report.checks[0].status, Status::Warn);
        for c in &report.checks {
            assert_ne!(c.status, Status::Fail, "{}", c.name);
        }
    }

    #[test]
    fn table_has_one_row_per_check() {
        let sim = SimConfig::new(1, 500, 1).unwrap();
        let report = run_suite(Suite::Connectivity, &sim).unwrap();
        let t = report.to_table();
        assert_eq!(t.rows.len(), report.checks.len());
        assert_eq!(t.columns, ["check", "statistic", "threshold", "status"]);
    }
}
