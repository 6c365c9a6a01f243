use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::exec::run_blocks;
use super::{ks_test, trimmed_mean, EmpiricalSummary, SimConfig};
use crate::distance::{conditioned_ppp_cdf, ConditionedPppQuery};
use crate::error::{domain, Error, Result};
use crate::geometry::{sample_unit_radius, NetworkSpec};
use crate::metrics::MetricConfig;

const TRIM_FRACTION: f64 = 0.005;
const MIN_ACCEPTANCE: f64 = 1e-6;

/// Row-major `trials × N` matrix of sorted node distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.cols..(t + 1) * self.cols]
    }

    /// All realizations of `R_rank` (rank is 1-based), in trial order.
    pub fn column(&self, rank: usize) -> Vec<f64> {
        assert!(rank >= 1 && rank <= self.cols, "rank out of range");
        self.data.iter().skip(rank - 1).step_by(self.cols).copied().collect()
    }

    /// Column `rank`, sorted ascending.
    pub fn sorted_column(&self, rank: usize) -> Vec<f64> {
        let mut c = self.column(rank);
        c.sort_by(f64::total_cmp);
        c
    }
}

fn draw_sorted_radii<R: Rng + ?Sized>(spec: &NetworkSpec, rng: &mut R, out: &mut Vec<f64>) {
    let start = out.len();
    out.extend((0..spec.nodes()).map(|_| spec.radius() * sample_unit_radius(spec.dim(), rng)));
    out[start..].sort_by(f64::total_cmp);
}

/// Draws `trials` independent BPPs and records each sorted distance vector.
pub fn sample_bpp_distances(spec: &NetworkSpec, sim: &SimConfig) -> Result<DistanceMatrix> {
    sim.validate()?;
    let cols = spec.nodes() as u64;
    let cells = sim.trials.saturating_mul(cols);
    if cells > sim.cell_cap {
        return Err(Error::ResourceLimit(format!(
            "{} trials x {cols} nodes = {cells} cells exceeds the cap of {}",
            sim.trials, sim.cell_cap
        )));
    }
    let blocks = run_blocks(sim, sim.trials, |len, rng| {
        let mut buf = Vec::with_capacity((len * cols) as usize);
        for _ in 0..len {
            draw_sorted_radii(spec, rng, &mut buf);
        }
        Ok(buf)
    })?;
    Ok(DistanceMatrix { rows: sim.trials as usize, cols: cols as usize, data: blocks.concat() })
}

fn check_sim_config(cfg: &MetricConfig) -> Result<()> {
    if !(0.0..=1.0).contains(&cfg.aloha) {
        return domain(format!("ALOHA probability must lie in [0, 1], got {}", cfg.aloha));
    }
    // The simulator also accepts α = 0 (distance-free gains).
    if !(cfg.alpha >= 0.0) {
        return domain(format!("path-loss exponent must be non-negative, got {}", cfg.alpha));
    }
    Ok(())
}

/// Interference at the centre, one value per trial: every node transmits
/// with probability `p` and contributes `g(‖x‖)`.
pub fn simulate_interference_samples(
    spec: &NetworkSpec,
    cfg: &MetricConfig,
    sim: &SimConfig,
) -> Result<Vec<f64>> {
    sim.validate()?;
    check_sim_config(cfg)?;
    let blocks = run_blocks(sim, sim.trials, |len, rng| {
        let mut out = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let mut total = 0.0;
            for _ in 0..spec.nodes() {
                let transmits = rng.random::<f64>() < cfg.aloha;
                let r = spec.radius() * sample_unit_radius(spec.dim(), rng);
                if transmits {
                    total += cfg.pathloss.gain(r, cfg.alpha);
                }
            }
            out.push(total);
        }
        Ok(out)
    })?;
    Ok(blocks.concat())
}

/// Empirical interference law with a 0.5%-trimmed mean alongside the raw one.
pub fn simulate_interference(
    spec: &NetworkSpec,
    cfg: &MetricConfig,
    sim: &SimConfig,
) -> Result<EmpiricalSummary> {
    let start = Instant::now();
    let mut samples = simulate_interference_samples(spec, cfg, sim)?;
    let mut summary = EmpiricalSummary::from_samples(&samples, sim.seed, 0.0)?;
    samples.sort_by(f64::total_cmp);
    summary.trimmed_mean = trimmed_mean(&samples, TRIM_FRACTION);
    summary.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(summary)
}

fn frequency(hits: impl Iterator<Item = bool>, seed: u64, start: Instant) -> Result<EmpiricalSummary> {
    let ind: Vec<f64> = hits.map(|h| if h { 1.0 } else { 0.0 }).collect();
    EmpiricalSummary::from_samples(&ind, seed, start.elapsed().as_secs_f64())
}

/// Outage frequency `Pr[1/I < Θ]` for a unit-power link of unit length.
pub fn simulate_outage(spec: &NetworkSpec, cfg: &MetricConfig, sim: &SimConfig) -> Result<EmpiricalSummary> {
    Ok(simulate_outage_sweep(spec, cfg, &[cfg.theta], sim)?.remove(0))
}

/// Outage frequencies for several thresholds over one set of interference
/// realizations.
pub fn simulate_outage_sweep(
    spec: &NetworkSpec,
    cfg: &MetricConfig,
    thetas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<EmpiricalSummary>> {
    if thetas.iter().any(|t| !(*t > 0.0)) {
        return domain("thresholds must be positive");
    }
    let start = Instant::now();
    let samples = simulate_interference_samples(spec, cfg, sim)?;
    thetas.iter().map(|&theta| frequency(samples.iter().map(|&i| theta * i > 1.0), sim.seed, start)).collect()
}

/// Frequency with which the rank-`n` node clears the noise-only threshold
/// `g(R_n)/N0 > Θ`.
pub fn simulate_connectivity(
    spec: &NetworkSpec,
    cfg: &MetricConfig,
    n: u32,
    sim: &SimConfig,
) -> Result<EmpiricalSummary> {
    let mut grid = simulate_connectivity_sweep(spec, cfg, &[n], &[cfg.theta], sim)?;
    Ok(grid.remove(0).remove(0))
}

/// Connectivity frequencies indexed `[rank][theta]`, sharing one set of BPP
/// realizations.
pub fn simulate_connectivity_sweep(
    spec: &NetworkSpec,
    cfg: &MetricConfig,
    ranks: &[u32],
    thetas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<Vec<EmpiricalSummary>>> {
    check_sim_config(cfg)?;
    if ranks.iter().any(|&n| n < 1 || n > spec.nodes()) {
        return domain(format!("ranks must lie in 1..={}", spec.nodes()));
    }
    let start = Instant::now();
    let matrix = sample_bpp_distances(spec, sim)?;
    ranks
        .iter()
        .map(|&n| {
            let col = matrix.column(n as usize);
            thetas
                .iter()
                .map(|&theta| {
                    let level = cfg.noise * theta;
                    frequency(col.iter().map(|&r| cfg.pathloss.gain(r, cfg.alpha) > level), sim.seed, start)
                })
                .collect()
        })
        .collect()
}

/// Rejection-samples a PPP on the ball until it holds at least `N` points and
/// records the rank-`n` distance. `sim.trials` counts accepted samples. The
/// returned samples are sorted and the summary carries the KS statistic
/// against the analytic conditioned cdf.
pub fn simulate_conditioned_ppp(
    query: &ConditionedPppQuery,
    sim: &SimConfig,
) -> Result<(EmpiricalSummary, Vec<f64>)> {
    sim.validate()?;
    let acceptance = query.acceptance_probability();
    if acceptance < MIN_ACCEPTANCE {
        return Err(Error::RejectionBudget(format!(
            "acceptance probability {acceptance:e} is below {MIN_ACCEPTANCE:e}"
        )));
    }
    let start = Instant::now();
    let mu = query.mean_count(query.radius());
    let poisson = Poisson::new(mu).map_err(|e| Error::Domain(e.to_string()))?;
    let (dim, radius, level, rank) = (query.dim(), query.radius(), query.level(), query.rank());

    let blocks = run_blocks(sim, sim.trials, |len, rng| {
        let budget = (10.0 * len as f64 / acceptance).ceil() as u64 + 1000;
        let mut out = Vec::with_capacity(len as usize);
        let mut radii = Vec::new();
        let mut attempts = 0u64;
        while (out.len() as u64) < len {
            attempts += 1;
            if attempts > budget {
                return Err(Error::RejectionBudget(format!(
                    "{attempts} proposals yielded {} of {len} samples",
                    out.len()
                )));
            }
            let count = poisson.sample(rng) as u64;
            if count < level as u64 {
                continue;
            }
            radii.clear();
            radii.extend((0..count).map(|_| radius * sample_unit_radius(dim, rng)));
            let (_, nth, _) = radii.select_nth_unstable_by(rank as usize - 1, f64::total_cmp);
            out.push(*nth);
        }
        Ok(out)
    })?;

    let mut samples = blocks.concat();
    let mut summary = EmpiricalSummary::from_samples(&samples, sim.seed, 0.0)?;
    samples.sort_by(f64::total_cmp);
    summary.ks_statistic = Some(ks_test(&samples, |r| conditioned_ppp_cdf(query, r))?);
    summary.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok((summary, samples))
}

/// Rank-`n` distances from BPP realizations whose rank-`k` distance falls in
/// `[s - h, s + h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSummary {
    pub summary: EmpiricalSummary,
    /// Accepted `R_k` values, in trial order.
    pub beacon_distances: Vec<f64>,
    /// Matching `R_n` values, in trial order.
    pub samples: Vec<f64>,
    pub trials: u64,
}

pub fn simulate_conditional_slice(
    spec: &NetworkSpec,
    k: u32,
    s: f64,
    halfwidth: f64,
    n: u32,
    sim: &SimConfig,
) -> Result<SliceSummary> {
    sim.validate()?;
    let big_n = spec.nodes();
    if k < 1 || k > big_n || n < 1 || n > big_n {
        return domain(format!("ranks must lie in 1..={big_n}"));
    }
    if !(halfwidth > 0.0) || !(s > 0.0 && s < spec.radius()) {
        return domain("slice must have positive width and centre inside (0, R)");
    }
    let start = Instant::now();
    let (lo, hi) = (s - halfwidth, s + halfwidth);
    let blocks = run_blocks(sim, sim.trials, |len, rng| {
        let mut pairs = Vec::new();
        let mut buf = Vec::with_capacity(big_n as usize);
        for _ in 0..len {
            buf.clear();
            draw_sorted_radii(spec, rng, &mut buf);
            let rk = buf[k as usize - 1];
            if rk >= lo && rk <= hi {
                pairs.push((rk, buf[n as usize - 1]));
            }
        }
        Ok(pairs)
    })?;
    let pairs = blocks.concat();
    if pairs.is_empty() {
        return Err(Error::RejectionBudget(format!(
            "no realization fell in the slice [{lo}, {hi}] over {} trials",
            sim.trials
        )));
    }
    let (beacon_distances, samples): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let summary = EmpiricalSummary::from_samples(&samples, sim.seed, start.elapsed().as_secs_f64())?;
    Ok(SliceSummary { summary, beacon_distances, samples, trials: sim.trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{cdf_rn, mean_rn, NthNeighborQuery};
    use crate::metrics::PathLoss;
    use crate::montecarlo::ks_critical;
    use approx::assert_abs_diff_eq;

    fn sim(trials: u64) -> SimConfig {
        SimConfig::new(42, trials, 1).unwrap()
    }

    #[test]
    fn rows_are_sorted_and_bounded() {
        let spec = NetworkSpec::new(2, 1.5, 7).unwrap();
        let m = sample_bpp_distances(&spec, &sim(2000)).unwrap();
        assert_eq!((m.rows(), m.cols()), (2000, 7));
        for t in 0..m.rows() {
            let row = m.row(t);
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
            assert!(row.iter().all(|&r| (0.0..=1.5).contains(&r)));
        }
    }

    #[test]
    fn memory_cap_is_enforced() {
        let spec = NetworkSpec::new(2, 1.0, 100).unwrap();
        let s = sim(1000).with_cell_cap(99_999);
        assert!(matches!(sample_bpp_distances(&spec, &s), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn single_node_on_a_line_is_uniform() {
        let spec = NetworkSpec::new(1, 1.0, 1).unwrap();
        let trials = 20_000;
        let m = sample_bpp_distances(&spec, &sim(trials)).unwrap();
        let stat = ks_test(&m.sorted_column(1), Ok).unwrap();
        assert!(stat < ks_critical(trials, 0.01));
    }

    #[test]
    fn column_means_match_closed_form() {
        let spec = NetworkSpec::new(2, 1.0, 10).unwrap();
        let m = sample_bpp_distances(&spec, &sim(20_000)).unwrap();
        for n in 1..=10 {
            let col = m.column(n);
            let s = EmpiricalSummary::from_samples(&col, 0, 0.0).unwrap();
            let want = mean_rn(&NthNeighborQuery::new(spec, n as u32).unwrap());
            assert!((s.mean - want).abs() < 4.0 * s.std_error(), "rank {n}");
        }
    }

    #[test]
    fn interference_edge_cases() {
        let spec = NetworkSpec::new(2, 1.0, 8).unwrap();
        let silent =
            MetricConfig { aloha: 0.0, alpha: 4.0, noise: 0.0, theta: 1.0, pathloss: PathLoss::Singular };
        let s = simulate_interference(&spec, &silent, &sim(500)).unwrap();
        assert_eq!((s.mean, s.variance), (0.0, 0.0));
        let flat = MetricConfig { aloha: 0.25, alpha: 0.0, ..silent };
        let s = simulate_interference(&spec, &flat, &sim(20_000)).unwrap();
        assert!((s.mean - 2.0).abs() < 4.0 * s.std_error());
        assert!(s.trimmed_mean.is_some());
    }

    #[test]
    fn outage_limits() {
        let spec = NetworkSpec::new(2, 1.0, 5).unwrap();
        let cfg = MetricConfig::new(1.0, 4.0, 0.0, 1.0, PathLoss::Singular).unwrap();
        let out = simulate_outage_sweep(&spec, &cfg, &[1e-12, 1e12], &sim(2000)).unwrap();
        assert_eq!(out[0].mean, 0.0);
        assert_eq!(out[1].mean, 1.0);
    }

    #[test]
    fn connectivity_matches_cdf() {
        let spec = NetworkSpec::new(2, 1.0, 25).unwrap();
        let cfg = MetricConfig::new(1.0, 4.0, 0.01, 1000.0, PathLoss::Singular).unwrap();
        let s = simulate_connectivity(&spec, &cfg, 1, &sim(20_000)).unwrap();
        let reach = (0.01f64 * 1000.0).powf(-0.25);
        let want = cdf_rn(&NthNeighborQuery::new(spec, 1).unwrap(), reach).unwrap();
        assert!((s.mean - want).abs() < 0.015);
    }

    #[test]
    fn conditioned_ppp_fits() {
        let q = ConditionedPppQuery::new(3.18, 2, 1.0, 10, 5).unwrap();
        let trials = 20_000;
        let (s, samples) = simulate_conditioned_ppp(&q, &sim(trials)).unwrap();
        assert_eq!(samples.len() as u64, trials);
        assert!(s.ks_statistic.unwrap() < ks_critical(trials, 0.01));
    }

    #[test]
    fn conditioned_ppp_guard() {
        let q = ConditionedPppQuery::new(0.01, 2, 1.0, 10, 5).unwrap();
        assert!(matches!(simulate_conditioned_ppp(&q, &sim(10)), Err(Error::RejectionBudget(_))));
    }

    #[test]
    fn slice_keeps_window() {
        let spec = NetworkSpec::new(2, 1.0, 10).unwrap();
        let out = simulate_conditional_slice(&spec, 4, 0.6, 0.02, 2, &sim(20_000)).unwrap();
        assert!(out.beacon_distances.iter().all(|&r| (0.58..=0.62).contains(&r)));
        assert!(out.samples.iter().all(|&r| r <= 0.62));
        assert_abs_diff_eq!(out.summary.count as f64, out.samples.len() as f64);
    }
}
