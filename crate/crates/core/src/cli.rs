//! Command-line surface. Every command produces an [`OutputTable`].

use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conditional::{cond_cdf, cond_moment_report, cond_pdf, cond_support, BeaconCondition};
use crate::distance::{
    mean_internodal, mean_rn, moment_rn, variance_rn, ConditionedPppQuery, NthNeighborQuery,
};
use crate::error::{domain, Result};
use crate::geometry::NetworkSpec;
use crate::law::DistanceLaw;
use crate::metrics::{
    connectivity_prob, mean_hop_energy, mean_interference, outage_lower_bound, MetricConfig, PathLoss,
};
use crate::montecarlo::SimConfig;
use crate::table::{Cell, OutputTable};
use crate::validate::{run_suite, Suite};

/// Tail mass left out when gridding the unbounded PPP-limit support.
const OPEN_TAIL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "bppdist",
    version,
    about = "Distance laws and network metrics for binomial point processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate pdf, cdf and ccdf of the n-th neighbour distance.
    Dist(DistArgs),
    /// Distance moments, means and variances.
    Moments(MomentArgs),
    /// Laws given the distance of the k-th nearest node.
    Conditional(ConditionalArgs),
    /// Energy, interference, connectivity and outage.
    Metrics(MetricArgs),
    /// Run Monte Carlo validation suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct NetworkArgs {
    /// Dimension.
    #[arg(long = "d", default_value_t = 2)]
    pub d: u32,
    /// Ball radius.
    #[arg(long = "R", default_value_t = 1.0, allow_negative_numbers = true)]
    pub radius: f64,
    /// Number of nodes.
    #[arg(long = "N")]
    pub nodes: Option<u32>,
}

impl NetworkArgs {
    fn spec(&self) -> Result<NetworkSpec> {
        let Some(n) = self.nodes else {
            return domain("--N is required");
        };
        NetworkSpec::new(self.d, self.radius, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    Bpp,
    CondPpp,
    PppLimit,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub net: NetworkArgs,
    /// Rank of the neighbour.
    #[arg(long = "n", default_value_t = 1)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = LawKind::Bpp)]
    pub law: LawKind,
    /// Number of grid points over the support.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Intensity, for the PPP laws.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub net: NetworkArgs,
    /// Moment order.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long = "n", conflicts_with = "all_n")]
    pub n: Option<u32>,
    /// Tabulate every rank 1..=N.
    #[arg(long)]
    pub all_n: bool,
    /// Mean distance between the i-th and j-th nearest nodes, as `i,j`.
    #[arg(long, value_parser = parse_pair)]
    pub internodal: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Args)]
pub struct ConditionalArgs {
    #[command(flatten)]
    pub net: NetworkArgs,
    /// Rank of the beacon.
    #[arg(long)]
    pub k: u32,
    /// Distance of the beacon.
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// Rank of interest.
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Report the conditional moment instead of the density table.
    #[arg(long)]
    pub moment: bool,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    Energy,
    Interference,
    Connectivity,
    OutageBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathLossArg {
    Singular,
    Bounded,
}

impl From<PathLossArg> for PathLoss {
    fn from(p: PathLossArg) -> Self {
        match p {
            PathLossArg::Singular => PathLoss::Singular,
            PathLossArg::Bounded => PathLoss::Bounded,
        }
    }
}

/// Log-spaced grid `lo:hi:count`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid(pub Vec<f64>);

impl FromStr for ThetaGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err("expected lo:hi:count".into());
        };
        let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
        let count: usize = count.parse().map_err(|_| format!("bad count {count:?}"))?;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err("need 0 < lo <= hi".into());
        }
        if count < 1 || (count == 1 && hi != lo) {
            return Err("count must be at least 2 unless lo = hi".into());
        }
        let (a, b) = (lo.log10(), hi.log10());
        let step = if count > 1 { (b - a) / (count - 1) as f64 } else { 0.0 };
        let mut v: Vec<f64> = (0..count).map(|i| 10f64.powf(a + step * i as f64)).collect();
        v[0] = lo;
        v[count - 1] = hi;
        Ok(ThetaGrid(v))
    }
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[command(flatten)]
    pub net: NetworkArgs,
    #[arg(long, value_enum)]
    pub metric: MetricKind,
    #[arg(long = "n", conflicts_with = "all_n")]
    pub n: Option<u32>,
    #[arg(long)]
    pub all_n: bool,
    /// ALOHA transmit probability.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Path-loss exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Noise power.
    #[arg(long, default_value_t = 0.0)]
    pub n0: f64,
    /// SINR threshold.
    #[arg(long, default_value_t = 1.0, conflicts_with = "theta_grid")]
    pub theta: f64,
    /// Log-spaced thresholds, `lo:hi:count`.
    #[arg(long)]
    pub theta_grid: Option<ThetaGrid>,
    #[arg(long, value_enum, default_value_t = PathLossArg::Singular)]
    pub pathloss: PathLossArg,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Master seed (required: no clock-derived default).
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "BPPDIST_WORKERS")]
    pub workers: Option<usize>,
}

fn parse_pair(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let a = a.trim().parse().map_err(|_| format!("bad index {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad index {b:?}"))?;
    Ok((a, b))
}

/// A command's table and whether it counts as success.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: OutputTable,
    pub success: bool,
}

impl Outcome {
    fn ok(table: OutputTable) -> Self {
        Self { table, success: true }
    }
}

/// Runs a parsed command. `invocation` is recorded in the table metadata.
pub fn run(cli: &Cli, invocation: &str) -> Result<Outcome> {
    let mut out = match &cli.command {
        Command::Dist(a) => Outcome::ok(cmd_dist(a)?),
        Command::Moments(a) => Outcome::ok(cmd_moments(a)?),
        Command::Conditional(a) => Outcome::ok(cmd_conditional(a)?),
        Command::Metrics(a) => Outcome::ok(cmd_metrics(a)?),
        Command::Validate(a) => cmd_validate(a)?,
    };
    let meta = &mut out.table;
    meta.set_meta("invocation", invocation);
    meta.set_meta("version", env!("CARGO_PKG_VERSION"));
    if let Command::Validate(a) = &cli.command {
        meta.set_meta("seed", a.seed.to_string());
    }
    // Only a caller-supplied epoch is recorded, so repeated runs stay
    // byte-identical.
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        meta.set_meta("timestamp", epoch);
    }
    Ok(out)
}

pub fn render(table: &OutputTable, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return domain("--grid needs at least 2 points");
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    g[points - 1] = hi;
    Ok(g)
}

fn require_lambda(l: Option<f64>) -> Result<f64> {
    l.map_or_else(|| domain("--lambda is required for PPP laws"), Ok)
}

pub fn cmd_dist(a: &DistArgs) -> Result<OutputTable> {
    let law = match a.law {
        LawKind::Bpp => DistanceLaw::Bpp(NthNeighborQuery::new(a.net.spec()?, a.n)?),
        LawKind::CondPpp => {
            let spec = a.net.spec()?;
            let lambda = require_lambda(a.lambda)?;
            DistanceLaw::ConditionedPpp(ConditionedPppQuery::new(
                lambda,
                spec.dim(),
                spec.radius(),
                spec.nodes(),
                a.n,
            )?)
        }
        LawKind::PppLimit => DistanceLaw::ppp_limit(require_lambda(a.lambda)?, a.net.d, a.n)?,
    };
    let (lo, mut hi) = law.support()?;
    if hi.is_infinite() {
        hi = law.quantile(1.0 - OPEN_TAIL)?;
    }
    let mut t = OutputTable::new(["r", "pdf", "cdf", "ccdf"]);
    for r in grid(lo, hi, a.grid)? {
        t.push(vec![r.into(), law.pdf(r)?.into(), law.cdf(r)?.into(), law.ccdf(r)?.into()])?;
    }
    Ok(t)
}

fn ranks(spec: &NetworkSpec, n: Option<u32>, all: bool) -> Result<Vec<u32>> {
    match (n, all) {
        (_, true) => Ok((1..=spec.nodes()).collect()),
        (Some(n), false) => Ok(vec![n]),
        (None, false) => domain("give --n or --all-n"),
    }
}

pub fn cmd_moments(a: &MomentArgs) -> Result<OutputTable> {
    let spec = a.net.spec()?;
    if let Some((i, j)) = a.internodal {
        let mut t = OutputTable::new(["i", "j", "mean_internodal"]);
        t.push(vec![i.into(), j.into(), mean_internodal(&spec, i, j)?.into()])?;
        return Ok(t);
    }
    let mut t = OutputTable::new(["n", "moment", "mean", "variance"]);
    for n in ranks(&spec, a.n, a.all_n)? {
        let q = NthNeighborQuery::new(spec, n)?;
        t.push(vec![n.into(), moment_rn(&q, a.gamma).into(), mean_rn(&q).into(), variance_rn(&q).into()])?;
    }
    Ok(t)
}

pub fn cmd_conditional(a: &ConditionalArgs) -> Result<OutputTable> {
    let spec = a.net.spec()?;
    let cond = BeaconCondition::new(&spec, a.k, a.s)?;
    if a.n == a.k {
        return domain(format!("n = k = {} is degenerate: the conditional law is a point mass at s", a.n));
    }
    if a.moment {
        let rep = cond_moment_report(&spec, &cond, a.n, a.gamma)?;
        let branch = match rep.branch {
            crate::conditional::Branch::Inner => "inner",
            crate::conditional::Branch::Outer => "outer",
        };
        let mut t = OutputTable::new([
            "n",
            "k",
            "s",
            "gamma",
            "branch",
            "quadrature",
            "printed_closed_form",
            "corrected_closed_form",
        ]);
        t.push(vec![
            a.n.into(),
            a.k.into(),
            a.s.into(),
            a.gamma.into(),
            branch.into(),
            rep.quadrature.into(),
            rep.printed_closed_form.into(),
            rep.corrected_closed_form.into(),
        ])?;
        return Ok(t);
    }
    let (lo, hi) = cond_support(&spec, &cond, a.n)?;
    let mut t = OutputTable::new(["r", "pdf", "cdf"]);
    for r in grid(lo, hi, a.grid)? {
        t.push(vec![
            r.into(),
            cond_pdf(&spec, &cond, a.n, r)?.into(),
            cond_cdf(&spec, &cond, a.n, r)?.into(),
        ])?;
    }
    Ok(t)
}

pub fn cmd_metrics(a: &MetricArgs) -> Result<OutputTable> {
    let spec = a.net.spec()?;
    let Some(alpha) = a.alpha else {
        return domain("--alpha is required");
    };
    let cfg = MetricConfig::new(a.p, alpha, a.n0, a.theta, a.pathloss.into())?;
    let thetas = a.theta_grid.clone().map_or_else(|| vec![a.theta], |g| g.0);
    match a.metric {
        MetricKind::Energy => {
            let mut t = OutputTable::new(["n", "energy"]);
            for n in ranks(&spec, a.n, a.all_n)? {
                t.push(vec![n.into(), mean_hop_energy(&spec, n, alpha)?.into()])?;
            }
            Ok(t)
        }
        MetricKind::Interference => {
            let mut t = OutputTable::new(["mean_interference"]);
            t.push(vec![mean_interference(&spec, &cfg)?.into()])?;
            Ok(t)
        }
        MetricKind::Connectivity => {
            let ns = ranks(&spec, a.n, a.all_n)?;
            let mut t = OutputTable::new(["theta", "n", "connectivity"]);
            for &theta in &thetas {
                for &n in &ns {
                    let p = connectivity_prob(&spec, &cfg.with_theta(theta), n)?;
                    t.push(vec![theta.into(), n.into(), p.into()])?;
                }
            }
            Ok(t)
        }
        MetricKind::OutageBound => {
            let mut t = OutputTable::new(["theta", "outage_lower_bound", "success_upper_bound"]);
            for &theta in &thetas {
                let b = outage_lower_bound(&spec, &cfg.with_theta(theta))?;
                t.push(vec![theta.into(), b.into(), Cell::from(1.0 - b)])?;
            }
            Ok(t)
        }
    }
}

pub fn cmd_validate(a: &ValidateArgs) -> Result<Outcome> {
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, std::num::NonZeroUsize::get));
    let sim = SimConfig::new(a.seed, a.trials, workers)?;
    let report = run_suite(a.suite, &sim)?;
    Ok(Outcome { table: report.to_table(), success: report.passed() })
}
