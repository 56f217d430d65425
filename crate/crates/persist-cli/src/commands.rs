//! Subcommand definitions and handlers.
//!
//! Every handler prints one summary line per experiment to stdout, reports
//! progress on stderr only, and writes its artifacts under `--out`. Exit
//! codes: 0 on success, 1 on usage/config errors, 2 when at least one
//! bound report says `fail`.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive};
use serde::Deserialize;

use persist_core::analysis::{self, BoundReport, C1Choice, Verdict, Window};
use persist_core::dist::{DistributionSpec, Family};
use persist_core::exact;
use persist_core::gauss::{self, SinaiParams};
use persist_core::mc::{self, Barrier, MomentParams, SurvivalEstimate, SurvivalParams, Target};

use crate::config::{parse_dist, parse_grid, parse_rational, parse_window};
use crate::formats;
use crate::svg::{loglog_plot, RefSlope, Series};
use crate::{budget_from_env, BUDGET_ENV};

/// Laboratory for persistence probabilities of partial sums `S_n` and
/// iterated partial sums `S2_n` of i.i.d. zero-mean increments.
#[derive(Parser, Debug)]
#[command(name = "persist", max_term_width = 100)]
#[command(after_help = concat!(
    "Distribution presets: rademacher, gaussian, laplace, uniform, pareto15, pareto43, \
     lattice21. --dist also accepts inline JSON or a JSON file; see the README for the \
     schema.\n\nGuards: brute force enumerates at most 1e8 paths; the exact 2-D table is \
     limited to 4e6 state cells (Rademacher n_max ~ 155, lattice21 n_max ~ 110); Monte \
     Carlo runs require trials x horizon <= 2e10 unless ", "PERSIST_BUDGET_STEPS", " \
     raises the budget."))]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact rational persistence tables for lattice laws.
    Exact(ExactArgs),
    /// Monte Carlo survival curves or E|S_n| moments.
    Mc(McArgs),
    /// Convolution and square-root envelope bound checks.
    Bounds(BoundsArgs),
    /// Fit the decay exponent of a survival curve.
    Exponent(ExponentArgs),
    /// The convolution identity sum p1_k p1bar_{n-k} = 1 and its
    /// generating-function form.
    Identity(IdentityArgs),
    /// Exact law of the first argmax of the walk.
    Argmax(ArgmaxArgs),
    /// Gaussian comparison: covariance scan and integrated-BM curve.
    #[command(subcommand)]
    Gauss(GaussCommand),
    /// Run an experiment described by a JSON config file.
    Run(RunArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    S1,
    S2,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Target {
        match t {
            TargetArg::S1 => Target::S1,
            TargetArg::S2 => Target::S2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BarrierArg {
    Strict,
    Weak,
}

impl From<BarrierArg> for Barrier {
    fn from(b: BarrierArg) -> Barrier {
        match b {
            BarrierArg::Strict => Barrier::Strict,
            BarrierArg::Weak => Barrier::Weak,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantityArg {
    Survival,
    Moment,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceArg {
    Exact,
    Mc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum C1Arg {
    #[value(name = "auto")]
    #[serde(rename = "auto")]
    Auto,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "6sqrt30")]
    #[serde(rename = "6sqrt30")]
    SixSqrt30,
}

impl From<C1Arg> for C1Choice {
    fn from(c: C1Arg) -> C1Choice {
        match c {
            C1Arg::Auto => C1Choice::Auto,
            C1Arg::Two => C1Choice::Two,
            C1Arg::SixSqrt30 => C1Choice::SixSqrt30,
        }
    }
}

fn default_out() -> PathBuf {
    PathBuf::from(".")
}

fn default_seed() -> u64 {
    1
}

fn default_trials() -> u64 {
    100_000
}

/// How many bound rows came out `fail`; drives exit code 2.
#[derive(Debug, Default)]
pub struct Outcome {
    pub bound_failures: u64,
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Exact(a) => run_exact(&a),
        Command::Mc(a) => run_mc(&a),
        Command::Bounds(a) => run_bounds(&a),
        Command::Exponent(a) => run_exponent(&a),
        Command::Identity(a) => run_identity(&a),
        Command::Argmax(a) => run_argmax(&a),
        Command::Gauss(GaussCommand::Scan(a)) => run_scan(&a),
        Command::Gauss(GaussCommand::Sinai(a)) => run_sinai(&a),
        Command::Run(a) => run_config(&a),
    }
}

fn lattice_of(spec: &DistributionSpec, mode: &str) -> Result<persist_core::dist::LatticePmf> {
    spec.as_lattice().ok_or_else(|| {
        anyhow!("{mode} mode requires a lattice family (e.g. rademacher, lattice21); continuous laws are served by Monte Carlo")
    })
}

fn count_failures(reports: &[BoundReport]) -> u64 {
    reports.iter().filter(|r| r.verdict == Verdict::Fail).count() as u64
}

/// Built-in decay target for the fitted exponent, where one exists.
fn default_gamma(spec: &DistributionSpec, target: Target) -> Option<f64> {
    match (target, spec.family()) {
        (Target::S2, Family::CenteredPareto { alpha }) => Some((1.0 - 1.0 / alpha) / 2.0),
        (Target::S2, _) => Some(0.25),
        (Target::S1, Family::CenteredPareto { .. }) => None,
        (Target::S1, _) => Some(0.5),
    }
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct ExactArgs {
    /// Distribution: preset name, inline JSON, or JSON file.
    #[arg(long)]
    pub dist: String,
    /// Largest n in the table.
    #[arg(long)]
    pub nmax: usize,
    /// Use full enumeration instead of dynamic programming.
    #[arg(long)]
    #[serde(default)]
    pub brute_force: bool,
    /// Also evaluate the convolution identity residuals.
    #[arg(long)]
    #[serde(default)]
    pub check_identity: bool,
    /// Output directory for artifacts.
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn run_exact(a: &ExactArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let pmf = lattice_of(&spec, "exact")?;
    eprintln!(
        "computing exact table to n = {} ({})",
        a.nmax,
        if a.brute_force { "brute force" } else { "dp" }
    );
    let table = if a.brute_force {
        exact::brute_force_table(&pmf, a.nmax)?
    } else {
        exact::dp_table(&pmf, a.nmax)?
    };
    table
        .validate()
        .map_err(|e| anyhow!("computed table violates invariants: {e}"))?;
    let csv = formats::write_artifact(&a.out, "table.csv", &formats::table_csv(&table))?;
    formats::write_artifact(&a.out, "table.json", &formats::table_json(&table)?)?;
    let mut identity_note = String::new();
    if a.check_identity {
        let rows: Vec<_> = (0..=a.nmax)
            .map(|n| Ok((n, exact::identity_residual(&table, n)?)))
            .collect::<Result<Vec<_>>>()?;
        formats::write_artifact(&a.out, "identity.csv", &formats::identity_csv(&rows))?;
        let max_abs = rows
            .iter()
            .map(|(_, r)| r.abs())
            .max()
            .unwrap_or_default();
        identity_note = if max_abs == num_rational::BigRational::default() {
            "; identity residuals all 0/1".to_string()
        } else {
            format!("; max |identity residual| = {}", formats::rational_str(&max_abs))
        };
    }
    println!(
        "exact: n_max={} p2[{}]={} -> {}{}",
        a.nmax,
        a.nmax,
        formats::rational_str(&table.p2[a.nmax]),
        csv.display(),
        identity_note
    );
    Ok(Outcome::default())
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct McArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long, value_enum, default_value = "s2")]
    #[serde(default = "d_target")]
    pub target: TargetArg,
    #[arg(long, value_enum, default_value = "strict")]
    #[serde(default = "d_barrier")]
    pub barrier: BarrierArg,
    /// Barrier level y >= 0.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub y: f64,
    /// survival curve or E|S_n| moments.
    #[arg(long, value_enum, default_value = "survival")]
    #[serde(default = "d_quantity")]
    pub quantity: QuantityArg,
    /// Grid: `2^a..2^b` dyadic, `a..b` dense, or comma list.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = default_trials())]
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = default_seed())]
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn d_target() -> TargetArg {
    TargetArg::S2
}

fn d_barrier() -> BarrierArg {
    BarrierArg::Strict
}

fn d_quantity() -> QuantityArg {
    QuantityArg::Survival
}

fn run_mc(a: &McArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let grid = parse_grid(&a.grid)?;
    let budget = budget_from_env();
    match a.quantity {
        QuantityArg::Survival => {
            let params = SurvivalParams {
                target: a.target.into(),
                barrier: a.barrier.into(),
                threshold: a.y,
                grid,
                trials: a.trials,
                master_seed: a.seed,
            };
            eprintln!(
                "running {} survival trials to horizon {} (override budget via {})",
                a.trials,
                params.grid.last().unwrap(),
                BUDGET_ENV
            );
            let est = crate::parallel::estimate_survival(&spec, &params, &budget)?;
            let csv = formats::write_artifact(&a.out, "survival.csv", &formats::survival_csv(&est, "n"))?;
            formats::write_artifact(&a.out, "survival.json", &formats::survival_json(&est)?)?;
            let gamma = default_gamma(&spec, a.target.into());
            formats::write_artifact(&a.out, "survival.svg", &survival_svg(&est, gamma))?;
            let last = est.grid.len() - 1;
            println!(
                "mc survival: {} trials, p_hat[{}] = {} in [{}, {}] -> {}",
                est.trials, est.grid[last], est.p_hat[last], est.ci_low[last], est.ci_high[last],
                csv.display()
            );
        }
        QuantityArg::Moment => {
            let params = MomentParams {
                grid,
                trials: a.trials,
                master_seed: a.seed,
            };
            eprintln!("running {} moment trials", a.trials);
            let est = crate::parallel::estimate_abs_moment(&spec, &params, &budget)?;
            let csv = formats::write_artifact(&a.out, "moments.csv", &formats::moments_csv(&est))?;
            formats::write_artifact(&a.out, "moments.json", &formats::moments_json(&est)?)?;
            let last = est.grid.len() - 1;
            println!(
                "mc moments: {} trials, E|S_{}| ~ {} (se {}) -> {}",
                est.trials, est.grid[last], est.mean_abs[last], est.stderr[last],
                csv.display()
            );
        }
    }
    Ok(Outcome::default())
}

fn survival_svg(est: &SurvivalEstimate, gamma: Option<f64>) -> String {
    let series = vec![Series {
        label: format!(
            "{} {} y={}",
            formats::target_str(est.target),
            formats::barrier_str(est.barrier),
            est.threshold
        ),
        points: est
            .grid
            .iter()
            .zip(&est.p_hat)
            .map(|(&n, &p)| (n as f64, p))
            .collect(),
    }];
    let mut refs = vec![
        RefSlope {
            gamma: 0.25,
            label: "slope -1/4".into(),
        },
        RefSlope {
            gamma: 0.5,
            label: "slope -1/2".into(),
        },
    ];
    if let Some(g) = gamma {
        if (g - 0.25).abs() > 1e-9 && (g - 0.5).abs() > 1e-9 {
            refs.push(RefSlope {
                gamma: g,
                label: format!("slope -{g:.4}"),
            });
        }
    }
    loglog_plot("survival curve", "n", "p_hat", &series, &refs)
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub dist: String,
    /// exact tables (lattice only) or Monte Carlo curves.
    #[arg(long, value_enum, default_value = "exact")]
    #[serde(default = "d_source")]
    pub source: SourceArg,
    /// Largest n checked (exact source), or checked dyadically (mc).
    #[arg(long, default_value_t = 100)]
    #[serde(default = "d_nmax")]
    pub nmax: usize,
    /// Upper-bound constant: auto picks 2 for symmetric laws.
    #[arg(long, value_enum, default_value = "auto")]
    #[serde(default = "d_c1")]
    pub c1: C1Arg,
    #[arg(long, default_value_t = default_trials())]
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = default_seed())]
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn d_source() -> SourceArg {
    SourceArg::Exact
}

fn d_nmax() -> usize {
    100
}

fn d_c1() -> C1Arg {
    C1Arg::Auto
}

fn dyadic_up_to(lo: u64, hi: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut n = lo;
    while n <= hi {
        v.push(n);
        n *= 2;
    }
    v
}

fn run_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let c1: C1Choice = a.c1.into();
    let mut reports = Vec::new();
    let mut c2s = Vec::new();
    match a.source {
        SourceArg::Exact => {
            let pmf = lattice_of(&spec, "bounds --source exact")?;
            eprintln!("computing exact curves to n = {}", a.nmax);
            let curves = analysis::exact_curves(&pmf, a.nmax)?;
            for n in 0..=a.nmax {
                reports.push(analysis::check_upper_conv(&curves, n, c1)?);
                let two = analysis::check_two_sided(&curves, n, c1)?;
                reports.push(two.upper);
                reports.push(two.lower);
            }
            for n in dyadic_up_to(4, a.nmax as u64) {
                let (rep, c2) = analysis::check_lower_conv(&curves, n as usize)?;
                c2s.push(c2);
                reports.push(rep);
            }
        }
        SourceArg::Mc => {
            let budget = budget_from_env();
            let grid: Vec<u64> = (1..=a.nmax as u64).collect();
            eprintln!(
                "estimating strict/weak curves to n = {} with {} trials",
                a.nmax, a.trials
            );
            let mut params = SurvivalParams {
                target: Target::S2,
                barrier: Barrier::Strict,
                threshold: 0.0,
                grid,
                trials: a.trials,
                master_seed: a.seed,
            };
            let strict = crate::parallel::estimate_survival(&spec, &params, &budget)?;
            params.barrier = Barrier::Weak;
            let weak = crate::parallel::estimate_survival(&spec, &params, &budget)?;
            let ns = dyadic_up_to(4, a.nmax as u64);
            let ratios = moment_ratios(&spec, &ns, a.trials, a.seed, &budget)?;
            let c1_value = c1.resolve(spec.symmetric()).value;
            for (&n, &(lo, point, hi)) in ns.iter().zip(&ratios) {
                if let Some(r) =
                    analysis::check_upper_conv_mc(&strict, &weak, n, (lo, hi), c1_value)
                {
                    reports.push(r);
                }
                if let Some(r) = analysis::check_two_sided_upper_mc(&strict, n, point, c1_value) {
                    reports.push(r);
                }
                if let Some((r, c2)) = analysis::implied_c2_mc(&strict, n, point) {
                    c2s.push(c2);
                    reports.push(r);
                }
            }
        }
    }
    let csv = formats::write_artifact(&a.out, "bounds.csv", &formats::bounds_csv(&reports))?;
    formats::write_artifact(&a.out, "bounds.json", &formats::bounds_json(&reports)?)?;
    formats::write_artifact(&a.out, "bounds.svg", &bounds_svg(&reports))?;
    let failures = count_failures(&reports);
    let c2_spread = analysis::variation_ratio(&c2s);
    println!(
        "bounds: {} checks, {} fail, {} indeterminate; implied c2 spread {:.3}x -> {}",
        reports.len(),
        failures,
        reports
            .iter()
            .filter(|r| r.verdict == Verdict::Indeterminate)
            .count(),
        c2_spread,
        csv.display()
    );
    Ok(Outcome {
        bound_failures: failures,
    })
}

/// `E|S_{n+1}| / E|X_1|` at each requested `n` as `(lo, point, hi)`:
/// exact for lattice laws and closed form for Gaussian (degenerate
/// interval), Monte Carlo with a 99% interval otherwise (on a shifted
/// seed so moment trials are independent of the survival trials).
fn moment_ratios(
    spec: &DistributionSpec,
    ns: &[u64],
    trials: u64,
    seed: u64,
    budget: &mc::McBudget,
) -> Result<Vec<(f64, f64, f64)>> {
    if let Some(pmf) = spec.as_lattice() {
        let max_n = *ns.iter().max().unwrap() as usize;
        let curve = exact::abs_moment_curve(&pmf, max_n + 1)?;
        let l1 = pmf.l1_moment();
        return Ok(ns
            .iter()
            .map(|&n| {
                let r = (&curve[n as usize + 1] / &l1).to_f64().unwrap();
                (r, r, r)
            })
            .collect());
    }
    if spec.abs_moment_closed_form(1).is_some() {
        return Ok(ns
            .iter()
            .map(|&n| {
                let r = spec.abs_moment_closed_form(n + 1).unwrap() / spec.l1_moment();
                (r, r, r)
            })
            .collect());
    }
    let grid: Vec<u64> = ns.iter().map(|&n| n + 1).collect();
    let params = MomentParams {
        grid,
        trials,
        master_seed: seed.wrapping_add(0x6d6f6d65),
    };
    let est = crate::parallel::estimate_abs_moment(spec, &params, budget)?;
    let l1 = spec.l1_moment();
    Ok(est
        .mean_abs
        .iter()
        .zip(&est.stderr)
        .map(|(m, se)| ((m - mc::Z99 * se) / l1, m / l1, (m + mc::Z99 * se) / l1))
        .collect())
}

fn bounds_svg(reports: &[BoundReport]) -> String {
    use persist_core::analysis::InequalityId;
    let ratio_series = |id: InequalityId, label: &str| Series {
        label: label.to_string(),
        points: reports
            .iter()
            .filter(|r| r.inequality == id && r.rhs > 0.0 && r.n > 0)
            .map(|r| (r.n as f64, r.lhs / r.rhs))
            .collect(),
    };
    let series = vec![
        ratio_series(InequalityId::UpperConv, "upper conv lhs/rhs"),
        ratio_series(InequalityId::TwoSidedUpper, "two-sided upper lhs/rhs"),
    ];
    loglog_plot(
        "bound tightness (ratio < 1 is slack)",
        "n",
        "lhs / rhs",
        &series,
        &[],
    )
}

// ---------------------------------------------------------------------------
// exponent
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct ExponentArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long, value_enum, default_value = "s2")]
    #[serde(default = "d_target")]
    pub target: TargetArg,
    #[arg(long, value_enum, default_value = "strict")]
    #[serde(default = "d_barrier")]
    pub barrier: BarrierArg,
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub y: f64,
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = default_trials())]
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = default_seed())]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Fit window `min:max`; defaults to [max(2^8, grid start), grid end].
    #[arg(long)]
    pub window: Option<String>,
    /// Theoretical decay exponent to report against (default: 1/4 for s2,
    /// 1/2 for finite-variance s1, (1-1/alpha)/2 for Pareto s2).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn run_exponent(a: &ExponentArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let grid = parse_grid(&a.grid)?;
    let budget = budget_from_env();
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => Window {
            n_min: analysis::DEFAULT_FIT_MIN_N.max(*grid.first().unwrap()),
            n_max: *grid.last().unwrap(),
        },
    };
    let gamma = match a.gamma {
        Some(g) => g,
        None => default_gamma(&spec, a.target.into()).ok_or_else(|| {
            anyhow!("no built-in decay target for this spec/target; pass --gamma")
        })?,
    };
    let params = SurvivalParams {
        target: a.target.into(),
        barrier: a.barrier.into(),
        threshold: a.y,
        grid,
        trials: a.trials,
        master_seed: a.seed,
    };
    eprintln!(
        "running {} trials to horizon {} for the exponent fit",
        a.trials,
        params.grid.last().unwrap()
    );
    let est = crate::parallel::estimate_survival(&spec, &params, &budget)?;
    let fit = analysis::fit_exponent(&est, window, gamma)?;
    formats::write_artifact(&a.out, "survival.csv", &formats::survival_csv(&est, "n"))?;
    let json = formats::write_artifact(&a.out, "exponent.json", &formats::exponent_json(&fit)?)?;
    let mut refs = vec![RefSlope {
        gamma: fit.gamma_hat,
        label: format!("fit -{:.4}", fit.gamma_hat),
    }];
    refs.push(RefSlope {
        gamma,
        label: format!("target -{gamma:.4}"),
    });
    let series = vec![Series {
        label: "p_hat".into(),
        points: est
            .grid
            .iter()
            .zip(&est.p_hat)
            .map(|(&n, &p)| (n as f64, p))
            .collect(),
    }];
    formats::write_artifact(
        &a.out,
        "exponent.svg",
        &loglog_plot("decay exponent fit", "n", "p_hat", &series, &refs),
    )?;
    println!(
        "exponent: gamma_hat = {:.4} +- {:.4} (r2 = {:.5}) vs target {:.4} on [{}, {}] -> {}",
        fit.gamma_hat,
        fit.stderr,
        fit.r_squared,
        gamma,
        window.n_min,
        window.n_max,
        json.display()
    );
    Ok(Outcome::default())
}

// ---------------------------------------------------------------------------
// identity
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct IdentityArgs {
    #[arg(long)]
    pub dist: String,
    #[arg(long, default_value_t = 30)]
    #[serde(default = "d_identity_nmax")]
    pub nmax: usize,
    /// Rational points x for the generating-function partial sums.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["1/2".to_string(), "9/10".to_string()])]
    #[serde(default = "d_gf_x")]
    pub gf_x: Vec<String>,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn d_identity_nmax() -> usize {
    30
}

fn d_gf_x() -> Vec<String> {
    vec!["1/2".to_string(), "9/10".to_string()]
}

fn run_identity(a: &IdentityArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let pmf = lattice_of(&spec, "identity")?;
    let (p1, p1bar) = exact::dp_walk_tables(&pmf, a.nmax)?;
    let rows: Vec<_> = (0..=a.nmax)
        .map(|n| Ok((n, exact::identity_residual_parts(&p1, &p1bar, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let csv = formats::write_artifact(&a.out, "identity.csv", &formats::identity_csv(&rows))?;
    let mut gf_notes = Vec::new();
    for xs in &a.gf_x {
        let x = parse_rational(xs)?;
        if x < num_rational::BigRational::default()
            || x >= num_rational::BigRational::from_integer(1.into())
        {
            bail!("gf point {xs} outside [0, 1)");
        }
        let partial = exact::gf_partial_sum_parts(&p1, &p1bar, &x);
        gf_notes.push(format!(
            "gf({xs}) = {} ~ {:.6}",
            formats::rational_str(&partial),
            partial.to_f64().unwrap_or(f64::NAN)
        ));
    }
    let all_zero = rows.iter().all(|(_, r)| r == &num_rational::BigRational::default());
    println!(
        "identity: n <= {}, residuals {}; {} -> {}",
        a.nmax,
        if all_zero {
            "all 0/1".to_string()
        } else {
            "NOT all zero (law is asymmetric?)".to_string()
        },
        gf_notes.join(", "),
        csv.display()
    );
    Ok(Outcome::default())
}

// ---------------------------------------------------------------------------
// argmax
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Deserialize)]
pub struct ArgmaxArgs {
    #[arg(long)]
    pub dist: String,
    /// Walk length (enumeration guard applies).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn run_argmax(a: &ArgmaxArgs) -> Result<Outcome> {
    let spec = parse_dist(&a.dist)?;
    let pmf = lattice_of(&spec, "argmax")?;
    let law = exact::argmax_law(&pmf, a.n)?;
    let product = if pmf.is_symmetric() {
        let (p1, p1bar) = exact::dp_walk_tables(&pmf, a.n)?;
        Some(
            (0..=a.n)
                .map(|k| &p1[k] * &p1bar[a.n - k])
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let csv = formats::write_artifact(
        &a.out,
        "argmax.csv",
        &formats::argmax_csv(&law, product.as_deref()),
    )?;
    let note = match &product {
        Some(p) => {
            if law.mass == *p {
                "product law p1_k p1bar_{n-k} matches exactly"
            } else {
                bail!("symmetric law but argmax mass != p1_k p1bar_(n-k); this is a bug");
            }
        }
        None => "asymmetric law: only total mass = 1 is asserted",
    };
    println!("argmax: n = {}, {} -> {}", a.n, note, csv.display());
    Ok(Outcome::default())
}

// ---------------------------------------------------------------------------
// gauss
// ---------------------------------------------------------------------------

#[derive(Subcommand, Debug)]
pub enum GaussCommand {
    /// Scan the comparison ratio f(m,k) for its minimum.
    Scan(ScanArgs),
    /// Estimate P(sup_{t<=T} Y(t) <= 1) for integrated Brownian motion.
    Sinai(SinaiArgs),
}

#[derive(Args, Debug, Deserialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "d_kmax")]
    pub kmax: u64,
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "d_kmax")]
    pub mmax: u64,
    /// Write the covariance CSV up to this k and m.
    #[arg(long, default_value_t = 64)]
    #[serde(default = "d_table_kmax")]
    pub table_kmax: u64,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn d_kmax() -> u64 {
    1000
}

fn d_table_kmax() -> u64 {
    64
}

fn run_scan(a: &ScanArgs) -> Result<Outcome> {
    let scan = gauss::slepian_ratio_scan(a.kmax, a.mmax)?;
    let mut diag_min = f64::INFINITY;
    for k in 1..=a.kmax {
        diag_min = diag_min.min(gauss::covariances(k, k + 1)?.f);
    }
    let mut pairs = Vec::new();
    for k in 1..=a.table_kmax {
        for m in k..=a.table_kmax {
            pairs.push(gauss::covariances(k, m)?);
        }
    }
    let csv = formats::write_artifact(&a.out, "covariances.csv", &formats::covariances_csv(&pairs))?;
    let pass = scan.min_f >= 1.0 - 1e-12 && diag_min >= 1.0;
    let summary = serde_json::json!({
        "kmax": a.kmax,
        "mmax": a.mmax,
        "cells": scan.cells,
        "min_f": scan.min_f,
        "argmin": [scan.at.0, scan.at.1],
        "diag_min": diag_min,
        "pass": pass,
    });
    formats::write_artifact(&a.out, "scan.json", &serde_json::to_string_pretty(&summary)?)?;
    println!(
        "gauss scan: min f = {:.12} at (k,m) = ({},{}), diagonal min {:.12}, {} -> {}",
        scan.min_f,
        scan.at.0,
        scan.at.1,
        diag_min,
        if pass { "pass" } else { "FAIL" },
        csv.display()
    );
    Ok(Outcome {
        bound_failures: if pass { 0 } else { 1 },
    })
}

#[derive(Args, Debug, Deserialize)]
pub struct SinaiArgs {
    /// Horizon grid in T (dyadic syntax supported).
    #[arg(long, default_value = "2^4..2^12")]
    #[serde(default = "d_tgrid")]
    pub tgrid: String,
    /// Discretization step (at most 0.01).
    #[arg(long, default_value_t = 0.01)]
    #[serde(default = "d_h")]
    pub h: f64,
    #[arg(long, default_value_t = 20_000)]
    #[serde(default = "d_sinai_trials")]
    pub trials: u64,
    #[arg(long, default_value_t = default_seed())]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Fit window on T.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, default_value = ".")]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn d_tgrid() -> String {
    "2^4..2^12".into()
}

fn d_h() -> f64 {
    0.01
}

fn d_sinai_trials() -> u64 {
    20_000
}

fn run_sinai(a: &SinaiArgs) -> Result<Outcome> {
    let t_grid = parse_grid(&a.tgrid)?;
    let budget = budget_from_env();
    let params = SinaiParams {
        t_grid,
        h: a.h,
        trials: a.trials,
        master_seed: a.seed,
    };
    eprintln!(
        "running {} integrated-BM trials to T = {} at h = {}",
        a.trials,
        params.t_grid.last().unwrap(),
        a.h
    );
    let est = crate::parallel::sinai_curve(&params, &budget)?;
    let csv = formats::write_artifact(&a.out, "sinai.csv", &formats::survival_csv(&est, "T"))?;
    formats::write_artifact(&a.out, "sinai.json", &formats::survival_json(&est)?)?;
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => Window {
            n_min: *params.t_grid.first().unwrap(),
            n_max: *params.t_grid.last().unwrap(),
        },
    };
    let fit = analysis::fit_exponent(&est, window, 0.25)?;
    formats::write_artifact(&a.out, "sinai_fit.json", &formats::exponent_json(&fit)?)?;
    let series = vec![Series {
        label: "P(sup Y <= 1)".into(),
        points: est
            .grid
            .iter()
            .zip(&est.p_hat)
            .map(|(&t, &p)| (t as f64, p))
            .collect(),
    }];
    formats::write_artifact(
        &a.out,
        "sinai.svg",
        &loglog_plot(
            "integrated Brownian motion survival",
            "T",
            "p_hat",
            &series,
            &[RefSlope {
                gamma: 0.25,
                label: "slope -1/4".into(),
            }],
        ),
    )?;
    println!(
        "gauss sinai: h = {}, gamma_hat = {:.4} +- {:.4} vs 1/4 -> {}",
        a.h, fit.gamma_hat, fit.stderr,
        csv.display()
    );
    Ok(Outcome::default())
}

// ---------------------------------------------------------------------------
// config file
// ---------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct RunArgs {
    /// JSON experiment config with a "mode" field.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum ConfigFile {
    Exact(ExactArgs),
    Mc(McArgs),
    Bounds(BoundsArgs),
    Exponent(ExponentArgs),
    Identity(IdentityArgs),
    Argmax(ArgmaxArgs),
    GaussScan(ScanArgs),
    GaussSinai(SinaiArgs),
}

fn run_config(a: &RunArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.config)
        .with_context(|| format!("reading config {}", a.config.display()))?;
    let cfg: ConfigFile = serde_json::from_str(&text).context("bad experiment config")?;
    match cfg {
        ConfigFile::Exact(args) => run_exact(&args),
        ConfigFile::Mc(args) => run_mc(&args),
        ConfigFile::Bounds(args) => run_bounds(&args),
        ConfigFile::Exponent(args) => run_exponent(&args),
        ConfigFile::Identity(args) => run_identity(&args),
        ConfigFile::Argmax(args) => run_argmax(&args),
        ConfigFile::GaussScan(args) => run_scan(&args),
        ConfigFile::GaussSinai(args) => run_sinai(&args),
    }
}
