//! Monte Carlo estimation of survival curves and `E|S_n|`.
//!
//! Survival probabilities are estimated by first-passage recording: the
//! event `max_{k<=n} V_k < y` equals `{T > n}` for the first passage time
//! `T = min { k : V_k >= y }`, so one pass per trajectory yields the whole
//! curve at every grid point at once, stopping early at the first barrier
//! violation. Estimates at different `n` share trajectories and are
//! positively correlated; counts at each `n` are exact binomials.
//!
//! Trials are numbered `0..trials` and processed in fixed-size batches
//! ([`TRIAL_BATCH`]). Each trial draws from its own RNG stream, and batch
//! partials are merged in batch order, so the result is bit-identical no
//! matter how batches are scheduled across workers. The `persist-cli` crate
//! provides the parallel driver; the serial estimators here use the same
//! batch structure.
//!
//! Lattice laws run in integer arithmetic so the strict/weak distinction at
//! the barrier is exact; continuous laws use compensated (Kahan) summation
//! because `S2_n` grows like `n^{3/2}` while the barrier test happens
//! near zero.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dist::{trial_rng, DistributionSpec, Sampler};

/// Which running sum the barrier applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Partial sums `S_k`.
    S1,
    /// Iterated partial sums `S2_k`.
    S2,
}

/// Strict (`< y`) or weak (`<= y`) survival; they differ only on lattice
/// laws with mass at the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Barrier {
    Strict,
    Weak,
}

/// Fixed batch size of the deterministic reduction.
pub const TRIAL_BATCH: u64 = 4096;

/// Minimum trial count accepted by the estimators.
pub const MIN_TRIALS: u64 = 100;

/// Default work budget: `horizon * trials` must not exceed this. The CLI
/// exposes `PERSIST_BUDGET_STEPS` to override. The product is a worst-case
/// step count; survival runs stop early at first passage, so their
/// actual work is usually far below it.
pub const DEFAULT_MAX_STEPS: u64 = 20_000_000_000;

/// Work guard for one estimation run.
#[derive(Debug, Clone, Copy)]
pub struct McBudget {
    pub max_steps: u64,
}

impl Default for McBudget {
    fn default() -> Self {
        McBudget {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McError {
    EmptyGrid,
    GridNotIncreasing,
    TooFewTrials { got: u64 },
    /// `horizon * trials` exceeds the budget.
    BudgetExceeded { steps: u128, max_steps: u64 },
    BadThreshold,
    /// Integer `S2` would overflow on this horizon.
    HorizonTooLarge { horizon: u64 },
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::EmptyGrid => write!(f, "grid must contain at least one point"),
            McError::GridNotIncreasing => write!(f, "grid must be strictly increasing"),
            McError::TooFewTrials { got } => {
                write!(f, "need at least {MIN_TRIALS} trials, got {got}")
            }
            McError::BudgetExceeded { steps, max_steps } => write!(
                f,
                "horizon x trials = {steps} steps exceeds the budget of {max_steps} \
                 (raise it explicitly to run this)"
            ),
            McError::BadThreshold => write!(f, "threshold must be finite and >= 0"),
            McError::HorizonTooLarge { horizon } => {
                write!(f, "horizon {horizon} overflows the integer lattice path")
            }
        }
    }
}

impl core::error::Error for McError {}

/// Survival-curve estimation request.
#[derive(Debug, Clone)]
pub struct SurvivalParams {
    pub target: Target,
    pub barrier: Barrier,
    /// Barrier level `y >= 0`; survival means staying below (or at) `y`.
    pub threshold: f64,
    /// Strictly increasing step counts at which the curve is reported.
    pub grid: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
}

/// Monte Carlo survival curve with exact counts and Wilson intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalEstimate {
    pub target: Target,
    pub barrier: Barrier,
    pub threshold: f64,
    pub grid: Vec<u64>,
    pub trials: u64,
    /// Number of trajectories with first passage time `> grid[j]`.
    pub surv_count: Vec<u64>,
    /// `surv_count / trials`, exactly.
    pub p_hat: Vec<f64>,
    /// 95% Wilson interval.
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

/// Sample mean of `|S_n|` on a grid, with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsMomentEstimate {
    pub grid: Vec<u64>,
    pub trials: u64,
    pub mean_abs: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// `z` for a 95% central interval.
pub const Z95: f64 = 1.959963984540054;
/// `z` for a 99% central interval.
pub const Z99: f64 = 2.5758293035489004;

/// Wilson score interval for `count` successes in `trials`.
pub fn wilson_interval(count: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

impl SurvivalEstimate {
    /// Wilson interval at grid index `j` for an arbitrary `z`.
    pub fn wilson_at(&self, j: usize, z: f64) -> (f64, f64) {
        wilson_interval(self.surv_count[j], self.trials, z)
    }

    /// Estimate at an exact grid point.
    pub fn value_at(&self, n: u64) -> Option<f64> {
        self.grid
            .iter()
            .position(|&g| g == n)
            .map(|j| self.p_hat[j])
    }

    /// Estimate at `n`, geometrically interpolated (log-log linear) between
    /// bracketing grid points when `n` itself was not recorded. `None`
    /// outside the grid range or where a bracketing estimate is zero.
    pub fn interpolated(&self, n: u64) -> Option<f64> {
        if let Some(p) = self.value_at(n) {
            return Some(p);
        }
        let j = self.grid.iter().position(|&g| g > n)?;
        if j == 0 || n == 0 {
            return None;
        }
        let (n0, n1) = (self.grid[j - 1], self.grid[j]);
        let (p0, p1) = (self.p_hat[j - 1], self.p_hat[j]);
        if p0 <= 0.0 || p1 <= 0.0 || n0 == 0 {
            return None;
        }
        let t = (libm::log(n as f64) - libm::log(n0 as f64))
            / (libm::log(n1 as f64) - libm::log(n0 as f64));
        Some(libm::exp((1.0 - t) * libm::log(p0) + t * libm::log(p1)))
    }
}

// ---------------------------------------------------------------------------
// trial kernels
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan {
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Per-trial first-passage simulation for one spec/barrier configuration.
/// `first_passage(trial)` is a pure function of the constructor arguments
/// and the trial index.
#[derive(Debug)]
pub struct WalkKernel<'a> {
    sampler: Sampler<'a>,
    target: Target,
    horizon: u64,
    master_seed: u64,
    mode: KernelMode,
}

#[derive(Debug)]
enum KernelMode {
    /// violation when the integer running value is `>= bound`
    Int { bound: i64 },
    Float { threshold: f64, weak: bool },
}

impl<'a> WalkKernel<'a> {
    pub fn new(
        spec: &'a DistributionSpec,
        target: Target,
        barrier: Barrier,
        threshold: f64,
        horizon: u64,
        master_seed: u64,
    ) -> Result<Self, McError> {
        if threshold < 0.0 || !threshold.is_finite() {
            return Err(McError::BadThreshold);
        }
        let sampler = spec.sampler();
        let mode = if sampler.is_lattice() {
            let max_abs = spec
                .as_lattice()
                .expect("lattice")
                .support()
                .iter()
                .map(|v| v.unsigned_abs())
                .max()
                .unwrap_or(1);
            let tri = (horizon as u128) * (horizon as u128 + 1) / 2;
            if tri * max_abs as u128 > i64::MAX as u128 {
                return Err(McError::HorizonTooLarge { horizon });
            }
            // positive rescaling does not move the sign of the comparison,
            // so the integer trajectory is compared against y * E|X|
            let y = if spec.normalize_l1() {
                threshold * spec.raw_l1_moment()
            } else {
                threshold
            };
            let bound = match barrier {
                Barrier::Strict => libm::ceil(y) as i64,
                Barrier::Weak => libm::floor(y) as i64 + 1,
            };
            KernelMode::Int { bound }
        } else {
            KernelMode::Float {
                threshold,
                weak: barrier == Barrier::Weak,
            }
        };
        Ok(WalkKernel {
            sampler,
            target,
            horizon,
            master_seed,
            mode,
        })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// First `k` in `1..=horizon` with the barrier violated, else
    /// `horizon + 1`.
    pub fn first_passage(&self, trial: u64) -> u64 {
        let mut rng = trial_rng(self.master_seed, trial);
        match &self.mode {
            KernelMode::Int { bound } => {
                let mut s: i64 = 0;
                let mut q: i64 = 0;
                for k in 1..=self.horizon {
                    s += self.sampler.sample_int(&mut rng);
                    let v = match self.target {
                        Target::S1 => s,
                        Target::S2 => {
                            q += s;
                            q
                        }
                    };
                    if v >= *bound {
                        return k;
                    }
                }
                self.horizon + 1
            }
            KernelMode::Float { threshold, weak } => {
                let mut s = Kahan::new();
                let mut q = Kahan::new();
                for k in 1..=self.horizon {
                    let x = self.sampler.sample(&mut rng);
                    assert!(x.is_finite(), "non-finite increment from sampler");
                    s.add(x);
                    let v = match self.target {
                        Target::S1 => s.sum,
                        Target::S2 => {
                            q.add(s.sum);
                            q.sum
                        }
                    };
                    let violated = if *weak { v > *threshold } else { v >= *threshold };
                    if violated {
                        return k;
                    }
                }
                self.horizon + 1
            }
        }
    }
}

// ---------------------------------------------------------------------------
// histograms and reductions
// ---------------------------------------------------------------------------

/// Histogram of first passage times: `counts[t]` for `t` in `1..=cap`,
/// with index `cap + 1` holding full survivors (index 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstPassageHist {
    pub cap: u64,
    pub counts: Vec<u64>,
}

impl FirstPassageHist {
    pub fn new(cap: u64) -> Self {
        FirstPassageHist {
            cap,
            counts: vec![0; cap as usize + 2],
        }
    }

    pub fn record(&mut self, t: u64) {
        self.counts[t as usize] += 1;
    }

    pub fn merge(&mut self, other: &FirstPassageHist) {
        debug_assert_eq!(self.cap, other.cap);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Number of trials with first passage time `> n`.
    pub fn survivors_past(&self, n: u64) -> u64 {
        self.counts[n as usize + 1..].iter().sum()
    }
}

/// The canonical batch decomposition of `0..trials`: `[lo, hi)` ranges of
/// size [`TRIAL_BATCH`]. Serial and parallel drivers must both use it and
/// merge partials in batch order for results to be scheduling-independent.
pub fn batch_ranges(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..trials.div_ceil(TRIAL_BATCH)).map(move |b| {
        let lo = b * TRIAL_BATCH;
        (lo, (lo + TRIAL_BATCH).min(trials))
    })
}

/// One batch of survival trials, as a histogram partial.
pub fn survival_batch(kernel: &WalkKernel<'_>, lo: u64, hi: u64) -> FirstPassageHist {
    let mut hist = FirstPassageHist::new(kernel.horizon);
    for trial in lo..hi {
        hist.record(kernel.first_passage(trial));
    }
    hist
}

fn validate_grid(grid: &[u64]) -> Result<(), McError> {
    if grid.is_empty() {
        return Err(McError::EmptyGrid);
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(McError::GridNotIncreasing);
    }
    Ok(())
}

/// Validates `trials` and the worst-case step product against the budget.
pub fn check_budget(trials: u64, horizon: u64, budget: &McBudget) -> Result<(), McError> {
    if trials < MIN_TRIALS {
        return Err(McError::TooFewTrials { got: trials });
    }
    let steps = trials as u128 * horizon as u128;
    if steps > budget.max_steps as u128 {
        return Err(McError::BudgetExceeded {
            steps,
            max_steps: budget.max_steps,
        });
    }
    Ok(())
}

/// Histogram -> estimate with counts, point estimates, and 95% intervals.
pub fn finish_from_hist(
    target: Target,
    barrier: Barrier,
    threshold: f64,
    grid: &[u64],
    trials: u64,
    hist: &FirstPassageHist,
) -> SurvivalEstimate {
    let surv_count: Vec<u64> = grid.iter().map(|&n| hist.survivors_past(n)).collect();
    let p_hat: Vec<f64> = surv_count.iter().map(|&c| c as f64 / trials as f64).collect();
    let (ci_low, ci_high) = surv_count
        .iter()
        .map(|&c| wilson_interval(c, trials, Z95))
        .unzip();
    SurvivalEstimate {
        target,
        barrier,
        threshold,
        grid: grid.to_vec(),
        trials,
        surv_count,
        p_hat,
        ci_low,
        ci_high,
    }
}

/// Survival counts -> estimate, shared by serial and parallel drivers.
pub fn finish_survival(params: &SurvivalParams, hist: &FirstPassageHist) -> SurvivalEstimate {
    finish_from_hist(
        params.target,
        params.barrier,
        params.threshold,
        &params.grid,
        params.trials,
        hist,
    )
}

/// Builds the kernel for a survival request, after validating the request
/// against the budget.
pub fn survival_kernel<'a>(
    spec: &'a DistributionSpec,
    params: &SurvivalParams,
    budget: &McBudget,
) -> Result<WalkKernel<'a>, McError> {
    validate_grid(&params.grid)?;
    let horizon = *params.grid.last().expect("nonempty");
    check_budget(params.trials, horizon, budget)?;
    WalkKernel::new(
        spec,
        params.target,
        params.barrier,
        params.threshold,
        horizon,
        params.master_seed,
    )
}

/// Serial survival-curve estimator.
pub fn estimate_survival(
    spec: &DistributionSpec,
    params: &SurvivalParams,
    budget: &McBudget,
) -> Result<SurvivalEstimate, McError> {
    let kernel = survival_kernel(spec, params, budget)?;
    let mut hist = FirstPassageHist::new(kernel.horizon);
    for (lo, hi) in batch_ranges(params.trials) {
        hist.merge(&survival_batch(&kernel, lo, hi));
    }
    Ok(finish_survival(params, &hist))
}

// ---------------------------------------------------------------------------
// absolute moments
// ---------------------------------------------------------------------------

/// `E|S_n|` estimation request.
#[derive(Debug, Clone)]
pub struct MomentParams {
    pub grid: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
}

/// Sums and sums of squares of `|S_n|` per grid point. Merging is ordered
/// by batch, so float accumulation is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccum {
    pub sums: Vec<f64>,
    pub sum_squares: Vec<f64>,
}

impl MomentAccum {
    pub fn new(points: usize) -> Self {
        MomentAccum {
            sums: vec![0.0; points],
            sum_squares: vec![0.0; points],
        }
    }

    pub fn merge(&mut self, other: &MomentAccum) {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.sum_squares.iter_mut().zip(&other.sum_squares) {
            *a += b;
        }
    }
}

/// One batch of `|S_n|` trials. Each trajectory runs to the last grid point
/// and is read at every grid point on the way.
pub fn abs_moment_batch(
    spec: &DistributionSpec,
    params: &MomentParams,
    lo: u64,
    hi: u64,
) -> MomentAccum {
    let sampler = spec.sampler();
    let lattice = sampler.is_lattice();
    let norm = if spec.normalize_l1() {
        1.0 / spec.raw_l1_moment()
    } else {
        1.0
    };
    let horizon = *params.grid.last().expect("nonempty");
    let mut acc = MomentAccum::new(params.grid.len());
    for trial in lo..hi {
        let mut rng = trial_rng(params.master_seed, trial);
        let mut next = 0usize;
        while next < params.grid.len() && params.grid[next] == 0 {
            next += 1; // |S_0| = 0 contributes nothing
        }
        if lattice {
            let mut s: i64 = 0;
            for k in 1..=horizon {
                s += sampler.sample_int(&mut rng);
                while next < params.grid.len() && params.grid[next] == k {
                    let v = s.unsigned_abs() as f64 * norm;
                    acc.sums[next] += v;
                    acc.sum_squares[next] += v * v;
                    next += 1;
                }
            }
        } else {
            let mut s = Kahan::new();
            for k in 1..=horizon {
                let x = sampler.sample(&mut rng);
                assert!(x.is_finite(), "non-finite increment from sampler");
                s.add(x);
                while next < params.grid.len() && params.grid[next] == k {
                    let v = if s.sum < 0.0 { -s.sum } else { s.sum };
                    acc.sums[next] += v;
                    acc.sum_squares[next] += v * v;
                    next += 1;
                }
            }
        }
    }
    acc
}

/// Accumulated sums -> estimate with standard errors.
pub fn finish_abs_moment(params: &MomentParams, acc: &MomentAccum) -> AbsMomentEstimate {
    let t = params.trials as f64;
    let mean_abs: Vec<f64> = acc.sums.iter().map(|s| s / t).collect();
    let stderr: Vec<f64> = acc
        .sum_squares
        .iter()
        .zip(&mean_abs)
        .map(|(sq, m)| {
            let var = (sq / t - m * m).max(0.0) * t / (t - 1.0);
            libm::sqrt(var / t)
        })
        .collect();
    AbsMomentEstimate {
        grid: params.grid.clone(),
        trials: params.trials,
        mean_abs,
        stderr,
    }
}

/// Validates a moment request against the grid rules and the budget.
pub fn check_moment_params(params: &MomentParams, budget: &McBudget) -> Result<(), McError> {
    validate_grid(&params.grid)?;
    check_budget(params.trials, *params.grid.last().expect("nonempty"), budget)
}

/// Serial `E|S_n|` estimator.
pub fn estimate_abs_moment(
    spec: &DistributionSpec,
    params: &MomentParams,
    budget: &McBudget,
) -> Result<AbsMomentEstimate, McError> {
    check_moment_params(params, budget)?;
    let mut acc = MomentAccum::new(params.grid.len());
    for (lo, hi) in batch_ranges(params.trials) {
        acc.merge(&abs_moment_batch(spec, params, lo, hi));
    }
    Ok(finish_abs_moment(params, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
        (lo..=hi).map(|e| 1u64 << e).collect()
    }

    fn rademacher_s2(grid: Vec<u64>, trials: u64, seed: u64) -> SurvivalEstimate {
        let spec = DistributionSpec::rademacher();
        let params = SurvivalParams {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid,
            trials,
            master_seed: seed,
        };
        estimate_survival(&spec, &params, &McBudget::default()).unwrap()
    }

    #[test]
    fn survival_at_zero_is_one() {
        let est = rademacher_s2(vec![0, 1, 2], 1000, 5);
        assert_eq!(est.surv_count[0], 1000);
        assert_eq!(est.p_hat[0], 1.0);
    }

    #[test]
    fn counts_non_increasing_and_ci_brackets() {
        let est = rademacher_s2((1..=64).collect(), 20_000, 11);
        for w in est.surv_count.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for j in 0..est.grid.len() {
            assert!(est.ci_low[j] <= est.p_hat[j] && est.p_hat[j] <= est.ci_high[j]);
            assert_eq!(est.p_hat[j], est.surv_count[j] as f64 / est.trials as f64);
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let a = rademacher_s2(dyadic(1, 8), 5000, 42);
        let b = rademacher_s2(dyadic(1, 8), 5000, 42);
        assert_eq!(a, b);
        let c = rademacher_s2(dyadic(1, 8), 5000, 43);
        assert_ne!(a.surv_count, c.surv_count);
    }

    #[test]
    fn horizon_cap_does_not_change_prefix() {
        // early stopping consumes a prefix of the trial stream, so capping
        // the horizon must not change earlier outcomes
        let spec = DistributionSpec::gaussian(1.0).unwrap();
        let long = WalkKernel::new(&spec, Target::S2, Barrier::Strict, 0.0, 120, 9).unwrap();
        let short = WalkKernel::new(&spec, Target::S2, Barrier::Strict, 0.0, 40, 9).unwrap();
        for trial in 0..500 {
            let t_long = long.first_passage(trial);
            let t_short = short.first_passage(trial);
            if t_long <= 40 {
                assert_eq!(t_short, t_long);
            } else {
                assert_eq!(t_short, 41);
            }
        }
    }

    #[test]
    fn agrees_with_exact_oracle_at_99ci() {
        let pmf = DistributionSpec::rademacher().as_lattice().unwrap();
        let table = exact::dp_table(&pmf, 100).unwrap();
        let est = rademacher_s2((1..=100).collect(), 100_000, 2024);
        for j in 0..est.grid.len() {
            let n = est.grid[j] as usize;
            let exact_p = rational_f64(&table.p2[n]);
            let (lo, hi) = est.wilson_at(j, Z99);
            assert!(
                lo <= exact_p && exact_p <= hi,
                "n={n}: exact {exact_p} outside 99% CI [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn strict_weak_split_on_lattice() {
        // weak survival includes paths that touch the barrier exactly
        let spec = DistributionSpec::rademacher();
        let pmf = spec.as_lattice().unwrap();
        let table = exact::dp_table(&pmf, 20).unwrap();
        for (barrier, column) in [(Barrier::Strict, &table.p1), (Barrier::Weak, &table.p1bar)] {
            let params = SurvivalParams {
                target: Target::S1,
                barrier,
                threshold: 0.0,
                grid: (1..=20).collect(),
                trials: 50_000,
                master_seed: 17,
            };
            let est = estimate_survival(&spec, &params, &McBudget::default()).unwrap();
            for j in 0..est.grid.len() {
                let exact_p = rational_f64(&column[est.grid[j] as usize]);
                let (lo, hi) = est.wilson_at(j, Z99);
                assert!(
                    lo <= exact_p && exact_p <= hi,
                    "n={} {barrier:?}",
                    est.grid[j]
                );
            }
        }
    }

    #[test]
    fn gaussian_walk_matches_double_factorial() {
        let spec = DistributionSpec::gaussian(1.0).unwrap();
        let params = SurvivalParams {
            target: Target::S1,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: (1..=20).collect(),
            trials: 200_000,
            master_seed: 31,
        };
        let est = estimate_survival(&spec, &params, &McBudget::default()).unwrap();
        for j in 0..est.grid.len() {
            let n = est.grid[j] as usize;
            let target = rational_f64(&exact::double_factorial_p1(n));
            let (lo, hi) = est.wilson_at(j, Z99);
            assert!(
                lo <= target && target <= hi,
                "n={n}: (2n-1)!!/(2n)!! = {target} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn threshold_monotonicity() {
        // survival probabilities grow with the barrier level y
        let spec = DistributionSpec::gaussian(1.0).unwrap();
        let mut last = Vec::new();
        for (i, y) in [0.0, 1.0, 4.0].into_iter().enumerate() {
            let params = SurvivalParams {
                target: Target::S2,
                barrier: Barrier::Strict,
                threshold: y,
                grid: dyadic(1, 7),
                trials: 30_000,
                master_seed: 8,
            };
            let est = estimate_survival(&spec, &params, &McBudget::default()).unwrap();
            if i > 0 {
                for (a, b) in est.p_hat.iter().zip(&last) {
                    assert!(a >= b, "survival must be monotone in y");
                }
            }
            last = est.p_hat;
        }
    }

    #[test]
    fn lattice_threshold_uses_integer_bound() {
        // with y = 1 the strict barrier on an integer walk is S >= 1, and
        // weak is S >= 2
        let spec = DistributionSpec::rademacher();
        let strict = WalkKernel::new(&spec, Target::S1, Barrier::Strict, 1.0, 50, 3).unwrap();
        let weak = WalkKernel::new(&spec, Target::S1, Barrier::Weak, 1.0, 50, 3).unwrap();
        match (&strict.mode, &weak.mode) {
            (KernelMode::Int { bound: a }, KernelMode::Int { bound: b }) => {
                assert_eq!(*a, 1);
                assert_eq!(*b, 2);
            }
            _ => panic!("expected integer kernels"),
        }
    }

    #[test]
    fn abs_moment_matches_exact_and_closed_form() {
        let spec = DistributionSpec::rademacher();
        let params = MomentParams {
            grid: vec![1, 2, 4],
            trials: 200_000,
            master_seed: 5,
        };
        let est = estimate_abs_moment(&spec, &params, &McBudget::default()).unwrap();
        for (j, expect) in [1.0, 1.0, 1.5].into_iter().enumerate() {
            assert!(
                (est.mean_abs[j] - expect).abs() < 3.0 * est.stderr[j].max(1e-9),
                "grid {j}: {} vs {expect}",
                est.mean_abs[j]
            );
        }

        let gauss = DistributionSpec::gaussian(1.0).unwrap();
        let params = MomentParams {
            grid: vec![100],
            trials: 100_000,
            master_seed: 6,
        };
        let est = estimate_abs_moment(&gauss, &params, &McBudget::default()).unwrap();
        let expect = gauss.abs_moment_closed_form(100).unwrap();
        assert!((est.mean_abs[0] - expect).abs() < 3.0 * est.stderr[0]);
    }

    #[test]
    fn guards_fire() {
        let spec = DistributionSpec::rademacher();
        let base = SurvivalParams {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: vec![4, 4],
            trials: 1000,
            master_seed: 0,
        };
        assert_eq!(
            estimate_survival(&spec, &base, &McBudget::default()).unwrap_err(),
            McError::GridNotIncreasing
        );
        let tiny = SurvivalParams {
            trials: 10,
            grid: vec![4],
            ..base.clone()
        };
        assert!(matches!(
            estimate_survival(&spec, &tiny, &McBudget::default()).unwrap_err(),
            McError::TooFewTrials { .. }
        ));
        let huge = SurvivalParams {
            trials: 1_000_000,
            grid: vec![1 << 30],
            ..base.clone()
        };
        assert!(matches!(
            estimate_survival(&spec, &huge, &McBudget::default()).unwrap_err(),
            McError::BudgetExceeded { .. }
        ));
        assert_eq!(
            WalkKernel::new(&spec, Target::S1, Barrier::Strict, -1.0, 10, 0).unwrap_err(),
            McError::BadThreshold
        );
    }

    #[test]
    fn wilson_interval_properties() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert!((0.0..1e-12).contains(&lo));
        assert!(hi > 0.0 && hi < 0.06);
        let (lo, hi) = wilson_interval(100, 100, Z95);
        assert!(lo > 0.94);
        assert_eq!(hi, 1.0);
        // wider at higher confidence
        let (l95, h95) = wilson_interval(37, 200, Z95);
        let (l99, h99) = wilson_interval(37, 200, Z99);
        assert!(l99 < l95 && h99 > h95);
        // textbook case: 8 successes of 10 at 95%
        let (lo, hi) = wilson_interval(8, 10, Z95);
        assert!((lo - 0.49).abs() < 0.02, "lo = {lo}");
        assert!((hi - 0.943).abs() < 0.02, "hi = {hi}");
    }

    #[test]
    fn interpolation_is_geometric() {
        let est = SurvivalEstimate {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: vec![4, 16],
            trials: 100,
            surv_count: vec![40, 10],
            p_hat: vec![0.4, 0.1],
            ci_low: vec![0.0, 0.0],
            ci_high: vec![1.0, 1.0],
        };
        // halfway in log n between 4 and 16 is 8; geometric mean of p is 0.2
        let p = est.interpolated(8).unwrap();
        assert!((p - 0.2).abs() < 1e-12);
        assert_eq!(est.interpolated(16), Some(0.1));
        assert_eq!(est.interpolated(32), None);
    }

    fn rational_f64(r: &num_rational::BigRational) -> f64 {
        num_traits::ToPrimitive::to_f64(r).unwrap()
    }
}
