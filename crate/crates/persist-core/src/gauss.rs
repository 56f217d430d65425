//! Gaussian comparison between iterated sums and integrated Brownian motion.
//!
//! For standard normal increments, `S2` discretizes `Y(t) = int_0^t B(s) ds`.
//! The covariances are, for `k <= m`,
//!
//! ```text
//! E[S2_k S2_m] = k(k+1)(3m-k+1)/6        E[Y(k)Y(m)] = k^2 (3m-k)/6
//! ```
//!
//! and with `Z(k) = sqrt((1+1/k)(1+1/(2k))) Y(k)` the variances match:
//! `E[(S2_k)^2] = E[Z(k)^2]` exactly. The comparison ratio
//! `f(m,k) = E[S2_m S2_k] / E[Z(m) Z(k)]` is at least 1 off the diagonal,
//! which is what a Slepian-type argument needs; [`slepian_ratio_scan`]
//! verifies this on a finite grid.
//!
//! [`sinai_curve`] estimates `P(sup_{t <= T} Y(t) <= 1)` by simulating
//! `(B, Y)` on a step-`h` grid. Each step draws the exact joint Gaussian
//! increment (2x2 Cholesky: `Var dB = h`, `Var dY = h^3/3`,
//! `Cov = h^2/2`), so the only discretization error is checking the
//! barrier at grid points instead of continuously; halving `h` should move
//! the curve by less than a CI width.

use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use rand_distr::{Distribution, StandardNormal};

use crate::dist::trial_rng;
use crate::mc::{
    batch_ranges, check_budget, finish_from_hist, Barrier, FirstPassageHist, McBudget, McError,
    SurvivalEstimate, Target,
};

/// Largest `m_max` the ratio scan accepts (`O(k_max * m_max)` cells).
pub const MAX_SCAN_M: u64 = 10_000;

/// Largest admissible discretization step for the integrated-BM curve.
pub const MAX_STEP_H: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaussError {
    /// `covariances` needs `1 <= k <= m`; callers order the arguments.
    BadOrder { k: u64, m: u64 },
    ScanTooLarge { m_max: u64 },
    /// `h` must be in `(0, MAX_STEP_H]`.
    BadStep,
    Mc(McError),
}

impl fmt::Display for GaussError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaussError::BadOrder { k, m } => {
                write!(f, "need 1 <= k <= m, got k = {k}, m = {m}")
            }
            GaussError::ScanTooLarge { m_max } => {
                write!(f, "scan grid m_max = {m_max} exceeds {MAX_SCAN_M}")
            }
            GaussError::BadStep => write!(f, "step h must lie in (0, {MAX_STEP_H}]"),
            GaussError::Mc(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GaussError {}

impl From<McError> for GaussError {
    fn from(e: McError) -> Self {
        GaussError::Mc(e)
    }
}

/// Exact covariances at a pair `k <= m`, plus the floating-point
/// comparison ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair {
    pub k: u64,
    pub m: u64,
    /// `E[S2_k S2_m] = k(k+1)(3m-k+1)/6`.
    pub cov_s2: Ratio<i128>,
    /// `E[Y(k) Y(m)] = k^2 (3m-k)/6`.
    pub cov_y: Ratio<i128>,
    pub z_scale_k: f64,
    pub z_scale_m: f64,
    /// `f(m,k) = cov_s2 / (z_k z_m cov_y)`.
    pub f: f64,
}

/// `sqrt((1+1/k)(1+1/(2k)))`.
pub fn z_scale(k: u64) -> f64 {
    let kf = k as f64;
    libm::sqrt((1.0 + 1.0 / kf) * (1.0 + 1.0 / (2.0 * kf)))
}

/// `z_scale(k)^2 = (k+1)(2k+1) / (2k^2)`, exactly.
pub fn z_scale_squared(k: u64) -> Ratio<i128> {
    let k = k as i128;
    Ratio::new((k + 1) * (2 * k + 1), 2 * k * k)
}

pub fn covariances(k: u64, m: u64) -> Result<CovariancePair, GaussError> {
    if k == 0 || k > m {
        return Err(GaussError::BadOrder { k, m });
    }
    let (ki, mi) = (k as i128, m as i128);
    let cov_s2 = Ratio::new(ki * (ki + 1) * (3 * mi - ki + 1), 6);
    let cov_y = Ratio::new(ki * ki * (3 * mi - ki), 6);
    let f = ratio_f(&cov_s2) / (z_scale(k) * z_scale(m) * ratio_f(&cov_y));
    Ok(CovariancePair {
        k,
        m,
        cov_s2,
        cov_y,
        z_scale_k: z_scale(k),
        z_scale_m: z_scale(m),
        f,
    })
}

fn ratio_f(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Minimum of `f(m,k)` over `1 <= k <= k_max`, `k < m <= m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub min_f: f64,
    /// `(k, m)` where the minimum is attained.
    pub at: (u64, u64),
    pub cells: u64,
}

/// Scans the off-diagonal grid for the minimum comparison ratio. The
/// covariance products stay below 2^53 for `m <= 10^4`, so the `f64`
/// evaluation is exact up to the final division and square roots.
pub fn slepian_ratio_scan(k_max: u64, m_max: u64) -> Result<ScanResult, GaussError> {
    if m_max > MAX_SCAN_M || k_max == 0 || m_max == 0 {
        return Err(GaussError::ScanTooLarge { m_max });
    }
    let mut min_f = f64::INFINITY;
    let mut at = (0, 0);
    let mut cells = 0u64;
    for k in 1..=k_max.min(m_max) {
        let zk = z_scale(k);
        let kf = k as f64;
        for m in (k + 1)..=m_max {
            let mf = m as f64;
            let cov_s2 = kf * (kf + 1.0) * (3.0 * mf - kf + 1.0);
            let cov_y = kf * kf * (3.0 * mf - kf);
            let f = cov_s2 / (zk * z_scale(m) * cov_y);
            cells += 1;
            if f < min_f {
                min_f = f;
                at = (k, m);
            }
        }
    }
    Ok(ScanResult { min_f, at, cells })
}

// ---------------------------------------------------------------------------
// integrated Brownian motion
// ---------------------------------------------------------------------------

/// Survival request for `P(sup_{t <= T} Y(t) <= 1)` on a grid of horizons.
#[derive(Debug, Clone)]
pub struct SinaiParams {
    /// Strictly increasing integer horizons `T`.
    pub t_grid: Vec<u64>,
    /// Grid step; each unit of `T` takes `1/h` steps.
    pub h: f64,
    pub trials: u64,
    pub master_seed: u64,
}

/// Per-trial simulation of `(B, Y)` to the last horizon, reporting the
/// first grid step at which `Y` exceeds 1.
#[derive(Debug)]
pub struct IbmKernel {
    steps_cap: u64,
    sqrt_h: f64,
    h: f64,
    /// Cholesky factors of the conditional increment of `Y`:
    /// `dY = h B + c1 xi1 + c2 xi2`.
    c1: f64,
    c2: f64,
    master_seed: u64,
}

impl IbmKernel {
    pub fn new(h: f64, steps_cap: u64, master_seed: u64) -> Result<Self, GaussError> {
        if h.is_nan() || h <= 0.0 || h > MAX_STEP_H {
            return Err(GaussError::BadStep);
        }
        let h32 = libm::pow(h, 1.5);
        Ok(IbmKernel {
            steps_cap,
            sqrt_h: libm::sqrt(h),
            h,
            c1: h32 / 2.0,
            c2: h32 / (2.0 * libm::sqrt(3.0)),
            master_seed,
        })
    }

    pub fn steps_cap(&self) -> u64 {
        self.steps_cap
    }

    /// First step `j` in `1..=steps_cap` with `Y(j h) > 1`, else
    /// `steps_cap + 1`.
    pub fn first_passage(&self, trial: u64) -> u64 {
        let mut rng = trial_rng(self.master_seed, trial);
        let mut b = 0.0f64;
        let mut y = 0.0f64;
        let mut y_comp = 0.0f64;
        for j in 1..=self.steps_cap {
            let xi1: f64 = StandardNormal.sample(&mut rng);
            let xi2: f64 = StandardNormal.sample(&mut rng);
            // dY uses B at the start of the step; the xi1 term correlates
            // it with dB
            let dy = self.h * b + self.c1 * xi1 + self.c2 * xi2;
            let t = y + (dy - y_comp);
            y_comp = (t - y) - (dy - y_comp);
            y = t;
            b += self.sqrt_h * xi1;
            if y > 1.0 {
                return j;
            }
        }
        self.steps_cap + 1
    }
}

/// Step index of horizon `T` on the `h`-grid.
pub fn steps_of_horizon(t: u64, h: f64) -> u64 {
    libm::round(t as f64 / h) as u64
}

/// One batch of integrated-BM trials.
pub fn sinai_batch(kernel: &IbmKernel, lo: u64, hi: u64) -> FirstPassageHist {
    let mut hist = FirstPassageHist::new(kernel.steps_cap);
    for trial in lo..hi {
        hist.record(kernel.first_passage(trial));
    }
    hist
}

/// Builds the kernel for a Sinai-curve request after validating it.
pub fn sinai_kernel(params: &SinaiParams, budget: &McBudget) -> Result<IbmKernel, GaussError> {
    if params.t_grid.is_empty() {
        return Err(GaussError::Mc(McError::EmptyGrid));
    }
    if params.t_grid.windows(2).any(|w| w[1] <= w[0]) || params.t_grid[0] == 0 {
        return Err(GaussError::Mc(McError::GridNotIncreasing));
    }
    if params.h.is_nan() || params.h <= 0.0 || params.h > MAX_STEP_H {
        return Err(GaussError::BadStep);
    }
    let steps_cap = steps_of_horizon(*params.t_grid.last().expect("nonempty"), params.h);
    check_budget(params.trials, steps_cap, budget)?;
    IbmKernel::new(params.h, steps_cap, params.master_seed)
}

/// Histogram -> survival curve over the `T` grid. The estimate's `grid`
/// holds horizons `T`, not step counts.
pub fn finish_sinai(params: &SinaiParams, hist: &FirstPassageHist) -> SurvivalEstimate {
    let step_grid: Vec<u64> = params
        .t_grid
        .iter()
        .map(|&t| steps_of_horizon(t, params.h))
        .collect();
    let est = finish_from_hist(
        Target::S2,
        Barrier::Weak,
        1.0,
        &step_grid,
        params.trials,
        hist,
    );
    SurvivalEstimate {
        grid: params.t_grid.clone(),
        ..est
    }
}

/// Serial estimator of `P(sup_{t <= T} Y(t) <= 1)` over the horizon grid.
pub fn sinai_curve(params: &SinaiParams, budget: &McBudget) -> Result<SurvivalEstimate, GaussError> {
    let kernel = sinai_kernel(params, budget)?;
    let mut hist = FirstPassageHist::new(kernel.steps_cap);
    for (lo, hi) in batch_ranges(params.trials) {
        hist.merge(&sinai_batch(&kernel, lo, hi));
    }
    Ok(finish_sinai(params, &hist))
}
