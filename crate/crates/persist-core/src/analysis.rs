//! Convolution bounds and decay-exponent fits.
//!
//! The inequalities evaluated here relate the iterated-sum persistence
//! probabilities to `E|S_{n+1}| / E|X_1|`:
//!
//! ```text
//! (upper)      sum_{k=0}^n p2_k p2bar_{n-k} <= c1^2 E|S_{n+1}| / E|X_1|
//! (lower)      sum_{k=0}^n p2_k p2_{n-k}    >= (1/c2) E|S_{n+1}| / E|X_1|
//! (two-sided)  (1/(4 c1 c2)) sqrt(r) <= p2_n <= c1 sqrt(r),
//!              r = E|S_{n+1}| / ((n+1) E|X_1|)
//! ```
//!
//! with `c1 = 2` for symmetric laws and `c1 <= 6 sqrt(30)` in general, while
//! `c2` is existential: the checks report the constant a given `n` implies
//! and test boundedness across a grid rather than any fixed number.
//!
//! Exact tables give exact verdicts: `c1^2` is rational (4 or 1080), and the
//! square-root comparisons are squared first, so no floating point enters a
//! pass/fail decision. Monte Carlo inputs get a tri-state verdict with
//! one-sided 99% intervals; only a CI-certain violation is a failure.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::dist::LatticePmf;
use crate::exact::{self, ExactError, PersistenceTable};
use crate::mc::{wilson_interval, SurvivalEstimate, Z99};

/// `6 sqrt(30)`, the distribution-free constant; its square is exactly 1080.
pub const SIX_SQRT_30: f64 = 32.86335345030997;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityId {
    UpperConv,
    LowerConv,
    TwoSidedUpper,
    TwoSidedLower,
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InequalityId::UpperConv => "upper_conv",
            InequalityId::LowerConv => "lower_conv",
            InequalityId::TwoSidedUpper => "two_sided_upper",
            InequalityId::TwoSidedLower => "two_sided_lower",
        };
        f.write_str(s)
    }
}

/// Pass/fail of one inequality check. Monte Carlo sources add
/// `Indeterminate` for CIs that straddle the bound; only `Fail` is a
/// CI-certain violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Indeterminate,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Exact,
    Mc,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Exact => "exact",
            Source::Mc => "mc",
        })
    }
}

/// One evaluated inequality at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub inequality: InequalityId,
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub verdict: Verdict,
    pub source: Source,
}

/// Choice of the upper-bound constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C1Choice {
    /// 2 when the law is symmetric, else `6 sqrt(30)`.
    Auto,
    Two,
    SixSqrt30,
}

/// Resolved `c1` with its exact square.
#[derive(Debug, Clone)]
pub struct C1Constant {
    pub value: f64,
    pub squared: BigRational,
}

impl C1Choice {
    pub fn resolve(self, symmetric: bool) -> C1Constant {
        let two = matches!(self, C1Choice::Two) || (matches!(self, C1Choice::Auto) && symmetric);
        if two {
            C1Constant {
                value: 2.0,
                squared: BigRational::from(BigInt::from(4)),
            }
        } else {
            C1Constant {
                value: SIX_SQRT_30,
                squared: BigRational::from(BigInt::from(1080)),
            }
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// exact checks
// ---------------------------------------------------------------------------

/// Everything the exact checks need for one lattice law: the persistence
/// table, `E|S_m|` up to `n_max + 1`, and `E|X_1|`.
#[derive(Debug, Clone)]
pub struct ExactCurves {
    pub table: PersistenceTable,
    /// `abs_s[m] = E|S_m|` for `m = 0..=n_max+1`.
    pub abs_s: Vec<BigRational>,
    pub l1: BigRational,
    pub symmetric: bool,
}

pub fn exact_curves(pmf: &LatticePmf, n_max: usize) -> Result<ExactCurves, ExactError> {
    let table = exact::dp_table(pmf, n_max)?;
    let abs_s = exact::abs_moment_curve(pmf, n_max + 1)?;
    Ok(ExactCurves {
        symmetric: pmf.is_symmetric(),
        l1: pmf.l1_moment(),
        table,
        abs_s,
    })
}

impl ExactCurves {
    fn check_n(&self, n: usize) -> Result<(), ExactError> {
        if n > self.table.n_max {
            return Err(ExactError::OutOfRange {
                n,
                n_max: self.table.n_max,
            });
        }
        Ok(())
    }

    /// `E|S_{n+1}| / E|X_1|`, exactly.
    pub fn moment_ratio(&self, n: usize) -> BigRational {
        &self.abs_s[n + 1] / &self.l1
    }
}

/// Upper convolution bound: `sum p2_k p2bar_{n-k} <= c1^2 E|S_{n+1}|/E|X_1|`,
/// decided in exact arithmetic.
pub fn check_upper_conv(
    curves: &ExactCurves,
    n: usize,
    c1: C1Choice,
) -> Result<BoundReport, ExactError> {
    curves.check_n(n)?;
    let c = c1.resolve(curves.symmetric);
    let mut lhs = BigRational::zero();
    for k in 0..=n {
        lhs += &curves.table.p2[k] * &curves.table.p2bar[n - k];
    }
    let rhs = &c.squared * curves.moment_ratio(n);
    let verdict = if lhs <= rhs { Verdict::Pass } else { Verdict::Fail };
    Ok(BoundReport {
        inequality: InequalityId::UpperConv,
        n: n as u64,
        lhs: to_f64(&lhs),
        rhs: to_f64(&rhs),
        constant_used: c.value,
        slack: to_f64(&(&rhs - &lhs)),
        verdict,
        source: Source::Exact,
    })
}

/// Lower convolution bound, reported through its implied constant
/// `c2(n) = (E|S_{n+1}|/E|X_1|) / sum p2_k p2_{n-k}`. The testable claim is
/// that `c2(n)` stays bounded in `n`, not any particular value, so the
/// verdict here is `Pass` whenever the convolution is positive; use
/// [`variation_ratio`] on a sweep for the boundedness proxy.
pub fn check_lower_conv(curves: &ExactCurves, n: usize) -> Result<(BoundReport, f64), ExactError> {
    curves.check_n(n)?;
    let mut conv = BigRational::zero();
    for k in 0..=n {
        conv += &curves.table.p2[k] * &curves.table.p2[n - k];
    }
    let ratio = curves.moment_ratio(n);
    // conv >= p2[0] p2[n] > 0 unless the whole tail is zero
    let c2 = if conv.is_positive() {
        &ratio / &conv
    } else {
        BigRational::zero()
    };
    let c2_f = to_f64(&c2);
    let rhs = if c2.is_positive() {
        &ratio / &c2
    } else {
        BigRational::zero()
    };
    let verdict = if conv >= rhs { Verdict::Pass } else { Verdict::Fail };
    Ok((
        BoundReport {
            inequality: InequalityId::LowerConv,
            n: n as u64,
            lhs: to_f64(&conv),
            rhs: to_f64(&rhs),
            constant_used: c2_f,
            slack: to_f64(&(&conv - &rhs)),
            verdict,
            source: Source::Exact,
        },
        c2_f,
    ))
}

/// Both sides of the square-root envelope. The upper side
/// `p2_n <= c1 sqrt(r)` is decided exactly by squaring; the lower side is
/// existential and reports the implied constant `4 c1 c2 = sqrt(r)/p2_n`.
pub struct TwoSidedReport {
    pub upper: BoundReport,
    pub lower: BoundReport,
    /// Implied `4 c1 c2` making the lower bound tight at this `n`.
    pub implied_lower_constant: f64,
}

pub fn check_two_sided(
    curves: &ExactCurves,
    n: usize,
    c1: C1Choice,
) -> Result<TwoSidedReport, ExactError> {
    curves.check_n(n)?;
    let c = c1.resolve(curves.symmetric);
    let r = curves.moment_ratio(n) / BigRational::from(BigInt::from(n as u64 + 1));
    let p = &curves.table.p2[n];
    let rhs_sq = &c.squared * &r;
    let upper_holds = p * p <= rhs_sq;
    let r_f = to_f64(&r);
    let sqrt_r = libm::sqrt(r_f);
    let upper = BoundReport {
        inequality: InequalityId::TwoSidedUpper,
        n: n as u64,
        lhs: to_f64(p),
        rhs: c.value * sqrt_r,
        constant_used: c.value,
        slack: c.value * sqrt_r - to_f64(p),
        verdict: if upper_holds { Verdict::Pass } else { Verdict::Fail },
        source: Source::Exact,
    };
    let p_f = to_f64(p);
    let implied = if p_f > 0.0 { sqrt_r / p_f } else { f64::INFINITY };
    let lower = BoundReport {
        inequality: InequalityId::TwoSidedLower,
        n: n as u64,
        lhs: p_f,
        rhs: if implied.is_finite() { sqrt_r / implied } else { 0.0 },
        constant_used: implied,
        slack: 0.0,
        verdict: if p_f > 0.0 || r_f == 0.0 { Verdict::Pass } else { Verdict::Fail },
        source: Source::Exact,
    };
    Ok(TwoSidedReport {
        upper,
        lower,
        implied_lower_constant: implied,
    })
}

/// `max / min` of a set of implied constants: the boundedness proxy for
/// existential constants swept over a grid.
pub fn variation_ratio(values: &[f64]) -> f64 {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for &v in values {
        if v < min {
            min = v;
        }
        if v > max {
            max = v;
        }
    }
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo checks (tri-state)
// ---------------------------------------------------------------------------

/// `(low99, point, high99)` of the estimated curve at `k`, with `k = 0`
/// pinned to 1 and off-grid points interpolated geometrically.
fn mc_curve_bounds(est: &SurvivalEstimate, k: u64) -> Option<(f64, f64, f64)> {
    if k == 0 {
        return Some((1.0, 1.0, 1.0));
    }
    if let Some(j) = est.grid.iter().position(|&g| g == k) {
        let (lo, hi) = wilson_interval(est.surv_count[j], est.trials, Z99);
        return Some((lo, est.p_hat[j], hi));
    }
    let p = est.interpolated(k)?;
    // widen by the relative CI width of the bracketing grid points
    let j = est.grid.iter().position(|&g| g > k)?;
    let rel = |i: usize| -> (f64, f64) {
        let (lo, hi) = wilson_interval(est.surv_count[i], est.trials, Z99);
        let p0 = est.p_hat[i].max(f64::MIN_POSITIVE);
        (lo / p0, hi / p0)
    };
    let (rl0, rh0) = rel(j - 1);
    let (rl1, rh1) = rel(j);
    Some((p * rl0.min(rl1), p, p * rh0.max(rh1)))
}

/// Monte Carlo version of the upper convolution bound. Needs both the
/// strict and weak survival curves of the same spec. Conservative
/// tri-state with CI propagated into both sides: `Pass` when the product
/// of 99% upper limits stays below the rhs built from the *lower* end of
/// the moment-ratio interval, `Fail` when the lower products exceed the
/// rhs built from its upper end. Pass `(ratio, ratio)` when the moment
/// ratio is exact or closed-form.
pub fn check_upper_conv_mc(
    strict: &SurvivalEstimate,
    weak: &SurvivalEstimate,
    n: u64,
    moment_ratio_bounds: (f64, f64),
    c1: f64,
) -> Option<BoundReport> {
    let mut lhs = 0.0;
    let mut lhs_lo = 0.0;
    let mut lhs_hi = 0.0;
    for k in 0..=n {
        let (slo, sp, shi) = mc_curve_bounds(strict, k)?;
        let (wlo, wp, whi) = mc_curve_bounds(weak, n - k)?;
        lhs += sp * wp;
        lhs_lo += slo * wlo;
        lhs_hi += shi * whi;
    }
    let (ratio_lo, ratio_hi) = moment_ratio_bounds;
    let rhs = c1 * c1 * 0.5 * (ratio_lo + ratio_hi);
    let verdict = if lhs_hi <= c1 * c1 * ratio_lo {
        Verdict::Pass
    } else if lhs_lo > c1 * c1 * ratio_hi {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    };
    Some(BoundReport {
        inequality: InequalityId::UpperConv,
        n,
        lhs,
        rhs,
        constant_used: c1,
        slack: rhs - lhs,
        verdict,
        source: Source::Mc,
    })
}

/// Monte Carlo two-sided upper check at a grid point:
/// `p2_n <= c1 sqrt(E|S_{n+1}| / ((n+1) E|X_1|))` against the 99% interval.
pub fn check_two_sided_upper_mc(
    est: &SurvivalEstimate,
    n: u64,
    moment_ratio: f64,
    c1: f64,
) -> Option<BoundReport> {
    let j = est.grid.iter().position(|&g| g == n)?;
    let (lo, hi) = wilson_interval(est.surv_count[j], est.trials, Z99);
    let rhs = c1 * libm::sqrt(moment_ratio / (n as f64 + 1.0));
    let verdict = if hi <= rhs {
        Verdict::Pass
    } else if lo > rhs {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    };
    Some(BoundReport {
        inequality: InequalityId::TwoSidedUpper,
        n,
        lhs: est.p_hat[j],
        rhs,
        constant_used: c1,
        slack: rhs - est.p_hat[j],
        verdict,
        source: Source::Mc,
    })
}

/// Implied `c2(n)` from a Monte Carlo strict curve; the curve must cover
/// (or interpolate over) every `k <= n`.
pub fn implied_c2_mc(
    strict: &SurvivalEstimate,
    n: u64,
    moment_ratio: f64,
) -> Option<(BoundReport, f64)> {
    let mut conv = 0.0;
    for k in 0..=n {
        let (_, a, _) = mc_curve_bounds(strict, k)?;
        let (_, b, _) = mc_curve_bounds(strict, n - k)?;
        conv += a * b;
    }
    if conv <= 0.0 {
        return None;
    }
    let c2 = moment_ratio / conv;
    Some((
        BoundReport {
            inequality: InequalityId::LowerConv,
            n,
            lhs: conv,
            rhs: conv,
            constant_used: c2,
            slack: 0.0,
            verdict: Verdict::Pass,
            source: Source::Mc,
        },
        c2,
    ))
}

// ---------------------------------------------------------------------------
// exponent fitting
// ---------------------------------------------------------------------------

/// Inclusive fit window on `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n_min: u64,
    pub n_max: u64,
}

/// Default lower edge of fit windows; smaller `n` are pre-asymptotic.
pub const DEFAULT_FIT_MIN_N: u64 = 256;

/// Minimum number of grid points a fit will accept.
pub const MIN_FIT_POINTS: usize = 4;

/// Minimum surviving count per point; thinner tails are refused rather
/// than silently fitted.
pub const MIN_TAIL_COUNT: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitError {
    TooFewPoints { have: usize },
    TailTooThin { n: u64, count: u64 },
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::TooFewPoints { have } => write!(
                f,
                "need at least {MIN_FIT_POINTS} grid points in the window, have {have}"
            ),
            FitError::TailTooThin { n, count } => write!(
                f,
                "tail too thin at n = {n}: {count} survivors < {MIN_TAIL_COUNT}"
            ),
        }
    }
}

impl core::error::Error for FitError {}

/// Fitted decay exponent `gamma` in `p_n ~ n^{-gamma}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub gamma_hat: f64,
    pub stderr: f64,
    pub r_squared: f64,
    /// `(n, p_hat)` pairs the fit used.
    pub points: Vec<(u64, f64)>,
    pub theoretical_gamma: f64,
    pub window: Window,
}

/// Weighted least squares of `y` on `x`. Weights are inverse variances;
/// returns the slope, intercept, slope standard error, and weighted `R^2`.
pub fn fit_line(points: &[(f64, f64)], weights: &[f64]) -> (f64, f64, f64, f64) {
    let sw: f64 = weights.iter().sum();
    let xbar = points
        .iter()
        .zip(weights)
        .map(|((x, _), w)| w * x)
        .sum::<f64>()
        / sw;
    let ybar = points
        .iter()
        .zip(weights)
        .map(|((_, y), w)| w * y)
        .sum::<f64>()
        / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((x, y), w) in points.iter().zip(weights) {
        sxx += w * (x - xbar) * (x - xbar);
        sxy += w * (x - xbar) * (y - ybar);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let stderr = libm::sqrt(1.0 / sxx);
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for ((x, y), w) in points.iter().zip(weights) {
        let fitted = intercept + slope * x;
        ss_res += w * (y - fitted) * (y - fitted);
        ss_tot += w * (y - ybar) * (y - ybar);
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, stderr, r_squared)
}

/// Weighted log-log regression of a survival curve inside `window`:
/// `gamma_hat = -slope` of `ln p_hat` on `ln n`, weights from the
/// delta-method variance `(1-p)/(p * trials)` of `ln p_hat`.
pub fn fit_exponent(
    est: &SurvivalEstimate,
    window: Window,
    theoretical_gamma: f64,
) -> Result<ExponentFit, FitError> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut used = Vec::new();
    for (j, &n) in est.grid.iter().enumerate() {
        if n < window.n_min.max(1) || n > window.n_max {
            continue;
        }
        let count = est.surv_count[j];
        if count < MIN_TAIL_COUNT {
            return Err(FitError::TailTooThin { n, count });
        }
        let p = est.p_hat[j];
        // variance of ln p_hat; a fully-surviving point carries the weight
        // of half a count rather than an infinite one
        let p_var = p.min(1.0 - 0.5 / est.trials as f64);
        let var = (1.0 - p_var) / (p_var * est.trials as f64);
        points.push((libm::log(n as f64), libm::log(p)));
        weights.push(1.0 / var);
        used.push((n, p));
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints { have: points.len() });
    }
    let (slope, _intercept, stderr, r_squared) = fit_line(&points, &weights);
    Ok(ExponentFit {
        gamma_hat: -slope,
        stderr,
        r_squared,
        points: used,
        theoretical_gamma,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{ratio, DistributionSpec};
    use crate::mc::{Barrier, Target};
    use alloc::vec;

    fn rademacher_curves(n_max: usize) -> ExactCurves {
        let pmf = DistributionSpec::rademacher().as_lattice().unwrap();
        exact_curves(&pmf, n_max).unwrap()
    }

    fn asym_curves(n_max: usize) -> ExactCurves {
        let pmf = DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)])
            .unwrap()
            .as_lattice()
            .unwrap();
        exact_curves(&pmf, n_max).unwrap()
    }

    #[test]
    fn upper_conv_hand_value() {
        // lhs = 1*(1/2) + (1/2)(1/2) + (1/2)*1 = 5/4; rhs = 4 E|S_3| = 6
        let curves = rademacher_curves(4);
        let r = check_upper_conv(&curves, 2, C1Choice::Auto).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.constant_used, 2.0);
        assert!((r.lhs - 1.25).abs() < 1e-15);
        assert!((r.rhs - 6.0).abs() < 1e-15);
        // n = 0: lhs = 1 <= 4 E|S_1| = 4
        let r0 = check_upper_conv(&curves, 0, C1Choice::Auto).unwrap();
        assert!((r0.lhs - 1.0).abs() < 1e-15);
        assert!((r0.rhs - 4.0).abs() < 1e-15);
        assert_eq!(r0.verdict, Verdict::Pass);
    }

    #[test]
    fn upper_conv_exact_sweep() {
        let curves = rademacher_curves(60);
        for n in 0..=60 {
            let r = check_upper_conv(&curves, n, C1Choice::Auto).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "upper conv failed at n={n}");
            assert_eq!(r.constant_used, 2.0);
        }
        let curves = asym_curves(60);
        for n in 0..=60 {
            let r = check_upper_conv(&curves, n, C1Choice::Auto).unwrap();
            assert_eq!(r.verdict, Verdict::Pass);
            assert_eq!(r.constant_used, SIX_SQRT_30);
        }
    }

    #[test]
    fn lower_conv_hand_value() {
        let curves = rademacher_curves(4);
        // conv at n=2: 2*(1*(1/2)) + (1/2)^2 = 5/4; c2 = (3/2)/(5/4) = 6/5
        let (r, c2) = check_lower_conv(&curves, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((c2 - 1.2).abs() < 1e-15);
        // n = 0: conv = 1, c2 = E|S_1|/E|X_1| = 1
        let (_, c2) = check_lower_conv(&curves, 0).unwrap();
        assert!((c2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn c2_stays_flat_on_dyadic_grid() {
        let curves = rademacher_curves(64);
        let mut c2s = Vec::new();
        for n in [4u64, 8, 16, 32, 64] {
            let (_, c2) = check_lower_conv(&curves, n as usize).unwrap();
            c2s.push(c2);
        }
        assert!(variation_ratio(&c2s) < 3.0, "c2 varied by {:?}", c2s);
    }

    #[test]
    fn two_sided_hand_value() {
        let curves = rademacher_curves(4);
        // p2[3] = 3/8 <= 2 sqrt(E|S_4|/4) = 2 sqrt(3/8)
        let r = check_two_sided(&curves, 3, C1Choice::Auto).unwrap();
        assert_eq!(r.upper.verdict, Verdict::Pass);
        assert!((r.upper.lhs - 0.375).abs() < 1e-15);
        assert!((r.upper.rhs - 2.0 * libm::sqrt(0.375)).abs() < 1e-12);
        // n = 0: p_0 = 1 <= c1 since the ratio is E|S_1|/E|X_1| = 1
        let r0 = check_two_sided(&curves, 0, C1Choice::Auto).unwrap();
        assert_eq!(r0.upper.verdict, Verdict::Pass);
        assert!((r0.upper.rhs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_sided_upper_never_violated_exact() {
        for curves in [rademacher_curves(60), asym_curves(60)] {
            for n in 0..=60 {
                let r = check_two_sided(&curves, n, C1Choice::Auto).unwrap();
                assert_eq!(r.upper.verdict, Verdict::Pass, "violated at n={n}");
                assert!(r.implied_lower_constant.is_finite());
            }
        }
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        // synthetic exact n^{-1/4} input: the regression self-test
        let grid: Vec<u64> = (8..=20).map(|e| 1u64 << e).collect();
        let trials = 1_000_000u64;
        let surv: Vec<u64> = grid
            .iter()
            .map(|&n| (libm::pow(n as f64, -0.25) * trials as f64) as u64)
            .collect();
        let p_hat: Vec<f64> = surv.iter().map(|&c| c as f64 / trials as f64).collect();
        let est = SurvivalEstimate {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: grid.clone(),
            trials,
            surv_count: surv,
            p_hat: grid.iter().map(|&n| libm::pow(n as f64, -0.25)).collect(),
            ci_low: p_hat.clone(),
            ci_high: p_hat,
        };
        let fit = fit_exponent(
            &est,
            Window {
                n_min: 1 << 8,
                n_max: 1 << 20,
            },
            0.25,
        )
        .unwrap();
        assert!(
            (fit.gamma_hat - 0.25).abs() < 1e-6,
            "gamma_hat = {}",
            fit.gamma_hat
        );
        assert!(fit.r_squared > 1.0 - 1e-9);
    }

    #[test]
    fn fit_errors() {
        let est = SurvivalEstimate {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: vec![256, 512, 1024],
            trials: 1000,
            surv_count: vec![500, 400, 300],
            p_hat: vec![0.5, 0.4, 0.3],
            ci_low: vec![0.0; 3],
            ci_high: vec![1.0; 3],
        };
        assert!(matches!(
            fit_exponent(&est, Window { n_min: 1, n_max: 1 << 20 }, 0.25),
            Err(FitError::TooFewPoints { have: 3 })
        ));
        let thin = SurvivalEstimate {
            grid: vec![256, 512, 1024, 2048],
            surv_count: vec![500, 400, 300, 10],
            p_hat: vec![0.5, 0.4, 0.3, 0.01],
            ci_low: vec![0.0; 4],
            ci_high: vec![1.0; 4],
            ..est
        };
        assert!(matches!(
            fit_exponent(&thin, Window { n_min: 1, n_max: 1 << 20 }, 0.25),
            Err(FitError::TailTooThin { n: 2048, count: 10 })
        ));
    }

    #[test]
    fn tri_state_verdicts() {
        // 9500 survivors of 10k at n=8: p_hat ~ 0.95 with a tight CI
        let est = SurvivalEstimate {
            target: Target::S2,
            barrier: Barrier::Strict,
            threshold: 0.0,
            grid: vec![8],
            trials: 10_000,
            surv_count: vec![9_500],
            p_hat: vec![0.95],
            ci_low: vec![0.945],
            ci_high: vec![0.955],
        };
        // generous bound -> pass
        let r = check_two_sided_upper_mc(&est, 8, 9.0 * 1.0, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        // impossible bound -> fail
        let r = check_two_sided_upper_mc(&est, 8, 0.25 * 9.0 / 100.0, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // bound inside the CI -> indeterminate
        let rhs_inside = 0.95; // p ~ 0.95, CI ~ [0.944, 0.955]
        let moment_ratio = (rhs_inside / 2.0) * (rhs_inside / 2.0) * 9.0;
        let r = check_two_sided_upper_mc(&est, 8, moment_ratio, 2.0).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
        // off-grid n
        assert!(check_two_sided_upper_mc(&est, 9, 1.0, 2.0).is_none());
    }

    #[test]
    fn mc_upper_conv_on_rademacher() {
        let spec = DistributionSpec::rademacher();
        let grid: Vec<u64> = (1..=32).collect();
        let mk = |barrier| {
            let params = crate::mc::SurvivalParams {
                target: Target::S2,
                barrier,
                threshold: 0.0,
                grid: grid.clone(),
                trials: 50_000,
                master_seed: 77,
            };
            crate::mc::estimate_survival(&spec, &params, &crate::mc::McBudget::default()).unwrap()
        };
        let strict = mk(Barrier::Strict);
        let weak = mk(Barrier::Weak);
        let curves = rademacher_curves(33);
        for n in [8u64, 16, 32] {
            let ratio = to_f64(&curves.moment_ratio(n as usize));
            let r = check_upper_conv_mc(&strict, &weak, n, (ratio, ratio), 2.0).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "n={n}: {r:?}");
            // exact lhs within a few percent of the MC lhs
            let exact = check_upper_conv(&curves, n as usize, C1Choice::Two).unwrap();
            assert!((r.lhs - exact.lhs).abs() / exact.lhs < 0.05);
        }
        let (_, c2) = implied_c2_mc(&strict, 16, to_f64(&curves.moment_ratio(16))).unwrap();
        let (_, c2_exact) = check_lower_conv(&curves, 16).unwrap();
        assert!((c2 - c2_exact).abs() / c2_exact < 0.05);
    }

    #[test]
    fn c1_resolution() {
        assert_eq!(C1Choice::Auto.resolve(true).value, 2.0);
        assert_eq!(C1Choice::Auto.resolve(false).value, SIX_SQRT_30);
        assert_eq!(C1Choice::Two.resolve(false).value, 2.0);
        let sq = C1Choice::SixSqrt30.resolve(true).squared;
        assert_eq!(sq, BigRational::from(BigInt::from(1080)));
        assert!((SIX_SQRT_30 * SIX_SQRT_30 - 1080.0).abs() < 1e-9);
    }

    #[test]
    fn variation_ratio_basics() {
        assert!((variation_ratio(&[1.0, 2.0, 1.5]) - 2.0).abs() < 1e-15);
        assert_eq!(variation_ratio(&[0.0, 1.0]), f64::INFINITY);
    }
}
