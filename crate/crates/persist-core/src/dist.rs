//! Increment laws: declarative specification, validation, and sampling.
//!
//! Every law here has mean exactly zero. Lattice laws carry exact rational
//! probabilities on integer support and are the only families accepted by
//! the exact oracle; the continuous families are sampled by inverse CDF or
//! ziggurat and feed the Monte Carlo estimators.
//!
//! Randomness contract: the increment stream of a trial is a pure function
//! of `(spec, master_seed, trial_index)`. Each trial owns one ChaCha8 stream
//! selected by `trial_index`, so results are independent of how trials are
//! batched across workers.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, OpenClosed01, StandardNormal};

/// Validation failure when constructing a distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistError {
    /// A scalar parameter is outside its valid range.
    InvalidParam(&'static str),
    /// Support and probability lists differ in length or are empty.
    BadSupport(&'static str),
    /// Probabilities are negative or do not sum to exactly 1.
    BadProbs(&'static str),
    /// The exact mean of the pmf is not zero.
    NonzeroMean,
}

impl fmt::Display for DistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistError::InvalidParam(what) => write!(f, "invalid parameter: {what}"),
            DistError::BadSupport(what) => write!(f, "invalid support: {what}"),
            DistError::BadProbs(what) => write!(f, "invalid probabilities: {what}"),
            DistError::NonzeroMean => write!(f, "lattice pmf must have mean exactly zero"),
        }
    }
}

impl core::error::Error for DistError {}

/// Integer-support pmf with exact rational probabilities, mean exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePmf {
    support: Vec<i64>,
    probs: Vec<BigRational>,
    /// f64 cumulative probabilities used only for sampling; last entry is 1.
    cdf: Vec<f64>,
}

impl LatticePmf {
    /// Builds a pmf from `(support, probs)` pairs. The support is sorted
    /// internally. Rejects empty/duplicated support, negative probabilities,
    /// total mass != 1, and nonzero mean -- all checked in exact arithmetic.
    pub fn new(support: Vec<i64>, probs: Vec<BigRational>) -> Result<Self, DistError> {
        if support.is_empty() {
            return Err(DistError::BadSupport("empty support"));
        }
        if support.len() != probs.len() {
            return Err(DistError::BadSupport("support/probs length mismatch"));
        }
        let mut pairs: Vec<(i64, BigRational)> = support.into_iter().zip(probs).collect();
        pairs.sort_by_key(|(v, _)| *v);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(DistError::BadSupport("duplicate support point"));
        }
        let mut total = BigRational::zero();
        let mut mean = BigRational::zero();
        for (v, p) in &pairs {
            if p.is_negative() {
                return Err(DistError::BadProbs("negative probability"));
            }
            total += p;
            mean += p * BigRational::from(BigInt::from(*v));
        }
        if !total.is_one() {
            return Err(DistError::BadProbs("probabilities must sum to exactly 1"));
        }
        if !mean.is_zero() {
            return Err(DistError::NonzeroMean);
        }
        // zero mean plus any mass off zero forces mass on both sides
        if !pairs.iter().any(|(v, p)| *v < 0 && p.is_positive()) {
            return Err(DistError::BadSupport("pmf is degenerate at zero"));
        }
        let mut cdf = Vec::with_capacity(pairs.len());
        let mut acc = 0.0;
        for (_, p) in &pairs {
            acc += rational_to_f64(p);
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        let (support, probs) = pairs.into_iter().unzip();
        Ok(LatticePmf { support, probs, cdf })
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// True iff the pmf is invariant under negation of the support.
    pub fn is_symmetric(&self) -> bool {
        let n = self.support.len();
        (0..n).all(|i| {
            self.support[i] == -self.support[n - 1 - i] && self.probs[i] == self.probs[n - 1 - i]
        })
    }

    /// Exact `E|X|`.
    pub fn l1_moment(&self) -> BigRational {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(v, p)| p * BigRational::from(BigInt::from(v.abs())))
            .sum()
    }

    /// Common denominator `D` of the probabilities and the integer weights
    /// `c_i` with `probs[i] = c_i / D`. Path counting sums products of the
    /// `c_i`, with total mass `D^n` implied.
    pub fn integer_weights(&self) -> (Vec<num_bigint::BigUint>, num_bigint::BigUint) {
        use num_integer::Integer;
        let mut denom = BigInt::one();
        for p in &self.probs {
            denom = denom.lcm(p.denom());
        }
        let weights = self
            .probs
            .iter()
            .map(|p| {
                (p.numer() * &denom / p.denom())
                    .to_biguint()
                    .expect("probs >= 0")
            })
            .collect();
        (weights, denom.to_biguint().expect("positive denominator"))
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cdf.len() - 1)
    }
}

/// The increment law family.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// +1 or -1 with probability 1/2 each.
    Rademacher,
    /// Centered normal with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Density `exp(-|x|/scale) / (2 scale)`.
    Laplace { scale: f64 },
    /// Uniform on `[-halfwidth, halfwidth]`.
    UniformCentered { halfwidth: f64 },
    /// `Y - alpha/(alpha-1)` where `P(Y > y) = y^{-alpha}` for `y >= 1`,
    /// with `alpha` in (1, 2): zero mean, infinite variance.
    CenteredPareto { alpha: f64 },
    /// Arbitrary zero-mean pmf on integers.
    Lattice(LatticePmf),
}

/// A validated increment law plus the `E|X|=1` normalization switch.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    family: Family,
    normalize_l1: bool,
}

impl DistributionSpec {
    pub fn new(family: Family, normalize_l1: bool) -> Result<Self, DistError> {
        match &family {
            Family::Gaussian { sigma } => {
                if *sigma <= 0.0 || !sigma.is_finite() {
                    return Err(DistError::InvalidParam("gaussian sigma must be positive"));
                }
            }
            Family::Laplace { scale } => {
                if *scale <= 0.0 || !scale.is_finite() {
                    return Err(DistError::InvalidParam("laplace scale must be positive"));
                }
            }
            Family::UniformCentered { halfwidth } => {
                if *halfwidth <= 0.0 || !halfwidth.is_finite() {
                    return Err(DistError::InvalidParam("uniform halfwidth must be positive"));
                }
            }
            Family::CenteredPareto { alpha } => {
                if alpha.is_nan() || *alpha <= 1.0 || *alpha >= 2.0 {
                    return Err(DistError::InvalidParam("pareto alpha must lie in (1, 2)"));
                }
            }
            Family::Rademacher | Family::Lattice(_) => {}
        }
        Ok(DistributionSpec {
            family,
            normalize_l1,
        })
    }

    pub fn rademacher() -> Self {
        DistributionSpec {
            family: Family::Rademacher,
            normalize_l1: false,
        }
    }

    pub fn gaussian(sigma: f64) -> Result<Self, DistError> {
        Self::new(Family::Gaussian { sigma }, false)
    }

    pub fn laplace(scale: f64) -> Result<Self, DistError> {
        Self::new(Family::Laplace { scale }, false)
    }

    pub fn uniform_centered(halfwidth: f64) -> Result<Self, DistError> {
        Self::new(Family::UniformCentered { halfwidth }, false)
    }

    pub fn centered_pareto(alpha: f64) -> Result<Self, DistError> {
        Self::new(Family::CenteredPareto { alpha }, false)
    }

    pub fn lattice(support: Vec<i64>, probs: Vec<BigRational>) -> Result<Self, DistError> {
        Ok(DistributionSpec {
            family: Family::Lattice(LatticePmf::new(support, probs)?),
            normalize_l1: false,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn normalize_l1(&self) -> bool {
        self.normalize_l1
    }

    pub fn with_normalize_l1(mut self, on: bool) -> Self {
        self.normalize_l1 = on;
        self
    }

    /// The lattice pmf backing this spec, if it is a lattice family.
    /// Rademacher is reported as the two-point pmf on {-1, +1}.
    pub fn as_lattice(&self) -> Option<LatticePmf> {
        match &self.family {
            Family::Rademacher => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                Some(
                    LatticePmf::new(alloc::vec![-1, 1], alloc::vec![half.clone(), half])
                        .expect("valid"),
                )
            }
            Family::Lattice(pmf) => Some(pmf.clone()),
            _ => None,
        }
    }

    /// True for laws invariant under `X -> -X`.
    pub fn symmetric(&self) -> bool {
        match &self.family {
            Family::Rademacher
            | Family::Gaussian { .. }
            | Family::Laplace { .. }
            | Family::UniformCentered { .. } => true,
            Family::CenteredPareto { .. } => false,
            Family::Lattice(pmf) => pmf.is_symmetric(),
        }
    }

    /// True when the law has a density (no atoms), so strict and weak
    /// barriers coincide.
    pub fn has_density(&self) -> bool {
        !matches!(self.family, Family::Rademacher | Family::Lattice(_))
    }

    /// `E|X_1|` as a float, after normalization (so 1 when `normalize_l1`).
    pub fn l1_moment(&self) -> f64 {
        if self.normalize_l1 {
            return 1.0;
        }
        self.raw_l1_moment()
    }

    /// `E|X_1|` of the un-normalized family.
    pub fn raw_l1_moment(&self) -> f64 {
        match &self.family {
            Family::Rademacher => 1.0,
            // folded normal mean
            Family::Gaussian { sigma } => sigma * libm::sqrt(2.0 / core::f64::consts::PI),
            Family::Laplace { scale } => *scale,
            Family::UniformCentered { halfwidth } => halfwidth / 2.0,
            // With mu = alpha/(alpha-1) = EY:  E|Y - mu| = 2 mu^{1-alpha}/(alpha-1),
            // from E|X| = 2 E[X^+] and the tail integral of P(Y > y) above mu.
            Family::CenteredPareto { alpha } => {
                let mu = alpha / (alpha - 1.0);
                2.0 * libm::pow(mu, 1.0 - alpha) / (alpha - 1.0)
            }
            Family::Lattice(pmf) => rational_to_f64(&pmf.l1_moment()),
        }
    }

    /// Exact `E|X_1|` where one exists (lattice families).
    pub fn l1_moment_exact(&self) -> Option<BigRational> {
        if self.normalize_l1 {
            return self.as_lattice().map(|_| BigRational::one());
        }
        self.as_lattice().map(|pmf| pmf.l1_moment())
    }

    /// Closed-form `E|S_n|` where available (Gaussian: `S_n ~ N(0, n sigma^2)`).
    pub fn abs_moment_closed_form(&self, n: u64) -> Option<f64> {
        match &self.family {
            Family::Gaussian { sigma } => {
                let base = sigma * libm::sqrt(2.0 * n as f64 / core::f64::consts::PI);
                Some(if self.normalize_l1 {
                    base / self.raw_l1_moment()
                } else {
                    base
                })
            }
            _ => None,
        }
    }

    /// Prepares a sampler with all per-sample constants precomputed.
    pub fn sampler(&self) -> Sampler<'_> {
        let norm = if self.normalize_l1 {
            1.0 / self.raw_l1_moment()
        } else {
            1.0
        };
        let kind = match &self.family {
            Family::Rademacher => SamplerKind::Rademacher,
            Family::Gaussian { sigma } => SamplerKind::Gaussian { sigma: *sigma },
            Family::Laplace { scale } => SamplerKind::Laplace { scale: *scale },
            Family::UniformCentered { halfwidth } => SamplerKind::Uniform {
                halfwidth: *halfwidth,
            },
            Family::CenteredPareto { alpha } => SamplerKind::Pareto {
                neg_inv_alpha: -1.0 / alpha,
                shift: alpha / (alpha - 1.0),
            },
            Family::Lattice(pmf) => SamplerKind::Lattice(pmf),
        };
        Sampler { kind, norm }
    }
}

#[derive(Debug)]
enum SamplerKind<'a> {
    Rademacher,
    Gaussian { sigma: f64 },
    Laplace { scale: f64 },
    Uniform { halfwidth: f64 },
    Pareto { neg_inv_alpha: f64, shift: f64 },
    Lattice(&'a LatticePmf),
}

/// Draws increments for one spec. For lattice families the integer draw is
/// exposed separately so barrier comparisons can stay in integer arithmetic.
#[derive(Debug)]
pub struct Sampler<'a> {
    kind: SamplerKind<'a>,
    norm: f64,
}

impl Sampler<'_> {
    /// True when `sample_int` is available.
    pub fn is_lattice(&self) -> bool {
        matches!(self.kind, SamplerKind::Rademacher | SamplerKind::Lattice(_))
    }

    /// Integer increment for lattice families; consumes the same randomness
    /// as `sample` would, so float and integer paths see the same trajectory.
    pub fn sample_int<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match &self.kind {
            SamplerKind::Rademacher => {
                if rng.random::<bool>() {
                    1
                } else {
                    -1
                }
            }
            SamplerKind::Lattice(pmf) => pmf.support[pmf.sample_index(rng)],
            _ => unreachable!("sample_int requires a lattice family"),
        }
    }

    /// One increment, normalized if the spec requests `E|X|=1`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let raw = match &self.kind {
            SamplerKind::Rademacher | SamplerKind::Lattice(_) => self.sample_int(rng) as f64,
            SamplerKind::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            SamplerKind::Laplace { scale } => {
                // inverse CDF on the open interval to keep |X| finite
                let u: f64 = Open01.sample(rng);
                let centered = u - 0.5;
                let sign = if centered < 0.0 { -1.0 } else { 1.0 };
                -scale * sign * libm::log(1.0 - 2.0 * fabs(centered))
            }
            SamplerKind::Uniform { halfwidth } => {
                let u: f64 = rng.random();
                halfwidth * (2.0 * u - 1.0)
            }
            SamplerKind::Pareto {
                neg_inv_alpha,
                shift,
            } => {
                // exact inverse CDF: Y = U^{-1/alpha} on (0,1], so Y >= 1
                let u: f64 = OpenClosed01.sample(rng);
                libm::pow(u, *neg_inv_alpha) - shift
            }
        };
        raw * self.norm
    }
}

#[inline]
fn fabs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

/// The ChaCha8 stream owned by one trial: a pure function of
/// `(master_seed, trial_index)`, independent of batching.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// `X_1..X_length` for one trial, bit-identical for identical
/// `(spec, master_seed, trial_index)`.
pub fn sample_stream(
    spec: &DistributionSpec,
    master_seed: u64,
    trial_index: u64,
    length: usize,
) -> Vec<f64> {
    let sampler = spec.sampler();
    let mut rng = trial_rng(master_seed, trial_index);
    (0..length).map(|_| sampler.sample(&mut rng)).collect()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational `p/q`, as a convenience for building lattice pmfs.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rademacher_support() {
        let spec = DistributionSpec::rademacher();
        let sampler = spec.sampler();
        let mut rng = trial_rng(7, 0);
        for _ in 0..1000 {
            let x = sampler.sample(&mut rng);
            assert!(x == 1.0 || x == -1.0);
        }
    }

    #[test]
    fn pareto_matches_inverse_cdf() {
        // alpha = 3/2: X = U^{-2/3} - 3 since EY = alpha/(alpha-1) = 3
        let spec = DistributionSpec::centered_pareto(1.5).unwrap();
        let sampler = spec.sampler();
        let mut rng = trial_rng(42, 3);
        let mut rng_ref = trial_rng(42, 3);
        for _ in 0..1000 {
            let x = sampler.sample(&mut rng);
            let u: f64 = OpenClosed01.sample(&mut rng_ref);
            let expect = libm::pow(u, -1.0 / 1.5) - 3.0;
            assert_eq!(x, expect);
            assert!(x >= 1.0 - 3.0);
        }
    }

    #[test]
    fn lattice_mean_zero_enforced() {
        assert!(DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)]).is_ok());
        let err = DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(err.unwrap_err(), DistError::NonzeroMean);
    }

    #[test]
    fn lattice_rejects_bad_probs() {
        assert_eq!(
            DistributionSpec::lattice(vec![-1, 1], vec![ratio(1, 3), ratio(1, 3)]).unwrap_err(),
            DistError::BadProbs("probabilities must sum to exactly 1")
        );
        assert_eq!(
            DistributionSpec::lattice(vec![-1, 1], vec![ratio(-1, 2), ratio(3, 2)]).unwrap_err(),
            DistError::BadProbs("negative probability")
        );
        assert_eq!(
            DistributionSpec::lattice(vec![1, 1], vec![ratio(1, 2), ratio(1, 2)]).unwrap_err(),
            DistError::BadSupport("duplicate support point")
        );
    }

    #[test]
    fn invalid_scalar_params_rejected() {
        assert!(DistributionSpec::centered_pareto(1.0).is_err());
        assert!(DistributionSpec::centered_pareto(2.0).is_err());
        assert!(DistributionSpec::centered_pareto(f64::NAN).is_err());
        assert!(DistributionSpec::gaussian(0.0).is_err());
        assert!(DistributionSpec::laplace(-1.0).is_err());
        assert!(DistributionSpec::uniform_centered(0.0).is_err());
    }

    #[test]
    fn l1_moments() {
        assert_eq!(
            DistributionSpec::rademacher().l1_moment_exact().unwrap(),
            BigRational::one()
        );
        let g = DistributionSpec::gaussian(1.0).unwrap();
        assert!((g.l1_moment() - 0.7978845608028654).abs() < 1e-15);
        let lap = DistributionSpec::laplace(2.5).unwrap();
        assert_eq!(lap.l1_moment(), 2.5);
        let uni = DistributionSpec::uniform_centered(3.0).unwrap();
        assert_eq!(uni.l1_moment(), 1.5);
        let lat = DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(lat.l1_moment_exact().unwrap(), ratio(4, 3));
    }

    #[test]
    fn pareto_l1_matches_quadrature() {
        // E|X| = 2 * int_mu^inf y^{-alpha} dy; substitute y = mu e^s and use
        // Simpson on the smooth integrand as an independent check.
        for &alpha in &[1.2, 1.5, 4.0 / 3.0, 1.9] {
            let mu = alpha / (alpha - 1.0);
            let integrand = |s: f64| libm::pow(mu * libm::exp(s), -alpha) * mu * libm::exp(s);
            let (a, b, n) = (0.0f64, 200.0f64, 200_000usize);
            let h = (b - a) / n as f64;
            let mut acc = integrand(a) + integrand(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * integrand(a + i as f64 * h);
            }
            let tail = acc * h / 3.0;
            let expect = 2.0 * tail;
            let spec = DistributionSpec::centered_pareto(alpha).unwrap();
            assert!(
                (spec.l1_moment() - expect).abs() < 1e-10,
                "alpha={alpha}: closed form {} vs quadrature {}",
                spec.l1_moment(),
                expect
            );
        }
    }

    #[test]
    fn empirical_mean_and_l1_within_five_stderr() {
        let specs = [
            DistributionSpec::rademacher(),
            DistributionSpec::gaussian(1.0).unwrap(),
            DistributionSpec::laplace(1.0).unwrap(),
            DistributionSpec::uniform_centered(2.0).unwrap(),
            DistributionSpec::centered_pareto(1.5).unwrap(),
            DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)]).unwrap(),
        ];
        let n = 1_000_000usize;
        for (i, spec) in specs.iter().enumerate() {
            let sampler = spec.sampler();
            let mut rng = trial_rng(1234, i as u64);
            let (mut sum, mut sum_abs, mut sum_sq) = (0.0, 0.0, 0.0);
            for _ in 0..n {
                let x = sampler.sample(&mut rng);
                sum += x;
                sum_sq += x * x;
                sum_abs += fabs(x);
            }
            let nf = n as f64;
            let mean = sum / nf;
            let var = (sum_sq / nf - mean * mean).max(1e-30);
            let se = libm::sqrt(var / nf);
            // Pareto alpha=1.5 has infinite variance; the sample stderr is
            // still a usable (if noisy) scale for a 5-sigma sanity check.
            assert!(fabs(mean) < 5.0 * se, "spec {i}: mean {mean} vs se {se}");

            let mean_abs = sum_abs / nf;
            let var_abs = (sum_sq / nf - mean_abs * mean_abs).max(1e-30);
            let se_abs = libm::sqrt(var_abs / nf);
            assert!(
                fabs(mean_abs - spec.l1_moment()) < 5.0 * se_abs,
                "spec {i}: |X| mean {mean_abs} vs {}",
                spec.l1_moment()
            );
        }
    }

    #[test]
    fn pareto_tail_index_recovered() {
        // P(X > x) (x + mu)^alpha -> 1 for large x
        let alpha = 1.5;
        let mu = 3.0;
        let spec = DistributionSpec::centered_pareto(alpha).unwrap();
        let sampler = spec.sampler();
        let mut rng = trial_rng(99, 0);
        let n = 2_000_000usize;
        let samples: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        for &x in &[2.0, 8.0, 32.0, 128.0] {
            let count = samples.iter().filter(|&&s| s > x).count();
            let p_hat = count as f64 / n as f64;
            let target = libm::pow(x + mu, -alpha);
            let se = libm::sqrt(target * (1.0 - target) / n as f64);
            assert!(
                fabs(p_hat - target) < 6.0 * se,
                "x={x}: tail {p_hat} vs {target} (se {se})"
            );
        }
    }

    #[test]
    fn streams_reproducible_and_trial_dependent() {
        let spec = DistributionSpec::gaussian(2.0).unwrap();
        let a = sample_stream(&spec, 11, 5, 64);
        let b = sample_stream(&spec, 11, 5, 64);
        assert_eq!(a, b);
        let c = sample_stream(&spec, 11, 6, 64);
        assert_ne!(a, c);
        let d = sample_stream(&spec, 12, 5, 64);
        assert_ne!(a, d);
    }

    #[test]
    fn symmetry_predicate() {
        assert!(DistributionSpec::rademacher().symmetric());
        assert!(DistributionSpec::gaussian(1.0).unwrap().symmetric());
        assert!(DistributionSpec::laplace(1.0).unwrap().symmetric());
        assert!(DistributionSpec::uniform_centered(1.0).unwrap().symmetric());
        assert!(!DistributionSpec::centered_pareto(1.5).unwrap().symmetric());
        let sym = DistributionSpec::lattice(
            vec![-2, 0, 2],
            vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)],
        )
        .unwrap();
        assert!(sym.symmetric());
        let asym = DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert!(!asym.symmetric());
    }

    #[test]
    fn normalized_sampling_scales_by_l1() {
        let spec = DistributionSpec::lattice(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)])
            .unwrap()
            .with_normalize_l1(true);
        assert_eq!(spec.l1_moment(), 1.0);
        let raw = spec.clone().with_normalize_l1(false);
        let a = sample_stream(&spec, 3, 0, 32);
        let b = sample_stream(&raw, 3, 0, 32);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y * 3.0 / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn integer_weights_common_denominator() {
        let pmf = LatticePmf::new(vec![-2, 1], vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let (w, d) = pmf.integer_weights();
        assert_eq!(d, num_bigint::BigUint::from(3u32));
        assert_eq!(
            w,
            vec![num_bigint::BigUint::from(1u32), num_bigint::BigUint::from(2u32)]
        );
    }
}
