//! Exact persistence probabilities for lattice increments.
//!
//! All computations here are in exact integer/rational arithmetic. A lattice
//! pmf with probabilities `c_i / D` assigns each length-`n` increment tuple
//! the weight `prod c_i`, so every probability is a sum of path weights over
//! the implied total mass `D^n`. Two engines produce the tables:
//!
//! * [`brute_force_table`]: enumerates all `s^n` tuples. Slow, transparent,
//!   and the ground-truth oracle for everything else.
//! * [`dp_table`]: dynamic programming over the reachable states, `S_k` for
//!   the walk tables and `(S_k, S2_k)` for the iterated-sum tables, with
//!   states past the barrier pruned as absorbing failures. Strict (`< 0`)
//!   and weak (`<= 0`) barriers are advanced in the same sweep.
//!
//! Weights are `u128` when `D^n_max` fits, otherwise heap big integers; the
//! switch is automatic and exactness is unaffected.
//!
//! Also here: the double-factorial ratio `(2n-1)!!/(2n)!!`, the convolution
//! identity `sum_k p1_k * p1bar_{n-k} = 1` (split at the first argmax of the
//! walk), the exact law of that argmax, and exact `E|S_n|` by convolution.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dist::LatticePmf;

/// Enumeration guard for [`brute_force_table`] and [`argmax_law`]:
/// at most `s^n <= 10^8` paths.
pub const MAX_BRUTE_FORCE_PATHS: u128 = 100_000_000;

/// State-space guard for the 2-D dynamic program, in grid cells
/// `(range of S) x (range of S2)`. 4e6 cells admit Rademacher up to
/// `n_max ~ 155` and the {-2,1} law up to `n_max ~ 110`.
pub const MAX_DP_CELLS: u128 = 4_000_000;

/// State-space guard for the 1-D sweeps (walk tables, moment curves),
/// whose state is `S_k` alone and therefore reaches far larger `n_max`.
pub const MAX_WALK_CELLS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// `s^n` exceeds [`MAX_BRUTE_FORCE_PATHS`].
    TooManyPaths { support: usize, n_max: usize },
    /// The `(S, S2)` grid exceeds the cell limit.
    StateSpaceTooLarge { cells: u128, limit: u128 },
    /// Requested index exceeds the table's `n_max`.
    OutOfRange { n: usize, n_max: usize },
    /// The common denominator of the pmf does not fit in 64 bits.
    DenominatorTooLarge,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::TooManyPaths { support, n_max } => write!(
                f,
                "enumeration of {support}^{n_max} paths exceeds the {MAX_BRUTE_FORCE_PATHS} path guard"
            ),
            ExactError::StateSpaceTooLarge { cells, limit } => write!(
                f,
                "dp state space of {cells} cells exceeds the {limit} cell guard"
            ),
            ExactError::OutOfRange { n, n_max } => {
                write!(f, "n = {n} out of range of table with n_max = {n_max}")
            }
            ExactError::DenominatorTooLarge => {
                write!(f, "pmf denominator exceeds 64 bits")
            }
        }
    }
}

impl core::error::Error for ExactError {}

/// Exact persistence probabilities `p1`, `p1bar`, `p2`, `p2bar` for
/// `n = 0..=n_max`, with the convention `p*[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceTable {
    pub pmf: LatticePmf,
    pub n_max: usize,
    pub p1: Vec<BigRational>,
    pub p1bar: Vec<BigRational>,
    pub p2: Vec<BigRational>,
    pub p2bar: Vec<BigRational>,
}

impl PersistenceTable {
    /// Structural invariants: each sequence starts at 1, lies in [0,1],
    /// is non-increasing, and the strict variant never exceeds the weak one.
    pub fn validate(&self) -> Result<(), &'static str> {
        for seq in [&self.p1, &self.p1bar, &self.p2, &self.p2bar] {
            if seq.len() != self.n_max + 1 {
                return Err("sequence length mismatch");
            }
            if !seq[0].is_one() {
                return Err("p[0] must be 1");
            }
            for w in seq.windows(2) {
                if w[1] > w[0] {
                    return Err("sequence must be non-increasing");
                }
            }
            if seq
                .iter()
                .any(|p| p < &BigRational::zero() || p > &BigRational::one())
            {
                return Err("probability outside [0,1]");
            }
        }
        for n in 0..=self.n_max {
            if self.p1[n] > self.p1bar[n] || self.p2[n] > self.p2bar[n] {
                return Err("strict probability exceeds weak probability");
            }
        }
        Ok(())
    }
}

/// Exact law of the first argmax location of `(S_0, ..., S_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgmaxLaw {
    pub n: usize,
    /// `mass[k] = P(first argmax at k)`, `k = 0..=n`; sums to exactly 1.
    pub mass: Vec<BigRational>,
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

/// Path-count weight: `u128` on the fast path, `BigUint` when `D^n` is big.
trait Weight: Clone + PartialEq {
    fn w_zero() -> Self;
    fn w_one() -> Self;
    fn w_is_zero(&self) -> bool;
    fn set_zero(&mut self);
    /// `acc += self * c`, with `scratch` reused across calls to avoid
    /// reallocating temporaries on the big-integer path.
    fn mul_add_into(&self, c: u64, acc: &mut Self, scratch: &mut Self);
    fn add_assign_ref(&mut self, other: &Self);
    fn to_biguint(&self) -> BigUint;
}

impl Weight for u128 {
    fn w_zero() -> Self {
        0
    }
    fn w_one() -> Self {
        1
    }
    fn w_is_zero(&self) -> bool {
        *self == 0
    }
    fn set_zero(&mut self) {
        *self = 0;
    }
    fn mul_add_into(&self, c: u64, acc: &mut Self, _scratch: &mut Self) {
        *acc += self * c as u128;
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Weight for BigUint {
    fn w_zero() -> Self {
        BigUint::zero()
    }
    fn w_one() -> Self {
        BigUint::one()
    }
    fn w_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn set_zero(&mut self) {
        *self = BigUint::zero();
    }
    fn mul_add_into(&self, c: u64, acc: &mut Self, scratch: &mut Self) {
        scratch.clone_from(self);
        *scratch *= c;
        *acc += &*scratch;
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

struct PmfInts {
    support: Vec<i64>,
    /// numerators of the probabilities over the common denominator
    counts: Vec<u64>,
    denom: u64,
    denom_big: BigUint,
}

fn pmf_ints(pmf: &LatticePmf) -> Result<PmfInts, ExactError> {
    let (weights, denom_big) = pmf.integer_weights();
    let denom = u64::try_from(&denom_big).map_err(|_| ExactError::DenominatorTooLarge)?;
    let counts = weights
        .iter()
        .map(|w| u64::try_from(w).expect("count <= denom"))
        .collect();
    Ok(PmfInts {
        support: pmf.support().to_vec(),
        counts,
        denom,
        denom_big,
    })
}

fn guard_walk_cells(pmf: &LatticePmf, n_max: usize) -> Result<(), ExactError> {
    let min_x = *pmf.support().first().unwrap() as i128;
    let max_x = *pmf.support().last().unwrap() as i128;
    let cells = ((max_x - min_x) as u128) * n_max as u128 + 1;
    if cells > MAX_WALK_CELLS {
        return Err(ExactError::StateSpaceTooLarge {
            cells,
            limit: MAX_WALK_CELLS,
        });
    }
    Ok(())
}

/// True when every path weight through step `n_max` fits in a `u128`.
fn fits_u128(denom_big: &BigUint, n_max: usize) -> bool {
    denom_big.pow(n_max as u32) <= BigUint::from(u128::MAX)
}

fn ratio_of(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

// ---------------------------------------------------------------------------
// dynamic programming
// ---------------------------------------------------------------------------

/// Strict and weak walk tables `p1`, `p1bar` by a 1-D sweep over `S_k`.
fn dp_walk<W: Weight>(p: &PmfInts, n_max: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let min_x = *p.support.first().unwrap();
    // survival states: S in [n*min_x, 0]; anything above the barrier is an
    // absorbing failure and is simply not stored
    let lo = min_x * n_max as i64;
    let width = (-lo + 1) as usize;
    let idx = |s: i64| (s - lo) as usize;

    let mut strict: Vec<W> = vec![W::w_zero(); width];
    let mut weak: Vec<W> = vec![W::w_zero(); width];
    let mut strict_next: Vec<W> = vec![W::w_zero(); width];
    let mut weak_next: Vec<W> = vec![W::w_zero(); width];
    let mut scratch = W::w_zero();
    strict[idx(0)] = W::w_one();
    weak[idx(0)] = W::w_one();

    let mut p1 = vec![BigRational::one()];
    let mut p1bar = vec![BigRational::one()];
    let mut denom_pow = BigUint::one();

    for k in 1..=n_max {
        denom_pow *= p.denom;
        let (mut sum_strict, mut sum_weak) = (W::w_zero(), W::w_zero());
        for (src, dst, max_s, sum) in [
            (&strict, &mut strict_next, -1i64, &mut sum_strict),
            (&weak, &mut weak_next, 0i64, &mut sum_weak),
        ] {
            for s in (min_x * (k as i64 - 1))..=0 {
                let w = &src[idx(s)];
                if w.w_is_zero() {
                    continue;
                }
                for (x, c) in p.support.iter().zip(&p.counts) {
                    let child = s + x;
                    if child <= max_s {
                        w.mul_add_into(*c, &mut dst[idx(child)], &mut scratch);
                    }
                }
            }
            for s in (min_x * k as i64)..=max_s {
                sum.add_assign_ref(&dst[idx(s)]);
            }
        }
        p1.push(ratio_of(sum_strict.to_biguint(), denom_pow.clone()));
        p1bar.push(ratio_of(sum_weak.to_biguint(), denom_pow.clone()));
        core::mem::swap(&mut strict, &mut strict_next);
        core::mem::swap(&mut weak, &mut weak_next);
        for v in strict_next.iter_mut().chain(weak_next.iter_mut()) {
            if !v.w_is_zero() {
                v.set_zero();
            }
        }
    }
    (p1, p1bar)
}

/// Strict and weak iterated-sum tables `p2`, `p2bar` by a 2-D sweep over
/// `(S_k, S2_k)` with `S2_{k+1} = S2_k + S_{k+1}`.
fn dp_iterated<W: Weight>(p: &PmfInts, n_max: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let min_x = *p.support.first().unwrap();
    let max_x = *p.support.last().unwrap();
    let n = n_max as i64;
    let tri = n * (n + 1) / 2;
    let s_lo = min_x * n;
    let s_width = ((max_x - min_x) * n + 1) as usize;
    let q_lo = min_x * tri;
    // q = 0 is reachable only as the k = 0 start state
    let q_width = (-q_lo + 1) as usize;
    let cell = |s: i64, q: i64| (s - s_lo) as usize * q_width + (q - q_lo) as usize;

    let mut strict: Vec<W> = vec![W::w_zero(); s_width * q_width];
    let mut weak: Vec<W> = vec![W::w_zero(); s_width * q_width];
    let mut strict_next: Vec<W> = vec![W::w_zero(); s_width * q_width];
    let mut weak_next: Vec<W> = vec![W::w_zero(); s_width * q_width];
    let mut scratch = W::w_zero();
    strict[cell(0, 0)] = W::w_one();
    weak[cell(0, 0)] = W::w_one();

    let mut p2 = vec![BigRational::one()];
    let mut p2bar = vec![BigRational::one()];
    let mut denom_pow = BigUint::one();

    for k in 1..=n_max {
        denom_pow *= p.denom;
        let km1 = k as i64 - 1;
        let tri_prev = km1 * (km1 + 1) / 2;
        let tri_k = k as i64 * (k as i64 + 1) / 2;
        let (mut sum_strict, mut sum_weak) = (W::w_zero(), W::w_zero());
        for (src, dst, max_q, sum) in [
            (&strict, &mut strict_next, -1i64, &mut sum_strict),
            (&weak, &mut weak_next, 0i64, &mut sum_weak),
        ] {
            for s in (min_x * km1)..=(max_x * km1) {
                let row = (s - s_lo) as usize * q_width;
                for q in (min_x * tri_prev)..=0 {
                    let w = &src[row + (q - q_lo) as usize];
                    if w.w_is_zero() {
                        continue;
                    }
                    for (x, c) in p.support.iter().zip(&p.counts) {
                        let child_s = s + x;
                        let child_q = q + child_s;
                        if child_q <= max_q {
                            w.mul_add_into(*c, &mut dst[cell(child_s, child_q)], &mut scratch);
                        }
                    }
                }
            }
            for s in (min_x * k as i64)..=(max_x * k as i64) {
                let row = (s - s_lo) as usize * q_width;
                for q in (min_x * tri_k)..=max_q {
                    sum.add_assign_ref(&dst[row + (q - q_lo) as usize]);
                }
            }
        }
        p2.push(ratio_of(sum_strict.to_biguint(), denom_pow.clone()));
        p2bar.push(ratio_of(sum_weak.to_biguint(), denom_pow.clone()));
        core::mem::swap(&mut strict, &mut strict_next);
        core::mem::swap(&mut weak, &mut weak_next);
        for v in strict_next.iter_mut().chain(weak_next.iter_mut()) {
            if !v.w_is_zero() {
                v.set_zero();
            }
        }
    }
    (p2, p2bar)
}

/// Cell count of the 2-D grid, used by the memory guard.
fn iterated_cells(pmf: &LatticePmf, n_max: usize) -> u128 {
    let min_x = *pmf.support().first().unwrap() as i128;
    let max_x = *pmf.support().last().unwrap() as i128;
    let n = n_max as i128;
    let tri = n * (n + 1) / 2;
    let s_width = ((max_x - min_x) * n + 1) as u128;
    let q_width = ((-min_x) * tri + 1) as u128;
    s_width * q_width
}

/// All four persistence sequences for `n = 0..=n_max`, by dynamic
/// programming, with the default state-space guard [`MAX_DP_CELLS`].
pub fn dp_table(pmf: &LatticePmf, n_max: usize) -> Result<PersistenceTable, ExactError> {
    dp_table_with_limit(pmf, n_max, MAX_DP_CELLS)
}

/// [`dp_table`] with an explicit cell limit for callers that know their
/// memory budget.
pub fn dp_table_with_limit(
    pmf: &LatticePmf,
    n_max: usize,
    max_cells: u128,
) -> Result<PersistenceTable, ExactError> {
    let cells = iterated_cells(pmf, n_max);
    if cells > max_cells {
        return Err(ExactError::StateSpaceTooLarge {
            cells,
            limit: max_cells,
        });
    }
    let p = pmf_ints(pmf)?;
    let ((p1, p1bar), (p2, p2bar)) = if fits_u128(&p.denom_big, n_max) {
        (dp_walk::<u128>(&p, n_max), dp_iterated::<u128>(&p, n_max))
    } else {
        (
            dp_walk::<BigUint>(&p, n_max),
            dp_iterated::<BigUint>(&p, n_max),
        )
    };
    Ok(PersistenceTable {
        pmf: pmf.clone(),
        n_max,
        p1,
        p1bar,
        p2,
        p2bar,
    })
}

/// Walk tables only (`p1`, `p1bar`), which need just the 1-D state `S_k`
/// and so reach far larger `n_max` than the full table.
pub fn dp_walk_tables(
    pmf: &LatticePmf,
    n_max: usize,
) -> Result<(Vec<BigRational>, Vec<BigRational>), ExactError> {
    guard_walk_cells(pmf, n_max)?;
    let p = pmf_ints(pmf)?;
    Ok(if fits_u128(&p.denom_big, n_max) {
        dp_walk::<u128>(&p, n_max)
    } else {
        dp_walk::<BigUint>(&p, n_max)
    })
}

// ---------------------------------------------------------------------------
// brute force
// ---------------------------------------------------------------------------

fn guard_paths(pmf: &LatticePmf, n_max: usize) -> Result<(), ExactError> {
    let s = pmf.support().len() as u128;
    let mut total: u128 = 1;
    for _ in 0..n_max {
        total = match total.checked_mul(s) {
            Some(t) if t <= MAX_BRUTE_FORCE_PATHS => t,
            _ => {
                return Err(ExactError::TooManyPaths {
                    support: pmf.support().len(),
                    n_max,
                })
            }
        };
    }
    Ok(())
}

/// Visits every increment tuple of length `n_max`. `visit` receives the
/// prefix sums `S_1..S_n`, the iterated sums `S2_1..S2_n`, and the exact
/// path weight (numerator over `D^n_max`).
fn enumerate_paths<F: FnMut(&[i64], &[i64], &BigUint)>(p: &PmfInts, n_max: usize, mut visit: F) {
    let s = p.support.len();
    let mut digits = vec![0usize; n_max];
    // prefix arrays; entry j covers steps 1..=j
    let mut sums = vec![0i64; n_max + 1];
    let mut iter_sums = vec![0i64; n_max + 1];
    let mut weights = vec![BigUint::one(); n_max + 1];
    let recompute = |from: usize,
                     digits: &[usize],
                     sums: &mut Vec<i64>,
                     iter_sums: &mut Vec<i64>,
                     weights: &mut Vec<BigUint>| {
        for j in from..=n_max {
            let d = digits[j - 1];
            sums[j] = sums[j - 1] + p.support[d];
            iter_sums[j] = iter_sums[j - 1] + sums[j];
            weights[j] = &weights[j - 1] * p.counts[d];
        }
    };
    recompute(1, &digits, &mut sums, &mut iter_sums, &mut weights);
    loop {
        visit(&sums[1..], &iter_sums[1..], &weights[n_max]);
        // odometer increment; recompute prefixes from the changed digit on
        let mut j = n_max;
        loop {
            if j == 0 {
                return;
            }
            digits[j - 1] += 1;
            if digits[j - 1] < s {
                break;
            }
            digits[j - 1] = 0;
            j -= 1;
        }
        recompute(j, &digits, &mut sums, &mut iter_sums, &mut weights);
    }
}

/// Ground-truth table by full enumeration of all `s^n_max` increment tuples.
pub fn brute_force_table(pmf: &LatticePmf, n_max: usize) -> Result<PersistenceTable, ExactError> {
    guard_paths(pmf, n_max)?;
    let p = pmf_ints(pmf)?;
    // first-violation histograms; index n_max+1 collects full survivors
    let mut hist = vec![vec![BigUint::zero(); n_max + 2]; 4];
    enumerate_paths(&p, n_max, |sums, iter_sums, w| {
        let first = |vals: &[i64], weak: bool| -> usize {
            vals.iter()
                .position(|&v| if weak { v > 0 } else { v >= 0 })
                .map(|i| i + 1)
                .unwrap_or(n_max + 1)
        };
        hist[0][first(sums, false)] += w;
        hist[1][first(sums, true)] += w;
        hist[2][first(iter_sums, false)] += w;
        hist[3][first(iter_sums, true)] += w;
    });
    let denom_total = p.denom_big.pow(n_max as u32);
    let table_of = |h: &[BigUint]| -> Vec<BigRational> {
        (0..=n_max)
            .map(|n| {
                let survivors: BigUint = h[n + 1..].iter().sum();
                ratio_of(survivors, denom_total.clone())
            })
            .collect()
    };
    Ok(PersistenceTable {
        pmf: pmf.clone(),
        n_max,
        p1: table_of(&hist[0]),
        p1bar: table_of(&hist[1]),
        p2: table_of(&hist[2]),
        p2bar: table_of(&hist[3]),
    })
}

/// Exact law of the first argmax `min { l >= 0 : S_l = max(S_0..S_n) }`,
/// by full enumeration.
pub fn argmax_law(pmf: &LatticePmf, n: usize) -> Result<ArgmaxLaw, ExactError> {
    guard_paths(pmf, n)?;
    let p = pmf_ints(pmf)?;
    let mut mass_num = vec![BigUint::zero(); n + 1];
    enumerate_paths(&p, n, |sums, _, w| {
        let mut best = 0i64;
        let mut arg = 0usize;
        for (j, &s) in sums.iter().enumerate() {
            if s > best {
                best = s;
                arg = j + 1;
            }
        }
        mass_num[arg] += w;
    });
    let denom_total = p.denom_big.pow(n as u32);
    Ok(ArgmaxLaw {
        n,
        mass: mass_num
            .into_iter()
            .map(|m| ratio_of(m, denom_total.clone()))
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// closed forms and identities
// ---------------------------------------------------------------------------

/// `(2n-1)!! / (2n)!!` in exact arithmetic; 1 at `n = 0`. Equals
/// `binomial(2n, n) / 4^n`, the walk persistence of any symmetric density.
pub fn double_factorial_p1(n: usize) -> BigRational {
    let mut r = BigRational::one();
    for k in 1..=n {
        r *= BigRational::new(BigInt::from(2 * k as u64 - 1), BigInt::from(2 * k as u64));
    }
    r
}

/// Residual of the argmax-split identity at order `n` from bare walk
/// sequences: `sum_{k=0}^n p1[k] * p1bar[n-k] - 1`, exactly. Zero for
/// every symmetric law.
pub fn identity_residual_parts(
    p1: &[BigRational],
    p1bar: &[BigRational],
    n: usize,
) -> Result<BigRational, ExactError> {
    if n >= p1.len() || n >= p1bar.len() {
        return Err(ExactError::OutOfRange {
            n,
            n_max: p1.len().min(p1bar.len()).saturating_sub(1),
        });
    }
    let mut acc = BigRational::zero();
    for k in 0..=n {
        acc += &p1[k] * &p1bar[n - k];
    }
    Ok(acc - BigRational::one())
}

/// [`identity_residual_parts`] over a full table.
pub fn identity_residual(table: &PersistenceTable, n: usize) -> Result<BigRational, ExactError> {
    identity_residual_parts(&table.p1, &table.p1bar, n)
}

/// Partial sum of the generating-function form of the identity:
/// `(1-x) * sum_{n=0}^{n_max} (sum_k p1[k] p1bar[n-k]) x^n` at rational
/// `x` in `[0, 1)`. For symmetric laws this equals `1 - x^{n_max+1}`,
/// so it converges to 1 as the table grows.
pub fn gf_partial_sum_parts(
    p1: &[BigRational],
    p1bar: &[BigRational],
    x: &BigRational,
) -> BigRational {
    let n_max = p1.len().min(p1bar.len()).saturating_sub(1);
    let mut total = BigRational::zero();
    let mut x_pow = BigRational::one();
    for n in 0..=n_max {
        let mut conv = BigRational::zero();
        for k in 0..=n {
            conv += &p1[k] * &p1bar[n - k];
        }
        total += conv * &x_pow;
        x_pow *= x;
    }
    (BigRational::one() - x) * total
}

/// [`gf_partial_sum_parts`] over a full table.
pub fn gf_partial_sum(table: &PersistenceTable, x: &BigRational) -> BigRational {
    gf_partial_sum_parts(&table.p1, &table.p1bar, x)
}

/// Exact `E|S_m|` for every `m = 0..=n_max`, by iterated convolution of
/// the increment pmf.
pub fn abs_moment_curve(pmf: &LatticePmf, n_max: usize) -> Result<Vec<BigRational>, ExactError> {
    guard_walk_cells(pmf, n_max)?;
    let p = pmf_ints(pmf)?;
    if fits_u128(&p.denom_big, n_max) {
        Ok(abs_moments::<u128>(&p, n_max))
    } else {
        Ok(abs_moments::<BigUint>(&p, n_max))
    }
}

/// Exact `E|S_n|`.
pub fn exact_abs_moment(pmf: &LatticePmf, n: usize) -> Result<BigRational, ExactError> {
    Ok(abs_moment_curve(pmf, n)?.pop().expect("curve nonempty"))
}

fn abs_moments<W: Weight>(p: &PmfInts, n_max: usize) -> Vec<BigRational> {
    let min_x = *p.support.first().unwrap();
    let max_x = *p.support.last().unwrap();
    let lo = min_x * n_max as i64;
    let width = ((max_x - min_x) * n_max as i64 + 1) as usize;
    let idx = |s: i64| (s - lo) as usize;

    let mut cur: Vec<W> = vec![W::w_zero(); width];
    let mut next: Vec<W> = vec![W::w_zero(); width];
    let mut scratch = W::w_zero();
    cur[idx(0)] = W::w_one();

    let mut out = vec![BigRational::zero()];
    let mut denom_pow = BigUint::one();
    for k in 1..=n_max {
        denom_pow *= p.denom;
        let km1 = k as i64 - 1;
        for s in (min_x * km1)..=(max_x * km1) {
            let w = &cur[idx(s)];
            if w.w_is_zero() {
                continue;
            }
            for (x, c) in p.support.iter().zip(&p.counts) {
                w.mul_add_into(*c, &mut next[idx(s + x)], &mut scratch);
            }
        }
        // E|S_k| = sum_s |s| weight(s) / D^k
        let mut numer = BigUint::zero();
        for s in (min_x * k as i64)..=(max_x * k as i64) {
            let w = &next[idx(s)];
            if !w.w_is_zero() {
                numer += w.to_biguint() * BigUint::from(s.unsigned_abs());
            }
        }
        out.push(ratio_of(numer, denom_pow.clone()));
        core::mem::swap(&mut cur, &mut next);
        for v in next.iter_mut() {
            if !v.w_is_zero() {
                v.set_zero();
            }
        }
    }
    out
}
