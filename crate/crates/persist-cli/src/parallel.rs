//! Rayon drivers for the Monte Carlo estimators.
//!
//! Work is split along the canonical batch decomposition from
//! `persist_core::mc`, so results are bit-identical to the serial
//! estimators regardless of worker count or scheduling: survival
//! histograms are integer-valued (merge order immaterial), and float
//! moment partials are collected per batch and merged in batch order.

use rayon::prelude::*;

use persist_core::dist::DistributionSpec;
use persist_core::gauss::{self, GaussError, SinaiParams};
use persist_core::mc::{
    self, AbsMomentEstimate, FirstPassageHist, McBudget, McError, MomentAccum, MomentParams,
    SurvivalEstimate, SurvivalParams,
};

/// Parallel version of [`mc::estimate_survival`].
pub fn estimate_survival(
    spec: &DistributionSpec,
    params: &SurvivalParams,
    budget: &McBudget,
) -> Result<SurvivalEstimate, McError> {
    let kernel = mc::survival_kernel(spec, params, budget)?;
    let batches: Vec<(u64, u64)> = mc::batch_ranges(params.trials).collect();
    let hist = batches
        .into_par_iter()
        .map(|(lo, hi)| mc::survival_batch(&kernel, lo, hi))
        .reduce(
            || FirstPassageHist::new(kernel.horizon()),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    Ok(mc::finish_survival(params, &hist))
}

/// Parallel version of [`mc::estimate_abs_moment`]. Batch partials are
/// merged in batch order to keep float accumulation reproducible.
pub fn estimate_abs_moment(
    spec: &DistributionSpec,
    params: &MomentParams,
    budget: &McBudget,
) -> Result<AbsMomentEstimate, McError> {
    mc::check_moment_params(params, budget)?;
    let batches: Vec<(u64, u64)> = mc::batch_ranges(params.trials).collect();
    let partials: Vec<MomentAccum> = batches
        .into_par_iter()
        .map(|(lo, hi)| mc::abs_moment_batch(spec, params, lo, hi))
        .collect();
    let mut acc = MomentAccum::new(params.grid.len());
    for p in &partials {
        acc.merge(p);
    }
    Ok(mc::finish_abs_moment(params, &acc))
}

/// Parallel version of [`gauss::sinai_curve`].
pub fn sinai_curve(params: &SinaiParams, budget: &McBudget) -> Result<SurvivalEstimate, GaussError> {
    let kernel = gauss::sinai_kernel(params, budget)?;
    let batches: Vec<(u64, u64)> = mc::batch_ranges(params.trials).collect();
    let hist = batches
        .into_par_iter()
        .map(|(lo, hi)| gauss::sinai_batch(&kernel, lo, hi))
        .reduce(
            || FirstPassageHist::new(kernel.steps_cap()),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    Ok(gauss::finish_sinai(params, &hist))
}
