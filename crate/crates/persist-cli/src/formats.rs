//! CSV and JSON renderings of core results.
//!
//! Exact rationals are always written as `p/q` (including `0/1` and `1/1`)
//! so columns stay machine-parsable; floats use Rust's shortest
//! round-trip formatting. Nothing here embeds timestamps or absolute
//! paths, so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_rational::BigRational;
use serde::Serialize;

use persist_core::analysis::{BoundReport, ExponentFit};
use persist_core::exact::{ArgmaxLaw, PersistenceTable};
use persist_core::gauss::CovariancePair;
use persist_core::mc::{AbsMomentEstimate, Barrier, SurvivalEstimate, Target};

/// `p/q` with an explicit denominator, e.g. `0/1`, `3/8`.
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn target_str(t: Target) -> &'static str {
    match t {
        Target::S1 => "s1",
        Target::S2 => "s2",
    }
}

pub fn barrier_str(b: Barrier) -> &'static str {
    match b {
        Barrier::Strict => "strict",
        Barrier::Weak => "weak",
    }
}

/// Writes `content` to `dir/name`, creating `dir` as needed, and returns
/// the full path.
pub fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// persistence tables
// ---------------------------------------------------------------------------

pub fn table_csv(table: &PersistenceTable) -> String {
    let mut out = String::from("n,p1,p1bar,p2,p2bar\n");
    for n in 0..=table.n_max {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            n,
            rational_str(&table.p1[n]),
            rational_str(&table.p1bar[n]),
            rational_str(&table.p2[n]),
            rational_str(&table.p2bar[n]),
        );
    }
    out
}

#[derive(Serialize)]
struct TableJson<'a> {
    n_max: usize,
    support: &'a [i64],
    probs: Vec<String>,
    p1: Vec<String>,
    p1bar: Vec<String>,
    p2: Vec<String>,
    p2bar: Vec<String>,
}

pub fn table_json(table: &PersistenceTable) -> Result<String> {
    let rats = |v: &[BigRational]| v.iter().map(rational_str).collect::<Vec<_>>();
    let doc = TableJson {
        n_max: table.n_max,
        support: table.pmf.support(),
        probs: rats(table.pmf.probs()),
        p1: rats(&table.p1),
        p1bar: rats(&table.p1bar),
        p2: rats(&table.p2),
        p2bar: rats(&table.p2bar),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

// ---------------------------------------------------------------------------
// survival curves and moments
// ---------------------------------------------------------------------------

/// `index_label` is `"n"` for walks and `"T"` for the integrated-BM curve.
pub fn survival_csv(est: &SurvivalEstimate, index_label: &str) -> String {
    let mut out = format!("{index_label},trials,surv_count,p_hat,ci_low,ci_high\n");
    for j in 0..est.grid.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            est.grid[j], est.trials, est.surv_count[j], est.p_hat[j], est.ci_low[j], est.ci_high[j],
        );
    }
    out
}

#[derive(Serialize)]
struct SurvivalJson<'a> {
    target: &'static str,
    barrier: &'static str,
    threshold: f64,
    trials: u64,
    grid: &'a [u64],
    surv_count: &'a [u64],
    p_hat: &'a [f64],
    ci_low: &'a [f64],
    ci_high: &'a [f64],
}

pub fn survival_json(est: &SurvivalEstimate) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SurvivalJson {
        target: target_str(est.target),
        barrier: barrier_str(est.barrier),
        threshold: est.threshold,
        trials: est.trials,
        grid: &est.grid,
        surv_count: &est.surv_count,
        p_hat: &est.p_hat,
        ci_low: &est.ci_low,
        ci_high: &est.ci_high,
    })?)
}

pub fn moments_csv(est: &AbsMomentEstimate) -> String {
    let mut out = String::from("n,trials,mean_abs,stderr\n");
    for j in 0..est.grid.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            est.grid[j], est.trials, est.mean_abs[j], est.stderr[j],
        );
    }
    out
}

#[derive(Serialize)]
struct MomentsJson<'a> {
    trials: u64,
    grid: &'a [u64],
    mean_abs: &'a [f64],
    stderr: &'a [f64],
}

pub fn moments_json(est: &AbsMomentEstimate) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MomentsJson {
        trials: est.trials,
        grid: &est.grid,
        mean_abs: &est.mean_abs,
        stderr: &est.stderr,
    })?)
}

// ---------------------------------------------------------------------------
// bound reports
// ---------------------------------------------------------------------------

pub fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("inequality_id,n,lhs,rhs,constant_used,slack,pass,source\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.inequality, r.n, r.lhs, r.rhs, r.constant_used, r.slack, r.verdict, r.source,
        );
    }
    out
}

#[derive(Serialize)]
struct BoundJson {
    inequality_id: String,
    n: u64,
    lhs: f64,
    rhs: f64,
    constant_used: f64,
    slack: f64,
    pass: String,
    source: String,
}

pub fn bounds_json(reports: &[BoundReport]) -> Result<String> {
    let rows: Vec<BoundJson> = reports
        .iter()
        .map(|r| BoundJson {
            inequality_id: r.inequality.to_string(),
            n: r.n,
            lhs: r.lhs,
            rhs: r.rhs,
            constant_used: r.constant_used,
            slack: r.slack,
            pass: r.verdict.to_string(),
            source: r.source.to_string(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)?)
}

// ---------------------------------------------------------------------------
// identities, argmax, covariances, fits
// ---------------------------------------------------------------------------

pub fn identity_csv(rows: &[(usize, BigRational)]) -> String {
    let mut out = String::from("n,residual\n");
    for (n, r) in rows {
        let _ = writeln!(out, "{},{}", n, rational_str(r));
    }
    out
}

/// Argmax CSV; `product` holds `p1[k] * p1bar[n-k]` when the law is
/// symmetric (where the two columns must agree).
pub fn argmax_csv(law: &ArgmaxLaw, product: Option<&[BigRational]>) -> String {
    let mut out = String::from(if product.is_some() {
        "k,mass,product\n"
    } else {
        "k,mass\n"
    });
    for k in 0..=law.n {
        match product {
            Some(p) => {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    k,
                    rational_str(&law.mass[k]),
                    rational_str(&p[k])
                );
            }
            None => {
                let _ = writeln!(out, "{},{}", k, rational_str(&law.mass[k]));
            }
        }
    }
    out
}

pub fn covariances_csv(pairs: &[CovariancePair]) -> String {
    let mut out = String::from("k,m,cov_s2,cov_y,f\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{},{},{}/{},{}/{},{}",
            p.k,
            p.m,
            p.cov_s2.numer(),
            p.cov_s2.denom(),
            p.cov_y.numer(),
            p.cov_y.denom(),
            p.f,
        );
    }
    out
}

#[derive(Serialize)]
struct FitJson<'a> {
    gamma_hat: f64,
    stderr: f64,
    r_squared: f64,
    theoretical_gamma: f64,
    window: [u64; 2],
    points: &'a [(u64, f64)],
}

pub fn exponent_json(fit: &ExponentFit) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FitJson {
        gamma_hat: fit.gamma_hat,
        stderr: fit.stderr,
        r_squared: fit.r_squared,
        theoretical_gamma: fit.theoretical_gamma,
        window: [fit.window.n_min, fit.window.n_max],
        points: &fit.points,
    })?)
}
