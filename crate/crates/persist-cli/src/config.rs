//! Distribution specs, grids, and experiment configs from text.
//!
//! `--dist` accepts a preset name, an inline JSON object, or a path to a
//! JSON file. The JSON schema is
//!
//! ```json
//! { "family": "rademacher" | "gaussian" | "laplace" | "uniform"
//!             | "pareto" | "lattice",
//!   "params": { ... },
//!   "normalize_l1": false }
//! ```
//!
//! with `params` per family: `{"sigma": s}`, `{"scale": b}`,
//! `{"halfwidth": w}`, `{"alpha": a}`, or
//! `{"support": [-2, 1], "probs": ["1/3", "2/3"]}` -- rationals are always
//! `"p/q"` strings.
//!
//! Grids: `2^4..2^20` expands dyadically, `1..512` densely, and
//! `8,16,64` literally. Windows use the same exponent syntax as `a:b`.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use persist_core::dist::{DistributionSpec, Family};

/// Built-in spec names accepted by `--dist`.
pub const PRESETS: &[(&str, &str)] = &[
    ("rademacher", "+1/-1 with probability 1/2"),
    ("gaussian", "standard normal"),
    ("laplace", "Laplace with scale 1"),
    ("uniform", "uniform on [-1, 1]"),
    ("pareto15", "centered Pareto, alpha = 3/2"),
    ("pareto43", "centered Pareto, alpha = 4/3"),
    ("lattice21", "lattice {-2: 1/3, +1: 2/3}"),
];

fn preset(name: &str) -> Option<Result<DistributionSpec>> {
    let spec = match name {
        "rademacher" => return Some(Ok(DistributionSpec::rademacher())),
        "gaussian" => DistributionSpec::gaussian(1.0),
        "laplace" => DistributionSpec::laplace(1.0),
        "uniform" => DistributionSpec::uniform_centered(1.0),
        "pareto15" => DistributionSpec::centered_pareto(1.5),
        "pareto43" => DistributionSpec::centered_pareto(4.0 / 3.0),
        "lattice21" => DistributionSpec::lattice(
            vec![-2, 1],
            vec![parse_rational("1/3").unwrap(), parse_rational("2/3").unwrap()],
        ),
        _ => return None,
    };
    Some(spec.map_err(Into::into))
}

/// Exact rational from `"p/q"` (or a bare integer `"p"`).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).with_context(|| format!("bad rational numerator in {s:?}"))?;
    let d = BigInt::from_str(den).with_context(|| format!("bad rational denominator in {s:?}"))?;
    if d == BigInt::from(0) {
        bail!("zero denominator in rational {s:?}");
    }
    Ok(BigRational::new(n, d))
}

#[derive(Deserialize)]
struct DistJson {
    family: String,
    #[serde(default)]
    params: serde_json::Value,
    #[serde(default)]
    normalize_l1: bool,
}

fn field_f64(params: &serde_json::Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| anyhow!("missing numeric field {key:?} in params"))
}

fn spec_from_json(text: &str) -> Result<DistributionSpec> {
    let d: DistJson = serde_json::from_str(text).context("bad distribution JSON")?;
    let family = match d.family.as_str() {
        "rademacher" => Family::Rademacher,
        "gaussian" => Family::Gaussian {
            sigma: field_f64(&d.params, "sigma")?,
        },
        "laplace" => Family::Laplace {
            scale: field_f64(&d.params, "scale")?,
        },
        "uniform" => Family::UniformCentered {
            halfwidth: field_f64(&d.params, "halfwidth")?,
        },
        "pareto" => Family::CenteredPareto {
            alpha: field_f64(&d.params, "alpha")?,
        },
        "lattice" => {
            let support: Vec<i64> = d
                .params
                .get("support")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| anyhow!("lattice params need \"support\": [ints]"))?;
            let prob_strs: Vec<String> = d
                .params
                .get("probs")
                .and_then(|v| serde_json::from_value(v.clone()).ok())
                .ok_or_else(|| anyhow!("lattice params need \"probs\": [\"p/q\", ...]"))?;
            let probs = prob_strs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            return DistributionSpec::lattice(support, probs)
                .map(|s| s.with_normalize_l1(d.normalize_l1))
                .map_err(Into::into);
        }
        other => bail!("unknown family {other:?}"),
    };
    DistributionSpec::new(family, d.normalize_l1).map_err(Into::into)
}

/// `--dist` argument: preset name, inline JSON object, or JSON file path.
pub fn parse_dist(arg: &str) -> Result<DistributionSpec> {
    let arg = arg.trim();
    if let Some(spec) = preset(arg) {
        return spec;
    }
    if arg.starts_with('{') {
        return spec_from_json(arg);
    }
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading distribution file {arg}"))?;
        return spec_from_json(&text);
    }
    bail!(
        "unknown distribution {arg:?}: not a preset ({}), inline JSON, or file",
        PRESETS
            .iter()
            .map(|(name, _)| *name)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn parse_point(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().context("bad grid base")?;
        let exp: u32 = exp.trim().parse().context("bad grid exponent")?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| anyhow!("grid point {s} overflows"));
    }
    s.parse().with_context(|| format!("bad grid point {s:?}"))
}

/// Grid syntax: `2^a..2^b` (dyadic), `a..b` (every integer), or a comma
/// list of points (each point may use `^`).
pub fn parse_grid(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let grid: Vec<u64> = if let Some((lo, hi)) = s.split_once("..") {
        let dyadic = s.contains('^');
        let (lo, hi) = (parse_point(lo)?, parse_point(hi)?);
        if lo > hi {
            bail!("empty grid {s:?}");
        }
        if dyadic {
            let mut g = Vec::new();
            let mut n = lo;
            while n <= hi {
                g.push(n);
                match n.checked_mul(2) {
                    Some(next) => n = next,
                    None => break,
                }
            }
            g
        } else {
            (lo..=hi).collect()
        }
    } else {
        s.split(',')
            .map(parse_point)
            .collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        bail!("empty grid {s:?}");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        bail!("grid must be strictly increasing: {s:?}");
    }
    Ok(grid)
}

/// Fit window `a:b`, with `^` exponents allowed on either side.
pub fn parse_window(s: &str) -> Result<persist_core::analysis::Window> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("window must be min:max, got {s:?}"))?;
    let (n_min, n_max) = (parse_point(lo)?, parse_point(hi)?);
    if n_min > n_max {
        bail!("window is empty: {s:?}");
    }
    Ok(persist_core::analysis::Window { n_min, n_max })
}
