//! Command-line front end, file formats, and parallel drivers for the
//! persistence laboratory in `persist-core`.
//!
//! The binary is `persist`; every subcommand writes its tables as CSV (with
//! exact rationals rendered as `p/q`) plus a JSON mirror, and survival
//! curves additionally as log-log SVG plots. Re-running a command with the
//! same configuration reproduces the artifacts byte for byte.

pub mod commands;
pub mod config;
pub mod formats;
pub mod parallel;
pub mod svg;

/// Work-budget override honored by all Monte Carlo subcommands.
pub const BUDGET_ENV: &str = "PERSIST_BUDGET_STEPS";

/// Reads the Monte Carlo budget, honoring [`BUDGET_ENV`].
pub fn budget_from_env() -> persist_core::mc::McBudget {
    let mut budget = persist_core::mc::McBudget::default();
    if let Ok(s) = std::env::var(BUDGET_ENV) {
        if let Ok(v) = s.trim().parse::<u64>() {
            budget.max_steps = v;
        }
    }
    budget
}
