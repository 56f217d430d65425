//! Persistence probabilities of partial sums and iterated partial sums.
//!
//! Given i.i.d. zero-mean increments `X_1, X_2, ...`, the partial sums are
//! `S_n = X_1 + ... + X_n` and the iterated partial sums are
//! `S2_n = S_1 + ... + S_n = sum_i (n - i + 1) X_i`. The quantities of
//! interest are the survival (persistence) probabilities
//!
//! ```text
//! p1_n    = P(max_{1<=k<=n} S_k  < 0)     p1bar_n = P(max S_k  <= 0)
//! p2_n    = P(max_{1<=k<=n} S2_k < 0)     p2bar_n = P(max S2_k <= 0)
//! ```
//!
//! together with `E|S_n|`, which controls the decay rate of `p2_n` through
//! convolution bounds. This crate computes these exactly (rational dynamic
//! programming and brute-force enumeration for lattice laws), estimates them
//! by Monte Carlo first-passage simulation for arbitrary laws, and evaluates
//! the convolution inequalities, decay-exponent fits, and the Gaussian
//! comparison quantities that connect `S2` to integrated Brownian motion.
//!
//! The crate is `no_std` (with `alloc`); all I/O, file formats, and the
//! command-line front end live in the companion `persist-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod dist;
pub mod exact;
pub mod gauss;
pub mod mc;

pub use dist::{DistributionSpec, Family, LatticePmf};
pub use exact::PersistenceTable;
pub use mc::{AbsMomentEstimate, Barrier, SurvivalEstimate, Target};
