//! Analysis and simulation of the equal phase-shift search iteration.
//!
//! The iteration under study is `U R_s U† R_t U` applied to a start state
//! `|s⟩`, where `R_s` and `R_t` multiply the amplitude of one basis state by
//! `e^{iθ}` and leave every other amplitude alone. At θ = π this is one step
//! of amplitude amplification; at θ = π/3 it is the fixed-point search whose
//! failure probability drops from ε to ε³ in a single query.
//!
//! The crate has three layers:
//!
//! - [`analytics`] — closed-form expressions for the deviation
//!   `D(θ) = ε[1 + 2(cos θ − 1)(1 − ε)]²` and everything derived from it:
//!   thresholds, classifications, zero-deviation points, averaged phase
//!   choices, success ratios, and the scalar recursion trace.
//! - [`simulator`] — an explicit dense complex-matrix realization of the same
//!   iteration, used as the ground-truth oracle for every analytic claim.
//! - [`harness`] — deterministic parameter sweeps, table reproduction, and
//!   figure-data generation with stable CSV/JSON emission.
//!
//! [`verify`] ties the layers together: it runs the full invariant suite
//! (closed form against simulation, monotonicity, thresholds, recursion
//! consistency) and reports one pass/fail line per check.

pub mod analytics;
pub mod error;
pub mod harness;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
