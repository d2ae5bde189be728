//! Steady-state analysis of a single-server queue fed by renewal batch
//! arrivals and thinned by two independent Poisson streams of negative
//! arrivals: negative customers, which remove the customer in service, and
//! disasters, which flush the whole system. Neither has any effect on an
//! empty system.
//!
//! The distribution of the number of customers at pre-arrival and arbitrary
//! epochs is a finite mixture of geometric terms over the characteristic
//! roots inside the unit circle; this crate locates those roots, solves for
//! the mixture constants, and exposes the resulting laws, their means, and
//! the tail decay rate. An independent event-driven simulator cross-validates
//! the closed forms, and a sweep driver produces plottable series of the mean
//! system size against any rate parameter.

pub mod arrival;
pub mod charroots;
pub mod config;
pub mod error;
pub mod linalg;
pub mod model;
pub mod pade;
pub mod poly;
pub mod report;
pub mod sim;
pub mod solver;
pub mod sweep;
#[doc(hidden)]
pub mod testkit;

pub use arrival::{BatchSizeDistribution, InterArrivalModel};
pub use charroots::{char_fn, char_fn_derivative, find_roots, winding_count, RootSet};
pub use error::{Error, Result};
pub use model::{stability_check, ModelParams, StabilityCondition, StabilityReport};
pub use pade::{pade_surrogate, RationalSurrogate};
pub use sim::{compare, simulate, ComparisonReport, SimConfig, SimResult};
pub use solver::{
    reduce_special_case, solve, solve_constants, SpecialCase, SpectralSolution, SystemDistribution,
};
pub use sweep::{run_sweep, SweepRow};
