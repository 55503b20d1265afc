//! Longevity-risk valuation toolkit.
//!
//! The crate is organised around the quantities a life-settlement desk needs:
//!
//! - [`life_table`]: one-year death probabilities, survival, complete
//!   expectation of life and lifetime variance under uniform distribution of
//!   deaths (UDD).
//! - [`markov`]: the two-state alive/dead continuous-time model and its
//!   exponential lifetime.
//! - [`rng`] and [`monte_carlo`]: seeded counter-based streams, Box-Muller
//!   normals, death-year simulation, volatility of life expectancy and exact
//!   log-normal stepping.
//! - [`stable`]: Lévy-stable characteristic function and quantile estimation
//!   of the tail index.
//! - [`settlement`]: settlement present value, its horizon sensitivities,
//!   Macaulay duration and internal rate of return.
//! - [`pde`]: centered, upwind and exponentially fitted finite differences,
//!   theta-scheme time stepping and Black-Scholes option pricing.
//! - [`mortality_option`]: the mortality option priced by Monte Carlo and by
//!   the fitted PDE engine side by side.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod life_table;
pub mod markov;
pub mod monte_carlo;
pub mod mortality_option;
pub mod pde;
pub mod rng;
pub mod settlement;
pub mod stable;

pub use error::{Error, Result};
pub use life_table::{DeathDistribution, LifeTable, LifetimeVarianceMode, MortalityAssumptions};
pub use markov::TwoStateModel;
pub use monte_carlo::{GbmParams, SimSummary};
pub use rng::RngStream;
pub use settlement::{CashflowSeries, FlatPolicy, PolicySchedule};
pub use stable::{AlphaEstimate, StableParams};
