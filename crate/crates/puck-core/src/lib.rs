//! Random walker in a temporally deforming potential centered on its own
//! moving average: the PUCK market model.
//!
//! The crate simulates the model, recovers its potential parameters from
//! price series by maximum likelihood with AIC/BIC model selection, and
//! classifies market regimes including the cubic-potential crash precursor.
//!
//! The price update is
//!
//! ```text
//! P(t+1) - P(t) = -dU/dp |_{p = P(t) - P_M(t)} + f(t)
//! P_M(t)        = (1/M) * sum_{k=0}^{M-1} P(t-k)
//! U(p)          = (b_quad/2) p^2 + (b_nl/(gamma+1)) p^(gamma+1)
//! ```
//!
//! with `f(t)` i.i.d. noise. Everything here is a pure function of its
//! inputs; simulation randomness is fully determined by the seed.
//!
//! The crate is `no_std` compatible (with `alloc`) when built without the
//! default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
pub mod analysis;
pub mod estimate;
pub mod model;
pub mod series;
pub mod simulate;

mod poly;

pub use analysis::{
    barrier_report, classify_regime, empirical_potential, scan_windows, stability_boundaries,
    volatility, BarrierReport, EmpiricalPotential, MarketState, RegimeLabel, ScanOptions,
    WindowOutcome, WindowScanRecord,
};
pub use error::{PuckError, Result};
pub use estimate::{
    fit_grid, information_criteria, log_likelihood, profile_sigma, select_model, CoefficientRange,
    Criterion, FitNoise, FitResult, GridSpec, ModelFamily, ModelSelection, WindowSpan,
};
pub use model::{NoiseModel, PotentialModel};
pub use series::{moving_center, TickSeries};
pub use simulate::{residuals, simulate, simulate_traced, SimulationConfig, SimulationTrace};
