//! Forward simulation of the model and extraction of its noise residuals.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{PuckError, Result};
use crate::model::{NoiseModel, PotentialModel};
use crate::series::{mean_tail, TickSeries};

/// Everything needed to run one deterministic simulation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationConfig {
    pub model: PotentialModel,
    pub noise: NoiseModel,
    /// Number of generated ticks appended after the warm-up history.
    pub n_steps: usize,
    /// Warm-up history; must be at least `model.m` ticks long so the
    /// moving-average center exists at the first generated step.
    pub initial_prices: Vec<f64>,
    pub rng_seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.noise.validate()?;
        if self.n_steps < 1 {
            return Err(PuckError::InvalidArgument("n_steps must be >= 1"));
        }
        if self.initial_prices.len() < self.model.m {
            return Err(PuckError::SeriesTooShort {
                needed: self.model.m,
                got: self.initial_prices.len(),
            });
        }
        if self.initial_prices.iter().any(|p| !p.is_finite()) {
            return Err(PuckError::NonFinite("initial price"));
        }
        Ok(())
    }

    /// Constant warm-up at `price`, the shortest valid history.
    pub fn flat_start(
        model: PotentialModel,
        noise: NoiseModel,
        n_steps: usize,
        price: f64,
        seed: u64,
    ) -> Self {
        let warmup = alloc::vec![price; model.m.max(1)];
        Self { model, noise, n_steps, initial_prices: warmup, rng_seed: seed }
    }
}

/// A simulated series together with the exact noise draws that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub series: TickSeries,
    /// One draw per generated tick; `noise[i]` produced price
    /// `initial_prices.len() + i`.
    pub noise: Vec<f64>,
}

/// Simulates the price process, returning the warm-up history followed by
/// `n_steps` generated ticks. Deterministic for a fixed `rng_seed`.
pub fn simulate(config: &SimulationConfig) -> Result<TickSeries> {
    simulate_traced(config).map(|trace| trace.series)
}

/// [`simulate`] plus the recorded noise sequence, for round-trip checks
/// against [`residuals`].
pub fn simulate_traced(config: &SimulationConfig) -> Result<SimulationTrace> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let sampler = config.noise.sampler()?;

    let mut prices = Vec::with_capacity(config.initial_prices.len() + config.n_steps);
    prices.extend_from_slice(&config.initial_prices);
    let mut noise = Vec::with_capacity(config.n_steps);

    for _ in 0..config.n_steps {
        let current = prices[prices.len() - 1];
        let center = mean_tail(&prices, config.model.m);
        let force = config.model.force_raw(current - center);
        let draw = sampler.sample(&mut rng);
        noise.push(draw);
        let next = current + force + draw;
        if !next.is_finite() {
            return Err(PuckError::NonFinite("simulated price diverged"));
        }
        prices.push(next);
    }

    let series = TickSeries::new(prices, label_for(config))?;
    Ok(SimulationTrace { series, noise })
}

fn label_for(config: &SimulationConfig) -> String {
    let mut label = String::from("sim-seed-");
    push_u64(&mut label, config.rng_seed);
    label
}

fn push_u64(out: &mut String, value: u64) {
    use core::fmt::Write;
    let _ = write!(out, "{value}");
}

/// Noise values implied by a series under a model:
/// `f(t) = [P(t+1) - P(t)] + b_quad p(t) + b_nl p(t)^gamma` with
/// `p(t) = P(t) - P_M(t)`, for `t` from `m - 1` through `len - 2`.
///
/// The first `m - 1` ticks only seed the moving average, so the output has
/// `len - m` entries.
pub fn residuals(series: &TickSeries, model: &PotentialModel) -> Result<Vec<f64>> {
    model.validate()?;
    let prices = series.prices();
    if prices.len() < model.m + 1 {
        return Err(PuckError::SeriesTooShort { needed: model.m + 1, got: prices.len() });
    }
    let mut out = Vec::with_capacity(prices.len() - model.m);
    for t in (model.m - 1)..(prices.len() - 1) {
        let center = mean_tail(&prices[..=t], model.m);
        let force = model.force_raw(prices[t] - center);
        out.push(prices[t + 1] - prices[t] - force);
    }
    Ok(out)
}
