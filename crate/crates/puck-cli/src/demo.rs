//! Synthetic demo fixture: a quadratic segment, a trapped-cubic segment,
//! and a crash where the walker is pushed over the barrier and slides.
//!
//! The shipped yen-dollar style scenario for exercising the precursor
//! scan end to end: during the cubic segment the best model turns cubic
//! (raising the precursor alarm) before the crash segment begins.

use anyhow::{Context, Result};
use puck_core::{
    simulate, NoiseModel, PotentialModel, SimulationConfig, TickSeries,
};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DemoSpec {
    pub m: usize,
    pub sigma: f64,
    pub quad_len: usize,
    pub cubic_len: usize,
    pub crash_len: usize,
    pub start_price: f64,
    pub seed: u64,
}

impl Default for DemoSpec {
    /// Calibrated so the cubic well (barrier height 0.4 at displacement
    /// -2) is clearly detectable yet escapes before the scripted crash
    /// are rare.
    fn default() -> Self {
        Self {
            m: 4,
            sigma: 0.45,
            quad_len: 1500,
            cubic_len: 1500,
            crash_len: 400,
            start_price: 100.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoScenario {
    pub series: TickSeries,
    /// First tick of the cubic segment.
    pub cubic_start: usize,
    /// First tick of the crash segment (the barrier shove).
    pub crash_start: usize,
}

pub fn glued_scenario(spec: &DemoSpec) -> Result<DemoScenario> {
    let quad = PotentialModel::new(0.5, 2, 0.0, spec.m, spec.sigma)?;
    // Positive b_nl puts the barrier at displacement -2: the crash runs
    // downhill, downward in price.
    let cubic = PotentialModel::new(0.6, 2, 0.3, spec.m, spec.sigma)?;
    let noise = NoiseModel::Gaussian { sigma: spec.sigma };

    let mut prices: Vec<f64> = Vec::with_capacity(spec.quad_len + spec.cubic_len + spec.crash_len);
    let quad_run = simulate(&SimulationConfig {
        model: quad,
        noise: noise.clone(),
        n_steps: spec.quad_len,
        initial_prices: vec![spec.start_price; spec.m],
        rng_seed: spec.seed,
    })
    .context("quadratic segment")?;
    prices.extend_from_slice(&quad_run.prices()[..spec.quad_len]);

    let warm: Vec<f64> = prices[prices.len() - spec.m..].to_vec();
    let cubic_run = simulate(&SimulationConfig {
        model: cubic.clone(),
        noise: noise.clone(),
        n_steps: spec.cubic_len,
        initial_prices: warm,
        rng_seed: spec.seed.wrapping_add(0x9e37_79b9),
    })
    .context("cubic segment")?;
    let cubic_start = prices.len();
    prices.extend_from_slice(&cubic_run.prices()[spec.m..]);

    // Crash: shove the displacement past the barrier with a ramp steep
    // enough that the force outruns the chasing moving average (the
    // slide is self-sustaining only above ~2.8 per tick for these
    // coefficients), then let the same cubic potential run away, capped
    // 30 price units below the break. Short chunks keep each simulation
    // finite while the slide accelerates.
    let crash_start = prices.len();
    let shove = 4.0;
    for _ in 0..spec.m {
        let last = *prices.last().expect("segments are non-empty");
        prices.push(last - shove);
    }
    let floor = prices[crash_start] - 30.0;
    let mut chunk_seed = spec.seed.wrapping_add(0xdead_beef);
    'slide: while prices.len() < crash_start + spec.crash_len {
        let warm: Vec<f64> = prices[prices.len() - spec.m..].to_vec();
        let chunk = simulate(&SimulationConfig {
            model: cubic.clone(),
            noise: noise.clone(),
            n_steps: 6,
            initial_prices: warm,
            rng_seed: chunk_seed,
        });
        chunk_seed = chunk_seed.wrapping_add(1);
        match chunk {
            Ok(run) => {
                for &p in &run.prices()[spec.m..] {
                    if p <= floor {
                        prices.push(floor);
                        break 'slide;
                    }
                    if prices.len() >= crash_start + spec.crash_len {
                        break 'slide;
                    }
                    prices.push(p);
                }
            }
            // The slide outran f64 range inside the chunk; the crash is over.
            Err(_) => break 'slide,
        }
    }

    let series = TickSeries::new(prices, format!("demo-seed-{}", spec.seed))?;
    Ok(DemoScenario { series, cubic_start, crash_start })
}
