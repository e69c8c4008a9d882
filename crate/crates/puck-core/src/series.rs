//! Price series container and the moving-average center.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{PuckError, Result};

/// An ordered sequence of price observations, optionally timestamped.
///
/// Invariants, enforced at construction: at least one tick, every price
/// finite, and timestamps (when present) non-decreasing with the same
/// length as the prices.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TickSeries {
    prices: Vec<f64>,
    timestamps: Option<Vec<f64>>,
    label: String,
}

impl TickSeries {
    pub fn new(prices: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        Self::build(prices, None, label.into())
    }

    pub fn with_timestamps(
        prices: Vec<f64>,
        timestamps: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::build(prices, Some(timestamps), label.into())
    }

    fn build(prices: Vec<f64>, timestamps: Option<Vec<f64>>, label: String) -> Result<Self> {
        if prices.is_empty() {
            return Err(PuckError::SeriesTooShort { needed: 1, got: 0 });
        }
        if prices.iter().any(|p| !p.is_finite()) {
            return Err(PuckError::NonFinite("price"));
        }
        if let Some(ts) = &timestamps {
            if ts.len() != prices.len() {
                return Err(PuckError::InvalidArgument(
                    "timestamps must have the same length as prices",
                ));
            }
            if ts.windows(2).any(|w| w[1] < w[0]) {
                return Err(PuckError::InvalidArgument("timestamps must be non-decreasing"));
            }
        }
        Ok(Self { prices, timestamps, label })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn timestamps(&self) -> Option<&[f64]> {
        self.timestamps.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }
}

/// Moving-average center `P_M(t)`: the arithmetic mean of the `m` prices
/// `P(t), P(t-1), ..., P(t-m+1)`, inclusive of the current tick.
pub fn moving_center(series: &TickSeries, t: usize, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(PuckError::InvalidArgument("moving-average span m must be >= 1"));
    }
    if t >= series.len() {
        return Err(PuckError::IndexOutOfRange { index: t, len: series.len() });
    }
    if t + 1 < m {
        return Err(PuckError::IndexOutOfRange { index: t, len: series.len() });
    }
    Ok(mean_tail(&series.prices()[..=t], m))
}

/// Mean of the last `m` elements of `prices`, summed oldest to newest.
///
/// Every moving-average evaluation in the crate goes through this helper
/// so that simulation and residual extraction agree bit for bit.
pub(crate) fn mean_tail(prices: &[f64], m: usize) -> f64 {
    debug_assert!(m >= 1 && m <= prices.len());
    let window = &prices[prices.len() - m..];
    let mut sum = 0.0;
    for &p in window {
        sum += p;
    }
    sum / m as f64
}
