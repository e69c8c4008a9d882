//! Nonparametric potential reconstruction, regime classification, barrier
//! escape statistics, volatility, and the sliding-window precursor scan.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{PuckError, Result};
use crate::estimate::{select_model_window, Criterion, FitNoise, GridSpec, ModelSelection};
use crate::model::{NoiseModel, PotentialModel};
use crate::poly::{deflated_char_poly, max_root_magnitude};
use crate::series::{mean_tail, TickSeries};

/// Bins below this tick count are dropped from the reconstruction.
pub const DEFAULT_MIN_BIN_OCCUPANCY: usize = 20;

/// Binned force estimates and their cumulative integral: the directly
/// observed potential curve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmpiricalPotential {
    /// Displacement at the center of each surviving bin, ascending.
    pub bin_centers: Vec<f64>,
    /// Mean one-tick increment per bin; an estimate of `-dU/dp` there.
    pub mean_increment: Vec<f64>,
    pub counts: Vec<usize>,
    /// Negative cumulative trapezoidal integral of `mean_increment`,
    /// anchored to 0 at the bin nearest `p = 0`.
    pub u_values: Vec<f64>,
}

/// The five market states plus the cubic precursor flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MarketState {
    PureRandomWalk,
    Stable,
    Unstable,
    OscillatoryDivergent,
    MonotonicDivergent,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeLabel {
    pub state: MarketState,
    /// True when the selected family is cubic (`gamma = 2`, `b_nl != 0`)
    /// and beats the best quadratic-or-null fit by more than the
    /// configured criterion gap.
    pub precursor_cubic: bool,
    /// Criterion gap between the winning and runner-up family.
    pub delta_criterion: f64,
}

/// Barrier geometry of a cubic well plus a Monte Carlo escape estimate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BarrierReport {
    /// Local minimum of the potential (0 for this parameterization).
    pub well_position: f64,
    /// Local maximum `p* = -b_quad / b_nl`.
    pub barrier_position: f64,
    /// `U(p*) - U(0) = b_quad^3 / (6 b_nl^2)`.
    pub barrier_height: f64,
    /// Share of walkers whose displacement passed beyond `p*` within the
    /// horizon.
    pub escape_fraction: f64,
    pub horizon: usize,
    pub n_trials: usize,
}

/// Bins the displacements `p(t) = P(t) - P_M(t)` and averages the next
/// increment per bin, then integrates to an empirical potential curve.
/// Bins with fewer than [`DEFAULT_MIN_BIN_OCCUPANCY`] ticks are dropped.
pub fn empirical_potential(
    series: &TickSeries,
    m: usize,
    n_bins: usize,
) -> Result<EmpiricalPotential> {
    empirical_potential_with_occupancy(series, m, n_bins, DEFAULT_MIN_BIN_OCCUPANCY)
}

pub fn empirical_potential_with_occupancy(
    series: &TickSeries,
    m: usize,
    n_bins: usize,
    min_occupancy: usize,
) -> Result<EmpiricalPotential> {
    if m < 1 {
        return Err(PuckError::InvalidArgument("moving-average span m must be >= 1"));
    }
    if n_bins < 3 {
        return Err(PuckError::InvalidArgument("n_bins must be >= 3"));
    }
    let prices = series.prices();
    if prices.len() < m + n_bins {
        return Err(PuckError::SeriesTooShort { needed: m + n_bins, got: prices.len() });
    }

    let mut disp = Vec::with_capacity(prices.len() - m);
    let mut incs = Vec::with_capacity(prices.len() - m);
    for t in (m - 1)..(prices.len() - 1) {
        disp.push(prices[t] - mean_tail(&prices[..=t], m));
        incs.push(prices[t + 1] - prices[t]);
    }

    let lo = disp.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = disp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(PuckError::InsufficientData { needed: 3, got: 1 });
    }
    let width = (hi - lo) / n_bins as f64;

    let mut sums = alloc::vec![0.0; n_bins];
    let mut counts = alloc::vec![0usize; n_bins];
    for (&p, &d) in disp.iter().zip(&incs) {
        let mut idx = ((p - lo) / width) as usize;
        if idx >= n_bins {
            idx = n_bins - 1;
        }
        sums[idx] += d;
        counts[idx] += 1;
    }

    let mut bin_centers = Vec::new();
    let mut mean_increment = Vec::new();
    let mut kept_counts = Vec::new();
    for i in 0..n_bins {
        if counts[i] >= min_occupancy.max(1) {
            bin_centers.push(lo + (i as f64 + 0.5) * width);
            mean_increment.push(sums[i] / counts[i] as f64);
            kept_counts.push(counts[i]);
        }
    }
    if bin_centers.len() < 3 {
        return Err(PuckError::InsufficientData { needed: 3, got: bin_centers.len() });
    }

    // u = -integral of the mean increment, trapezoidal over bin centers,
    // zeroed at the bin nearest p = 0.
    let mut u_values = Vec::with_capacity(bin_centers.len());
    u_values.push(0.0);
    for i in 1..bin_centers.len() {
        let dx = bin_centers[i] - bin_centers[i - 1];
        let seg = -0.5 * (mean_increment[i] + mean_increment[i - 1]) * dx;
        let prev = u_values[i - 1];
        u_values.push(prev + seg);
    }
    let anchor = bin_centers
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let offset = u_values[anchor];
    for u in &mut u_values {
        *u -= offset;
    }

    Ok(EmpiricalPotential { bin_centers, mean_increment, counts: kept_counts, u_values })
}

/// Interval `(b_low, b_high)` of quadratic coefficients for which the
/// noise-free map `P(t+1) - P(t) = -b (P(t) - P_M(t))` is stable: every
/// root of the characteristic polynomial other than the persistent unit
/// root lies strictly inside the unit circle.
///
/// Each endpoint is located by bisection on the maximum root magnitude to
/// a bracket width of 1e-9.
pub fn stability_boundaries(m: usize) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(PuckError::InvalidArgument(
            "stability boundaries need m >= 2; m = 1 has identically zero force",
        ));
    }
    let b_high = boundary_search(m, 1.0)?;
    let b_low = boundary_search(m, -1.0)?;
    Ok((b_low, b_high))
}

fn is_stable(m: usize, b: f64) -> bool {
    max_root_magnitude(&deflated_char_poly(m, b)) < 1.0
}

fn boundary_search(m: usize, direction: f64) -> Result<f64> {
    // b = 0 is always stable (all deflated roots are 0); march outward
    // for an unstable bracket end, then bisect.
    let mut stable_end = 0.0;
    let mut unstable_end = direction * 0.5;
    let mut guard = 0;
    while is_stable(m, unstable_end) {
        stable_end = unstable_end;
        unstable_end += direction * 0.5;
        guard += 1;
        if guard > 100_000 {
            return Err(PuckError::Numerical("no instability found while bracketing"));
        }
    }
    while (unstable_end - stable_end).abs() > 1e-9 {
        let mid = 0.5 * (stable_end + unstable_end);
        if is_stable(m, mid) {
            stable_end = mid;
        } else {
            unstable_end = mid;
        }
    }
    Ok(0.5 * (stable_end + unstable_end))
}

/// Assigns one of the five market states from a model selection and the
/// stability boundaries for the winning span, and raises the cubic
/// precursor flag when the nonlinear family wins by more than
/// `delta_threshold` on the selection criterion.
///
/// A winner with `|b_quad| <= epsilon` but a nonzero nonlinear term is
/// labeled by the sign of its curvature.
pub fn classify_regime(
    selection: &ModelSelection,
    boundaries: (f64, f64),
    epsilon: f64,
    delta_threshold: f64,
) -> Result<RegimeLabel> {
    let (b_low, b_high) = boundaries;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(PuckError::InvalidArgument("epsilon must be positive and finite"));
    }
    if !(delta_threshold > 0.0 && delta_threshold.is_finite()) {
        return Err(PuckError::InvalidArgument("delta_threshold must be positive and finite"));
    }
    if !(b_low < 0.0 && b_high > 0.0) {
        return Err(PuckError::InvalidArgument(
            "boundaries must satisfy b_low < 0 < b_high",
        ));
    }

    let best = selection.best();
    let b = best.model.b_quad;
    let c = best.model.b_nl;

    let state = if b.abs() <= epsilon && c == 0.0 {
        MarketState::PureRandomWalk
    } else if b >= b_high {
        MarketState::OscillatoryDivergent
    } else if b <= b_low {
        MarketState::MonotonicDivergent
    } else if b > epsilon {
        MarketState::Stable
    } else if b < -epsilon {
        MarketState::Unstable
    } else if b >= 0.0 {
        MarketState::Stable
    } else {
        MarketState::Unstable
    };

    let precursor_cubic = best.model.gamma == 2
        && c != 0.0
        && selection.winner == crate::estimate::ModelFamily::Nonlinear
        && selection.nonlinear_gap() > delta_threshold;

    Ok(RegimeLabel { state, precursor_cubic, delta_criterion: selection.runner_up_gap() })
}

/// Barrier geometry of the cubic well (`gamma = 2`, `b_quad > 0 > b_nl`)
/// plus a first-passage Monte Carlo estimate of the escape probability:
/// walkers start at displacement 0 and count as escaped once their
/// displacement exceeds the barrier position within the horizon.
pub fn barrier_report(
    model: &PotentialModel,
    noise: &NoiseModel,
    horizon: usize,
    n_trials: usize,
    rng_seed: u64,
) -> Result<BarrierReport> {
    model.validate()?;
    noise.validate()?;
    if model.gamma != 2 || !(model.b_quad > 0.0) || !(model.b_nl < 0.0) {
        return Err(PuckError::NoBarrier);
    }
    if horizon < 1 {
        return Err(PuckError::InvalidArgument("horizon must be >= 1"));
    }
    if n_trials < 1 {
        return Err(PuckError::InvalidArgument("n_trials must be >= 1"));
    }

    let barrier_position = -model.b_quad / model.b_nl;
    let barrier_height =
        model.b_quad * model.b_quad * model.b_quad / (6.0 * model.b_nl * model.b_nl);

    let sampler = noise.sampler()?;
    let mut escaped = 0usize;
    let mut prices: Vec<f64> = Vec::with_capacity(model.m + horizon);
    for trial in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(trial as u64);
        prices.clear();
        prices.resize(model.m, 0.0);
        for _ in 0..horizon {
            let current = prices[prices.len() - 1];
            let center = mean_tail(&prices, model.m);
            let force = model.force_raw(current - center);
            let next = current + force + sampler.sample(&mut rng);
            if !next.is_finite() {
                escaped += 1;
                break;
            }
            prices.push(next);
            let disp = next - mean_tail(&prices, model.m);
            if disp > barrier_position {
                escaped += 1;
                break;
            }
        }
    }

    Ok(BarrierReport {
        well_position: 0.0,
        barrier_position,
        barrier_height,
        escape_fraction: escaped as f64 / n_trials as f64,
        horizon,
        n_trials,
    })
}

/// Mean squared one-tick increment.
pub fn volatility(series: &TickSeries) -> Result<f64> {
    let prices = series.prices();
    if prices.len() < 2 {
        return Err(PuckError::SeriesTooShort { needed: 2, got: prices.len() });
    }
    let sum: f64 = prices.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    Ok(sum / (prices.len() - 1) as f64)
}

/// Parameters of a sliding-window scan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanOptions {
    pub window: usize,
    pub step: usize,
    pub criterion: Criterion,
    pub noise: FitNoise,
    /// Half-width of the no-potential band for the quadratic coefficient.
    pub epsilon: f64,
    /// Criterion gap required to raise the cubic precursor alarm.
    pub delta_threshold: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            window: 2000,
            step: 500,
            criterion: Criterion::Aic,
            noise: FitNoise::Gaussian,
            epsilon: 0.05,
            delta_threshold: 2.0,
        }
    }
}

/// Per-window scan outcome; degenerate (constant-price) windows are
/// reported, not silently dropped.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WindowOutcome {
    Classified { selection: ModelSelection, regime: RegimeLabel },
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowScanRecord {
    pub start: usize,
    pub length: usize,
    pub outcome: WindowOutcome,
}

impl WindowScanRecord {
    /// True when this window raised the cubic precursor alarm.
    pub fn is_alarm(&self) -> bool {
        matches!(&self.outcome, WindowOutcome::Classified { regime, .. } if regime.precursor_cubic)
    }
}

/// Slides a window along the series, running model selection and regime
/// classification per window. Stability boundaries are computed once per
/// distinct winning span; a no-potential winner (span 1) is classified
/// against the span-2 boundaries, which cannot change its label.
pub fn scan_windows(
    series: &TickSeries,
    grid: &GridSpec,
    opts: &ScanOptions,
) -> Result<Vec<WindowScanRecord>> {
    if opts.window < 50 {
        return Err(PuckError::InvalidArgument("scan window must be >= 50 ticks"));
    }
    if opts.step < 1 {
        return Err(PuckError::InvalidArgument("scan step must be >= 1"));
    }
    let prices = series.prices();
    if prices.len() < opts.window {
        return Err(PuckError::SeriesTooShort { needed: opts.window, got: prices.len() });
    }
    grid.validate()?;

    let mut boundary_cache: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    let mut records = Vec::new();
    let mut start = 0usize;
    while start + opts.window <= prices.len() {
        let slice = &prices[start..start + opts.window];
        let outcome =
            match select_model_window(slice, start, grid, opts.criterion, opts.noise) {
                Ok(selection) => {
                    let span = selection.best().model.m.max(2);
                    let boundaries = match boundary_cache.get(&span) {
                        Some(&b) => b,
                        None => {
                            let b = stability_boundaries(span)?;
                            boundary_cache.insert(span, b);
                            b
                        }
                    };
                    let regime =
                        classify_regime(&selection, boundaries, opts.epsilon, opts.delta_threshold)?;
                    WindowOutcome::Classified { selection, regime }
                }
                Err(PuckError::DegenerateFit) => WindowOutcome::Degenerate,
                Err(e) => return Err(e),
            };
        records.push(WindowScanRecord { start, length: opts.window, outcome });
        start += opts.step;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{CoefficientRange, FitResult, ModelFamily, WindowSpan};
    use crate::simulate::{simulate, SimulationConfig};
    use alloc::vec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sim(model: PotentialModel, sigma: f64, n: usize, seed: u64) -> TickSeries {
        let cfg = SimulationConfig {
            initial_prices: vec![100.0; model.m],
            noise: NoiseModel::Gaussian { sigma },
            model,
            n_steps: n,
            rng_seed: seed,
        };
        simulate(&cfg).unwrap()
    }

    fn fake_fit(b_quad: f64, gamma: u32, b_nl: f64, m: usize, k: u32, ll: f64) -> FitResult {
        FitResult {
            model: PotentialModel { b_quad, gamma, b_nl, m, sigma: 0.1 },
            log_likelihood: ll,
            aic: -2.0 * ll + 2.0 * f64::from(k),
            bic: -2.0 * ll + f64::from(k) * (100.0_f64).ln(),
            k_params: k,
            n_obs: 100,
            window: WindowSpan { start: 0, length: 105 },
            selected: false,
        }
    }

    fn fake_selection(winner: ModelFamily, b_quad: f64, gamma: u32, b_nl: f64) -> ModelSelection {
        // Criterion values: winner at AIC 100, runners-up above it.
        let (ll_a, ll_b, ll_c) = match winner {
            ModelFamily::NoPotential => (0.0, -4.0, -10.0),
            ModelFamily::Quadratic => (-10.0, 0.0, -4.0),
            ModelFamily::Nonlinear => (-14.0, -10.0, 0.0),
        };
        let mut sel = ModelSelection {
            criterion: Criterion::Aic,
            no_potential: fake_fit(0.0, 2, 0.0, 1, 1, ll_a),
            quadratic: fake_fit(if winner == ModelFamily::Quadratic { b_quad } else { 0.3 }, 2, 0.0, 2, 3, ll_b),
            nonlinear: fake_fit(b_quad, gamma, b_nl, 2, 5, ll_c),
            winner,
        };
        if winner == ModelFamily::Nonlinear {
            sel.nonlinear.model.b_quad = b_quad;
        }
        match winner {
            ModelFamily::NoPotential => sel.no_potential.selected = true,
            ModelFamily::Quadratic => sel.quadratic.selected = true,
            ModelFamily::Nonlinear => sel.nonlinear.selected = true,
        }
        sel
    }

    #[test]
    fn boundaries_for_span_two_are_plus_minus_two() {
        let (lo, hi) = stability_boundaries(2).unwrap();
        assert_abs_diff_eq!(lo, -2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn zero_force_is_always_inside_the_stable_interval() {
        for m in 2..=12 {
            let (lo, hi) = stability_boundaries(m).unwrap();
            assert!(lo < 0.0 && hi > 0.0, "m = {m}: ({lo}, {hi})");
        }
    }

    #[test]
    fn span_one_has_no_boundaries() {
        assert!(matches!(stability_boundaries(1), Err(PuckError::InvalidArgument(_))));
    }

    #[test]
    fn classify_pure_random_walk() {
        let sel = fake_selection(ModelFamily::NoPotential, 0.0, 2, 0.0);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert_eq!(label.state, MarketState::PureRandomWalk);
        assert!(!label.precursor_cubic);
    }

    #[test]
    fn classify_stable_and_unstable() {
        let sel = fake_selection(ModelFamily::Quadratic, 0.5, 2, 0.0);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert_eq!(label.state, MarketState::Stable);

        let sel = fake_selection(ModelFamily::Quadratic, -0.5, 2, 0.0);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert_eq!(label.state, MarketState::Unstable);
    }

    #[test]
    fn classify_divergent_states() {
        let sel = fake_selection(ModelFamily::Quadratic, 2.5, 2, 0.0);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert_eq!(label.state, MarketState::OscillatoryDivergent);

        let sel = fake_selection(ModelFamily::Quadratic, -2.5, 2, 0.0);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert_eq!(label.state, MarketState::MonotonicDivergent);
    }

    #[test]
    fn precursor_requires_gamma_two_and_margin() {
        let sel = fake_selection(ModelFamily::Nonlinear, 0.6, 2, -0.3);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert!(label.precursor_cubic);
        assert!(label.delta_criterion > 0.0);

        // gamma = 3 never raises the cubic flag.
        let sel = fake_selection(ModelFamily::Nonlinear, 0.6, 3, -0.3);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 2.0).unwrap();
        assert!(!label.precursor_cubic);

        // Insufficient margin: raise the threshold beyond the gap.
        let sel = fake_selection(ModelFamily::Nonlinear, 0.6, 2, -0.3);
        let label = classify_regime(&sel, (-2.0, 2.0), 0.05, 1000.0).unwrap();
        assert!(!label.precursor_cubic);
    }

    #[test]
    fn barrier_algebra_and_numeric_maximum() {
        let model = PotentialModel::new(0.6, 2, -0.3, 4, 0.1).unwrap();
        let noise = NoiseModel::gaussian(1e-8).unwrap();
        let report = barrier_report(&model, &noise, 200, 10, 1).unwrap();
        assert_abs_diff_eq!(report.barrier_position, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.barrier_height, 0.4, epsilon = 1e-12);
        // Vanishing noise, walker starts in the well: no escapes.
        assert_eq!(report.escape_fraction, 0.0);

        // Numeric maximization of U on a fine grid.
        let mut best = (0.0, f64::NEG_INFINITY);
        let mut p = 0.0;
        while p <= 4.0 {
            let u = model.value_raw(p);
            if u > best.1 {
                best = (p, u);
            }
            p += 1e-5;
        }
        assert_relative_eq!(best.0, report.barrier_position, epsilon = 1e-4);
        assert_relative_eq!(best.1, report.barrier_height, epsilon = 1e-6);
    }

    #[test]
    fn barrier_rejects_wrong_shapes() {
        let noise = NoiseModel::gaussian(0.1).unwrap();
        for (b, g, c) in [(0.6, 2, 0.3), (-0.6, 2, -0.3), (0.6, 3, -0.3), (0.6, 2, 0.0)] {
            let model = PotentialModel::new(b, g, c, 4, 0.1).unwrap();
            assert!(
                matches!(barrier_report(&model, &noise, 10, 10, 1), Err(PuckError::NoBarrier)),
                "({b}, {g}, {c})"
            );
        }
    }

    #[test]
    fn volatility_basics() {
        let s = TickSeries::new(vec![5.0; 6], "flat").unwrap();
        assert_eq!(volatility(&s).unwrap(), 0.0);
        let s = TickSeries::new(vec![0.0, 1.0, 0.0, 1.0], "saw").unwrap();
        assert_eq!(volatility(&s).unwrap(), 1.0);
        let s = TickSeries::new(vec![1.0], "one").unwrap();
        assert!(matches!(volatility(&s), Err(PuckError::SeriesTooShort { .. })));
    }

    #[test]
    fn stable_and_unstable_volatilities_match_for_span_two() {
        // For m = 2 the displacement is half the last increment, and the
        // stationary volatility depends on b only through b^2, so the
        // attractive and repulsive runs share a single sigma.
        let vol_plus =
            volatility(&sim(PotentialModel::quadratic(0.5, 2, 0.05).unwrap(), 0.05, 30_000, 8))
                .unwrap();
        let vol_minus =
            volatility(&sim(PotentialModel::quadratic(-0.5, 2, 0.05).unwrap(), 0.05, 30_000, 9))
                .unwrap();
        assert_relative_eq!(vol_plus, vol_minus, max_relative = 0.1);
    }

    #[test]
    fn empirical_potential_flat_drift_on_random_walk() {
        let series = sim(PotentialModel::no_potential(1.0).unwrap(), 1.0, 20_000, 12);
        // Displacements relative to a span-5 center, even for driftless data.
        let pot = empirical_potential(&series, 5, 25).unwrap();
        assert_eq!(pot.bin_centers.len(), pot.mean_increment.len());
        assert_eq!(pot.bin_centers.len(), pot.u_values.len());
        for (i, &mi) in pot.mean_increment.iter().enumerate() {
            let tol = 3.0 / (pot.counts[i] as f64).sqrt();
            assert!(mi.abs() < tol, "bin {i}: mean {mi}, tol {tol}");
        }
        // The anchor bin sits at zero potential.
        let anchor = pot
            .bin_centers
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
            .unwrap()
            .0;
        assert_eq!(pot.u_values[anchor], 0.0);
    }

    #[test]
    fn empirical_potential_recovers_parabola() {
        let series = sim(PotentialModel::quadratic(0.5, 4, 0.03).unwrap(), 0.03, 10_000, 3);
        let pot = empirical_potential(&series, 4, 31).unwrap();
        // Least-squares slope of u on p^2 over the central 60% of bins.
        let n = pot.bin_centers.len();
        let lo = n / 5;
        let hi = n - n / 5;
        let xs: Vec<f64> = pot.bin_centers[lo..hi].iter().map(|p| p * p).collect();
        let ys = &pot.u_values[lo..hi];
        let slope = ols_slope(&xs, ys);
        assert!((slope - 0.25).abs() <= 0.05, "slope = {slope}");
    }

    #[test]
    fn empirical_potential_errors() {
        let series = sim(PotentialModel::no_potential(1.0).unwrap(), 1.0, 200, 4);
        assert!(matches!(
            empirical_potential(&series, 5, 2),
            Err(PuckError::InvalidArgument(_))
        ));
        let flat = TickSeries::new(vec![3.0; 100], "flat").unwrap();
        assert!(matches!(
            empirical_potential(&flat, 5, 10),
            Err(PuckError::InsufficientData { .. })
        ));
        let short = TickSeries::new(vec![1.0, 2.0, 3.0], "short").unwrap();
        assert!(matches!(
            empirical_potential(&short, 2, 10),
            Err(PuckError::SeriesTooShort { .. })
        ));
    }

    fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in xs.iter().zip(ys) {
            num += (x - mx) * (y - my);
            den += (x - mx) * (x - mx);
        }
        num / den
    }

    fn scan_grid() -> GridSpec {
        GridSpec {
            b_quad_range: CoefficientRange::new(-1.0, 1.0, 0.1).unwrap(),
            b_nl_range: CoefficientRange::new(-0.6, 0.6, 0.1).unwrap(),
            gamma_set: vec![2],
            m_set: vec![2, 4],
            refine: false,
        }
    }

    #[test]
    fn scan_reports_degenerate_windows_and_is_deterministic() {
        let tail = sim(PotentialModel::no_potential(0.5).unwrap(), 0.5, 400, 6);
        let mut prices = vec![50.0; 300];
        prices.extend_from_slice(tail.prices());
        let series = TickSeries::new(prices, "glued").unwrap();
        let opts = ScanOptions { window: 200, step: 100, ..ScanOptions::default() };
        let records = scan_windows(&series, &scan_grid(), &opts).unwrap();
        assert_eq!(records.len(), (series.len() - 200) / 100 + 1);
        assert!(matches!(records[0].outcome, WindowOutcome::Degenerate));
        assert!(matches!(records.last().unwrap().outcome, WindowOutcome::Classified { .. }));
        let again = scan_windows(&series, &scan_grid(), &opts).unwrap();
        assert_eq!(records, again);
    }

    #[test]
    fn scan_rejects_bad_options() {
        let series = sim(PotentialModel::no_potential(1.0).unwrap(), 1.0, 300, 6);
        let mut opts = ScanOptions { window: 10, ..ScanOptions::default() };
        assert!(scan_windows(&series, &scan_grid(), &opts).is_err());
        opts.window = 200;
        opts.step = 0;
        assert!(scan_windows(&series, &scan_grid(), &opts).is_err());
        opts.step = 100;
        opts.window = 5000;
        assert!(matches!(
            scan_windows(&series, &scan_grid(), &opts),
            Err(PuckError::SeriesTooShort { .. })
        ));
    }
}
