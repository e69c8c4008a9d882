//! Maximum-likelihood potential fitting over a coefficient grid, with
//! AIC/BIC model selection across the three nested model families:
//! no potential, quadratic, and quadratic plus one nonlinear term.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{PuckError, Result};
use crate::model::{student_t_ln_density, NoiseModel, PotentialModel};
use crate::series::{mean_tail, TickSeries};
use crate::simulate::residuals;

/// Which information criterion ranks candidate models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Criterion {
    Aic,
    Bic,
}

/// Noise family assumed when fitting. The scale is always profiled out:
/// analytically for Gaussian, by golden-section search for Student-t.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitNoise {
    Gaussian,
    StudentT { dof: f64 },
}

impl FitNoise {
    pub fn validate(&self) -> Result<()> {
        if let FitNoise::StudentT { dof } = *self {
            if !(dof.is_finite() && dof > 2.0) {
                return Err(PuckError::InvalidArgument(
                    "student_t dof must be > 2 so the variance exists",
                ));
            }
        }
        Ok(())
    }
}

impl Default for FitNoise {
    fn default() -> Self {
        FitNoise::Gaussian
    }
}

/// An inclusive coefficient range `low, low + step, ..., high`.
///
/// Values within `step * 1e-6` of zero snap to exactly `0.0` so the
/// no-potential point is representable on symmetric grids.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientRange {
    pub low: f64,
    pub high: f64,
    pub step: f64,
}

impl CoefficientRange {
    pub fn new(low: f64, high: f64, step: f64) -> Result<Self> {
        let range = Self { low, high, step };
        range.validate()?;
        Ok(range)
    }

    /// A single pinned value.
    pub fn fixed(value: f64) -> Self {
        Self { low: value, high: value, step: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low.is_finite() && self.high.is_finite() && self.step.is_finite()) {
            return Err(PuckError::NonFinite("coefficient range"));
        }
        if self.low > self.high {
            return Err(PuckError::InvalidArgument("range low must be <= high"));
        }
        if self.step <= 0.0 {
            return Err(PuckError::InvalidArgument("range step must be > 0"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.high - self.low) / self.step + 1e-9) as usize + 1;
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let mut v = self.low + i as f64 * self.step;
            if v > self.high {
                v = self.high;
            }
            if v.abs() < self.step * 1e-6 {
                v = 0.0;
            }
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
        out
    }

    fn clamp(&self, v: f64) -> f64 {
        v.max(self.low).min(self.high)
    }
}

/// The candidate-model grid searched by [`fit_grid`] and [`select_model`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub b_quad_range: CoefficientRange,
    pub b_nl_range: CoefficientRange,
    pub gamma_set: Vec<u32>,
    pub m_set: Vec<usize>,
    /// Coordinate-descent refinement of the best grid point at one-tenth
    /// step, until the log-likelihood improves by less than 1e-9.
    pub refine: bool,
}

impl Default for GridSpec {
    /// Grid covering the stability-relevant coefficient region at
    /// tractable cost: `b_quad` in [-2, 2] step 0.05, `b_nl` in [-1, 1]
    /// step 0.02, `gamma` in {2, 3}, `m` in {2, ..., 10}.
    fn default() -> Self {
        Self {
            b_quad_range: CoefficientRange { low: -2.0, high: 2.0, step: 0.05 },
            b_nl_range: CoefficientRange { low: -1.0, high: 1.0, step: 0.02 },
            gamma_set: vec![2, 3],
            m_set: (2..=10).collect(),
            refine: false,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.b_quad_range.validate()?;
        self.b_nl_range.validate()?;
        if self.gamma_set.is_empty() || self.m_set.is_empty() {
            return Err(PuckError::EmptyGrid);
        }
        if self.gamma_set.iter().any(|&g| g < 2) {
            return Err(PuckError::InvalidArgument("every gamma must be >= 2"));
        }
        if self.m_set.iter().any(|&m| m < 1) {
            return Err(PuckError::InvalidArgument("every m must be >= 1"));
        }
        Ok(())
    }

    pub fn max_m(&self) -> usize {
        self.m_set.iter().copied().max().unwrap_or(1)
    }

    fn sorted_gammas(&self) -> Vec<u32> {
        let mut v = self.gamma_set.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn sorted_ms(&self) -> Vec<usize> {
        let mut v = self.m_set.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Half-open tick range `[start, start + length)` a fit consumed; the
/// first `m - 1` ticks of it only seed the moving average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowSpan {
    pub start: usize,
    pub length: usize,
}

/// One fitted candidate model with its likelihood and criteria.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitResult {
    pub model: PotentialModel,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    pub k_params: u32,
    pub n_obs: usize,
    pub window: WindowSpan,
    pub selected: bool,
}

impl FitResult {
    pub fn criterion_value(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::Aic => self.aic,
            Criterion::Bic => self.bic,
        }
    }
}

/// The three nested candidate families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ModelFamily {
    /// `b_quad = 0, b_nl = 0`: the pure random walk (k = 1: sigma).
    NoPotential,
    /// `b_nl = 0` (k = 3: b_quad, m, sigma).
    Quadratic,
    /// Quadratic plus one nonlinear term (k = 5: b_quad, gamma, b_nl, m, sigma).
    Nonlinear,
}

/// Outcome of [`select_model`]: the per-family winners and the overall
/// winner by the chosen criterion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSelection {
    pub criterion: Criterion,
    pub no_potential: FitResult,
    pub quadratic: FitResult,
    pub nonlinear: FitResult,
    pub winner: ModelFamily,
}

impl ModelSelection {
    pub fn best(&self) -> &FitResult {
        self.family_result(self.winner)
    }

    pub fn family_result(&self, family: ModelFamily) -> &FitResult {
        match family {
            ModelFamily::NoPotential => &self.no_potential,
            ModelFamily::Quadratic => &self.quadratic,
            ModelFamily::Nonlinear => &self.nonlinear,
        }
    }

    /// Criterion gap between the winning family and the runner-up
    /// (non-negative).
    pub fn runner_up_gap(&self) -> f64 {
        let families = [ModelFamily::NoPotential, ModelFamily::Quadratic, ModelFamily::Nonlinear];
        let mut runner_up = f64::INFINITY;
        for f in families {
            if f != self.winner {
                let v = self.family_result(f).criterion_value(self.criterion);
                if v < runner_up {
                    runner_up = v;
                }
            }
        }
        runner_up - self.best().criterion_value(self.criterion)
    }

    /// Criterion advantage of the nonlinear family over the best family
    /// without a nonlinear term; positive when the nonlinear fit wins.
    pub fn nonlinear_gap(&self) -> f64 {
        let base = self
            .no_potential
            .criterion_value(self.criterion)
            .min(self.quadratic.criterion_value(self.criterion));
        base - self.nonlinear.criterion_value(self.criterion)
    }
}

/// Log-likelihood of the series under a fixed model and noise density:
/// the sum of `ln w(f(t))` over the residuals of [`residuals`].
pub fn log_likelihood(
    series: &TickSeries,
    model: &PotentialModel,
    noise: &NoiseModel,
) -> Result<f64> {
    noise.validate()?;
    if series.len() < model.m + 2 {
        return Err(PuckError::SeriesTooShort { needed: model.m + 2, got: series.len() });
    }
    let res = residuals(series, model)?;
    Ok(res.iter().map(|&f| noise.ln_density(f)).sum())
}

/// Maximum-likelihood Gaussian scale: the root mean square of the
/// residuals. At this scale the Gaussian log-likelihood equals
/// `-(n/2) (ln(2 pi sigma^2) + 1)`.
pub fn profile_sigma(series: &TickSeries, model: &PotentialModel) -> Result<f64> {
    if series.len() < model.m + 2 {
        return Err(PuckError::SeriesTooShort { needed: model.m + 2, got: series.len() });
    }
    let res = residuals(series, model)?;
    let mss = res.iter().map(|&f| f * f).sum::<f64>() / res.len() as f64;
    if !(mss > 0.0) {
        return Err(PuckError::DegenerateFit);
    }
    Ok(mss.sqrt())
}

/// `AIC = -2 logL + 2k` and `BIC = -2 logL + k ln(n)`.
pub fn information_criteria(log_likelihood: f64, k_params: u32, n_obs: usize) -> Result<(f64, f64)> {
    if n_obs < 1 {
        return Err(PuckError::InvalidArgument("n_obs must be >= 1"));
    }
    if k_params < 1 {
        return Err(PuckError::InvalidArgument("k_params must be >= 1"));
    }
    Ok(information_criteria_raw(log_likelihood, k_params, n_obs))
}

#[inline]
fn information_criteria_raw(log_likelihood: f64, k_params: u32, n_obs: usize) -> (f64, f64) {
    let k = f64::from(k_params);
    let aic = -2.0 * log_likelihood + 2.0 * k;
    let bic = -2.0 * log_likelihood + k * (n_obs as f64).ln();
    (aic, bic)
}

/// Evaluates the profiled log-likelihood at every grid point
/// `(b_quad, gamma, b_nl, m)` and returns all candidates sorted by
/// ascending AIC (deterministic tie-breaking toward parsimony).
///
/// Every candidate uses a common warm-up of `max(m_set) - 1` ticks, so
/// `n_obs` is identical across the grid and criteria are comparable; a
/// candidate with span `m` therefore has its window start offset by
/// `max(m_set) - m`. Parameter counts come from the coefficients: exact
/// zeros are pinned, so `k` is 1 for the no-potential point, 3 on the
/// `b_nl = 0` slice, and 5 elsewhere.
pub fn fit_grid(series: &TickSeries, grid: &GridSpec, noise: FitNoise) -> Result<Vec<FitResult>> {
    fit_grid_window(series.prices(), 0, grid, noise, grid.max_m(), KMode::PerPoint, Criterion::Aic)
}

/// Runs [`fit_grid`] restricted to the three nested families and returns
/// the per-family winners plus the overall winner by `criterion`.
///
/// Family parameter counts are fixed at k = 1, 3, 5. All three families
/// share the warm-up implied by `max(m_set)`, so their criteria compare
/// like for like. The winning family's result is marked `selected`.
pub fn select_model(
    series: &TickSeries,
    grid: &GridSpec,
    criterion: Criterion,
    noise: FitNoise,
) -> Result<ModelSelection> {
    select_model_window(series.prices(), 0, grid, criterion, noise)
}

pub(crate) fn select_model_window(
    prices: &[f64],
    window_start: usize,
    grid: &GridSpec,
    criterion: Criterion,
    noise: FitNoise,
) -> Result<ModelSelection> {
    grid.validate()?;
    noise.validate()?;
    let align_m = grid.max_m();
    let min_gamma = *grid.sorted_gammas().first().expect("validated non-empty");

    let family_a = GridSpec {
        b_quad_range: CoefficientRange::fixed(0.0),
        b_nl_range: CoefficientRange::fixed(0.0),
        gamma_set: vec![min_gamma],
        m_set: vec![1],
        refine: false,
    };
    let family_b = GridSpec {
        b_quad_range: grid.b_quad_range,
        b_nl_range: CoefficientRange::fixed(0.0),
        gamma_set: vec![min_gamma],
        m_set: grid.m_set.clone(),
        refine: grid.refine,
    };

    let no_potential = fit_grid_window(
        prices,
        window_start,
        &family_a,
        noise,
        align_m,
        KMode::Fixed(1),
        criterion,
    )?
    .swap_remove(0);
    let quadratic = fit_grid_window(
        prices,
        window_start,
        &family_b,
        noise,
        align_m,
        KMode::Fixed(3),
        criterion,
    )?
    .swap_remove(0);
    let nonlinear =
        fit_grid_window(prices, window_start, grid, noise, align_m, KMode::Fixed(5), criterion)?
            .swap_remove(0);

    let mut selection = ModelSelection {
        criterion,
        no_potential,
        quadratic,
        nonlinear,
        winner: ModelFamily::NoPotential,
    };
    for family in [ModelFamily::Quadratic, ModelFamily::Nonlinear] {
        let current = selection.family_result(selection.winner);
        if fit_order(criterion, selection.family_result(family), current) == Ordering::Less {
            selection.winner = family;
        }
    }
    match selection.winner {
        ModelFamily::NoPotential => selection.no_potential.selected = true,
        ModelFamily::Quadratic => selection.quadratic.selected = true,
        ModelFamily::Nonlinear => selection.nonlinear.selected = true,
    }
    Ok(selection)
}

/// How candidate parameter counts are assigned.
#[derive(Clone, Copy)]
enum KMode {
    /// From the coefficient values of each point (standalone grids).
    PerPoint,
    /// Fixed by the family being searched (nested-family selection).
    Fixed(u32),
}

impl KMode {
    #[inline]
    fn k_for(self, b_quad: f64, b_nl: f64) -> u32 {
        match self {
            KMode::Fixed(k) => k,
            KMode::PerPoint => {
                if b_quad == 0.0 && b_nl == 0.0 {
                    1
                } else if b_nl == 0.0 {
                    3
                } else {
                    5
                }
            }
        }
    }
}

/// Total order on fits: criterion value, then smaller k, smaller m,
/// smaller |b_nl|, smaller |b_quad|, then remaining fields for full
/// determinism.
fn fit_order(criterion: Criterion, a: &FitResult, b: &FitResult) -> Ordering {
    a.criterion_value(criterion)
        .total_cmp(&b.criterion_value(criterion))
        .then_with(|| a.k_params.cmp(&b.k_params))
        .then_with(|| a.model.m.cmp(&b.model.m))
        .then_with(|| a.model.b_nl.abs().total_cmp(&b.model.b_nl.abs()))
        .then_with(|| a.model.b_quad.abs().total_cmp(&b.model.b_quad.abs()))
        .then_with(|| a.model.gamma.cmp(&b.model.gamma))
        .then_with(|| a.model.b_nl.total_cmp(&b.model.b_nl))
        .then_with(|| a.model.b_quad.total_cmp(&b.model.b_quad))
}

fn fit_grid_window(
    prices: &[f64],
    window_start: usize,
    grid: &GridSpec,
    noise: FitNoise,
    align_m: usize,
    k_mode: KMode,
    sort_criterion: Criterion,
) -> Result<Vec<FitResult>> {
    grid.validate()?;
    noise.validate()?;
    let len = prices.len();
    if len < align_m + 3 {
        return Err(PuckError::SeriesTooShort { needed: align_m + 3, got: len });
    }
    debug_assert!(grid.max_m() <= align_m);

    let ms = grid.sorted_ms();
    let gammas = grid.sorted_gammas();
    let b_values = grid.b_quad_range.values();
    let c_values = grid.b_nl_range.values();
    let n_obs = len - align_m;

    // Increments over the aligned residual range, shared by every m.
    let t0 = align_m - 1;
    let incs: Vec<f64> = (t0..len - 1).map(|t| prices[t + 1] - prices[t]).collect();

    let mut results =
        Vec::with_capacity(ms.len() * gammas.len() * b_values.len() * c_values.len());
    for &m in &ms {
        let disp: Vec<f64> =
            (t0..len - 1).map(|t| prices[t] - mean_tail(&prices[..=t], m)).collect();
        for &gamma in &gammas {
            let mut eval = PointEval::new(&incs, &disp, gamma, noise);
            for &b in &b_values {
                for &c in &c_values {
                    let (sigma, ll) = eval.eval(b, c)?;
                    let k = k_mode.k_for(b, c);
                    results.push(make_result(
                        b,
                        c,
                        gamma,
                        m,
                        sigma,
                        ll,
                        k,
                        n_obs,
                        window_start,
                        len,
                        align_m,
                    ));
                }
            }
        }
    }
    if results.is_empty() {
        return Err(PuckError::EmptyGrid);
    }
    results.sort_by(|a, b| fit_order(sort_criterion, a, b));

    if grid.refine {
        let best = results[0].clone();
        let disp: Vec<f64> = (t0..len - 1)
            .map(|t| prices[t] - mean_tail(&prices[..=t], best.model.m))
            .collect();
        let mut eval = PointEval::new(&incs, &disp, best.model.gamma, noise);
        results[0] = refine_point(&best, &mut eval, grid, n_obs, window_start, len, align_m)?;
    }
    Ok(results)
}

#[allow(clippy::too_many_arguments)]
fn make_result(
    b_quad: f64,
    b_nl: f64,
    gamma: u32,
    m: usize,
    sigma: f64,
    ll: f64,
    k: u32,
    n_obs: usize,
    window_start: usize,
    window_len: usize,
    align_m: usize,
) -> FitResult {
    let skip = align_m - m;
    let (aic, bic) = information_criteria_raw(ll, k, n_obs);
    FitResult {
        model: PotentialModel { b_quad, gamma, b_nl, m, sigma },
        log_likelihood: ll,
        aic,
        bic,
        k_params: k,
        n_obs,
        window: WindowSpan { start: window_start + skip, length: window_len - skip },
        selected: false,
    }
}

/// Coordinate descent from the best grid point at one-tenth step.
/// Exact-zero coefficients stay pinned so the family does not change.
fn refine_point(
    best: &FitResult,
    eval: &mut PointEval<'_>,
    grid: &GridSpec,
    n_obs: usize,
    window_start: usize,
    window_len: usize,
    align_m: usize,
) -> Result<FitResult> {
    let step_b = grid.b_quad_range.step / 10.0;
    let step_c = grid.b_nl_range.step / 10.0;
    let mut b = best.model.b_quad;
    let mut c = best.model.b_nl;
    let mut sigma = best.model.sigma;
    let mut ll = best.log_likelihood;

    for _sweep in 0..1000 {
        let sweep_start = ll;
        if b != 0.0 {
            for dir in [-1.0, 1.0] {
                loop {
                    let cand = grid.b_quad_range.clamp(b + dir * step_b);
                    if cand == b {
                        break;
                    }
                    let (s, l) = eval.eval(cand, c)?;
                    if l > ll {
                        b = cand;
                        sigma = s;
                        ll = l;
                    } else {
                        break;
                    }
                }
            }
        }
        if c != 0.0 {
            for dir in [-1.0, 1.0] {
                loop {
                    let cand = grid.b_nl_range.clamp(c + dir * step_c);
                    if cand == c {
                        break;
                    }
                    let (s, l) = eval.eval(b, cand)?;
                    if l > ll {
                        c = cand;
                        sigma = s;
                        ll = l;
                    } else {
                        break;
                    }
                }
            }
        }
        if ll - sweep_start < 1e-9 {
            break;
        }
    }

    Ok(make_result(
        b,
        c,
        best.model.gamma,
        best.model.m,
        sigma,
        ll,
        best.k_params,
        n_obs,
        window_start,
        window_len,
        align_m,
    ))
}

/// Profiled-likelihood evaluator for one `(m, gamma)` slice.
///
/// For Gaussian noise the mean squared residual at any `(b_quad, b_nl)`
/// is a quadratic form in six sufficient statistics, so each grid point
/// costs O(1); for Student-t the residual vector is materialized and the
/// scale is profiled by golden-section search.
struct PointEval<'a> {
    incs: &'a [f64],
    disp: &'a [f64],
    disp_pow: Vec<f64>,
    noise: FitNoise,
    n: f64,
    s_dd: f64,
    s_xx: f64,
    s_yy: f64,
    s_dx: f64,
    s_dy: f64,
    s_xy: f64,
    scratch: Vec<f64>,
}

impl<'a> PointEval<'a> {
    fn new(incs: &'a [f64], disp: &'a [f64], gamma: u32, noise: FitNoise) -> Self {
        debug_assert_eq!(incs.len(), disp.len());
        let disp_pow: Vec<f64> = disp.iter().map(|&x| x.powi(gamma as i32)).collect();
        let (mut s_dd, mut s_xx, mut s_yy) = (0.0, 0.0, 0.0);
        let (mut s_dx, mut s_dy, mut s_xy) = (0.0, 0.0, 0.0);
        for i in 0..incs.len() {
            let (d, x, y) = (incs[i], disp[i], disp_pow[i]);
            s_dd += d * d;
            s_xx += x * x;
            s_yy += y * y;
            s_dx += d * x;
            s_dy += d * y;
            s_xy += x * y;
        }
        Self {
            incs,
            disp,
            disp_pow,
            noise,
            n: incs.len() as f64,
            s_dd,
            s_xx,
            s_yy,
            s_dx,
            s_dy,
            s_xy,
            scratch: vec![0.0; incs.len()],
        }
    }

    /// Profiled scale and log-likelihood at one coefficient pair.
    fn eval(&mut self, b: f64, c: f64) -> Result<(f64, f64)> {
        match self.noise {
            FitNoise::Gaussian => {
                let mss = (self.s_dd
                    + b * b * self.s_xx
                    + c * c * self.s_yy
                    + 2.0 * b * self.s_dx
                    + 2.0 * c * self.s_dy
                    + 2.0 * b * c * self.s_xy)
                    / self.n;
                if !(mss > 0.0) {
                    return Err(PuckError::DegenerateFit);
                }
                let ll = -0.5 * self.n * ((2.0 * PI * mss).ln() + 1.0);
                Ok((mss.sqrt(), ll))
            }
            FitNoise::StudentT { dof } => {
                for i in 0..self.incs.len() {
                    self.scratch[i] = self.incs[i] + b * self.disp[i] + c * self.disp_pow[i];
                }
                profile_sigma_student_t(&self.scratch, dof)
            }
        }
    }
}

/// Maximizes the Student-t log-likelihood over the scale by golden-section
/// search on `[1e-6, 10 RMS]` to relative tolerance 1e-8.
fn profile_sigma_student_t(res: &[f64], dof: f64) -> Result<(f64, f64)> {
    let mss = res.iter().map(|&r| r * r).sum::<f64>() / res.len() as f64;
    if !(mss > 0.0) {
        return Err(PuckError::DegenerateFit);
    }
    let ll_at = |sigma: f64| -> f64 {
        res.iter().map(|&r| student_t_ln_density(r, sigma, dof)).sum()
    };

    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut lo = 1e-6_f64;
    let mut hi = 10.0 * mss.sqrt();
    if hi <= lo {
        hi = 2.0 * lo;
    }
    let mut c = hi - INVPHI * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = ll_at(c);
    let mut fd = ll_at(d);
    while hi - lo > 1e-8 * hi {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INVPHI * (hi - lo);
            fc = ll_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = ll_at(d);
        }
    }
    let sigma = 0.5 * (lo + hi);
    Ok((sigma, ll_at(sigma)))
}
