//! Potential shapes and noise distributions.

use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use rand::Rng;
use rand_distr::{Distribution, Normal, StudentT};

use crate::error::{PuckError, Result};

/// A quadratic-plus-one-nonlinear-term potential
/// `U(p) = (b_quad/2) p^2 + (b_nl/(gamma+1)) p^(gamma+1)`
/// acting on the displacement `p = P(t) - P_M(t)`, together with the
/// moving-average span `m` that defines the center and the noise scale
/// `sigma` of the fitted innovations.
///
/// `b_quad > 0` is an attractive (stabilizing) force, `b_quad < 0`
/// repulsive. The "no potential" pure random walk is `b_quad == 0.0 &&
/// b_nl == 0.0` exactly.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialModel {
    /// Coefficient of the quadratic term (the report label is "b1 (Eq.4)").
    pub b_quad: f64,
    /// Nonlinear force exponent; the potential term has degree `gamma + 1`.
    pub gamma: u32,
    /// Coefficient of the nonlinear term.
    pub b_nl: f64,
    /// Moving-average span in ticks.
    pub m: usize,
    /// Noise standard deviation (scale parameter for Student-t).
    pub sigma: f64,
}

impl PotentialModel {
    pub fn new(b_quad: f64, gamma: u32, b_nl: f64, m: usize, sigma: f64) -> Result<Self> {
        let model = Self { b_quad, gamma, b_nl, m, sigma };
        model.validate()?;
        Ok(model)
    }

    /// Quadratic-only model (`b_nl = 0`, `gamma` fixed at 2).
    pub fn quadratic(b_quad: f64, m: usize, sigma: f64) -> Result<Self> {
        Self::new(b_quad, 2, 0.0, m, sigma)
    }

    /// The no-potential pure random walk.
    pub fn no_potential(sigma: f64) -> Result<Self> {
        Self::new(0.0, 2, 0.0, 1, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b_quad.is_finite() && self.b_nl.is_finite()) {
            return Err(PuckError::NonFinite("potential coefficient"));
        }
        if self.gamma < 2 {
            return Err(PuckError::InvalidArgument("gamma must be >= 2"));
        }
        if self.m < 1 {
            return Err(PuckError::InvalidArgument("moving-average span m must be >= 1"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(PuckError::InvalidArgument("sigma must be positive and finite"));
        }
        Ok(())
    }

    pub fn is_no_potential(&self) -> bool {
        self.b_quad == 0.0 && self.b_nl == 0.0
    }

    /// Potential value `U(p) = (b_quad/2) p^2 + (b_nl/(gamma+1)) p^(gamma+1)`.
    pub fn potential_value(&self, p: f64) -> Result<f64> {
        if !p.is_finite() {
            return Err(PuckError::NonFinite("displacement p"));
        }
        Ok(self.value_raw(p))
    }

    /// Restoring force `-dU/dp = -(b_quad p + b_nl p^gamma)`, the exact
    /// analytic derivative of [`Self::potential_value`].
    pub fn potential_force(&self, p: f64) -> Result<f64> {
        if !p.is_finite() {
            return Err(PuckError::NonFinite("displacement p"));
        }
        Ok(self.force_raw(p))
    }

    #[inline]
    pub(crate) fn value_raw(&self, p: f64) -> f64 {
        let degree = self.gamma as i32 + 1;
        0.5 * self.b_quad * p * p + self.b_nl / f64::from(degree) * p.powi(degree)
    }

    #[inline]
    pub(crate) fn force_raw(&self, p: f64) -> f64 {
        -(self.b_quad * p + self.b_nl * p.powi(self.gamma as i32))
    }
}

/// Distribution of the per-tick noise `f(t)`.
///
/// Gaussian is the default; Student-t is provided for the long-tail
/// robustness check and requires `dof > 2` so the variance exists.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseModel {
    Gaussian { sigma: f64 },
    StudentT { sigma: f64, dof: f64 },
}

impl NoiseModel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let noise = Self::Gaussian { sigma };
        noise.validate()?;
        Ok(noise)
    }

    pub fn student_t(sigma: f64, dof: f64) -> Result<Self> {
        let noise = Self::StudentT { sigma, dof };
        noise.validate()?;
        Ok(noise)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Gaussian { sigma } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(PuckError::InvalidArgument("sigma must be positive and finite"));
                }
            }
            NoiseModel::StudentT { sigma, dof } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(PuckError::InvalidArgument("sigma must be positive and finite"));
                }
                if !(dof.is_finite() && dof > 2.0) {
                    return Err(PuckError::InvalidArgument(
                        "student_t dof must be > 2 so the variance exists",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } | NoiseModel::StudentT { sigma, .. } => sigma,
        }
    }

    /// Log density `ln w(f)` of a single noise value.
    pub fn ln_density(&self, f: f64) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } => gaussian_ln_density(f, sigma),
            NoiseModel::StudentT { sigma, dof } => student_t_ln_density(f, sigma, dof),
        }
    }

    pub(crate) fn sampler(&self) -> Result<NoiseSampler> {
        self.validate()?;
        match *self {
            NoiseModel::Gaussian { sigma } => Normal::new(0.0, sigma)
                .map(NoiseSampler::Gaussian)
                .map_err(|_| PuckError::InvalidArgument("sigma must be positive and finite")),
            NoiseModel::StudentT { sigma, dof } => StudentT::new(dof)
                .map(|dist| NoiseSampler::StudentT { dist, sigma })
                .map_err(|_| PuckError::InvalidArgument("student_t dof must be valid")),
        }
    }
}

#[inline]
pub(crate) fn gaussian_ln_density(f: f64, sigma: f64) -> f64 {
    let z = f / sigma;
    -0.5 * (2.0 * PI * sigma * sigma).ln() - 0.5 * z * z
}

#[inline]
pub(crate) fn student_t_ln_density(f: f64, sigma: f64, dof: f64) -> f64 {
    let z = f / sigma;
    libm::lgamma(0.5 * (dof + 1.0))
        - libm::lgamma(0.5 * dof)
        - 0.5 * (dof * PI).ln()
        - sigma.ln()
        - 0.5 * (dof + 1.0) * (1.0 + z * z / dof).ln()
}

pub(crate) enum NoiseSampler {
    Gaussian(Normal<f64>),
    StudentT { dist: StudentT<f64>, sigma: f64 },
}

impl NoiseSampler {
    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseSampler::Gaussian(dist) => dist.sample(rng),
            NoiseSampler::StudentT { dist, sigma } => sigma * dist.sample(rng),
        }
    }
}
