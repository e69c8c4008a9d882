//! Root-magnitude evaluation for the characteristic polynomial of the
//! noise-free feedback map `P(t+1) = P(t) - b (P(t) - P_M(t))`.
//!
//! The map is a linear recurrence of order `m` whose characteristic
//! polynomial always carries a unit root (price-level invariance); the
//! stability question concerns the remaining `m - 1` roots.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Sub};

#[cfg(not(feature = "std"))]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn abs(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

impl Add for Complex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Div for Complex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let denom = rhs.re * rhs.re + rhs.im * rhs.im;
        Self::new(
            (self.re * rhs.re + self.im * rhs.im) / denom,
            (self.im * rhs.re - self.re * rhs.im) / denom,
        )
    }
}

/// Monic coefficients (descending degree) of the characteristic polynomial
/// of the order-`m` map, deflated by its structural root at 1:
/// `q(x) = [x^m - (1 - b (m-1)/m) x^(m-1) - (b/m)(x^(m-2) + ... + 1)] / (x - 1)`.
pub(crate) fn deflated_char_poly(m: usize, b: f64) -> Vec<f64> {
    debug_assert!(m >= 2);
    let mut full = Vec::with_capacity(m + 1);
    full.push(1.0);
    full.push(-(1.0 - b + b / m as f64));
    for _ in 0..m - 1 {
        full.push(-b / m as f64);
    }
    // Synthetic division by (x - 1); the remainder vanishes identically.
    let mut q = Vec::with_capacity(m);
    let mut acc = 0.0;
    for &coeff in full.iter().take(m) {
        acc += coeff;
        q.push(acc);
    }
    q
}

/// Largest root magnitude of a monic real polynomial given by descending
/// coefficients, via Durand-Kerner iteration (degree is small here, at
/// most the moving-average span minus one).
pub(crate) fn max_root_magnitude(coeffs: &[f64]) -> f64 {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return 0.0;
    }
    if degree == 1 {
        return coeffs[1].abs();
    }

    let eval = |z: Complex| -> Complex {
        let mut acc = Complex::new(coeffs[0], 0.0);
        for &c in &coeffs[1..] {
            acc = acc * z + Complex::new(c, 0.0);
        }
        acc
    };

    // Standard non-symmetric starting points (0.4 + 0.9i)^k.
    let seed = Complex::new(0.4, 0.9);
    let mut roots = Vec::with_capacity(degree);
    let mut z = seed;
    for _ in 0..degree {
        roots.push(z);
        z = z * seed;
    }

    for _ in 0..500 {
        let mut max_delta = 0.0_f64;
        for i in 0..degree {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom = denom * (roots[i] - roots[j]);
                }
            }
            let delta = eval(roots[i]) / denom;
            roots[i] = roots[i] - delta;
            max_delta = max_delta.max(delta.abs() / (1.0 + roots[i].abs()));
        }
        if max_delta < 1e-13 {
            break;
        }
    }

    roots.iter().map(|r| r.abs()).fold(0.0, f64::max)
}
