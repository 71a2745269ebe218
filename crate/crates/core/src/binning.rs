//! Gaussian displacement noise binned onto the square GKP lattice.
//!
//! A homodyne outcome is decoded to the nearest lattice multiple of
//! `sqrt(2*pi/D)`; a displacement that lands `m` sites away induces the shift
//! error `X^(m mod D)`. For zero-mean Gaussian displacements with variance
//! `sigma^2` the probability of each residue class is a sum of Gaussian
//! integrals over bins of width `sqrt(2*pi/D)` centered on the lattice sites.
//!
//! Tail probabilities are assembled from complementary-error-function
//! differences so that bins carrying `1e-12`-scale mass come out with full
//! relative accuracy; the no-shift complement is always available as a direct
//! sum over the shifted bins rather than as `1 - p0`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::dist::{compensated_sum, PauliDistribution};
use crate::error::{Error, Result};

/// Quadrature variance of the vacuum state.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Spacing of the decoded lattice for a `D`-level qudit: `sqrt(2*pi/D)`.
pub fn lattice_spacing(dim: usize) -> f64 {
    (2.0 * PI / dim as f64).sqrt()
}

/// How many lattice periods of bins to include in the sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Include every bin whose center lies within ten standard deviations of
    /// the origin (and never fewer than `|j| <= 1` periods). The excluded
    /// mass is below 1e-15 for any parameters.
    #[default]
    Adaptive,
    /// Fixed number of periods `|j| <= value`.
    Fixed(u32),
}

impl Truncation {
    fn periods(self, dim: usize, sigma: f64) -> u32 {
        match self {
            Truncation::Adaptive => adaptive_periods(dim, sigma),
            Truncation::Fixed(j) => j.max(1),
        }
    }
}

fn adaptive_periods(dim: usize, sigma: f64) -> u32 {
    let reach = 10.0 * sigma / (lattice_spacing(dim) * dim as f64);
    reach.ceil() as u32 + 1
}

fn validate_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::invalid("dim", "dimension must be at least 2"));
    }
    Ok(())
}

fn validate_variance(sigma_sq: f64) -> Result<()> {
    if !sigma_sq.is_finite() || sigma_sq < 0.0 {
        return Err(Error::invalid(
            "sigma_sq",
            format!("variance must be finite and non-negative, got {sigma_sq}"),
        ));
    }
    Ok(())
}

/// Mass of a centered Gaussian with deviation `sigma` on `[lo, hi]`.
///
/// Arranged as erfc differences on each half-line so that far-tail intervals
/// do not cancel.
pub(crate) fn gaussian_interval_mass(lo: f64, hi: f64, sigma: f64) -> f64 {
    debug_assert!(lo <= hi);
    if sigma == 0.0 {
        return if lo <= 0.0 && 0.0 <= hi { 1.0 } else { 0.0 };
    }
    let s = sigma * SQRT_2;
    if lo >= 0.0 {
        0.5 * (libm::erfc(lo / s) - libm::erfc(hi / s))
    } else if hi <= 0.0 {
        0.5 * (libm::erfc(-hi / s) - libm::erfc(-lo / s))
    } else {
        0.5 * (libm::erf(hi / s) + libm::erf(-lo / s))
    }
}

/// Probability that Gaussian displacement noise of variance `sigma_sq`
/// produces the shift error `X^k`, summing bins with `|j| <= j_max`.
///
/// The zero-variance limit is taken explicitly: all mass sits in the central
/// bin (`1` for `k = 0`, `0` otherwise).
pub fn shift_probability(k: usize, dim: usize, sigma_sq: f64, j_max: u32) -> Result<f64> {
    validate_dim(dim)?;
    validate_variance(sigma_sq)?;
    if k >= dim {
        return Err(Error::invalid("k", format!("shift power {k} >= D = {dim}")));
    }
    if j_max < 1 {
        return Err(Error::invalid("j_max", "at least one period is required"));
    }
    if sigma_sq == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let spacing = lattice_spacing(dim);
    let sigma = sigma_sq.sqrt();
    let half = 0.5 * spacing;
    let mass = compensated_sum((-(j_max as i64)..=j_max as i64).map(|j| {
        let center = (j * dim as i64 + k as i64) as f64 * spacing;
        gaussian_interval_mass(center - half, center + half, sigma)
    }));
    Ok(mass.min(1.0))
}

/// Full shift-error distribution for Gaussian noise of variance `sigma_sq`,
/// with the default adaptive truncation.
pub fn distribution_from_gaussian(dim: usize, sigma_sq: f64) -> Result<PauliDistribution> {
    distribution_from_gaussian_with(dim, sigma_sq, Truncation::Adaptive)
}

/// Same as [`distribution_from_gaussian`] with an explicit truncation policy.
/// The result is renormalized so the entries sum to exactly one.
pub fn distribution_from_gaussian_with(
    dim: usize,
    sigma_sq: f64,
    truncation: Truncation,
) -> Result<PauliDistribution> {
    validate_dim(dim)?;
    validate_variance(sigma_sq)?;
    if sigma_sq == 0.0 {
        return Ok(PauliDistribution::delta(dim));
    }
    let j = truncation.periods(dim, sigma_sq.sqrt());
    let weights = (0..dim)
        .map(|k| shift_probability(k, dim, sigma_sq, j))
        .collect::<Result<Vec<_>>>()?;
    PauliDistribution::from_weights(weights)
}

/// No-shift probability and its complement, both renormalized.
///
/// The complement is accumulated directly over the shifted bins, so it stays
/// accurate down to the deep-tail regime where `1 - p0` would lose all
/// significant digits.
pub fn central_and_complement(
    dim: usize,
    sigma_sq: f64,
    truncation: Truncation,
) -> Result<(f64, f64)> {
    validate_dim(dim)?;
    validate_variance(sigma_sq)?;
    if sigma_sq == 0.0 {
        return Ok((1.0, 0.0));
    }
    let j = truncation.periods(dim, sigma_sq.sqrt());
    let central = shift_probability(0, dim, sigma_sq, j)?;
    let complement = compensated_sum(
        (1..dim)
            .map(|k| shift_probability(k, dim, sigma_sq, j))
            .collect::<Result<Vec<_>>>()?,
    );
    let total = central + complement;
    Ok((central / total, complement / total))
}
