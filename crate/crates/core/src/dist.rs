//! Pauli error-probability distributions over qudit shift powers.
//!
//! A qudit Pauli channel that is diagonal in the shift basis is described by a
//! probability vector over the powers of `X` (equivalently `Z`). This module
//! provides that vector type, the joint `X`/`Z` matrix, cyclic convolution and
//! its spectral N-th power, Shannon entropy, and the secret-key-rate figure of
//! merit `log2(D) - H`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability vectors must sum to one within this tolerance.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Spectral round-off floor for an N-fold power. Phase round-off in the
/// powered spectrum grows linearly with N (the phase of each component is
/// known to about one ulp and gets multiplied by N), so the misuse detector
/// must scale accordingly: a fixed floor would reject legitimate
/// million-station chains.
fn clip_floor(n: u64) -> f64 {
    -1e-12 * (n as f64 / 1e3).max(1.0)
}

/// Neumaier compensated sum. Keeps normalization checks tight when adding
/// many probabilities of very different magnitude.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn entropy_bits_of(probs: &[f64]) -> f64 {
    // 0 log 0 := 0
    compensated_sum(probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()))
}

/// Marginal distribution of shift errors `X^k` (or `Z^k`) on a `D`-level qudit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliDistribution {
    probs: Vec<f64>,
}

impl PauliDistribution {
    /// Builds a distribution from an already-normalized probability vector.
    ///
    /// Entries must lie in `[0, 1]` and sum to one within
    /// [`NORMALIZATION_TOLERANCE`]; the vector is then rescaled so the sum is
    /// exactly one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::invalid("probs", "dimension must be at least 2"));
        }
        for (k, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 || p > 1.0 + NORMALIZATION_TOLERANCE {
                return Err(Error::invalid(
                    "probs",
                    format!("entry {k} = {p} is not a probability"),
                ));
            }
        }
        let sum = compensated_sum(probs.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::invalid(
                "probs",
                format!("entries sum to {sum}, not 1"),
            ));
        }
        Ok(Self::rescaled(probs, sum))
    }

    /// Builds a distribution from non-negative weights by normalizing them.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::invalid("weights", "dimension must be at least 2"));
        }
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(
                    "weights",
                    format!("entry {k} = {w} is negative or not finite"),
                ));
            }
        }
        let sum = compensated_sum(weights.iter().copied());
        if sum <= 0.0 {
            return Err(Error::invalid("weights", "total weight is zero"));
        }
        Ok(Self::rescaled(weights, sum))
    }

    fn rescaled(mut probs: Vec<f64>, sum: f64) -> Self {
        if sum != 1.0 {
            for p in &mut probs {
                *p /= sum;
            }
        }
        Self { probs }
    }

    /// Point mass on the identity (no shift).
    pub fn delta(dim: usize) -> Self {
        Self::delta_at(dim, 0)
    }

    /// Point mass on `X^k`.
    pub fn delta_at(dim: usize, k: usize) -> Self {
        assert!(dim >= 2 && k < dim);
        let mut probs = vec![0.0; dim];
        probs[k] = 1.0;
        Self { probs }
    }

    /// Uniform distribution over all `D` shift powers.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim >= 2);
        Self {
            probs: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.probs[k]
    }

    /// Probability of the identity outcome (no net shift).
    pub fn p0(&self) -> f64 {
        self.probs[0]
    }

    /// Cyclic convolution modulo the common dimension.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let d = self.dim();
        if d != other.dim() {
            return Err(Error::DimensionMismatch {
                left: d,
                right: other.dim(),
            });
        }
        let mut out = vec![0.0; d];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.probs.iter().enumerate() {
                let k = i + j;
                let k = if k >= d { k - d } else { k };
                out[k] += a * b;
            }
        }
        Self::from_weights(out)
    }

    /// N-fold self-convolution through the discrete Fourier transform.
    ///
    /// The probability vector is transformed, each spectral component is
    /// raised to the N-th power, and the result is transformed back. Small
    /// negative round-off (above `-1e-12`) is clipped to zero and the vector
    /// renormalized; anything below that floor is treated as an internal
    /// inconsistency and panics.
    ///
    /// `N = 0` yields the identity element (delta at zero); `N = 1` returns
    /// the distribution unchanged.
    pub fn convolve_power(&self, n: u64) -> Self {
        let d = self.dim();
        if n == 0 {
            return Self::delta(d);
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(k) = self.probs.iter().position(|&p| p == 1.0) {
            // Point masses compose exactly; the spectral route would only
            // smear them by round-off.
            return Self::delta_at(d, (k as u64 * (n % d as u64) % d as u64) as usize);
        }

        let mut spectrum = Vec::with_capacity(d);
        for m in 0..d {
            let mut re = 0.0;
            let mut im = 0.0;
            for (k, &p) in self.probs.iter().enumerate() {
                let angle = -2.0 * PI * ((k * m) % d) as f64 / d as f64;
                re += p * angle.cos();
                im += p * angle.sin();
            }
            spectrum.push(Complex64::new(re, im));
        }
        // The zero mode carries the total probability; pin it exactly.
        spectrum[0] = Complex64::new(1.0, 0.0);

        let powered: Vec<Complex64> = spectrum.into_iter().map(|z| spectral_pow(z, n)).collect();

        let mut out = vec![0.0; d];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (m, z) in powered.iter().enumerate() {
                let angle = 2.0 * PI * ((k * m) % d) as f64 / d as f64;
                acc += z.re * angle.cos() - z.im * angle.sin();
            }
            *slot = acc / d as f64;
        }

        let floor = clip_floor(n);
        for p in &mut out {
            if *p < 0.0 {
                assert!(
                    *p >= floor,
                    "convolve_power produced entry {p}, below the {floor} round-off floor"
                );
                *p = 0.0;
            }
        }
        Self::from_weights(out).expect("clipped spectrum yields valid weights")
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits_of(&self.probs)
    }
}

/// Raises a spectral component to the N-th power.
///
/// Magnitude and phase are handled separately: the magnitude through
/// `exp(N ln r)`, the unit phase factor through binary exponentiation with
/// renormalization after every product. This keeps the phase error at
/// O(log N) ulps instead of O(N), which matters for N in the tens of
/// millions.
fn spectral_pow(z: Complex64, n: u64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    // r can exceed 1 by round-off only.
    let magnitude = if r >= 1.0 {
        1.0
    } else {
        (n as f64 * r.ln()).exp()
    };
    if magnitude == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut base = z / r;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
            acc /= acc.norm();
        }
        e >>= 1;
        if e > 0 {
            base *= base;
            base /= base.norm();
        }
    }
    magnitude * acc
}

/// Joint distribution `P(X^a, Z^b)` of shift and phase errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPauliDistribution {
    dim: usize,
    /// Row-major `D x D`; entry `(a, b)` is `P(X^a, Z^b)`.
    probs: Vec<f64>,
}

impl JointPauliDistribution {
    /// Outer product of independent `X` and `Z` marginals.
    pub fn from_independent(x: &PauliDistribution, z: &PauliDistribution) -> Result<Self> {
        let d = x.dim();
        if d != z.dim() {
            return Err(Error::DimensionMismatch {
                left: d,
                right: z.dim(),
            });
        }
        let mut probs = Vec::with_capacity(d * d);
        for &a in x.probs() {
            for &b in z.probs() {
                probs.push(a * b);
            }
        }
        Ok(Self { dim: d, probs })
    }

    pub fn new(dim: usize, probs: Vec<f64>) -> Result<Self> {
        if dim < 2 || probs.len() != dim * dim {
            return Err(Error::invalid("probs", "matrix must be D x D with D >= 2"));
        }
        for &p in &probs {
            if !p.is_finite() || p < 0.0 || p > 1.0 + NORMALIZATION_TOLERANCE {
                return Err(Error::invalid("probs", "entry is not a probability"));
            }
        }
        let sum = compensated_sum(probs.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::invalid(
                "probs",
                format!("entries sum to {sum}, not 1"),
            ));
        }
        Ok(Self { dim, probs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.dim + b]
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits_of(&self.probs)
    }

    /// Secret-key rate `max(0, log2 D - H)` in bits per channel use.
    ///
    /// Negative values are clamped to zero; a negative key rate is not a
    /// physical output.
    pub fn secret_key_rate(&self) -> f64 {
        ((self.dim as f64).log2() - self.entropy_bits()).max(0.0)
    }
}
