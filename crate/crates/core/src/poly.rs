//! Higher-level `[[D, 1, (D+1)/2]]_D` code model.
//!
//! Only the distance-based decoding model is implemented: the code corrects
//! any pattern with `t_known + 2 t_unknown < d`, where erased (known-location)
//! qudits come from the analog-syndrome discard rule, and a failed attempt is
//! replaced by a uniformly random logical error. The algebraic structure of
//! the code (polynomial evaluation encoding, stabilizers) is never needed for
//! the rate analysis and is deliberately absent.
//!
//! Failure probabilities are assembled as sums of positive terms so that the
//! `1e-12`-scale values the analog-information analysis lives on keep full
//! relative accuracy; `1 - (almost 1)` never appears.

use serde::{Deserialize, Serialize};

use crate::binning::{
    central_and_complement, distribution_from_gaussian, gaussian_interval_mass, lattice_spacing,
    Truncation,
};
use crate::dist::{compensated_sum, PauliDistribution};
use crate::error::{Error, Result};

/// `[[n, k, d]] = [[D, 1, (D+1)/2]]_D` code over a prime qudit dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCode {
    dimension: u32,
}

impl PolynomialCode {
    /// Builds the code with the default admissibility rule: `D` prime with
    /// `D - 1` a multiple of four, so that the decoder's correctable-weight
    /// budget `(d - 1)/2` is an integer.
    pub fn new(dimension: u32) -> Result<Self> {
        if dimension < 5 || !is_prime(dimension) || (dimension - 1) % 4 != 0 {
            return Err(Error::InadmissibleDimension {
                dimension,
                reason: "D must be prime with D - 1 divisible by 4".into(),
            });
        }
        Ok(Self { dimension })
    }

    /// Relaxed admissibility: any odd prime. For dimensions where `D - 1` is
    /// not a multiple of four the correctable-weight budget is rounded down,
    /// which extrapolates beyond the cases the worst-case decoder was stated
    /// for.
    pub fn new_any_prime(dimension: u32) -> Result<Self> {
        if dimension < 3 || !is_prime(dimension) {
            return Err(Error::InadmissibleDimension {
                dimension,
                reason: "D must be an odd prime".into(),
            });
        }
        Ok(Self { dimension })
    }

    /// Qudit dimension `D` (also the block size `n`).
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Number of physical qudits per logical qudit, `n = D`.
    pub fn block_size(&self) -> u32 {
        self.dimension
    }

    /// Code distance `d = (D + 1) / 2`.
    pub fn distance(&self) -> u32 {
        (self.dimension + 1) / 2
    }

    /// Largest number of unknown-location errors the decoder corrects,
    /// `floor((d - 1) / 2)`.
    pub fn correctable_unknown(&self) -> u32 {
        (self.distance() - 1) / 2
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u32;
    while (f as u64) * (f as u64) <= n as u64 {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Binomial coefficient as f64, exact integer arithmetic underneath.
fn binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as f64
}

/// Probability that a correctable pattern of unknown-location errors occurs:
/// `sum_{k=0}^{floor((d-1)/2)} C(n, k) p0^(n-k) (1 - p0)^k`.
pub fn p_correctable(code: &PolynomialCode, p0: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p0));
    let n = code.block_size();
    let q = 1.0 - p0;
    compensated_sum((0..=code.correctable_unknown()).map(|k| {
        binomial(n, k) * p0.powi((n - k) as i32) * q.powi(k as i32)
    }))
}

/// Complement of the inner correctability sum for a fixed number of erasures:
/// the probability that more than `floor((d - t_known - 1)/2)` of the
/// `n - t_known` kept qudits carry unknown-location errors. Summed from the
/// failing side so tiny failure masses keep full relative accuracy.
pub(crate) fn failure_mass_given_erasures(
    n: u32,
    d: u32,
    t_known: u32,
    kept_central: f64,
    kept_complement: f64,
) -> f64 {
    debug_assert!(t_known < d);
    let kept = n - t_known;
    let max_unknown = (d - t_known - 1) / 2;
    compensated_sum((max_unknown + 1..=kept).map(|t| {
        binomial(kept, t) * kept_complement.powi(t as i32) * kept_central.powi((kept - t) as i32)
    }))
}

/// Station-level error channel of an encoded repeater segment: the decoder
/// leaves the qudit intact with probability `p_cor` and otherwise inserts a
/// logical shift uniformly at random. If errors are so frequent that the
/// formula would prefer a wrong outcome, the channel degrades to uniform.
pub fn station_error_channel(code: &PolynomialCode, p_cor: f64) -> PauliDistribution {
    repeater_channel(code.dimension() as usize, 1.0 - p_cor)
}

/// Same channel parameterized by the failure probability, which is the
/// accurately known quantity in the deep-suppression regime.
pub(crate) fn repeater_channel(dim: usize, failure: f64) -> PauliDistribution {
    let p_cor = 1.0 - failure;
    let rest = failure / (dim - 1) as f64;
    if p_cor < rest {
        return PauliDistribution::uniform(dim);
    }
    let mut probs = vec![rest; dim];
    probs[0] = p_cor;
    PauliDistribution::from_weights(probs).expect("repeater channel weights are valid")
}

/// Analog-syndrome binning with a discarding parameter.
///
/// Outcomes within `(1 - gamma)/2` bin widths of a bin boundary are flagged
/// as erasures; the rest are decoded as usual. `gamma = 1` never discards,
/// `gamma -> 0` discards everything.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErasureBinning {
    pub gamma: f64,
    /// Shift distribution conditioned on keeping the qudit.
    pub kept_probs: PauliDistribution,
    /// Probability that a qudit is flagged as an erasure.
    pub p_discard: f64,
    kept_central: f64,
    kept_complement: f64,
}

impl ErasureBinning {
    /// Renormalized no-shift probability among kept qudits.
    pub fn kept_central(&self) -> f64 {
        self.kept_central
    }

    /// Renormalized shifted mass among kept qudits, accumulated directly
    /// from the shifted bins.
    pub fn kept_complement(&self) -> f64 {
        self.kept_complement
    }
}

/// Splits Gaussian-noise outcomes of a `D`-level qudit into kept shift
/// classes and a discard probability, for discarding parameter `gamma`.
pub fn erasure_binning(dim: u32, sigma_sq: f64, gamma: f64) -> Result<ErasureBinning> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid(
            "gamma",
            format!("discarding parameter must lie in (0, 1], got {gamma}"),
        ));
    }
    if !(sigma_sq > 0.0 && sigma_sq.is_finite()) {
        return Err(Error::invalid("sigma_sq", "variance must be positive"));
    }
    let dim = dim as usize;
    if gamma == 1.0 {
        let kept_probs = distribution_from_gaussian(dim, sigma_sq)?;
        let (kept_central, kept_complement) =
            central_and_complement(dim, sigma_sq, Truncation::Adaptive)?;
        return Ok(ErasureBinning {
            gamma,
            kept_probs,
            p_discard: 0.0,
            kept_central,
            kept_complement,
        });
    }

    let spacing = lattice_spacing(dim);
    let sigma = sigma_sq.sqrt();
    let periods = ((10.0 * sigma / (spacing * dim as f64)).ceil() as i64 + 1).max(1);
    let kept_half = 0.5 * gamma * spacing;

    let kept_raw: Vec<f64> = (0..dim)
        .map(|k| {
            compensated_sum((-periods..=periods).map(|j| {
                let center = (j * dim as i64 + k as i64) as f64 * spacing;
                gaussian_interval_mass(center - kept_half, center + kept_half, sigma)
            }))
        })
        .collect();

    // Discarded mass lives in bands of width (1 - gamma) * spacing centered
    // on the bin boundaries; summing those bands directly avoids computing
    // 1 - (kept mass).
    let band_half = 0.5 * (1.0 - gamma) * spacing;
    let boundary_reach = periods * dim as i64;
    let p_discard = compensated_sum((-boundary_reach..boundary_reach).map(|m| {
        let boundary = (m as f64 + 0.5) * spacing;
        gaussian_interval_mass(boundary - band_half, boundary + band_half, sigma)
    }));

    let kept_total = compensated_sum(kept_raw.iter().copied());
    let kept_central = kept_raw[0] / kept_total;
    let kept_complement = compensated_sum(kept_raw[1..].iter().copied()) / kept_total;
    Ok(ErasureBinning {
        gamma,
        kept_probs: PauliDistribution::from_weights(kept_raw)?,
        p_discard,
        kept_central,
        kept_complement,
    })
}

/// Probability that decoding a logical measurement fails, with erasure
/// information: the attempt succeeds whenever `t_known + 2 t_unknown < d`.
pub fn p_fail(code: &PolynomialCode, sigma_sq: f64, gamma: f64) -> Result<f64> {
    let binning = erasure_binning(code.dimension(), sigma_sq, gamma)?;
    Ok(p_fail_from_binning(code, &binning))
}

/// Failure probability given a precomputed binning.
pub fn p_fail_from_binning(code: &PolynomialCode, binning: &ErasureBinning) -> f64 {
    let n = code.block_size();
    let d = code.distance();
    let p_d = binning.p_discard;
    let kept_central = binning.kept_central();
    let kept_complement = binning.kept_complement();
    compensated_sum((0..=n).map(|t_k| {
        let weight = binomial(n, t_k) * p_d.powi(t_k as i32) * (1.0 - p_d).powi((n - t_k) as i32);
        if weight == 0.0 {
            0.0
        } else if t_k >= d {
            weight
        } else {
            weight * failure_mass_given_erasures(n, d, t_k, kept_central, kept_complement)
        }
    }))
}

/// A sampled point of the failure curve over the discarding parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaPoint {
    pub gamma: f64,
    pub p_fail: f64,
    pub p_discard: f64,
    /// Renormalized no-shift probability among kept qudits.
    pub kept_central: f64,
}

/// Evaluates the failure curve on an explicit grid of `gamma` values.
pub fn gamma_curve(code: &PolynomialCode, sigma_sq: f64, gammas: &[f64]) -> Result<Vec<GammaPoint>> {
    gammas
        .iter()
        .map(|&gamma| {
            let binning = erasure_binning(code.dimension(), sigma_sq, gamma)?;
            Ok(GammaPoint {
                gamma,
                p_fail: p_fail_from_binning(code, &binning),
                p_discard: binning.p_discard,
                kept_central: binning.kept_central(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaOptimum {
    pub gamma: f64,
    pub p_fail: f64,
}

/// Minimizes the failure probability over the discarding parameter.
///
/// A grid scan at the requested resolution picks the basin (ties resolved
/// toward the largest `gamma`), then golden-section refinement narrows the
/// minimizer. The refinement only replaces the grid winner when it is
/// strictly better, so flat regions keep the largest-`gamma` tie-break.
pub fn optimal_gamma(code: &PolynomialCode, sigma_sq: f64, resolution: f64) -> Result<GammaOptimum> {
    if !(resolution >= 1e-3 && resolution < 0.5) {
        return Err(Error::invalid(
            "resolution",
            format!("grid resolution must lie in [1e-3, 0.5), got {resolution}"),
        ));
    }
    let steps = (1.0 / resolution).round() as u32;
    let mut best = GammaOptimum {
        gamma: 1.0,
        p_fail: p_fail(code, sigma_sq, 1.0)?,
    };
    for i in 1..steps {
        let gamma = i as f64 * resolution;
        let value = p_fail(code, sigma_sq, gamma)?;
        // Scanning upward with `<` keeps the largest gamma among ties
        // because `best` starts at gamma = 1.
        if value < best.p_fail {
            best = GammaOptimum { gamma, p_fail: value };
        }
    }

    let lo = (best.gamma - resolution).max(resolution * 0.5);
    let hi = (best.gamma + resolution).min(1.0);
    let refined = golden_section(|g| p_fail(code, sigma_sq, g).unwrap_or(f64::INFINITY), lo, hi);
    if refined.p_fail < best.p_fail {
        best = refined;
    }
    Ok(best)
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> GammaOptimum {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..70 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    if fa < fb {
        GammaOptimum { gamma: a, p_fail: fa }
    } else {
        GammaOptimum { gamma: b, p_fail: fb }
    }
}
