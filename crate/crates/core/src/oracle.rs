//! Monte-Carlo cross-validation of the closed-form error model.
//!
//! Every analytic quantity in this crate has a sampling counterpart here:
//! binned shift probabilities, erasure-decoding failure rates, and end-to-end
//! chain marginals. Estimates come with standard errors so the agreement
//! check is a z-score.
//!
//! Reproducibility: trials are partitioned into fixed-size blocks; block `b`
//! of task `t` draws from a ChaCha12 stream seeded by mixing
//! `(seed, t, b)` through SplitMix64. Partial results are integer tallies
//! (or per-block sums reduced in block order), so the outcome is bit-identical
//! for any worker count. Normal deviates come from the Box-Muller transform
//! on the raw uniform stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binning::lattice_spacing;
use crate::dist::PauliDistribution;
use crate::error::{Error, Result};
use crate::noise::measurement_variance;
use crate::protocols::RepeaterConfig;

/// Name of the Gaussian sampling transform, recorded in reports.
pub const GAUSSIAN_TRANSFORM: &str = "box-muller";

/// Trials per scheduling block.
const BLOCK: u64 = 1 << 16;

/// Seed and sample budget of a sampling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerSpec {
    pub seed: u64,
    pub samples: u64,
}

impl SamplerSpec {
    pub fn new(seed: u64, samples: u64) -> Self {
        Self { seed, samples }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn block_rng(seed: u64, task: u64, block: u64) -> ChaCha12Rng {
    let mixed = splitmix64(splitmix64(seed ^ splitmix64(task)) ^ block);
    ChaCha12Rng::seed_from_u64(mixed)
}

/// Box-Muller sampler over a uniform stream, with the spare deviate cached.
struct NormalSampler {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl NormalSampler {
    fn new(rng: ChaCha12Rng) -> Self {
        Self { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1: f64 = loop {
            let u = self.rng.gen::<f64>();
            if u > 0.0 {
                break u;
            }
        };
        let u2: f64 = self.rng.gen();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

fn blocks_of(samples: u64) -> Vec<(u64, u64)> {
    // (block index, trials in block)
    let full = samples / BLOCK;
    let rest = samples % BLOCK;
    let mut blocks: Vec<(u64, u64)> = (0..full).map(|b| (b, BLOCK)).collect();
    if rest > 0 {
        blocks.push((full, rest));
    }
    blocks
}

/// Maps a continuous displacement to its shift-residue class.
fn bin_residue(shift: f64, spacing: f64, dim: usize) -> usize {
    let sites = (shift / spacing).round() as i64;
    sites.rem_euclid(dim as i64) as usize
}

/// Empirical counterpart of a shift distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    pub counts: Vec<u64>,
    pub samples: u64,
}

impl EmpiricalDistribution {
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn probs(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.samples as f64)
            .collect()
    }

    /// Standard error of entry `k` under a reference probability `p`.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    /// Wilson score interval for entry `k` at `z` standard deviations.
    pub fn wilson_interval(&self, k: usize, z: f64) -> (f64, f64) {
        let n = self.samples as f64;
        let p = self.counts[k] as f64 / n;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        ((center - half).max(0.0), (center + half).min(1.0))
    }
}

/// Samples Gaussian displacements and tallies the decoded shift residues.
pub fn sample_shift_distribution(
    dim: usize,
    sigma_sq: f64,
    spec: &SamplerSpec,
    task: u64,
) -> Result<EmpiricalDistribution> {
    if dim < 2 {
        return Err(Error::invalid("dim", "dimension must be at least 2"));
    }
    if !(sigma_sq >= 0.0 && sigma_sq.is_finite()) {
        return Err(Error::invalid("sigma_sq", "variance must be non-negative"));
    }
    if spec.samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    if sigma_sq == 0.0 {
        let mut counts = vec![0u64; dim];
        counts[0] = spec.samples;
        return Ok(EmpiricalDistribution {
            counts,
            samples: spec.samples,
        });
    }
    let sigma = sigma_sq.sqrt();
    let spacing = lattice_spacing(dim);
    let per_block: Vec<Vec<u64>> = blocks_of(spec.samples)
        .into_par_iter()
        .map(|(block, trials)| {
            let mut sampler = NormalSampler::new(block_rng(spec.seed, task, block));
            let mut counts = vec![0u64; dim];
            for _ in 0..trials {
                let k = bin_residue(sigma * sampler.next(), spacing, dim);
                counts[k] += 1;
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; dim];
    for block in per_block {
        for (total, c) in counts.iter_mut().zip(block) {
            *total += c;
        }
    }
    Ok(EmpiricalDistribution {
        counts,
        samples: spec.samples,
    })
}

/// Trial-level estimate of the erasure decoder's failure and discard rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureEstimate {
    pub trials: u64,
    pub failures: u64,
    pub discarded_qudits: u64,
    pub block_size: u32,
}

impl ErasureEstimate {
    pub fn p_fail(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    pub fn p_fail_se(&self, reference: f64) -> f64 {
        (reference * (1.0 - reference) / self.trials as f64).sqrt()
    }

    pub fn p_discard(&self) -> f64 {
        self.discarded_qudits as f64 / (self.trials as f64 * self.block_size as f64)
    }

    pub fn p_discard_se(&self, reference: f64) -> f64 {
        (reference * (1.0 - reference) / (self.trials as f64 * self.block_size as f64)).sqrt()
    }
}

/// Simulates whole decode attempts: `n` i.i.d. Gaussian shifts per trial,
/// each classified as kept-correct, kept-error, or discarded, then the
/// success condition `t_known + 2 t_unknown < d` is applied.
pub fn sample_erasure_trial(
    code: &crate::poly::PolynomialCode,
    sigma_sq: f64,
    gamma: f64,
    spec: &SamplerSpec,
    task: u64,
) -> Result<ErasureEstimate> {
    if !(sigma_sq > 0.0 && sigma_sq.is_finite()) {
        return Err(Error::invalid("sigma_sq", "variance must be positive"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid("gamma", "gamma must lie in (0, 1]"));
    }
    if spec.samples == 0 {
        return Err(Error::invalid("samples", "need at least one trial"));
    }
    let n = code.block_size();
    let d = code.distance();
    let dim = code.dimension() as usize;
    let sigma = sigma_sq.sqrt();
    let spacing = lattice_spacing(dim);
    let keep_half = 0.5 * gamma * spacing;

    let per_block: Vec<(u64, u64)> = blocks_of(spec.samples)
        .into_par_iter()
        .map(|(block, trials)| {
            let mut sampler = NormalSampler::new(block_rng(spec.seed, task, block));
            let mut failures = 0u64;
            let mut discarded = 0u64;
            for _ in 0..trials {
                let mut t_known = 0u32;
                let mut t_unknown = 0u32;
                for _ in 0..n {
                    let shift = sigma * sampler.next();
                    let nearest = (shift / spacing).round();
                    let residual = shift - nearest * spacing;
                    if residual.abs() > keep_half {
                        t_known += 1;
                    } else if (nearest as i64).rem_euclid(dim as i64) != 0 {
                        t_unknown += 1;
                    }
                }
                discarded += t_known as u64;
                if t_known + 2 * t_unknown >= d {
                    failures += 1;
                }
            }
            (failures, discarded)
        })
        .collect();
    let (failures, discarded_qudits) = per_block
        .into_iter()
        .fold((0, 0), |(f, e), (bf, be)| (f + bf, e + be));
    Ok(ErasureEstimate {
        trials: spec.samples,
        failures,
        discarded_qudits,
        block_size: n,
    })
}

/// Empirical end-to-end chain marginal plus an independence diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainEstimate {
    pub marginal: EmpiricalDistribution,
    /// Lag-1 covariance of the per-station shift residues. The analytic
    /// model treats stations as independent, so this should be statistical
    /// zero; it is reported, never fed back into the rates.
    pub lag1_covariance: f64,
    pub lag1_covariance_se: f64,
}

/// Simulates a bare chain station by station: each station draws a Gaussian
/// displacement at the composed measurement variance, bins it, and the
/// residues accumulate modulo `D`.
pub fn sample_bare_chain(
    config: &RepeaterConfig,
    spec: &SamplerSpec,
    task: u64,
) -> Result<ChainEstimate> {
    config.validate()?;
    if config.encoded {
        return Err(Error::invalid("encoded", "chain sampling models bare chains"));
    }
    let bell = config
        .protocol
        .bell()
        .ok_or_else(|| Error::UnsupportedProtocol("bare chains are teleportation-based".into()))?;
    let stations = config.stations();
    if stations > 10_000 {
        return Err(Error::invalid(
            "stations",
            "chain sampling is limited to 10^4 stations",
        ));
    }
    if spec.samples == 0 {
        return Err(Error::invalid("samples", "need at least one trial"));
    }
    let dim = config.dimension as usize;
    let budget = measurement_variance(bell, dim, config.squeezing, &config.link()?)?;
    let sigma = (budget.total() + config.meas_variance).sqrt();
    let spacing = lattice_spacing(dim);

    struct BlockStats {
        counts: Vec<u64>,
        sum_k: f64,
        sum_pair: f64,
        sum_pair_sq: f64,
    }

    let per_block: Vec<BlockStats> = blocks_of(spec.samples)
        .into_par_iter()
        .map(|(block, trials)| {
            let mut sampler = NormalSampler::new(block_rng(spec.seed, task, block));
            let mut stats = BlockStats {
                counts: vec![0u64; dim],
                sum_k: 0.0,
                sum_pair: 0.0,
                sum_pair_sq: 0.0,
            };
            for _ in 0..trials {
                let mut total = 0usize;
                let mut prev: Option<usize> = None;
                let mut pair_acc = 0.0;
                for _ in 0..stations {
                    let k = bin_residue(sigma * sampler.next(), spacing, dim);
                    total = (total + k) % dim;
                    stats.sum_k += k as f64;
                    if let Some(p) = prev {
                        pair_acc += (p * k) as f64;
                    }
                    prev = Some(k);
                }
                if stations > 1 {
                    let mean_pair = pair_acc / (stations - 1) as f64;
                    stats.sum_pair += mean_pair;
                    stats.sum_pair_sq += mean_pair * mean_pair;
                }
                stats.counts[total] += 1;
            }
            stats
        })
        .collect();

    let mut counts = vec![0u64; dim];
    let mut sum_k = 0.0;
    let mut sum_pair = 0.0;
    let mut sum_pair_sq = 0.0;
    for block in per_block {
        for (total, c) in counts.iter_mut().zip(&block.counts) {
            *total += c;
        }
        sum_k += block.sum_k;
        sum_pair += block.sum_pair;
        sum_pair_sq += block.sum_pair_sq;
    }
    let trials = spec.samples as f64;
    let mean_k = sum_k / (trials * stations as f64);
    let (lag1_covariance, lag1_covariance_se) = if stations > 1 {
        let mean_pair = sum_pair / trials;
        let var_pair = (sum_pair_sq / trials - mean_pair * mean_pair).max(0.0);
        (mean_pair - mean_k * mean_k, (var_pair / trials).sqrt())
    } else {
        (0.0, 0.0)
    };
    Ok(ChainEstimate {
        marginal: EmpiricalDistribution {
            counts,
            samples: spec.samples,
        },
        lag1_covariance,
        lag1_covariance_se,
    })
}

impl PauliDistribution {
    /// Reference z-scores of an empirical distribution against this one.
    pub fn z_scores(&self, empirical: &EmpiricalDistribution) -> Vec<f64> {
        let probs = empirical.probs();
        self.probs()
            .iter()
            .zip(probs)
            .map(|(&p, hat)| {
                let se = empirical.standard_error(p);
                if se == 0.0 {
                    if (hat - p).abs() == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (hat - p) / se
                }
            })
            .collect()
    }
}
