//! Standard cross-validation plan: every closed-form quantity against its
//! sampling counterpart, plus deterministic self-checks.
//!
//! Agreement is judged at a 5-sigma-equivalent level. Entries with at least
//! 25 expected events use the usual z-score; rarer entries switch to an
//! exact two-sided Poisson tail test, where the normal approximation is
//! meaningless. Quantities whose closed form is below the 1e-6 resolvability
//! guard are reported with a warning instead of a verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::binning::distribution_from_gaussian;
use crate::dist::PauliDistribution;
use crate::error::Result;
use crate::half_teleport::{placement_station, Placement, StationNoise, SymmetricModel};
use crate::noise::{LinkParams, SqueezingParameter};
use crate::oracle::{
    sample_bare_chain, sample_erasure_trial, sample_shift_distribution, SamplerSpec,
    GAUSSIAN_TRANSFORM,
};
use crate::poly::{erasure_binning, p_fail_from_binning, PolynomialCode};
use crate::protocols::{bare_rate, Protocol, RepeaterConfig};
use crate::binning::Truncation;

/// Two-sided tail probability of a 5-sigma normal deviation.
const FIVE_SIGMA_TAIL: f64 = 5.733e-7;

/// Expected-event count above which the z-score is trusted.
const NORMAL_REGIME_EVENTS: f64 = 25.0;

/// Quantities with a closed form below this cannot be resolved by sampling
/// at any practical budget; they are reported, not judged.
const RESOLVABILITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMethod {
    /// |z| <= 5 with the standard error taken at the closed-form value.
    Z,
    /// Exact two-sided Poisson tail test at the same confidence.
    PoissonExact,
    /// Exact equality or a fixed numeric tolerance; no sampling noise.
    Deterministic,
    /// Below the resolvability guard; reported with a warning only.
    Skipped,
    /// Informational row; never affects the verdict.
    Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub method: CheckMethod,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub closed_form: f64,
    pub z_score: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub samples: u64,
    pub gaussian_transform: &'static str,
    pub max_abs_z: f64,
    pub pass: bool,
    pub checks: Vec<ValidationCheck>,
}

/// Poisson CDF and upper tail by direct summation; adequate for the small
/// means this is applied to.
fn poisson_two_sided_tail(lambda: f64, observed: u64) -> f64 {
    let mut term = (-lambda).exp();
    let mut cdf_below = 0.0;
    let mut cdf_at = 0.0;
    let mut k = 0u64;
    loop {
        if k < observed {
            cdf_below += term;
        }
        if k <= observed {
            cdf_at += term;
        }
        if k >= observed && term < 1e-18 && k as f64 > lambda {
            break;
        }
        if k > observed + 2000 {
            break;
        }
        k += 1;
        term *= lambda / k as f64;
    }
    let upper = (1.0 - cdf_below).max(0.0); // P(X >= observed)
    let lower = cdf_at.min(1.0); // P(X <= observed)
    (2.0 * upper.min(lower)).min(1.0)
}

struct Plan {
    perturb: f64,
    checks: Vec<ValidationCheck>,
}

impl Plan {
    fn closed(&self, value: f64) -> f64 {
        value * (1.0 + self.perturb)
    }

    /// Sampled-count check: z-score in the normal regime, exact Poisson
    /// tail on the rarer side otherwise.
    fn push_count(&mut self, name: String, count: u64, draws: u64, closed_raw: f64) {
        let closed = self.closed(closed_raw);
        let estimate = count as f64 / draws as f64;
        let n = draws as f64;
        let expected_hits = closed * n;
        let expected_misses = (1.0 - closed) * n;
        let se = (closed * (1.0 - closed) / n).sqrt();
        if expected_hits.min(expected_misses) >= NORMAL_REGIME_EVENTS {
            let z = (estimate - closed) / se;
            self.checks.push(ValidationCheck {
                name,
                method: CheckMethod::Z,
                estimate,
                stderr: Some(se),
                closed_form: closed,
                z_score: Some(z),
                pass: z.abs() <= 5.0,
                warning: None,
            });
        } else {
            // The rare side is Poisson; the normal z has no meaning there.
            let tail = if expected_hits <= expected_misses {
                poisson_two_sided_tail(expected_hits, count)
            } else {
                poisson_two_sided_tail(expected_misses, draws - count)
            };
            self.checks.push(ValidationCheck {
                name,
                method: CheckMethod::PoissonExact,
                estimate,
                stderr: Some(se),
                closed_form: closed,
                z_score: None,
                pass: tail >= FIVE_SIGMA_TAIL,
                warning: None,
            });
        }
    }

    fn push_skipped(&mut self, name: String, estimate: f64, closed_raw: f64, trials: u64) {
        let closed = self.closed(closed_raw);
        let required = (NORMAL_REGIME_EVENTS / closed.max(f64::MIN_POSITIVE)).ceil();
        self.checks.push(ValidationCheck {
            name,
            method: CheckMethod::Skipped,
            estimate,
            stderr: None,
            closed_form: closed,
            z_score: None,
            pass: true,
            warning: Some(format!(
                "closed form {closed:.3e} is below the {RESOLVABILITY_FLOOR:.0e} resolvability \
                 guard; about {required:.1e} trials would be needed (got {trials})"
            )),
        });
    }

    fn push_deterministic(&mut self, name: String, estimate: f64, closed: f64, pass: bool) {
        self.checks.push(ValidationCheck {
            name,
            method: CheckMethod::Deterministic,
            estimate,
            stderr: None,
            closed_form: closed,
            z_score: None,
            pass,
            warning: None,
        });
    }

    fn push_report(&mut self, name: String, value: f64) {
        self.checks.push(ValidationCheck {
            name,
            method: CheckMethod::Report,
            estimate: value,
            stderr: None,
            closed_form: value,
            z_score: None,
            pass: true,
            warning: None,
        });
    }
}

/// Runs the full default validation plan.
///
/// `perturb` shifts every sampled quantity's closed form by the given
/// relative amount before comparison; it exists so the harness can verify
/// that a genuine mismatch is caught. Zero for real validation runs.
pub fn run_default_validation(spec: &SamplerSpec, perturb: f64) -> Result<ValidationReport> {
    let mut plan = Plan {
        perturb,
        checks: Vec::new(),
    };
    let mut task: u64 = 0;
    let mut next_task = || {
        let t = task;
        task += 1;
        t
    };

    // Binned shift distributions across dimensions and noise levels.
    for &dim in &[2usize, 3, 5, 13] {
        for &sigma_sq in &[0.01, 0.05, 0.25, 1.0] {
            let closed = distribution_from_gaussian(dim, sigma_sq)?;
            let est = sample_shift_distribution(dim, sigma_sq, spec, next_task())?;
            for k in 0..dim {
                plan.push_count(
                    format!("shift-distribution D={dim} sigma2={sigma_sq} entry={k}"),
                    est.counts[k],
                    est.samples,
                    closed.prob(k),
                );
            }
        }
    }

    // Erasure-decoding trials, including one deliberately unresolvable
    // deep-suppression point.
    let erasure_spec = SamplerSpec::new(spec.seed, (spec.samples / 10).max(1));
    let erasure_cases: [(u32, f64, f64); 5] = [
        (5, 0.15, 1.0),
        (5, 0.12, 0.85),
        (13, 0.05, 1.0),
        (13, 0.05, 0.8),
        (13, 0.01, 1.0),
    ];
    for (dim, sigma_sq, gamma) in erasure_cases {
        let code = PolynomialCode::new(dim)?;
        let binning = erasure_binning(dim, sigma_sq, gamma)?;
        let closed_fail = p_fail_from_binning(&code, &binning);
        let est = sample_erasure_trial(&code, sigma_sq, gamma, &erasure_spec, next_task())?;
        let name = format!("p_fail [[{dim},1,{}]] sigma2={sigma_sq} gamma={gamma}", code.distance());
        if closed_fail < RESOLVABILITY_FLOOR {
            plan.push_skipped(name, est.p_fail(), closed_fail, est.trials);
        } else {
            plan.push_count(name, est.failures, est.trials, closed_fail);
        }
        let discard_name =
            format!("p_discard [[{dim}]] sigma2={sigma_sq} gamma={gamma}");
        if gamma == 1.0 {
            plan.push_deterministic(
                discard_name,
                est.p_discard(),
                0.0,
                est.discarded_qudits == 0,
            );
        } else {
            plan.push_count(
                discard_name,
                est.discarded_qudits,
                est.trials * u64::from(est.block_size),
                binning.p_discard,
            );
        }
    }

    // End-to-end bare chains against the convolved marginal.
    let chain_spec = SamplerSpec::new(spec.seed, (spec.samples / 10).max(1));
    let chain_cases = [
        (Protocol::TwoWayTeleport, 2u32, 10.0, 5.0),
        (Protocol::OneWayTeleport, 5u32, 12.0, 10.0),
    ];
    for (protocol, dimension, db, total_km) in chain_cases {
        let config = RepeaterConfig {
            protocol,
            dimension,
            total_km,
            spacing_km: 0.5,
            squeezing: SqueezingParameter::from_db(db)?,
            ..RepeaterConfig::default()
        };
        let closed = bare_rate(&config)?.marginal;
        let chain = sample_bare_chain(&config, &chain_spec, next_task())?;
        let label = protocol.name();
        for k in 0..dimension as usize {
            plan.push_count(
                format!("chain-marginal {label} D={dimension} N={} entry={k}", config.stations()),
                chain.marginal.counts[k],
                chain.marginal.samples,
                closed.prob(k),
            );
        }
        if chain.lag1_covariance_se > 0.0 {
            let z = chain.lag1_covariance / chain.lag1_covariance_se;
            plan.checks.push(ValidationCheck {
                name: format!("chain lag-1 covariance {label} D={dimension}"),
                method: CheckMethod::Z,
                estimate: chain.lag1_covariance,
                stderr: Some(chain.lag1_covariance_se),
                closed_form: 0.0,
                z_score: Some(z),
                pass: z.abs() <= 5.0,
                warning: None,
            });
        }
    }

    // Spectral powering against literal repeated convolution.
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed ^ 0x5EED_CAFE);
    for (dim, n) in [(5usize, 17u64), (16, 33), (31, 64)] {
        let weights: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let p = PauliDistribution::from_weights(weights)?;
        let fast = p.convolve_power(n);
        let mut slow = PauliDistribution::delta(dim);
        for _ in 0..n {
            slow = slow.convolve(&p)?;
        }
        let max_dev = (0..dim)
            .map(|k| (fast.prob(k) - slow.prob(k)).abs())
            .fold(0.0f64, f64::max);
        plan.push_deterministic(
            format!("convolve_power vs naive D={dim} N={n}"),
            max_dev,
            0.0,
            max_dev < 1e-12,
        );
    }

    // Half-teleportation station probability under both symmetric-variance
    // readings of the placement analysis, at a reference operating point.
    let link = LinkParams::new(0.5, 22.0, 0.999)?;
    let noise = StationNoise::from_link(SqueezingParameter::from_db(20.0)?.variance(), &link)?;
    for (model, label) in [
        (SymmetricModel::Diagram, "diagram"),
        (SymmetricModel::SummaryFormula, "summary-formula"),
    ] {
        let (p0, _) = placement_station(
            Placement::After,
            5,
            &noise,
            0.0,
            model,
            Truncation::Adaptive,
        )?;
        plan.push_report(
            format!("placement p0 symmetric ({label} variances) D=5 s=20dB L0=0.5km"),
            p0,
        );
    }

    let max_abs_z = plan
        .checks
        .iter()
        .filter_map(|c| c.z_score)
        .fold(0.0f64, |acc, z| acc.max(z.abs()));
    let pass = plan.checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        seed: spec.seed,
        samples: spec.samples,
        gaussian_transform: GAUSSIAN_TRANSFORM,
        max_abs_z,
        pass,
        checks: plan.checks,
    })
}
