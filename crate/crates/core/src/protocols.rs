//! End-to-end secret-key rates of the three repeater protocols.
//!
//! A chain of `N = round(L / L0)` identical segments composes one station
//! error channel with itself `N` times. For bare GKP qudits the station
//! channel is the binned Gaussian measurement channel; with the higher-level
//! code each station either decodes correctly or injects a uniformly random
//! logical shift. `X` and `Z` errors stay independent throughout, so the
//! joint end-to-end distribution is the outer product of two copies of the
//! final marginal and the rate is `max(0, log2 D - 2 H(marginal))`.

use serde::{Deserialize, Serialize};

use crate::binning::{central_and_complement, distribution_from_gaussian_with, Truncation};
use crate::dist::{JointPauliDistribution, PauliDistribution};
use crate::error::{Error, Result};
use crate::half_teleport::{placement_station, Placement, StationNoise, SymmetricModel};
use crate::noise::{
    measurement_variance, BellProtocol, LinkParams, SqueezingParameter, ATTENUATION_LENGTH_KM,
    DEFAULT_COUPLING,
};
use crate::poly::{
    erasure_binning, failure_mass_given_erasures, p_fail_from_binning, repeater_channel,
    PolynomialCode,
};

/// The three repeater protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Bell pairs flying in both directions, met by a midpoint Bell
    /// measurement; the measured signal is rescaled classically.
    TwoWayTeleport,
    /// Bell pairs flying forward only, pre-amplified optically.
    OneWayTeleport,
    /// One logical qudit per station, measured in a single quadrature;
    /// defined only on top of the higher-level code.
    OneWayHalfTeleport,
}

impl Protocol {
    pub(crate) fn bell(self) -> Option<BellProtocol> {
        match self {
            Protocol::TwoWayTeleport => Some(BellProtocol::TwoWay),
            Protocol::OneWayTeleport => Some(BellProtocol::OneWay),
            Protocol::OneWayHalfTeleport => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::TwoWayTeleport => "two-way-teleport",
            Protocol::OneWayTeleport => "one-way-teleport",
            Protocol::OneWayHalfTeleport => "one-way-half-teleport",
        }
    }
}

/// Complete description of one repeater configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeaterConfig {
    pub protocol: Protocol,
    /// Qudit dimension `D`.
    pub dimension: u32,
    /// End-to-end length, km.
    pub total_km: f64,
    /// Station spacing, km.
    pub spacing_km: f64,
    /// GKP squeezing level.
    pub squeezing: SqueezingParameter,
    /// Fiber-coupling efficiency.
    pub coupling: f64,
    /// Fiber attenuation length, km.
    pub att_length_km: f64,
    /// Whether stations carry the higher-level code.
    pub encoded: bool,
    /// Discarding parameter of the analog-syndrome erasure decoder;
    /// 1 disables discarding.
    pub gamma: f64,
    /// Stabilizer-measurement placement (half-teleportation only).
    pub placement: Placement,
    /// Variance pair used for the symmetric placements.
    pub symmetric_model: SymmetricModel,
    /// Extra Gaussian variance per homodyne measurement.
    pub meas_variance: f64,
    /// Bin-sum truncation policy.
    pub truncation: Truncation,
    /// Accept any odd prime dimension for the code instead of the default
    /// `D - 1` multiple-of-four rule.
    pub allow_any_prime: bool,
}

impl Default for RepeaterConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::TwoWayTeleport,
            dimension: 2,
            total_km: 100.0,
            spacing_km: 0.5,
            squeezing: SqueezingParameter::from_db(20.0).expect("valid default"),
            coupling: DEFAULT_COUPLING,
            att_length_km: ATTENUATION_LENGTH_KM,
            encoded: false,
            gamma: 1.0,
            placement: Placement::Alternating,
            symmetric_model: SymmetricModel::Diagram,
            meas_variance: 0.0,
            truncation: Truncation::Adaptive,
            allow_any_prime: false,
        }
    }
}

impl RepeaterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::invalid("dimension", "dimension must be at least 2"));
        }
        if !(self.spacing_km > 0.0 && self.spacing_km.is_finite()) {
            return Err(Error::invalid("spacing_km", "spacing must be positive"));
        }
        if !(self.total_km >= self.spacing_km && self.total_km.is_finite()) {
            return Err(Error::invalid(
                "total_km",
                "total length must be at least one station spacing",
            ));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::invalid("gamma", "gamma must lie in (0, 1]"));
        }
        if !(self.meas_variance >= 0.0 && self.meas_variance.is_finite()) {
            return Err(Error::invalid("meas_variance", "variance must be non-negative"));
        }
        self.link()?;
        Ok(())
    }

    pub fn link(&self) -> Result<LinkParams> {
        LinkParams::new(self.spacing_km, self.att_length_km, self.coupling)
    }

    /// Station-channel count of this configuration.
    pub fn stations(&self) -> u64 {
        station_count(self.total_km, self.spacing_km)
    }

    fn code(&self) -> Result<PolynomialCode> {
        if self.allow_any_prime {
            PolynomialCode::new_any_prime(self.dimension)
        } else {
            PolynomialCode::new(self.dimension)
        }
    }
}

/// Number of station channels in a chain: `round(L / L0)`, at least one.
pub fn station_count(total_km: f64, spacing_km: f64) -> u64 {
    ((total_km / spacing_km).round() as u64).max(1)
}

/// Outcome of a rate evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    /// Secret-key rate, bits per (logical) channel use.
    pub skr_bits: f64,
    /// Rate divided by the station-channel count.
    pub skr_per_station: f64,
    /// Station-channel count `N`.
    pub stations: u64,
    /// End-to-end marginal shift distribution.
    pub marginal: PauliDistribution,
    /// Per-station no-error probability before any higher-level decoding.
    pub p0_station: f64,
    /// Per-station probability of a correct higher-level decode
    /// (encoded configurations only).
    pub p_cor_station: Option<f64>,
}

fn finish_rate(
    station: &PauliDistribution,
    stations: u64,
    p0_station: f64,
    p_cor_station: Option<f64>,
) -> RateResult {
    let marginal = station.convolve_power(stations);
    let joint = JointPauliDistribution::from_independent(&marginal, &marginal)
        .expect("marginals share a dimension");
    let skr_bits = joint.secret_key_rate();
    RateResult {
        skr_bits,
        skr_per_station: skr_bits / stations as f64,
        stations,
        marginal,
        p0_station,
        p_cor_station,
    }
}

/// Rate of a chain of bare GKP qudits (no higher-level code).
pub fn bare_rate(config: &RepeaterConfig) -> Result<RateResult> {
    config.validate()?;
    if config.encoded {
        return Err(Error::invalid("encoded", "bare_rate requires encoded = false"));
    }
    let bell = config.protocol.bell().ok_or_else(|| {
        Error::UnsupportedProtocol(
            "half-teleportation is defined only with the higher-level code".into(),
        )
    })?;
    let link = config.link()?;
    let dim = config.dimension as usize;
    let budget = measurement_variance(bell, dim, config.squeezing, &link)?;
    let sigma_sq = budget.total() + config.meas_variance;
    let station = distribution_from_gaussian_with(dim, sigma_sq, config.truncation)?;
    let stations = config.stations();
    let p0 = station.prob(0);
    Ok(finish_rate(&station, stations, p0, None))
}

/// Rate of a chain of logical qudits protected by the `[[D, 1, (D+1)/2]]_D`
/// code.
pub fn encoded_rate(config: &RepeaterConfig) -> Result<RateResult> {
    config.validate()?;
    if !config.encoded {
        return Err(Error::invalid("encoded", "encoded_rate requires encoded = true"));
    }
    let code = config.code()?;
    match config.protocol.bell() {
        Some(bell) => {
            let link = config.link()?;
            let budget =
                measurement_variance(bell, config.dimension as usize, config.squeezing, &link)?;
            let sigma_sq = budget.total() + config.meas_variance;
            encoded_rate_from_station_variance(
                &code,
                sigma_sq,
                config.stations(),
                config.gamma,
                config.truncation,
            )
        }
        None => {
            if config.gamma != 1.0 {
                return Err(Error::invalid(
                    "gamma",
                    "analog-syndrome discarding is defined for the teleportation \
                     protocols only; use gamma = 1 with half-teleportation",
                ));
            }
            let link = config.link()?;
            let noise = StationNoise::from_link(config.squeezing.variance(), &link)?;
            let (p0, complement) = placement_station(
                config.placement,
                config.dimension as usize,
                &noise,
                config.meas_variance,
                config.symmetric_model,
                config.truncation,
            )?;
            Ok(encoded_rate_from_station_probabilities(
                &code,
                p0,
                complement,
                config.stations(),
            ))
        }
    }
}

/// Encoded-chain rate given the per-measurement Gaussian variance directly.
fn encoded_rate_from_station_variance(
    code: &PolynomialCode,
    sigma_sq: f64,
    stations: u64,
    gamma: f64,
    truncation: Truncation,
) -> Result<RateResult> {
    if gamma == 1.0 {
        let (p0, complement) =
            central_and_complement(code.dimension() as usize, sigma_sq, truncation)?;
        Ok(encoded_rate_from_station_probabilities(
            code, p0, complement, stations,
        ))
    } else {
        let binning = erasure_binning(code.dimension(), sigma_sq, gamma)?;
        let failure = p_fail_from_binning(code, &binning);
        Ok(encoded_rate_from_failure(
            code,
            binning.kept_central(),
            failure,
            stations,
        ))
    }
}

fn encoded_rate_from_station_probabilities(
    code: &PolynomialCode,
    p0: f64,
    complement: f64,
    stations: u64,
) -> RateResult {
    let failure =
        failure_mass_given_erasures(code.block_size(), code.distance(), 0, p0, complement);
    encoded_rate_from_failure(code, p0, failure, stations)
}

fn encoded_rate_from_failure(
    code: &PolynomialCode,
    p0: f64,
    failure: f64,
    stations: u64,
) -> RateResult {
    let station = repeater_channel(code.dimension() as usize, failure);
    finish_rate(&station, stations, p0, Some(1.0 - failure))
}

/// Rate with every physical qudit subjected to a given input-noise variance
/// plus the pure transmission loss of its segment (two-way encoded chain).
pub fn rate_vs_input_noise(
    dimension: u32,
    total_km: f64,
    spacing_km: f64,
    sigma_sq_in: f64,
) -> Result<RateResult> {
    if !(sigma_sq_in >= 0.0 && sigma_sq_in.is_finite()) {
        return Err(Error::invalid("sigma_sq_in", "variance must be non-negative"));
    }
    if !(spacing_km > 0.0) || !(total_km >= spacing_km) {
        return Err(Error::invalid("total_km", "need total >= spacing > 0"));
    }
    let code = PolynomialCode::new(dimension)?;
    let transmission = (spacing_km / (2.0 * ATTENUATION_LENGTH_KM)).exp() - 1.0;
    encoded_rate_from_station_variance(
        &code,
        sigma_sq_in + transmission,
        station_count(total_km, spacing_km),
        1.0,
        Truncation::Adaptive,
    )
}

/// Dispatches on `config.encoded`.
pub fn repeater_rate(config: &RepeaterConfig) -> Result<RateResult> {
    if config.encoded {
        encoded_rate(config)
    } else {
        bare_rate(config)
    }
}

/// Best bare qudit dimension for fixed link parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionOptimum {
    /// Optimal dimension; 1 encodes "no dimension achieves a positive rate".
    pub dimension: u32,
    pub skr_bits: f64,
}

/// Scans `D = 2..=d_max` and returns the bare-chain optimum. Ties go to the
/// smaller dimension; if every dimension yields zero rate the result is
/// `(1, 0.0)`.
pub fn optimal_bare_dimension(
    protocol: Protocol,
    total_km: f64,
    spacing_km: f64,
    squeezing: SqueezingParameter,
    coupling: f64,
    d_max: u32,
) -> Result<DimensionOptimum> {
    if d_max < 2 {
        return Err(Error::invalid("d_max", "need d_max >= 2"));
    }
    let mut best = DimensionOptimum {
        dimension: 1,
        skr_bits: 0.0,
    };
    for dimension in 2..=d_max {
        let config = RepeaterConfig {
            protocol,
            dimension,
            total_km,
            spacing_km,
            squeezing,
            coupling,
            ..RepeaterConfig::default()
        };
        let rate = bare_rate(&config)?;
        if rate.skr_bits > best.skr_bits {
            best = DimensionOptimum {
                dimension,
                skr_bits: rate.skr_bits,
            };
        }
    }
    Ok(best)
}

/// Best station spacing by rate-per-station, plus the zero-rate cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacingOptimum {
    pub spacing_km: f64,
    pub skr_per_station: f64,
    pub skr_bits: f64,
    /// Largest scanned spacing with a nonzero rate, if any.
    pub cutoff_km: Option<f64>,
}

/// Evaluates a configuration across a grid of station spacings.
pub fn spacing_curve(
    template: &RepeaterConfig,
    grid: &[f64],
) -> Result<Vec<(f64, RateResult)>> {
    grid.iter()
        .map(|&spacing_km| {
            let config = RepeaterConfig {
                spacing_km,
                ..template.clone()
            };
            Ok((spacing_km, repeater_rate(&config)?))
        })
        .collect()
}

/// Maximizes the rate per station over a spacing grid. Ties go to the
/// smaller spacing.
pub fn optimal_spacing(template: &RepeaterConfig, grid: &[f64]) -> Result<SpacingOptimum> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "spacing grid must be non-empty"));
    }
    let curve = spacing_curve(template, grid)?;
    let mut best: Option<SpacingOptimum> = None;
    let mut cutoff = None;
    for (spacing_km, rate) in &curve {
        if rate.skr_bits > 0.0 {
            cutoff = Some(*spacing_km);
        }
        let better = match &best {
            None => true,
            Some(b) => rate.skr_per_station > b.skr_per_station,
        };
        if better {
            best = Some(SpacingOptimum {
                spacing_km: *spacing_km,
                skr_per_station: rate.skr_per_station,
                skr_bits: rate.skr_bits,
                cutoff_km: None,
            });
        }
    }
    let mut best = best.expect("grid is non-empty");
    best.cutoff_km = cutoff;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(protocol: Protocol, dimension: u32, total_km: f64, spacing_km: f64, db: f64) -> RepeaterConfig {
        RepeaterConfig {
            protocol,
            dimension,
            total_km,
            spacing_km,
            squeezing: SqueezingParameter::from_db(db).unwrap(),
            ..RepeaterConfig::default()
        }
    }

    #[test]
    fn station_count_rounding() {
        assert_eq!(station_count(2000.0, 0.5), 4000);
        assert_eq!(station_count(100.0, 0.1), 1000);
        assert_eq!(station_count(1.0, 0.3), 3);
        assert_eq!(station_count(0.5, 0.5), 1);
        assert_eq!(station_count(0.5, 2.0), 1);
    }

    #[test]
    fn bare_qubit_rate_approaches_one_without_noise() {
        let mut cfg = config(Protocol::TwoWayTeleport, 2, 10.0, 0.5, 60.0);
        cfg.coupling = 1.0;
        cfg.spacing_km = 1e-9;
        cfg.total_km = 1e-9;
        let rate = bare_rate(&cfg).unwrap();
        assert_abs_diff_eq!(rate.skr_bits, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn bare_rate_dies_below_ten_db() {
        for protocol in [Protocol::TwoWayTeleport, Protocol::OneWayTeleport] {
            let cfg = config(protocol, 2, 10.0, 0.5, 9.0);
            assert_eq!(bare_rate(&cfg).unwrap().skr_bits, 0.0);
        }
    }

    #[test]
    fn one_way_qutrits_beat_qubits_at_high_squeezing_and_short_length() {
        let qutrit = bare_rate(&config(Protocol::OneWayTeleport, 3, 50.0, 0.5, 25.0)).unwrap();
        let qubit = bare_rate(&config(Protocol::OneWayTeleport, 2, 50.0, 0.5, 25.0)).unwrap();
        assert!(qutrit.skr_bits > qubit.skr_bits);
    }

    #[test]
    fn bare_half_teleportation_is_rejected() {
        let cfg = config(Protocol::OneWayHalfTeleport, 5, 10.0, 0.5, 20.0);
        assert!(matches!(
            bare_rate(&cfg),
            Err(Error::UnsupportedProtocol(_))
        ));
    }

    #[test]
    fn bare_rate_monotone_in_squeezing_and_length() {
        let mut last = 0.0;
        for db in [12.0, 14.0, 16.0, 18.0, 20.0] {
            let rate = bare_rate(&config(Protocol::TwoWayTeleport, 2, 100.0, 0.5, db)).unwrap();
            assert!(rate.skr_bits >= last);
            last = rate.skr_bits;
        }
        let mut last = f64::INFINITY;
        for total in [10.0, 50.0, 200.0, 1000.0, 5000.0] {
            let rate = bare_rate(&config(Protocol::TwoWayTeleport, 2, total, 0.5, 20.0)).unwrap();
            assert!(rate.skr_bits <= last);
            last = rate.skr_bits;
        }
    }

    #[test]
    fn single_segment_chain_equals_single_channel_rate() {
        let cfg = config(Protocol::TwoWayTeleport, 3, 0.5, 0.5, 18.0);
        let rate = bare_rate(&cfg).unwrap();
        assert_eq!(rate.stations, 1);
        let dim = 3usize;
        let budget = measurement_variance(
            BellProtocol::TwoWay,
            dim,
            cfg.squeezing,
            &cfg.link().unwrap(),
        )
        .unwrap();
        let station = distribution_from_gaussian_with(dim, budget.total(), Truncation::Adaptive)
            .unwrap();
        let expected = (3.0f64.log2() - 2.0 * station.entropy_bits()).max(0.0);
        assert_abs_diff_eq!(rate.skr_bits, expected, epsilon = 1e-12);
    }

    #[test]
    fn encoded_rate_reaches_log2_d_without_noise() {
        for dimension in [5u32, 13, 17] {
            let mut cfg = config(Protocol::TwoWayTeleport, dimension, 100.0, 0.5, 120.0);
            cfg.encoded = true;
            cfg.coupling = 1.0;
            cfg.spacing_km = 1e-9;
            cfg.total_km = 1e-6;
            let rate = encoded_rate(&cfg).unwrap();
            assert_abs_diff_eq!(rate.skr_bits, (dimension as f64).log2(), epsilon = 1e-9);
            assert!(rate.p_cor_station.unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn encoded_rate_rejects_inadmissible_dimensions() {
        let mut cfg = config(Protocol::TwoWayTeleport, 6, 100.0, 0.5, 20.0);
        cfg.encoded = true;
        assert!(matches!(
            encoded_rate(&cfg),
            Err(Error::InadmissibleDimension { dimension: 6, .. })
        ));
        // D = 7 is prime but 7 - 1 is not a multiple of four.
        cfg.dimension = 7;
        assert!(encoded_rate(&cfg).is_err());
        cfg.allow_any_prime = true;
        assert!(encoded_rate(&cfg).is_ok());
    }

    #[test]
    fn half_teleportation_requires_unit_gamma() {
        let mut cfg = config(Protocol::OneWayHalfTeleport, 5, 100.0, 0.5, 20.0);
        cfg.encoded = true;
        cfg.gamma = 0.9;
        assert!(encoded_rate(&cfg).is_err());
        cfg.gamma = 1.0;
        assert!(encoded_rate(&cfg).is_ok());
    }

    #[test]
    fn erasure_path_with_unit_gamma_matches_the_direct_path_bitwise() {
        let code = PolynomialCode::new(13).unwrap();
        for sigma_sq in [0.01, 0.03, 0.08] {
            let direct =
                encoded_rate_from_station_variance(&code, sigma_sq, 1000, 1.0, Truncation::Adaptive)
                    .unwrap();
            // Forcing the erasure machinery with gamma = 1 must agree bit for
            // bit: the binning short-circuit feeds identical numbers into an
            // identical failure sum.
            let binning = erasure_binning(13, sigma_sq, 1.0).unwrap();
            let failure = p_fail_from_binning(&code, &binning);
            let forced =
                encoded_rate_from_failure(&code, binning.kept_central(), failure, 1000);
            assert_eq!(direct, forced);
        }
    }

    #[test]
    fn discarding_can_help_the_encoded_chain() {
        // Deep-suppression regime, where flagging near-boundary outcomes as
        // erasures buys an order of magnitude in the failure rate.
        let code = PolynomialCode::new(13).unwrap();
        let plain =
            encoded_rate_from_station_variance(&code, 0.01, 20_000, 1.0, Truncation::Adaptive)
                .unwrap();
        let tuned =
            encoded_rate_from_station_variance(&code, 0.01, 20_000, 0.82, Truncation::Adaptive)
                .unwrap();
        assert!(tuned.skr_bits > plain.skr_bits);
        assert!(tuned.p_cor_station.unwrap() > plain.p_cor_station.unwrap());
    }

    #[test]
    fn input_noise_cliff_edges() {
        let low = rate_vs_input_noise(5, 5000.0, 0.5, 1e-4).unwrap();
        assert!(low.skr_bits > 0.99 * 5.0f64.log2());
        let zeroish = rate_vs_input_noise(5, 5000.0, 0.5, 0.0).unwrap();
        assert!(zeroish.skr_bits >= low.skr_bits);
    }

    #[test]
    fn protocol_ordering_on_an_encoded_grid_point() {
        let mut two_way = config(Protocol::TwoWayTeleport, 13, 1000.0, 0.1, 30.0);
        two_way.encoded = true;
        let mut one_way = two_way.clone();
        one_way.protocol = Protocol::OneWayTeleport;
        let mut half = two_way.clone();
        half.protocol = Protocol::OneWayHalfTeleport;
        let r2 = encoded_rate(&two_way).unwrap().skr_bits;
        let r1 = encoded_rate(&one_way).unwrap().skr_bits;
        let rh = encoded_rate(&half).unwrap().skr_bits;
        assert!(r2 >= r1 && r1 >= rh, "r2={r2} r1={r1} rh={rh}");
    }

    #[test]
    fn optimal_dimension_is_one_when_nothing_works() {
        let s = SqueezingParameter::from_db(5.0).unwrap();
        let best =
            optimal_bare_dimension(Protocol::TwoWayTeleport, 50.0, 0.5, s, 0.99, 16).unwrap();
        assert_eq!(best.dimension, 1);
        assert_eq!(best.skr_bits, 0.0);
    }

    #[test]
    fn optimal_dimension_prefers_qubits_at_moderate_squeezing() {
        let s = SqueezingParameter::from_db(15.0).unwrap();
        let best =
            optimal_bare_dimension(Protocol::TwoWayTeleport, 100.0, 0.5, s, 0.99, 8).unwrap();
        assert_eq!(best.dimension, 2);
        assert!(best.skr_bits > 0.0);
    }

    #[test]
    fn optimal_spacing_reports_cutoff() {
        let mut template = config(Protocol::TwoWayTeleport, 5, 2000.0, 0.5, 30.0);
        template.encoded = true;
        template.coupling = 0.999;
        let grid: Vec<f64> = (1..=60).map(|i| 0.05 * i as f64).collect();
        let best = optimal_spacing(&template, &grid).unwrap();
        assert!(best.skr_per_station > 0.0);
        let cutoff = best.cutoff_km.unwrap();
        assert!(cutoff > best.spacing_km);
        // Beyond the cutoff the rate is zero on the grid.
        let curve = spacing_curve(&template, &grid).unwrap();
        for (l0, rate) in curve {
            if l0 > cutoff {
                assert_eq!(rate.skr_bits, 0.0);
            }
        }
    }

    #[test]
    fn skr_per_station_divides_by_the_chain_length() {
        let cfg = config(Protocol::TwoWayTeleport, 2, 100.0, 0.5, 20.0);
        let rate = bare_rate(&cfg).unwrap();
        assert_eq!(rate.stations, 200);
        assert_abs_diff_eq!(
            rate.skr_per_station,
            rate.skr_bits / 200.0,
            epsilon = 1e-15
        );
    }
}
