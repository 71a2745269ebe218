//! Variance bookkeeping for the repeater noise model.
//!
//! All noise sources are incoherent Gaussian displacement channels, so a
//! station's error channel is fully characterized by the variance reaching
//! each homodyne measurement. This module converts squeezing levels to
//! variances, models fiber and coupling loss under the three amplification
//! strategies, and composes the per-measurement variance budget for the
//! teleportation-based protocols.
//!
//! Variances are quadrature variances in the convention where the vacuum has
//! variance 1/2.

use serde::{Deserialize, Serialize};

use crate::binning::VACUUM_VARIANCE;
use crate::error::{Error, Result};

/// Attenuation length of standard telecom fiber, in km.
pub const ATTENUATION_LENGTH_KM: f64 = 22.0;

/// Default fiber-coupling efficiency.
pub const DEFAULT_COUPLING: f64 = 0.99;

/// Squeezing level of the approximate GKP states, in dB.
///
/// Defined by `s = -10 log10(sigma_sq / sigma_vac)` with `sigma_vac = 1/2`,
/// so 0 dB means vacuum-level peaks and each 10 dB shrinks the peak variance
/// by a decade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SqueezingParameter {
    db: f64,
}

impl SqueezingParameter {
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() || db < 0.0 {
            return Err(Error::invalid(
                "squeezing_db",
                format!("squeezing must be finite and non-negative, got {db}"),
            ));
        }
        Ok(Self { db })
    }

    pub fn from_variance(sigma_sq: f64) -> Result<Self> {
        if !(sigma_sq > 0.0 && sigma_sq <= VACUUM_VARIANCE) {
            return Err(Error::invalid(
                "sigma_sq",
                format!("variance must lie in (0, 1/2], got {sigma_sq}"),
            ));
        }
        Ok(Self {
            db: -10.0 * (sigma_sq / VACUUM_VARIANCE).log10(),
        })
    }

    pub fn db(&self) -> f64 {
        self.db
    }

    /// Peak variance `sigma_vac * 10^(-s/10)`.
    pub fn variance(&self) -> f64 {
        VACUUM_VARIANCE * 10f64.powf(-self.db / 10.0)
    }
}

/// Geometry and coupling of one repeater link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    /// Distance between adjacent stations, km.
    pub spacing_km: f64,
    /// Fiber attenuation length, km.
    pub att_length_km: f64,
    /// Efficiency of coupling a signal into the fiber, in (0, 1].
    pub coupling: f64,
}

impl LinkParams {
    pub fn new(spacing_km: f64, att_length_km: f64, coupling: f64) -> Result<Self> {
        let link = Self {
            spacing_km,
            att_length_km,
            coupling,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing_km > 0.0 && self.spacing_km.is_finite()) {
            return Err(Error::invalid("spacing_km", "spacing must be positive"));
        }
        if !(self.att_length_km > 0.0 && self.att_length_km.is_finite()) {
            return Err(Error::invalid(
                "att_length_km",
                "attenuation length must be positive",
            ));
        }
        if !(self.coupling > 0.0 && self.coupling <= 1.0) {
            return Err(Error::invalid("coupling", "coupling must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Transmittance of a full link, `exp(-L0 / L_att)`.
    pub fn transmittance(&self) -> f64 {
        fiber_transmittance(self.spacing_km, self.att_length_km)
    }

    /// Transmittance of half a link, `exp(-L0 / (2 L_att))`.
    pub fn half_transmittance(&self) -> f64 {
        fiber_transmittance(0.5 * self.spacing_km, self.att_length_km)
    }
}

/// Fiber transmittance over `length_km` of fiber.
pub fn fiber_transmittance(length_km: f64, att_length_km: f64) -> f64 {
    (-length_km / att_length_km).exp()
}

fn validate_transmittance(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid(
            "eta",
            format!("transmittance must lie in (0, 1], got {eta}"),
        ));
    }
    Ok(())
}

/// Displacement variance left by a loss channel when the lattice is rescaled
/// classically after the homodyne measurement: `1/sqrt(eta_tot) - 1`.
pub fn loss_variance_classical_postamp(eta_tot: f64) -> Result<f64> {
    validate_transmittance(eta_tot)?;
    Ok(1.0 / eta_tot.sqrt() - 1.0)
}

/// Displacement variance when a quantum-limited amplifier with gain
/// `1/eta_tot` runs *before* the loss: `1 - eta_tot`.
pub fn loss_variance_preamp(eta_tot: f64) -> Result<f64> {
    validate_transmittance(eta_tot)?;
    Ok(1.0 - eta_tot)
}

/// Displacement variance when the amplifier runs *after* the loss:
/// `(1 - eta) / eta`. Kept for model comparison; none of the three protocols
/// uses this ordering.
pub fn loss_variance_postamp_optical(eta: f64) -> Result<f64> {
    validate_transmittance(eta)?;
    Ok((1.0 - eta) / eta)
}

/// Gaussian variance affecting a physical qudit right after it is coupled
/// into the fiber: three state-preparation terms plus the coupling-loss
/// excess `(1 - eta_c)/eta_c * exp(L0 / (2 L_att))`.
pub fn input_noise_variance(squeezing: SqueezingParameter, link: &LinkParams) -> f64 {
    let coupling_excess = (1.0 - link.coupling) / link.coupling
        * (link.spacing_km / (2.0 * link.att_length_km)).exp();
    3.0 * squeezing.variance() + coupling_excess
}

/// Which teleportation-based protocol a link belongs to. The half-teleportation
/// protocol has its own variance tables (see the placement module).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellProtocol {
    /// Both Bell-pair halves travel half a link; the measured signal is
    /// rescaled classically.
    TwoWay,
    /// One half travels a full link after optical pre-amplification.
    OneWay,
}

/// Per-measurement Gaussian variance, split by physical origin.
///
/// The three pieces are independent Gaussian contributions, so the total is
/// their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudget {
    /// State-preparation noise reaching the measurement (2 or 3 peak
    /// variances, depending on how the Bell pair is produced).
    pub preparation: f64,
    /// Excess noise attributable to imperfect fiber coupling.
    pub coupling: f64,
    /// Noise from transmission loss in an ideally coupled fiber.
    pub transmission: f64,
    total: f64,
}

impl NoiseBudget {
    fn new(preparation: f64, coupling: f64, transmission: f64) -> Self {
        Self {
            preparation,
            coupling,
            transmission,
            total: preparation + coupling + transmission,
        }
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Composed Gaussian variance on each homodyne measurement of a repeater
/// station.
///
/// Three GKP state preparations sit in the causal past of every measurement;
/// when `D` is even, a beam splitter turns two grid states directly into the
/// Bell pair and only two preparations contribute. Loss enters as
/// `1/(eta_c sqrt(eta)) - 1` for the two-way protocol (classical
/// post-amplification over half a link per direction) and as
/// `1 - eta_c eta` for the one-way protocol (optical pre-amplification over a
/// full link).
pub fn measurement_variance(
    protocol: BellProtocol,
    dim: usize,
    squeezing: SqueezingParameter,
    link: &LinkParams,
) -> Result<NoiseBudget> {
    if dim < 2 {
        return Err(Error::invalid("dim", "dimension must be at least 2"));
    }
    link.validate()?;
    let preparations = if dim % 2 == 0 { 2.0 } else { 3.0 };
    let preparation = preparations * squeezing.variance();
    let (coupling, transmission) = match protocol {
        BellProtocol::TwoWay => {
            let boost = (link.spacing_km / (2.0 * link.att_length_km)).exp();
            let coupling = (1.0 - link.coupling) / link.coupling * boost;
            let transmission = boost - 1.0;
            (coupling, transmission)
        }
        BellProtocol::OneWay => {
            let eta = link.transmittance();
            let coupling = eta * (1.0 - link.coupling);
            let transmission = 1.0 - eta;
            (coupling, transmission)
        }
    };
    Ok(NoiseBudget::new(preparation, coupling, transmission))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn squeezing_conversion_decades() {
        assert_eq!(SqueezingParameter::from_db(0.0).unwrap().variance(), 0.5);
        assert_abs_diff_eq!(
            SqueezingParameter::from_db(10.0).unwrap().variance(),
            0.05,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            SqueezingParameter::from_db(20.0).unwrap().variance(),
            0.005,
            epsilon = 1e-15
        );
    }

    #[test]
    fn squeezing_round_trips_through_variance() {
        for db in [0.0, 3.0, 9.5, 17.2, 30.0] {
            let s = SqueezingParameter::from_db(db).unwrap();
            let back = SqueezingParameter::from_variance(s.variance()).unwrap();
            assert!((back.db() - db).abs() <= 1e-12 * db.max(1.0));
        }
    }

    #[test]
    fn transmittance_values() {
        assert_eq!(fiber_transmittance(0.0, 22.0), 1.0);
        assert_abs_diff_eq!(fiber_transmittance(22.0, 22.0), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            fiber_transmittance(0.5, 22.0),
            (-1.0f64 / 44.0).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn loss_variance_formulas() {
        assert_eq!(loss_variance_classical_postamp(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(loss_variance_classical_postamp(0.25).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(loss_variance_preamp(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(loss_variance_preamp(0.9).unwrap(), 0.1, epsilon = 1e-15);
        let eta = 0.99 * (-0.1f64 / 22.0).exp();
        assert_abs_diff_eq!(loss_variance_preamp(eta).unwrap(), 1.0 - eta, epsilon = 1e-15);
        assert_eq!(loss_variance_postamp_optical(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(loss_variance_postamp_optical(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            loss_variance_postamp_optical(0.9).unwrap(),
            1.0 / 9.0,
            epsilon = 1e-15
        );
        assert!(loss_variance_classical_postamp(0.0).is_err());
        assert!(loss_variance_preamp(1.5).is_err());
    }

    #[test]
    fn amplification_strategy_ordering() {
        // Post-amplifying the optical signal is the worst of the three
        // options at any transmittance.
        for eta in [0.1, 0.4, 0.8, 0.99] {
            let post_optical = loss_variance_postamp_optical(eta).unwrap();
            let preamp = loss_variance_preamp(eta).unwrap();
            let classical = loss_variance_classical_postamp(eta).unwrap();
            assert!(preamp < post_optical);
            assert!(classical < post_optical);
        }
    }

    #[test]
    fn input_noise_spot_values() {
        let link = LinkParams::new(0.5, 22.0, 0.99).unwrap();
        let v6 = input_noise_variance(SqueezingParameter::from_db(6.0).unwrap(), &link);
        assert!((0.37..=0.42).contains(&v6), "got {v6}");
        let v9 = input_noise_variance(SqueezingParameter::from_db(9.0).unwrap(), &link);
        assert!((0.18..=0.22).contains(&v9), "got {v9}");
        let link_low = LinkParams::new(0.5, 22.0, 0.92).unwrap();
        let v30 = input_noise_variance(SqueezingParameter::from_db(30.0).unwrap(), &link_low);
        assert!((0.08..=0.11).contains(&v30), "got {v30}");
    }

    #[test]
    fn measurement_variance_ideal_station_is_noiseless() {
        let link = LinkParams::new(1e-12, 22.0, 1.0).unwrap();
        let s = SqueezingParameter::from_db(400.0).unwrap();
        let budget = measurement_variance(BellProtocol::TwoWay, 3, s, &link).unwrap();
        assert!(budget.total() < 1e-12);
    }

    #[test]
    fn even_dimension_saves_one_preparation() {
        let link = LinkParams::new(0.5, 22.0, 0.99).unwrap();
        let s = SqueezingParameter::from_db(15.0).unwrap();
        let odd = measurement_variance(BellProtocol::TwoWay, 3, s, &link).unwrap();
        let even = measurement_variance(BellProtocol::TwoWay, 4, s, &link).unwrap();
        assert_abs_diff_eq!(odd.total() - even.total(), s.variance(), epsilon = 1e-15);
    }

    #[test]
    fn two_way_total_matches_closed_form() {
        let link = LinkParams::new(0.5, 22.0, 0.99).unwrap();
        let s = SqueezingParameter::from_db(12.0).unwrap();
        let budget = measurement_variance(BellProtocol::TwoWay, 5, s, &link).unwrap();
        let closed = 3.0 * s.variance() + 1.0 / (0.99 * (-0.25f64 / 22.0).exp()) - 1.0;
        assert_abs_diff_eq!(budget.total(), closed, epsilon = 1e-12);
        assert_abs_diff_eq!(
            budget.preparation + budget.coupling + budget.transmission,
            budget.total(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn one_way_total_matches_closed_form() {
        let link = LinkParams::new(0.8, 22.0, 0.97).unwrap();
        let s = SqueezingParameter::from_db(18.0).unwrap();
        let budget = measurement_variance(BellProtocol::OneWay, 7, s, &link).unwrap();
        let eta = (-0.8f64 / 22.0).exp();
        let closed = 3.0 * s.variance() + 1.0 - 0.97 * eta;
        assert_abs_diff_eq!(budget.total(), closed, epsilon = 1e-12);
    }

    #[test]
    fn two_way_total_decomposes_as_input_noise_plus_pure_transmission() {
        let link = LinkParams::new(0.5, 22.0, 0.99).unwrap();
        let s = SqueezingParameter::from_db(9.0).unwrap();
        let budget = measurement_variance(BellProtocol::TwoWay, 5, s, &link).unwrap();
        let identity = input_noise_variance(s, &link)
            + ((link.spacing_km / (2.0 * link.att_length_km)).exp() - 1.0);
        assert_abs_diff_eq!(budget.total(), identity, epsilon = 1e-12);
    }

    #[test]
    fn budgets_are_monotone_in_link_quality() {
        let s = SqueezingParameter::from_db(15.0).unwrap();
        for protocol in [BellProtocol::TwoWay, BellProtocol::OneWay] {
            let mut last = 0.0;
            for spacing in [0.1, 0.2, 0.5, 1.0, 2.0] {
                let link = LinkParams::new(spacing, 22.0, 0.99).unwrap();
                let total = measurement_variance(protocol, 5, s, &link).unwrap().total();
                assert!(total > last);
                last = total;
            }
            let mut last = f64::INFINITY;
            for coupling in [0.9, 0.95, 0.99, 1.0] {
                let link = LinkParams::new(0.5, 22.0, coupling).unwrap();
                let total = measurement_variance(protocol, 5, s, &link).unwrap().total();
                assert!(total < last);
                last = total;
            }
        }
    }
}
