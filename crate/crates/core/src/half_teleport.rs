//! Station error probabilities for the one-way half-teleportation protocol.
//!
//! Each station measures a single quadrature, so Gaussian errors reach the
//! homodyne detectors along different paths depending on where (and whether)
//! an ancilla-based GKP stabilizer measurement is inserted. The four options
//! reduce to either one Gaussian channel binned once, or two independently
//! binned channels whose discrete shifts compose; this module tabulates the
//! channel variances per option and evaluates the station's no-net-shift
//! probability.

use serde::{Deserialize, Serialize};

use crate::binning::{central_and_complement, distribution_from_gaussian_with, Truncation};
use crate::dist::{compensated_sum, PauliDistribution};
use crate::error::{Error, Result};
use crate::noise::LinkParams;

/// Where the extra GKP stabilizer measurement sits in each station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// No extra stabilizer measurement; two transmissions merge before
    /// the readout.
    None,
    /// Stabilizer measurement after every two-qudit gate.
    After,
    /// Stabilizer measurement before every two-qudit gate.
    Before,
    /// Alternate between the two symmetric options.
    #[default]
    Alternating,
}

impl Placement {
    pub const ALL: [Placement; 4] = [
        Placement::None,
        Placement::After,
        Placement::Before,
        Placement::Alternating,
    ];
}

/// Which variance pair models the symmetric (after/before) placements.
///
/// The error-propagation diagrams assign the two binned channels variances
/// `2 s + l` and `4 s + l` (`s` = preparation, `l` = loss), while the
/// summary formula for the same quantity uses `2 s + l` twice. Both are
/// implemented; the diagram variances are the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricModel {
    #[default]
    Diagram,
    SummaryFormula,
}

/// Gaussian noise terms feeding one half-teleportation station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationNoise {
    /// Peak variance of the approximate GKP states.
    pub preparation: f64,
    /// Loss variance of one pre-amplified transmission, `1 - eta_c * eta`.
    pub loss: f64,
}

impl StationNoise {
    pub fn new(preparation: f64, loss: f64) -> Result<Self> {
        if !(preparation >= 0.0 && preparation.is_finite()) {
            return Err(Error::invalid("preparation", "variance must be non-negative"));
        }
        if !(loss >= 0.0 && loss.is_finite()) {
            return Err(Error::invalid("loss", "variance must be non-negative"));
        }
        Ok(Self { preparation, loss })
    }

    /// Derives the loss term from link geometry: optical pre-amplification
    /// over one full segment gives `1 - eta_c * exp(-L0 / L_att)`.
    pub fn from_link(preparation: f64, link: &LinkParams) -> Result<Self> {
        link.validate()?;
        Self::new(preparation, 1.0 - link.coupling * link.transmittance())
    }

    /// Variances of the binned channels feeding the station's measurements.
    pub fn channel_variances(&self, placement: Placement, model: SymmetricModel) -> Channels {
        let s = self.preparation;
        let l = self.loss;
        match placement {
            Placement::None => Channels::Single(3.0 * s + 2.0 * l),
            Placement::After | Placement::Before => match model {
                SymmetricModel::Diagram => Channels::Composed(2.0 * s + l, 4.0 * s + l),
                SymmetricModel::SummaryFormula => Channels::Composed(2.0 * s + l, 2.0 * s + l),
            },
            Placement::Alternating => Channels::Composed(3.0 * s + l, 3.0 * s + l),
        }
    }
}

/// One binned Gaussian channel, or two whose discrete shifts compose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channels {
    Single(f64),
    Composed(f64, f64),
}

/// No-net-shift probability of the composition of two discrete shift
/// channels, together with its complement summed directly over all
/// shift-producing pairs.
pub(crate) fn composed_central_and_complement(
    a: &PauliDistribution,
    b: &PauliDistribution,
) -> Result<(f64, f64)> {
    let d = a.dim();
    if d != b.dim() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: b.dim(),
        });
    }
    let central = compensated_sum((0..d).map(|k| a.prob(k) * b.prob((d - k) % d)));
    let complement = compensated_sum((0..d).flat_map(|i| {
        let a_i = a.prob(i);
        (0..d)
            .filter(move |&j| (i + j) % d != 0)
            .map(move |j| a_i * b.prob(j))
    }));
    let total = central + complement;
    Ok((central / total, complement / total))
}

/// Station no-error probability for a given stabilizer placement, with the
/// default diagram variances and no extra measurement noise.
pub fn placement_p0(placement: Placement, dim: usize, noise: &StationNoise) -> Result<f64> {
    placement_station(placement, dim, noise, 0.0, SymmetricModel::Diagram, Truncation::Adaptive)
        .map(|(p0, _)| p0)
}

/// Full station computation: no-error probability and its complement, with
/// extra per-measurement variance and an explicit symmetric-variance model.
pub fn placement_station(
    placement: Placement,
    dim: usize,
    noise: &StationNoise,
    meas_variance: f64,
    model: SymmetricModel,
    truncation: Truncation,
) -> Result<(f64, f64)> {
    if !(meas_variance >= 0.0 && meas_variance.is_finite()) {
        return Err(Error::invalid("meas_variance", "variance must be non-negative"));
    }
    match noise.channel_variances(placement, model) {
        Channels::Single(v) => central_and_complement(dim, v + meas_variance, truncation),
        Channels::Composed(v1, v2) => {
            let a = distribution_from_gaussian_with(dim, v1 + meas_variance, truncation)?;
            let b = distribution_from_gaussian_with(dim, v2 + meas_variance, truncation)?;
            composed_central_and_complement(&a, &b)
        }
    }
}

/// Placements ordered by decreasing station no-error probability; ties keep
/// the order none, after, before, alternating.
pub fn placement_ranking(dim: usize, noise: &StationNoise) -> Result<Vec<(Placement, f64)>> {
    let mut ranked = Placement::ALL
        .iter()
        .map(|&p| Ok((p, placement_p0(p, dim, noise)?)))
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("p0 values are finite"));
    Ok(ranked)
}
