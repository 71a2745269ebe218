//! Run configuration: one JSON-serializable struct that fully determines any
//! rate query, sweep table, or validation run.

use std::path::PathBuf;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use gkpr_core::binning::Truncation;
use gkpr_core::half_teleport::{Placement, SymmetricModel};
use gkpr_core::noise::SqueezingParameter;
use gkpr_core::protocols::{Protocol, RepeaterConfig};

/// Axis of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Which configuration field the axis varies.
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub steps: u32,
    #[serde(default)]
    pub scale: AxisScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

impl SweepAxis {
    pub fn linear(parameter: &str, min: f64, max: f64, steps: u32) -> Self {
        Self {
            parameter: parameter.into(),
            min,
            max,
            steps,
            scale: AxisScale::Linear,
        }
    }

    pub fn log(parameter: &str, min: f64, max: f64, steps: u32) -> Self {
        Self {
            parameter: parameter.into(),
            min,
            max,
            steps,
            scale: AxisScale::Log,
        }
    }

    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        if self.steps < 2 {
            bail!("axis `{}` needs at least 2 steps", self.parameter);
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            bail!("axis `{}` has invalid bounds", self.parameter);
        }
        let n = self.steps as usize;
        let values = match self.scale {
            AxisScale::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            AxisScale::Log => {
                if self.min <= 0.0 {
                    bail!("axis `{}` is logarithmic but min <= 0", self.parameter);
                }
                let ratio = (self.max / self.min).ln();
                (0..n)
                    .map(|i| self.min * (ratio * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        };
        Ok(values)
    }
}

/// Output format of single-point queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

/// Everything a run depends on. Round-trips losslessly through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub dimension: u32,
    pub length_km: f64,
    pub spacing_km: f64,
    pub squeezing_db: f64,
    pub coupling: f64,
    pub att_length_km: f64,
    pub encoded: bool,
    pub gamma: f64,
    pub placement: Placement,
    pub symmetric_model: SymmetricModel,
    pub meas_variance: f64,
    pub truncation: Truncation,
    pub allow_any_prime: bool,
    /// Direct per-measurement Gaussian variance, for queries that bypass the
    /// link model (failure curves, gamma optimization).
    pub sigma_sq: f64,
    /// Upper dimension bound for dimension optimization.
    pub d_max: u32,
    pub seed: u64,
    pub samples: u64,
    pub axes: Vec<SweepAxis>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::TwoWayTeleport,
            dimension: 2,
            length_km: 100.0,
            spacing_km: 0.5,
            squeezing_db: 20.0,
            coupling: 0.99,
            att_length_km: 22.0,
            encoded: false,
            gamma: 1.0,
            placement: Placement::Alternating,
            symmetric_model: SymmetricModel::Diagram,
            meas_variance: 0.0,
            truncation: Truncation::Adaptive,
            allow_any_prime: false,
            sigma_sq: 0.01,
            d_max: 32,
            seed: 20_260_809,
            samples: 10_000_000,
            axes: Vec::new(),
            format: OutputFormat::Json,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn repeater(&self) -> anyhow::Result<RepeaterConfig> {
        Ok(RepeaterConfig {
            protocol: self.protocol,
            dimension: self.dimension,
            total_km: self.length_km,
            spacing_km: self.spacing_km,
            squeezing: SqueezingParameter::from_db(self.squeezing_db)?,
            coupling: self.coupling,
            att_length_km: self.att_length_km,
            encoded: self.encoded,
            gamma: self.gamma,
            placement: self.placement,
            symmetric_model: self.symmetric_model,
            meas_variance: self.meas_variance,
            truncation: self.truncation,
            allow_any_prime: self.allow_any_prime,
        })
    }

    /// Axis with the given parameter name, if the config carries one.
    pub fn axis(&self, parameter: &str) -> Option<&SweepAxis> {
        self.axes.iter().find(|a| a.parameter == parameter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_losslessly() {
        let mut cfg = RunConfig::default();
        cfg.protocol = Protocol::OneWayHalfTeleport;
        cfg.dimension = 13;
        cfg.spacing_km = 0.5500000000000001;
        cfg.gamma = 0.8200000000000003;
        cfg.axes = vec![
            SweepAxis::linear("gamma", 0.5, 1.0, 500),
            SweepAxis::log("length_km", 10.0, 1e5, 41),
        ];
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<RunConfig>("{\"no_such_field\": 1}");
        assert!(err.is_err());
    }

    #[test]
    fn axis_values_cover_the_bounds() {
        let axis = SweepAxis::linear("x", 0.0, 1.0, 5);
        assert_eq!(axis.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let axis = SweepAxis::log("x", 1.0, 100.0, 3);
        let v = axis.values().unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!((v[2] - 100.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        assert!(SweepAxis::linear("x", 0.0, 1.0, 1).values().is_err());
        assert!(SweepAxis::linear("x", 2.0, 1.0, 4).values().is_err());
        assert!(SweepAxis::log("x", 0.0, 1.0, 4).values().is_err());
    }
}
