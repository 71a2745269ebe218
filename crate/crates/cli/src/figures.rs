//! Predefined sweep tables with standard parameter grids.
//!
//! Every preset fixes the parameters of one published operating regime and
//! sweeps the remaining axis (or axes). The preset parameters live in the
//! returned [`RunConfig`], so the CSV metadata is sufficient to re-run any
//! table; command-line flags override individual presets, and `--config`
//! replaces them wholesale.

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use gkpr_core::noise::{input_noise_variance, LinkParams, SqueezingParameter};
use gkpr_core::poly::{gamma_curve, PolynomialCode};
use gkpr_core::protocols::{
    encoded_rate, optimal_bare_dimension, rate_vs_input_noise, Protocol, RepeaterConfig,
};
use gkpr_core::half_teleport::Placement;

use crate::config::{RunConfig, SweepAxis};
use crate::table::SweepTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    FigNoiseA,
    FigNoiseB,
    Fig5,
    Fig9a,
    Fig9b,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::FigNoiseA => "fig-noise-a",
            Figure::FigNoiseB => "fig-noise-b",
            Figure::Fig5 => "fig5",
            Figure::Fig9a => "fig9a",
            Figure::Fig9b => "fig9b",
        }
    }
}

const CODE_DIMENSIONS: [u32; 4] = [5, 13, 17, 29];
const TELEPORT_PROTOCOLS: [(Protocol, &str); 3] = [
    (Protocol::TwoWayTeleport, "two_way"),
    (Protocol::OneWayTeleport, "one_way"),
    (Protocol::OneWayHalfTeleport, "half"),
];

/// Preset parameters of a figure, on top of the global defaults.
pub fn preset(figure: Figure) -> RunConfig {
    let mut cfg = RunConfig::default();
    match figure {
        Figure::Fig2a | Figure::Fig2b => {
            cfg.protocol = if figure == Figure::Fig2a {
                Protocol::OneWayTeleport
            } else {
                Protocol::TwoWayTeleport
            };
            cfg.spacing_km = 0.5;
            cfg.coupling = 0.99;
            cfg.d_max = 32;
        }
        Figure::Fig3a | Figure::Fig3b => {
            cfg.encoded = true;
            cfg.spacing_km = 0.1;
            cfg.coupling = 0.99;
            cfg.squeezing_db = if figure == Figure::Fig3a { 20.0 } else { 30.0 };
        }
        Figure::Fig4a | Figure::Fig4b => {
            cfg.encoded = true;
            cfg.length_km = 2000.0;
            cfg.coupling = 0.999;
            cfg.squeezing_db = if figure == Figure::Fig4a { 20.0 } else { 30.0 };
        }
        Figure::FigNoiseA => {
            cfg.spacing_km = 0.5;
        }
        Figure::FigNoiseB => {
            cfg.encoded = true;
            cfg.protocol = Protocol::TwoWayTeleport;
            cfg.length_km = 5000.0;
            cfg.spacing_km = 0.5;
        }
        Figure::Fig5 => {
            cfg.dimension = 13;
            cfg.sigma_sq = 0.01;
        }
        Figure::Fig9a | Figure::Fig9b => {
            cfg.protocol = Protocol::OneWayHalfTeleport;
            cfg.encoded = true;
            cfg.dimension = 5;
            cfg.length_km = 2000.0;
            cfg.coupling = 0.999;
            cfg.squeezing_db = if figure == Figure::Fig9a { 20.0 } else { 30.0 };
        }
    }
    cfg
}

fn axis_or_default(cfg: &RunConfig, default: SweepAxis) -> SweepAxis {
    cfg.axis(&default.parameter).cloned().unwrap_or(default)
}

/// Builds the table for a figure. Returns the table plus the fully resolved
/// configuration (including the axes actually used) for the metadata echo.
pub fn build(figure: Figure, cfg: &RunConfig) -> Result<(SweepTable, RunConfig)> {
    let mut resolved = cfg.clone();
    let (columns, axes, rows) = match figure {
        Figure::Fig2a | Figure::Fig2b => {
            let length = axis_or_default(cfg, SweepAxis::log("length_km", 10.0, 1e5, 26));
            let squeezing = axis_or_default(cfg, SweepAxis::linear("squeezing_db", 5.0, 35.0, 31));
            let lengths = length.values()?;
            let sdbs = squeezing.values()?;
            let grid: Vec<(f64, f64)> = lengths
                .iter()
                .flat_map(|&l| sdbs.iter().map(move |&s| (l, s)))
                .collect();
            let protocol = cfg.protocol;
            let coupling = cfg.coupling;
            let spacing = cfg.spacing_km;
            let d_max = cfg.d_max;
            let rows = grid
                .into_par_iter()
                .map(|(l, s)| {
                    let best = optimal_bare_dimension(
                        protocol,
                        l,
                        spacing,
                        SqueezingParameter::from_db(s)?,
                        coupling,
                        d_max,
                    )?;
                    Ok(vec![l, s, best.dimension as f64, best.skr_bits])
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (
                vec!["l_km".into(), "s_db".into(), "d_opt".into(), "skr_bits".into()],
                vec![length, squeezing],
                rows,
            )
        }
        Figure::Fig3a | Figure::Fig3b => {
            let length = axis_or_default(cfg, SweepAxis::log("length_km", 10.0, 1e5, 41));
            let lengths = length.values()?;
            let mut columns = vec!["l_km".to_string()];
            for (_, label) in TELEPORT_PROTOCOLS {
                for d in CODE_DIMENSIONS {
                    columns.push(format!("skr_{label}_d{d}"));
                }
            }
            let base = cfg.repeater()?;
            let rows = lengths
                .into_par_iter()
                .map(|l| {
                    let mut row = vec![l];
                    for (protocol, _) in TELEPORT_PROTOCOLS {
                        for d in CODE_DIMENSIONS {
                            let rate = encoded_rate(&RepeaterConfig {
                                protocol,
                                dimension: d,
                                total_km: l,
                                encoded: true,
                                ..base.clone()
                            })?;
                            row.push(rate.skr_bits);
                        }
                    }
                    Ok(row)
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (columns, vec![length], rows)
        }
        Figure::Fig4a | Figure::Fig4b => {
            let spacing = axis_or_default(cfg, SweepAxis::linear("spacing_km", 0.05, 2.0, 40));
            let spacings = spacing.values()?;
            let mut columns = vec!["l0_km".to_string()];
            for (_, label) in TELEPORT_PROTOCOLS {
                for d in CODE_DIMENSIONS {
                    columns.push(format!("skrn_{label}_d{d}"));
                }
            }
            let base = cfg.repeater()?;
            let rows = spacings
                .into_par_iter()
                .map(|l0| {
                    let mut row = vec![l0];
                    for (protocol, _) in TELEPORT_PROTOCOLS {
                        for d in CODE_DIMENSIONS {
                            let rate = encoded_rate(&RepeaterConfig {
                                protocol,
                                dimension: d,
                                spacing_km: l0,
                                encoded: true,
                                ..base.clone()
                            })?;
                            row.push(rate.skr_per_station);
                        }
                    }
                    Ok(row)
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (columns, vec![spacing], rows)
        }
        Figure::FigNoiseA => {
            let squeezing = axis_or_default(cfg, SweepAxis::linear("squeezing_db", 0.0, 35.0, 71));
            let coupling = axis_or_default(cfg, SweepAxis::linear("coupling", 0.9, 1.0, 41));
            let sdbs = squeezing.values()?;
            let couplings = coupling.values()?;
            let spacing_km = cfg.spacing_km;
            let att = cfg.att_length_km;
            let grid: Vec<(f64, f64)> = sdbs
                .iter()
                .flat_map(|&s| couplings.iter().map(move |&c| (s, c)))
                .collect();
            let rows = grid
                .into_par_iter()
                .map(|(s, c)| {
                    let link = LinkParams::new(spacing_km, att, c)?;
                    let v = input_noise_variance(SqueezingParameter::from_db(s)?, &link);
                    Ok(vec![s, c, v])
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (
                vec!["s_db".into(), "coupling".into(), "sigma2_in".into()],
                vec![squeezing, coupling],
                rows,
            )
        }
        Figure::FigNoiseB => {
            let noise = axis_or_default(cfg, SweepAxis::log("sigma2_in", 1e-3, 0.3, 61));
            let values = noise.values()?;
            let mut columns = vec!["sigma2_in".to_string()];
            for d in CODE_DIMENSIONS {
                columns.push(format!("skr_d{d}"));
            }
            let (length_km, spacing_km) = (cfg.length_km, cfg.spacing_km);
            let rows = values
                .into_par_iter()
                .map(|v| {
                    let mut row = vec![v];
                    for d in CODE_DIMENSIONS {
                        row.push(rate_vs_input_noise(d, length_km, spacing_km, v)?.skr_bits);
                    }
                    Ok(row)
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (columns, vec![noise], rows)
        }
        Figure::Fig5 => {
            let gamma = axis_or_default(cfg, SweepAxis::linear("gamma", 0.5, 1.0, 500));
            let gammas = gamma.values()?;
            let code = if cfg.allow_any_prime {
                PolynomialCode::new_any_prime(cfg.dimension)?
            } else {
                PolynomialCode::new(cfg.dimension)?
            };
            let rows = gamma_curve(&code, cfg.sigma_sq, &gammas)?
                .into_iter()
                .map(|p| vec![p.gamma, p.p_fail, p.p_discard, p.kept_central])
                .collect();
            (
                vec![
                    "gamma".into(),
                    "p_fail".into(),
                    "p_discard".into(),
                    "kept_central".into(),
                ],
                vec![gamma],
                rows,
            )
        }
        Figure::Fig9a | Figure::Fig9b => {
            let spacing = axis_or_default(cfg, SweepAxis::linear("spacing_km", 0.1, 1.5, 29));
            let spacings = spacing.values()?;
            let placements = [
                (Placement::None, "none"),
                (Placement::After, "after"),
                (Placement::Before, "before"),
                (Placement::Alternating, "alternating"),
            ];
            let mut columns = vec!["l0_km".to_string()];
            for (_, label) in placements {
                columns.push(format!("skrn_{label}"));
            }
            let base = cfg.repeater()?;
            let rows = spacings
                .into_par_iter()
                .map(|l0| {
                    let mut row = vec![l0];
                    for (placement, _) in placements {
                        let rate = encoded_rate(&RepeaterConfig {
                            placement,
                            spacing_km: l0,
                            ..base.clone()
                        })?;
                        row.push(rate.skr_per_station);
                    }
                    Ok(row)
                })
                .collect::<gkpr_core::Result<Vec<_>>>()?;
            (columns, vec![spacing], rows)
        }
    };
    resolved.axes = axes;
    let metadata = vec![
        ("gkpr-version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("figure".to_string(), figure.name().to_string()),
        (
            "config".to_string(),
            serde_json::to_string(&resolved).expect("config serializes"),
        ),
    ];
    Ok((
        SweepTable {
            columns,
            rows,
            metadata,
        },
        resolved,
    ))
}
