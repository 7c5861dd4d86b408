//! Parameter families for the figure datasets.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use omn_core::params::SystemParams;
use omn_core::pipeline;

use crate::config::{linspace, Axis, ParamKey};
use crate::sweep::{map_parallel, SweepSpec};

/// Points on the Δ/ω_m axis.
pub const DETUNING_POINTS: usize = 401;
/// Upper end of the Δ/ω_m axis.
pub const DETUNING_MAX: f64 = 2.0;
/// Points on the temperature axis of fig5a/fig5b.
pub const TEMPERATURE_POINTS: usize = 201;
/// Lower end of the temperature axis, K.
pub const TEMPERATURE_FLOOR: f64 = 1e-3;
/// First ceiling tried for the temperature axis, K.
pub const TEMPERATURE_CEILING_START: f64 = 1e-2;
/// Hard cap on the temperature axis, K.
pub const TEMPERATURE_CEILING_MAX: f64 = 1.0;

pub const FIG2_LAMBDAS: [f64; 3] = [0.3, 0.5, 0.95];
pub const FIG3_GAINS: [f64; 6] = [0.0, 2e7, 5e7, 8e7, 10e7, 12e7];
pub const FIG4_GAIN: f64 = 12e7;
pub const FIG4_PHASES: [f64; 4] = [0.0, PI / 16.0, PI / 6.0, PI / 4.0];
pub const FIG5_POWERS: [f64; 4] = [30e-3, 50e-3, 80e-3, 100e-3];
pub const FIG5_DETUNING: f64 = 0.75;
pub const FIG5_PHASE: f64 = PI / 16.0;
pub const FIG5A_GAIN: f64 = 2e7;
pub const FIG5B_GAIN: f64 = 8e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5a, Figure::Fig5b];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5a => "fig5a",
            Figure::Fig5b => "fig5b",
        }
    }

    /// Parameters shared by every point of the figure.
    pub fn base(self) -> SystemParams {
        let b = SystemParams::baseline();
        let wm = b.omega_m1;
        match self {
            Figure::Fig2 | Figure::Fig3 => b,
            Figure::Fig4 => SystemParams { opa_gain: FIG4_GAIN, ..b },
            Figure::Fig5a | Figure::Fig5b => SystemParams {
                detuning: FIG5_DETUNING * wm,
                opa_phase: FIG5_PHASE,
                opa_gain: if self == Figure::Fig5a { FIG5A_GAIN } else { FIG5B_GAIN },
                ..b
            },
        }
    }

    /// The full sweep. For fig5a/fig5b this evaluates the model to size the
    /// temperature axis.
    pub fn spec(self, output_path: PathBuf, parallel: usize) -> SweepSpec {
        let detuning = || Axis {
            key: ParamKey::DetuningInOmegaM,
            values: linspace(0.0, DETUNING_MAX, DETUNING_POINTS),
        };
        let axes = match self {
            Figure::Fig2 => vec![
                Axis { key: ParamKey::CoulombLambdaInOmegaM, values: FIG2_LAMBDAS.to_vec() },
                detuning(),
            ],
            Figure::Fig3 => vec![Axis { key: ParamKey::OpaGain, values: FIG3_GAINS.to_vec() }, detuning()],
            Figure::Fig4 => vec![Axis { key: ParamKey::OpaPhase, values: FIG4_PHASES.to_vec() }, detuning()],
            Figure::Fig5a | Figure::Fig5b => {
                let ceiling = temperature_ceiling(&self.base(), &FIG5_POWERS, parallel);
                vec![
                    Axis { key: ParamKey::Power, values: FIG5_POWERS.to_vec() },
                    Axis {
                        key: ParamKey::Temperature,
                        values: linspace(TEMPERATURE_FLOOR, ceiling, TEMPERATURE_POINTS),
                    },
                ]
            }
        };
        SweepSpec { base: self.base(), base_relative: Vec::new(), axes, output_path, parallel }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

/// Smallest `TEMPERATURE_CEILING_START · 2^k` (capped at
/// `TEMPERATURE_CEILING_MAX`) at which no power in `powers` is entangled.
pub fn temperature_ceiling(base: &SystemParams, powers: &[f64], parallel: usize) -> f64 {
    let mut ceiling = TEMPERATURE_CEILING_START;
    loop {
        let points: Vec<SystemParams> =
            powers.iter().map(|&power| SystemParams { power, temperature: ceiling, ..*base }).collect();
        let alive = map_parallel(parallel, points, |p| pipeline::log_negativity_at(&p).is_ok_and(|e| e > 0.0));
        if !alive.contains(&true) || ceiling >= TEMPERATURE_CEILING_MAX {
            return ceiling.min(TEMPERATURE_CEILING_MAX);
        }
        ceiling *= 2.0;
    }
}
