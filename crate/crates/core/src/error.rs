use thiserror::Error;

use crate::model::grid::Representation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "grid too narrow: Gaussian tail outside the {representation} window holds {truncated:e} of the norm"
    )]
    GridTooNarrow {
        representation: Representation,
        truncated: f64,
    },

    #[error("states live on different grids or representations")]
    GridMismatch,

    #[error("time {time:e} lies outside the window [{start:e}, {end:e}) where this expression applies")]
    OutsideWindow { time: f64, start: f64, end: f64 },

    #[error("momentum shift {shift:e} exceeds the grid extent {extent:e}")]
    ShiftTooLarge { shift: f64, extent: f64 },

    #[error("wavepacket reached the {representation} grid edge (edge weight {weight:e})")]
    GridEdge {
        representation: Representation,
        weight: f64,
    },

    #[error("pulse at {time:e} does not fall on the propagation time grid")]
    PulseOffGrid { time: f64 },

    #[error("time step too coarse: maximum phase advance {phase:.3} rad per step exceeds 0.5 rad")]
    StepTooLarge { phase: f64 },

    #[error("trace does not cover the requested time {time:e}")]
    TraceTooShort { time: f64 },

    #[error("need at least {needed} usable points, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("degenerate fit: every decoherence factor is indistinguishable from 1")]
    DegenerateFit,

    #[error("echo prefactor vanishes for these pulse areas; cannot normalize")]
    ZeroEchoPrefactor,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
