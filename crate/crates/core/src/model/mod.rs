//! Shared physical model: parameters, grids, the vibronic state and the
//! dipole observable.

pub mod grid;
pub mod params;
pub mod state;
pub mod trace;

pub use grid::{Fourier, Grid, Representation, DEFAULT_POINTS};
pub use params::{PhysicalParams, PulseSchedule};
pub use state::{
    dipole_expectation, make_ground_state, mean_momentum, momentum_autocorrelation, overlap, populations,
    VibronicState,
};
pub use trace::{DipoleTrace, EchoTermDecomposition, FrameNote, ResponseTerms};
