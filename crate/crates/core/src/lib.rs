//! Vibrational photon echoes from two impulsive optical pulses acting on a
//! two-level molecule whose excited state pushes the nuclei with a constant
//! force.
//!
//! Two engines produce the same observable, the electronic dipole
//! `<d>(t)`: closed-form Gaussian expressions ([`analytic`]) and a
//! split-operator propagation on a Fourier grid ([`propagator`]). The
//! [`scans`] module runs delay and pulse-area experiments on either.
//!
//! Everything is generic over the scalar through [`Real`]; the aliases at
//! the crate root fix it to `f64` or `f32`.

pub mod analytic;
pub mod error;
pub mod model;
pub mod propagator;
pub mod scalar;
pub mod scans;
pub mod units;

pub use analytic::{
    decoherence_factor, decoherence_factor_from_distribution, decoherence_time, dephasing_time,
    echo_prefactor, position_shift, timescale_ratio, timescales, AnalyticModel, AnalyticTimescales,
};
pub use error::{Error, Result};
pub use model::{
    dipole_expectation, make_ground_state, overlap, populations, DipoleTrace, EchoTermDecomposition,
    FrameNote, Grid, PhysicalParams, PulseSchedule, Representation, ResponseTerms, VibronicState,
};
pub use propagator::{
    apply_impulsive_pulse, simulate_trace, step_split_operator, PotentialSpec, PropagationConfig,
    SplitOperator, WindowSpec,
};
pub use scalar::Real;
pub use scans::{
    area_scan, compare_analytic_numeric, echo_amplitude, extract_echo_peak, fit_quartic_decay, tau_scan,
    ComparisonReport, EchoPeak, EchoScan, EchoSignal, Engine, NumericSettings, QuarticFit,
};
pub use units::{UnitScales, UnitSystem, HBAR_SI};

pub type Params64 = PhysicalParams<f64>;
pub type Params32 = PhysicalParams<f32>;
pub type Schedule64 = PulseSchedule<f64>;
pub type Schedule32 = PulseSchedule<f32>;
pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type State64 = VibronicState<f64>;
pub type State32 = VibronicState<f32>;
pub type Trace64 = DipoleTrace<f64>;
pub type Trace32 = DipoleTrace<f32>;
pub type Potentials64 = PotentialSpec<f64>;
pub type Config64 = PropagationConfig<f64>;
pub type Scan64 = EchoScan<f64>;
