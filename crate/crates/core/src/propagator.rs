//! Grid propagation under the full vibronic Hamiltonian
//! `p^2/2m + V_G(x) |G><G| + V_E(x) |E><E|`, with pulses applied as
//! instantaneous two-level rotations.
//!
//! Used as an independent check of the closed-form model: nothing here is
//! linearized, and the kinetic term is kept unless explicitly switched off.
//! All quantities are in natural units (`hbar = m = Omega = 1`); the electronic
//! gap is removed by working in the rotating frame.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::grid::{Fourier, Grid, Representation, DEFAULT_POINTS};
use crate::model::params::{PhysicalParams, PulseSchedule};
use crate::model::state::{make_ground_state, overlap, populations, VibronicState};
use crate::model::trace::{DipoleTrace, FrameNote, ResponseTerms};
use crate::scalar::{natural_momentum_spread, natural_position_spread, Real};

/// Largest probability weight tolerated in the guard bands.
pub const EDGE_TOLERANCE: f64 = 1e-10;

/// Largest phase (rad) any occupied grid point may advance per step.
pub const MAX_PHASE_PER_STEP: f64 = 0.5;

/// Upper limit for the automatic refinement in
/// [`PropagationConfig::for_schedule_stable`].
pub const MAX_STEPS_PER_TAU: usize = 1 << 16;

/// Vibrational potentials in natural units:
/// `V_G(x) = g^2 x^2 / 2` and `V_E(x) = -f x + e^2 x^2 / 2`, where `g` and `e`
/// are curvatures relative to the ground-state frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialSpec<T> {
    pub force: T,
    /// `Omega_G / Omega`. One reproduces the harmonic ground state; zero drops
    /// the ground curvature as in the linearized model.
    pub ground_curvature: T,
    /// `Omega_E / Omega`; zero gives a purely linear excited potential.
    pub excited_curvature: T,
    /// Include `p^2 / 2m`. Without it positions never move.
    pub kinetic: bool,
}

impl<T: Real> PotentialSpec<T> {
    /// Harmonic ground potential, linear excited potential, kinetic term on.
    pub fn from_params(params: &PhysicalParams<T>) -> Self {
        PotentialSpec {
            force: params.dimensionless_force(),
            ground_curvature: T::one(),
            excited_curvature: T::zero(),
            kinetic: true,
        }
    }

    /// Curvature-free potentials (the linearized Hamiltonian) plus the kinetic term.
    pub fn linearized(params: &PhysicalParams<T>) -> Self {
        PotentialSpec {
            ground_curvature: T::zero(),
            ..Self::from_params(params)
        }
    }

    pub fn with_excited_curvature(self, excited_curvature: T) -> Self {
        PotentialSpec {
            excited_curvature,
            ..self
        }
    }

    pub fn with_kinetic(self, kinetic: bool) -> Self {
        PotentialSpec { kinetic, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [self.force, self.ground_curvature, self.excited_curvature];
        if values.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::InvalidParameter(
                "potential force and curvatures must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn ground(&self, x: T) -> T {
        T::lit(0.5) * self.ground_curvature * self.ground_curvature * x * x
    }

    pub fn excited(&self, x: T) -> T {
        T::lit(0.5) * self.excited_curvature * self.excited_curvature * x * x - self.force * x
    }
}

/// Time stepping setup, natural units. Step `k` sits at `start + k dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationConfig<T> {
    pub grid: Grid<T>,
    pub dt: T,
    pub start: T,
    pub steps: usize,
    pub record_stride: usize,
}

/// How to lay a propagation window around a pulse schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec<T> {
    /// Steps between the two pulses; fixes `dt = tau / steps_per_tau`.
    pub steps_per_tau: usize,
    /// Steps before the first pulse.
    pub lead_steps: usize,
    /// Natural time simulated past the echo instant `t0 + tau`.
    pub tail: T,
    pub record_stride: usize,
    /// Lower bound on grid points; more are used if the dynamics need them.
    pub min_points: usize,
}

impl<T: Real> Default for WindowSpec<T> {
    fn default() -> Self {
        WindowSpec {
            steps_per_tau: 100,
            lead_steps: 10,
            tail: T::zero(),
            record_stride: 1,
            min_points: DEFAULT_POINTS,
        }
    }
}

impl<T: Real> PropagationConfig<T> {
    /// Window from `lead_steps` before the first pulse to `tail` past the
    /// echo, with both pulses on step boundaries and a grid sized for the
    /// momentum sweep `F_E * span`.
    pub fn for_schedule(
        params: &PhysicalParams<T>,
        schedule: &PulseSchedule<T>,
        window: &WindowSpec<T>,
    ) -> Result<Self> {
        params.validate()?;
        schedule.validate()?;
        if window.steps_per_tau == 0 || window.record_stride == 0 {
            return Err(Error::InvalidParameter(
                "steps_per_tau and record_stride must be positive".into(),
            ));
        }
        if window.tail.is_nan() || window.tail < T::zero() {
            return Err(Error::InvalidParameter("tail must be non-negative".into()));
        }
        let natural = schedule.to_natural(params);
        let dt = natural.tau / T::lit(window.steps_per_tau as f64);
        let tail_steps = (window.tail / dt).ceil().to_usize().unwrap_or(0);
        let dynamic_steps = 2 * window.steps_per_tau + tail_steps;
        let span = dt * T::lit(dynamic_steps as f64);
        let f = params.dimensionless_force();
        let grid = Grid::for_dynamics(window.min_points, f * span, f * span * span)?;
        Ok(PropagationConfig {
            grid,
            dt,
            start: natural.first_pulse() - dt * T::lit(window.lead_steps as f64),
            steps: window.lead_steps + dynamic_steps,
            record_stride: window.record_stride,
        })
    }

    /// Like [`for_schedule`](Self::for_schedule), but doubles
    /// `steps_per_tau` until the step satisfies the phase-advance bound.
    pub fn for_schedule_stable(
        params: &PhysicalParams<T>,
        schedule: &PulseSchedule<T>,
        window: &WindowSpec<T>,
        potentials: &PotentialSpec<T>,
    ) -> Result<Self> {
        let mut window = *window;
        loop {
            let config = Self::for_schedule(params, schedule, &window)?;
            let phase = config.max_phase_advance(potentials);
            if phase <= T::lit(MAX_PHASE_PER_STEP) {
                return Ok(config);
            }
            if window.steps_per_tau >= MAX_STEPS_PER_TAU {
                return Err(Error::StepTooLarge {
                    phase: phase.as_f64(),
                });
            }
            window.steps_per_tau = (2 * window.steps_per_tau).min(MAX_STEPS_PER_TAU);
        }
    }

    pub fn end(&self) -> T {
        self.start + self.dt * T::lit(self.steps as f64)
    }

    pub fn time_at(&self, step: usize) -> T {
        self.start + self.dt * T::lit(step as f64)
    }

    /// Step index of time `t`, which must fall on a step boundary.
    pub fn step_of(&self, t: T) -> Result<usize> {
        let k = ((t - self.start) / self.dt).round();
        let off = (t - self.start - k * self.dt).abs();
        if k < T::zero() || off > T::lit(1e-3) * self.dt {
            return Err(Error::PulseOffGrid { time: t.as_f64() });
        }
        let k = k.to_usize().ok_or(Error::PulseOffGrid { time: t.as_f64() })?;
        if k > self.steps {
            return Err(Error::PulseOffGrid { time: t.as_f64() });
        }
        Ok(k)
    }

    /// Largest per-step phase advance over the region the packets can reach
    /// within the window: momenta up to `8 dp + f span`, positions up to
    /// `8 dx + f span^2`.
    pub fn max_phase_advance(&self, potentials: &PotentialSpec<T>) -> T {
        let span = self.dt * T::lit(self.steps as f64);
        let eight = T::lit(8.0);
        let f = potentials.force;
        let p = eight * natural_momentum_spread::<T>() + f * span;
        let x = eight * natural_position_spread::<T>() + f * span * span;
        let kinetic = if potentials.kinetic {
            p * p / T::lit(2.0)
        } else {
            T::zero()
        };
        let potential = potentials
            .ground(x)
            .abs()
            .max(potentials.excited(x).abs())
            .max(potentials.excited(-x).abs());
        self.dt * kinetic.max(potential)
    }

    pub fn validate(&self, potentials: &PotentialSpec<T>) -> Result<()> {
        potentials.validate()?;
        if !(self.dt > T::zero() && self.dt.is_finite()) || self.record_stride == 0 {
            return Err(Error::InvalidParameter(
                "time step must be positive and record stride non-zero".into(),
            ));
        }
        let phase = self.max_phase_advance(potentials);
        if phase > T::lit(MAX_PHASE_PER_STEP) {
            return Err(Error::StepTooLarge {
                phase: phase.as_f64(),
            });
        }
        Ok(())
    }
}

/// Pointwise two-level rotation by `area / 2`:
/// `G -> cos G + sin E`, `E -> -sin G + cos E` on the basis states.
pub fn apply_impulsive_pulse<T: Real>(state: &VibronicState<T>, area: T) -> VibronicState<T> {
    let mut out = state.clone();
    rotate_in_place(&mut out, area);
    out
}

fn rotate_in_place<T: Real>(state: &mut VibronicState<T>, area: T) {
    let half = area / T::lit(2.0);
    let (c, s) = (half.cos(), half.sin());
    let (ground, excited) = state.components_mut();
    for (g, e) in ground.iter_mut().zip(excited.iter_mut()) {
        let (g0, e0) = (*g, *e);
        *g = g0.scale(c) - e0.scale(s);
        *e = g0.scale(s) + e0.scale(c);
    }
}

/// Precomputed Strang splitting `K(dt/2) V(dt) K(dt/2)` for one grid and
/// time step. The potential part is diagonal in the electronic index.
pub struct SplitOperator<T: Real> {
    grid: Grid<T>,
    fourier: Fourier<T>,
    scratch: Vec<Complex<T>>,
    half_kinetic: Option<Vec<Complex<T>>>,
    ground_phase: Vec<Complex<T>>,
    excited_phase: Vec<Complex<T>>,
}

impl<T: Real> SplitOperator<T> {
    pub fn new(grid: &Grid<T>, potentials: &PotentialSpec<T>, dt: T) -> Result<Self> {
        potentials.validate()?;
        let fourier = Fourier::new(grid);
        let scratch = fourier.make_scratch();
        let phase = |energy: T, duration: T| Complex::from_polar(T::one(), -energy * duration);
        let half_kinetic = potentials.kinetic.then(|| {
            let half = dt / T::lit(2.0);
            grid.momenta()
                .into_iter()
                .map(|p| phase(p * p / T::lit(2.0), half))
                .collect()
        });
        let x = grid.positions();
        Ok(SplitOperator {
            grid: *grid,
            fourier,
            scratch,
            half_kinetic,
            ground_phase: x.iter().map(|&x| phase(potentials.ground(x), dt)).collect(),
            excited_phase: x.iter().map(|&x| phase(potentials.excited(x), dt)).collect(),
        })
    }

    pub fn fourier(&self) -> &Fourier<T> {
        &self.fourier
    }

    /// Advances `state` by one step in place. The state is left in position
    /// representation.
    pub fn step(&mut self, state: &mut VibronicState<T>) -> Result<()> {
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        state.convert(Representation::Position, &self.fourier);
        let (ground, excited) = state.components_mut();
        advance(
            &self.grid,
            &self.fourier,
            &mut self.scratch,
            self.half_kinetic.as_deref(),
            &self.ground_phase,
            ground,
        )?;
        advance(
            &self.grid,
            &self.fourier,
            &mut self.scratch,
            self.half_kinetic.as_deref(),
            &self.excited_phase,
            excited,
        )
    }
}

fn advance<T: Real>(
    grid: &Grid<T>,
    fourier: &Fourier<T>,
    scratch: &mut [Complex<T>],
    half_kinetic: Option<&[Complex<T>]>,
    potential_phase: &[Complex<T>],
    psi: &mut [Complex<T>],
) -> Result<()> {
    let zero = Complex::new(T::zero(), T::zero());
    if psi.iter().all(|v| *v == zero) {
        return Ok(());
    }
    let kick = |psi: &mut [Complex<T>], phase: &[Complex<T>]| {
        for (v, w) in psi.iter_mut().zip(phase) {
            *v = *v * w;
        }
    };
    if let Some(k) = half_kinetic {
        fourier.to_momentum(psi, scratch);
        check_edges(grid, Representation::Momentum, psi)?;
        kick(psi, k);
        fourier.to_position(psi, scratch);
    }
    kick(psi, potential_phase);
    match half_kinetic {
        Some(k) => {
            fourier.to_momentum(psi, scratch);
            kick(psi, k);
            fourier.to_position(psi, scratch);
        }
        None => {
            // The force still sweeps the momentum distribution, which would
            // otherwise wrap around the grid unnoticed.
            let mut probe = psi.to_vec();
            fourier.to_momentum(&mut probe, scratch);
            check_edges(grid, Representation::Momentum, &probe)?;
        }
    }
    check_edges(grid, Representation::Position, psi)
}

fn check_edges<T: Real>(grid: &Grid<T>, representation: Representation, psi: &[Complex<T>]) -> Result<()> {
    let weight = grid.edge_weight(representation, psi).as_f64();
    if weight > EDGE_TOLERANCE {
        return Err(Error::GridEdge {
            representation,
            weight,
        });
    }
    Ok(())
}

/// One symmetric split-operator step of `state` (returned in position
/// representation). Plans its own FFT; use [`SplitOperator`] in loops.
pub fn step_split_operator<T: Real>(
    state: &VibronicState<T>,
    potentials: &PotentialSpec<T>,
    dt: T,
) -> Result<VibronicState<T>> {
    let mut op = SplitOperator::new(state.grid(), potentials, dt)?;
    let mut out = state.clone();
    op.step(&mut out)?;
    Ok(out)
}

enum Stage<T> {
    /// Before the second pulse: a single wavefunction.
    Single(VibronicState<T>),
    /// After it: branch `A` (ground until the second pulse) and branch `B`
    /// (excited by the first pulse), propagated separately. Their sum is the
    /// full state.
    Split {
        from_ground: VibronicState<T>,
        from_excited: VibronicState<T>,
    },
}

/// Propagates the ground state through the pulse schedule and records the
/// dipole every `record_stride` steps.
///
/// Samples at a pulse instant are taken just after the pulse. Trace times
/// are reported in the units of `params`.
pub fn simulate_trace<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    potentials: &PotentialSpec<T>,
    config: &PropagationConfig<T>,
) -> Result<DipoleTrace<T>> {
    params.validate()?;
    schedule.validate()?;
    config.validate(potentials)?;
    let natural = schedule.to_natural(params);
    let first = config.step_of(natural.first_pulse())?;
    let second = config.step_of(natural.t0)?;
    if second <= first {
        return Err(Error::InvalidParameter(
            "pulse delay is shorter than one time step".into(),
        ));
    }

    let mut op = SplitOperator::new(&config.grid, potentials, config.dt)?;
    let mut initial = make_ground_state(params, &config.grid)?;
    initial.convert(Representation::Position, op.fourier());
    let mut stage = Stage::Single(initial);

    let frame = FrameNote {
        carrier: params.electronic_gap.as_f64(),
    };
    let capacity = config.steps / config.record_stride + 1;
    let mut trace = DipoleTrace::with_capacity(capacity, frame, params.units);

    for k in 0..=config.steps {
        if k == first {
            if let Stage::Single(state) = &mut stage {
                rotate_in_place(state, schedule.area1);
            }
        }
        if k == second {
            if let Stage::Single(state) = stage {
                stage = split_at_pulse(state, schedule.area2);
            }
        }
        if k % config.record_stride == 0 {
            let t = params.time_from_natural(config.time_at(k));
            record(&mut trace, t, &stage)?;
        }
        if k < config.steps {
            match &mut stage {
                Stage::Single(state) => op.step(state)?,
                Stage::Split {
                    from_ground,
                    from_excited,
                } => {
                    op.step(from_ground)?;
                    op.step(from_excited)?;
                }
            }
        }
    }
    Ok(trace)
}

fn split_at_pulse<T: Real>(state: VibronicState<T>, area: T) -> Stage<T> {
    let grid = *state.grid();
    let rep = state.representation();
    let zero = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    let (ground, excited) = state.into_components();
    let mut from_ground = VibronicState::new(grid, rep, ground, zero.clone()).expect("same grid");
    let mut from_excited = VibronicState::new(grid, rep, zero, excited).expect("same grid");
    rotate_in_place(&mut from_ground, area);
    rotate_in_place(&mut from_excited, area);
    Stage::Split {
        from_ground,
        from_excited,
    }
}

fn record<T: Real>(trace: &mut DipoleTrace<T>, t: T, stage: &Stage<T>) -> Result<()> {
    match stage {
        Stage::Single(state) => {
            let dipole = state.dipole();
            let terms = ResponseTerms {
                free_induction: dipole,
                ..ResponseTerms::zero()
            };
            trace.push(t, dipole, populations(state), terms);
        }
        Stage::Split {
            from_ground: a,
            from_excited: b,
        } => {
            let h = a.spacing();
            let terms = ResponseTerms {
                free_induction: Complex::new(T::zero(), T::zero()),
                ground_path: overlap(a.ground(), a.excited(), h),
                excited_path: overlap(b.ground(), b.excited(), h),
                echo: overlap(b.ground(), a.excited(), h),
                residual: overlap(a.ground(), b.excited(), h),
            };
            let total = a.superpose(b)?;
            trace.push(t, total.dipole(), populations(&total), terms);
        }
    }
    Ok(())
}
