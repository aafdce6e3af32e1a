//! Closed-form linearized model with impulsive pulses.
//!
//! With the Hamiltonian linearized around the ground-state minimum and the
//! kinetic energy dropped, the excited packet is rigidly translated in
//! momentum, `psi_E(p; t) = psi_E(p - F_E t; 0)`, and the ground packet is
//! frozen. Every dipole contribution is then an autocorrelation of `psi_0`
//! at some momentum offset, which for the Gaussian ground state is
//! `exp(-q^2 / (8 dp^2))`.
//!
//! Pulses act as the real rotation `G -> cos(a/2) G + sin(a/2) E`,
//! `E -> -sin(a/2) G + cos(a/2) E`. Everything is evaluated in the frame
//! rotating at the electronic gap, so carrier phases are absent.
//!
//! The decoherence factor reinstates the kinetic term perturbatively: along
//! the echo pathways the two packets end up displaced by `F_E tau^2 / m`,
//! which multiplies the echo by the characteristic function of the momentum
//! density at that displacement.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::grid::{Fourier, Grid, Representation};
use crate::model::params::{PhysicalParams, PulseSchedule};
use crate::model::state::{gaussian_samples, VibronicState, TRUNCATION_TOLERANCE};
use crate::model::trace::{DipoleTrace, FrameNote, ResponseTerms};
use crate::scalar::{natural_momentum_spread, Real};

/// Half-angle rotation coefficients of one pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation<T> {
    pub cos: T,
    pub sin: T,
}

impl<T: Real> Rotation<T> {
    pub fn new(area: T) -> Self {
        let half = area / T::lit(2.0);
        Rotation {
            cos: half.cos(),
            sin: half.sin(),
        }
    }
}

/// Magnitude of the echo term at perfect rephasing, `(1/2)|sin a1| sin^2(a2/2)`.
/// Equals `(1/4) sin a (1 - cos a)` for equal areas.
pub fn echo_prefactor<T: Real>(area1: T, area2: T) -> T {
    let half = T::lit(0.5);
    (half * area1.sin() * (area2 * half).sin().powi(2)).abs()
}

/// Magnitude of the free-induction term at zero delay, `(1/2)|sin a1|`.
pub fn free_induction_prefactor<T: Real>(area1: T) -> T {
    (T::lit(0.5) * area1.sin()).abs()
}

/// Magnitude of the second-pulse response at zero delay, `(1/2)|sin a2 cos a1|`.
pub fn second_response_prefactor<T: Real>(area1: T, area2: T) -> T {
    (T::lit(0.5) * area2.sin() * area1.cos()).abs()
}

/// Closed-form evaluator for one parameter set and schedule.
///
/// Times passed to the methods are in the units of the parameters; internal
/// arithmetic is in natural units.
#[derive(Clone, Debug)]
pub struct AnalyticModel<T> {
    params: PhysicalParams<T>,
    schedule: PulseSchedule<T>,
    force: T,
    t0: T,
    tau: T,
    first: Rotation<T>,
    second: Rotation<T>,
}

impl<T: Real> AnalyticModel<T> {
    pub fn new(params: &PhysicalParams<T>, schedule: &PulseSchedule<T>) -> Result<Self> {
        params.validate()?;
        schedule.validate()?;
        let natural = schedule.to_natural(params);
        Ok(AnalyticModel {
            params: *params,
            schedule: *schedule,
            force: params.dimensionless_force(),
            t0: natural.t0,
            tau: natural.tau,
            first: Rotation::new(schedule.area1),
            second: Rotation::new(schedule.area2),
        })
    }

    pub fn params(&self) -> &PhysicalParams<T> {
        &self.params
    }

    pub fn schedule(&self) -> &PulseSchedule<T> {
        &self.schedule
    }

    /// `\int psi_0(p) psi_0(p - q) dp` for natural-unit momentum `q`.
    pub fn autocorrelation(&self, q: T) -> T {
        gaussian_autocorrelation(q)
    }

    fn natural_time(&self, t: T) -> T {
        self.params.time_to_natural(t)
    }

    fn window_error(&self, t: T, start: T, end: T) -> Error {
        Error::OutsideWindow {
            time: t.as_f64(),
            start: start.as_f64(),
            end: end.as_f64(),
        }
    }

    /// Dipole between the pulses: `(1/2) sin a1` times the autocorrelation at
    /// the accumulated momentum `F_E (t - t0 + tau)`.
    pub fn free_induction(&self, t: T) -> Result<Complex<T>> {
        let s = &self.schedule;
        if !(t >= s.first_pulse() && t < s.t0) {
            return Err(self.window_error(t, s.first_pulse(), s.t0));
        }
        let elapsed = self.natural_time(t) - (self.t0 - self.tau);
        let a = self.first;
        Ok(Complex::new(
            a.cos * a.sin * self.autocorrelation(self.force * elapsed),
            T::zero(),
        ))
    }

    /// The four bilinear overlaps after the second pulse.
    pub fn terms_after(&self, t: T) -> Result<ResponseTerms<T>> {
        let s = &self.schedule;
        if t.is_nan() || t < s.t0 {
            return Err(self.window_error(t, s.t0, T::infinity()));
        }
        let u = self.natural_time(t) - self.t0;
        let f = self.force;
        let (c1, s1) = (self.first.cos, self.first.sin);
        let (c2, s2) = (self.second.cos, self.second.sin);
        let same = self.autocorrelation(f * u);
        let real = |v: T| Complex::new(v, T::zero());
        Ok(ResponseTerms {
            free_induction: real(T::zero()),
            ground_path: real(c1 * c1 * s2 * c2 * same),
            excited_path: real(-(s1 * s1) * s2 * c2 * same),
            echo: real(-(s1 * c1) * s2 * s2 * self.autocorrelation(f * (u - self.tau))),
            residual: real(c1 * s1 * c2 * c2 * self.autocorrelation(f * (u + self.tau))),
        })
    }

    /// Pathway terms at any time; zero before the first pulse.
    pub fn terms(&self, t: T) -> ResponseTerms<T> {
        let s = &self.schedule;
        if t < s.first_pulse() {
            ResponseTerms::zero()
        } else if t < s.t0 {
            ResponseTerms {
                free_induction: self.free_induction(t).expect("inside inter-pulse window"),
                ..ResponseTerms::zero()
            }
        } else {
            self.terms_after(t).expect("after second pulse")
        }
    }

    /// `(1/2) sin a2 cos a1` times the autocorrelation at `F_E (t - t0)`.
    pub fn second_response(&self, t: T) -> Result<Complex<T>> {
        Ok(self.terms_after(t)?.second_pulse())
    }

    /// Rephasing term, centred on `t0 + tau`.
    pub fn echo(&self, t: T) -> Result<Complex<T>> {
        Ok(self.terms_after(t)?.echo)
    }

    /// Echo term reduced by the decoherence factor of the schedule's delay.
    pub fn echo_with_decoherence(&self, t: T) -> Result<Complex<T>> {
        Ok(self.echo(t)?.scale(self.decoherence_factor()))
    }

    pub fn dipole(&self, t: T) -> Complex<T> {
        self.terms(t).total()
    }

    pub fn decoherence_factor(&self) -> T {
        natural_decoherence_factor(self.force, self.tau)
    }

    pub fn populations(&self, t: T) -> (T, T) {
        let s = &self.schedule;
        let (c1, s1) = (self.first.cos, self.first.sin);
        let (c2, s2) = (self.second.cos, self.second.sin);
        if t < s.first_pulse() {
            (T::one(), T::zero())
        } else if t < s.t0 {
            (c1 * c1, s1 * s1)
        } else {
            let cross = T::lit(2.0) * c1 * c2 * s1 * s2 * self.autocorrelation(self.force * self.tau);
            let ground = (c1 * c2).powi(2) + (s1 * s2).powi(2) - cross;
            let excited = (s2 * c1).powi(2) + (c2 * s1).powi(2) + cross;
            (ground, excited)
        }
    }

    /// State between the pulses, in momentum representation on `grid`.
    pub fn state_between(&self, t: T, grid: &Grid<T>) -> Result<VibronicState<T>> {
        let s = &self.schedule;
        if !(t >= s.first_pulse() && t < s.t0) {
            return Err(self.window_error(t, s.first_pulse(), s.t0));
        }
        let shift = self.force * (self.natural_time(t) - (self.t0 - self.tau));
        let packets = Packets::new(grid, &[T::zero(), shift])?;
        let ground = packets.combine(&[(self.first.cos, 0)]);
        let excited = packets.combine(&[(self.first.sin, 1)]);
        VibronicState::new(*grid, Representation::Momentum, ground, excited)
    }

    /// Four-component state after the second pulse, in momentum representation.
    pub fn state_after(&self, t: T, grid: &Grid<T>) -> Result<VibronicState<T>> {
        let s = &self.schedule;
        if t.is_nan() || t < s.t0 {
            return Err(self.window_error(t, s.t0, T::infinity()));
        }
        let f = self.force;
        let u = self.natural_time(t) - self.t0;
        let packets = Packets::new(grid, &[T::zero(), f * self.tau, f * u, f * (self.tau + u)])?;
        let (c1, s1) = (self.first.cos, self.first.sin);
        let (c2, s2) = (self.second.cos, self.second.sin);
        let ground = packets.combine(&[(c1 * c2, 0), (-(s1 * s2), 1)]);
        let excited = packets.combine(&[(s2 * c1, 2), (c2 * s1, 3)]);
        VibronicState::new(*grid, Representation::Momentum, ground, excited)
    }

    /// Dipole, populations and pathway terms sampled at `times`.
    ///
    /// With `decoherence` set the echo term is multiplied by the decoherence
    /// factor of the schedule's delay.
    pub fn trace(&self, times: &[T], decoherence: bool) -> DipoleTrace<T> {
        let xi = if decoherence {
            self.decoherence_factor()
        } else {
            T::one()
        };
        let frame = FrameNote {
            carrier: self.params.electronic_gap.as_f64(),
        };
        let mut trace = DipoleTrace::with_capacity(times.len(), frame, self.params.units);
        for &t in times {
            let mut terms = self.terms(t);
            terms.echo = terms.echo.scale(xi);
            trace.push(t, terms.total(), self.populations(t), terms);
        }
        trace
    }
}

/// Shifted copies of the ground packet on one grid.
struct Packets<T> {
    samples: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Packets<T> {
    fn new(grid: &Grid<T>, centres: &[T]) -> Result<Self> {
        let dp = natural_momentum_spread::<T>();
        let half = grid.momentum_extent() / T::lit(2.0);
        let p = grid.momenta();
        let mut samples = Vec::with_capacity(centres.len());
        for &c in centres {
            let room = (half - c.abs()).as_f64();
            let truncated = 0.5 * libm::erfc(room / (std::f64::consts::SQRT_2 * dp.as_f64()));
            if truncated > TRUNCATION_TOLERANCE {
                return Err(Error::GridTooNarrow {
                    representation: Representation::Momentum,
                    truncated,
                });
            }
            samples.push(gaussian_samples(&p, c, dp));
        }
        Ok(Packets { samples })
    }

    fn combine(&self, weights: &[(T, usize)]) -> Vec<Complex<T>> {
        let n = self.samples[0].len();
        (0..n)
            .map(|i| {
                weights
                    .iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &(w, k)| {
                        acc + self.samples[k][i].scale(w)
                    })
            })
            .collect()
    }
}

/// `exp(-q^2 / (8 dp^2))` in natural units.
pub fn gaussian_autocorrelation<T: Real>(q: T) -> T {
    let dp = natural_momentum_spread::<T>();
    (-(q * q) / (T::lit(8.0) * dp * dp)).exp()
}

/// `exp(-dp^2 dx^2 / (2 hbar^2))` with `dx = f tau^2`, natural units.
fn natural_decoherence_factor<T: Real>(force: T, tau: T) -> T {
    let dp = natural_momentum_spread::<T>();
    let shift = force * tau * tau;
    (-(dp * dp * shift * shift) / T::lit(2.0)).exp()
}

pub fn analytic_state_between<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
    grid: &Grid<T>,
) -> Result<VibronicState<T>> {
    AnalyticModel::new(params, schedule)?.state_between(t, grid)
}

pub fn analytic_state_after<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
    grid: &Grid<T>,
) -> Result<VibronicState<T>> {
    AnalyticModel::new(params, schedule)?.state_after(t, grid)
}

pub fn dipole_free_induction<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
) -> Result<Complex<T>> {
    AnalyticModel::new(params, schedule)?.free_induction(t)
}

pub fn dipole_second_response<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
) -> Result<Complex<T>> {
    AnalyticModel::new(params, schedule)?.second_response(t)
}

pub fn dipole_echo_term<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
) -> Result<Complex<T>> {
    AnalyticModel::new(params, schedule)?.echo(t)
}

pub fn echo_envelope_with_decoherence<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    t: T,
) -> Result<Complex<T>> {
    AnalyticModel::new(params, schedule)?.echo_with_decoherence(t)
}

/// `t_phi = dp / F_E`; infinite when the force vanishes.
pub fn dephasing_time<T: Real>(params: &PhysicalParams<T>) -> T {
    let f = params.dimensionless_force();
    if f == T::zero() {
        return T::infinity();
    }
    params.time_from_natural(natural_momentum_spread::<T>() / f)
}

/// `dx = F_E tau^2 / m`.
pub fn position_shift<T: Real>(params: &PhysicalParams<T>, tau: T) -> T {
    (params.excited_force / params.mass) * tau * tau
}

/// Gaussian closed form `exp(-F_E^2 Omega tau^4 / (4 hbar m))`.
pub fn decoherence_factor<T: Real>(params: &PhysicalParams<T>, tau: T) -> T {
    natural_decoherence_factor(params.dimensionless_force(), params.time_to_natural(tau))
}

/// `\int dp exp(-i dx p / hbar) |psi(p)|^2` for the ground component of
/// `state`, for arbitrary packet shapes.
pub fn decoherence_factor_from_distribution<T: Real>(
    params: &PhysicalParams<T>,
    tau: T,
    state: &VibronicState<T>,
) -> Result<Complex<T>> {
    let momentum = state.in_representation(Representation::Momentum, &Fourier::new(state.grid()));
    let tau = params.time_to_natural(tau);
    let shift = params.dimensionless_force() * tau * tau;
    let grid = momentum.grid();
    let sum = momentum
        .ground()
        .iter()
        .zip(grid.momenta())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (v, p)| {
            acc + Complex::from_polar(v.norm_sqr(), -shift * p)
        });
    Ok(sum.scale(grid.momentum_spacing()))
}

/// `T = (4 hbar m / (F_E^2 Omega))^{1/4}`; infinite when the force vanishes.
pub fn decoherence_time<T: Real>(params: &PhysicalParams<T>) -> T {
    let f = params.dimensionless_force();
    if f == T::zero() {
        return T::infinity();
    }
    params.time_from_natural((T::lit(4.0) / (f * f)).powf(T::lit(0.25)))
}

/// `T / t_phi = 2 (F_E^2 / (hbar m Omega^3))^{1/4} = 2 sqrt(f)`.
pub fn timescale_ratio<T: Real>(params: &PhysicalParams<T>) -> T {
    T::lit(2.0) * params.dimensionless_force().sqrt()
}

/// Dephasing and decoherence scales of one parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticTimescales<T> {
    pub dephasing_time: T,
    pub decoherence_time: T,
    pub ratio: T,
    /// Position mismatch at the echo for the delay passed to [`timescales`].
    pub position_shift: T,
}

pub fn timescales<T: Real>(params: &PhysicalParams<T>, tau: T) -> AnalyticTimescales<T> {
    AnalyticTimescales {
        dephasing_time: dephasing_time(params),
        decoherence_time: decoherence_time(params),
        ratio: timescale_ratio(params),
        position_shift: position_shift(params, tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn natural(f: f64) -> PhysicalParams<f64> {
        PhysicalParams::natural(f, 0.0).unwrap()
    }

    #[test]
    fn free_induction_window_is_enforced() {
        let m = AnalyticModel::new(
            &natural(1.0),
            &PulseSchedule::equal_areas(2.0, 1.0, FRAC_PI_2).unwrap(),
        )
        .unwrap();
        assert!(m.free_induction(0.99).is_err());
        assert!(m.free_induction(2.0).is_err());
        assert!((m.free_induction(1.0).unwrap().norm() - 0.5).abs() < 1e-15);
        assert!(m.terms_after(1.5).is_err());
        assert!(m
            .state_after(1.9, &Grid::with_momentum_extent(256, 30.0).unwrap())
            .is_err());
    }

    #[test]
    fn free_induction_after_one_dephasing_time() {
        let params = natural(2.0);
        let sched = PulseSchedule::equal_areas(5.0, 3.0, FRAC_PI_2).unwrap();
        let t = sched.first_pulse() + dephasing_time(&params);
        let d = dipole_free_induction(&params, &sched, t).unwrap();
        assert!((d.norm() - 0.5 * (-0.125f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn second_response_vanishes_at_quarter_wave() {
        let params = natural(1.5);
        let sched = PulseSchedule::equal_areas(0.0, 1.0, FRAC_PI_2).unwrap();
        for t in [0.0, 0.3, 1.0, 2.5] {
            assert!(dipole_second_response(&params, &sched, t).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn no_echo_for_pi_pulses() {
        let params = natural(1.5);
        let sched = PulseSchedule::equal_areas(0.0, 1.0, PI).unwrap();
        assert!(dipole_echo_term(&params, &sched, 1.0).unwrap().norm() < 1e-16);
        assert!(
            echo_envelope_with_decoherence(&params, &sched, 1.0)
                .unwrap()
                .norm()
                < 1e-16
        );
    }

    #[test]
    fn vanishing_force_has_infinite_timescales() {
        let params = PhysicalParams::<f64>::si(1e-25, 1e14, 0.0, 0.0).unwrap();
        assert!(dephasing_time(&params).is_infinite());
        assert!(decoherence_time(&params).is_infinite());
        assert_eq!(decoherence_factor(&params, 1e-14), 1.0);
    }

    #[test]
    fn populations_sum_to_one() {
        let params = natural(3.0);
        let sched = PulseSchedule::new(1.0, 0.4, 1.1, 2.3).unwrap();
        let m = AnalyticModel::new(&params, &sched).unwrap();
        for t in [0.0, 0.7, 1.0, 1.3, 2.0] {
            let (g, e) = m.populations(t);
            assert!((g + e - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn third_pulse_area_value() {
        // phi = pi/3 between the pulses: (cos^2(pi/6), sin^2(pi/6)).
        let m = AnalyticModel::new(
            &natural(1.0),
            &PulseSchedule::equal_areas(1.0, 1.0, FRAC_PI_3).unwrap(),
        )
        .unwrap();
        let (g, e) = m.populations(0.5);
        assert!((g - 0.75).abs() < 1e-15 && (e - 0.25).abs() < 1e-15);
    }

    #[test]
    fn shifted_packets_must_fit_on_grid() {
        let params = natural(10.0);
        let sched = PulseSchedule::equal_areas(10.0, 5.0, FRAC_PI_3).unwrap();
        let grid = Grid::with_momentum_extent(512, 40.0).unwrap();
        assert!(matches!(
            analytic_state_after(&params, &sched, 10.5, &grid),
            Err(Error::GridTooNarrow { .. })
        ));
    }
}
