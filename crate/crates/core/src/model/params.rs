//! Molecular constants and the two-pulse schedule.

use crate::error::{Error, Result};
use crate::scalar::{natural_momentum_spread, Real};
use crate::units::{UnitScales, UnitSystem, HBAR_SI};

/// Constants of one vibrational mode coupled to an electronic two-level system.
///
/// Values are interpreted in `units`. In natural units the mass and the
/// ground-state frequency must both equal one; the force is then the
/// dimensionless coupling `f = F_E / sqrt(hbar m Omega^3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams<T> {
    pub mass: T,
    pub ground_freq: T,
    /// `F_E = -dV_E/dx` at the ground-state minimum.
    pub excited_force: T,
    /// `omega_0 = V_E(0) / hbar`.
    pub electronic_gap: T,
    pub units: UnitSystem,
}

impl<T: Real> PhysicalParams<T> {
    pub fn new(
        mass: T,
        ground_freq: T,
        excited_force: T,
        electronic_gap: T,
        units: UnitSystem,
    ) -> Result<Self> {
        let params = PhysicalParams {
            mass,
            ground_freq,
            excited_force,
            electronic_gap,
            units,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn si(mass: T, ground_freq: T, excited_force: T, electronic_gap: T) -> Result<Self> {
        Self::new(mass, ground_freq, excited_force, electronic_gap, UnitSystem::Si)
    }

    /// Natural-unit parameters with dimensionless force `f` and gap `omega_0 / Omega`.
    pub fn natural(force: T, electronic_gap: T) -> Result<Self> {
        Self::new(T::one(), T::one(), force, electronic_gap, UnitSystem::Natural)
    }

    /// `F_E = 1e-8 N`, `Omega = 1e14 /s`, `m = 1e-25 kg`. The gap is not
    /// observable in the rotating frame and is left at zero.
    pub fn typical_molecule() -> Self {
        PhysicalParams {
            mass: T::lit(1e-25),
            ground_freq: T::lit(1e14),
            excited_force: T::lit(1e-8),
            electronic_gap: T::zero(),
            units: UnitSystem::Si,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.mass,
            self.ground_freq,
            self.excited_force,
            self.electronic_gap,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.mass <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.ground_freq <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "ground-state frequency must be positive, got {}",
                self.ground_freq
            )));
        }
        if self.excited_force < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "excited-state force must be non-negative, got {}",
                self.excited_force
            )));
        }
        if self.electronic_gap < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "electronic gap must be non-negative, got {}",
                self.electronic_gap
            )));
        }
        if self.units == UnitSystem::Natural && (self.mass != T::one() || self.ground_freq != T::one()) {
            return Err(Error::InvalidParameter(
                "natural units fix mass = ground_freq = 1".into(),
            ));
        }
        Ok(())
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar()
    }

    pub fn scales(&self) -> UnitScales {
        match self.units {
            UnitSystem::Natural => UnitScales::NATURAL,
            UnitSystem::Si => {
                UnitScales::from_constants(HBAR_SI, self.mass.as_f64(), self.ground_freq.as_f64())
            }
        }
    }

    /// `f = F_E / sqrt(hbar m Omega^3)`, the only dynamical parameter left in
    /// natural units.
    pub fn dimensionless_force(&self) -> T {
        T::lit(self.excited_force.as_f64() / self.scales().force)
    }

    /// The same physical system in natural units.
    pub fn to_natural(&self) -> Self {
        let scales = self.scales();
        PhysicalParams {
            mass: T::one(),
            ground_freq: T::one(),
            excited_force: self.dimensionless_force(),
            electronic_gap: T::lit(self.electronic_gap.as_f64() / scales.frequency),
            units: UnitSystem::Natural,
        }
    }

    /// Momentum standard deviation of the vibrational ground state,
    /// `dp = sqrt(hbar Omega m / 2)`, in the parameters' units.
    pub fn momentum_spread(&self) -> T {
        T::lit(natural_momentum_spread::<T>().as_f64() * self.scales().momentum)
    }

    /// Position standard deviation of the vibrational ground state, `hbar / (2 dp)`.
    pub fn position_spread(&self) -> T {
        T::lit(crate::scalar::natural_position_spread::<T>().as_f64() * self.scales().length)
    }

    pub(crate) fn time_to_natural(&self, t: T) -> T {
        T::lit(t.as_f64() / self.scales().time)
    }

    pub(crate) fn time_from_natural(&self, t: T) -> T {
        T::lit(t.as_f64() * self.scales().time)
    }
}

/// Two impulsive pulses at `t0 - tau` and `t0` with pulse areas `area1`, `area2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSchedule<T> {
    pub t0: T,
    pub tau: T,
    pub area1: T,
    pub area2: T,
}

impl<T: Real> PulseSchedule<T> {
    pub fn new(t0: T, tau: T, area1: T, area2: T) -> Result<Self> {
        let schedule = PulseSchedule {
            t0,
            tau,
            area1,
            area2,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn equal_areas(t0: T, tau: T, area: T) -> Result<Self> {
        Self::new(t0, tau, area, area)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.tau.is_finite()) {
            return Err(Error::InvalidParameter("pulse times must be finite".into()));
        }
        if self.tau <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "delay tau must be positive, got {}",
                self.tau
            )));
        }
        let two_pi = T::TAU();
        for (name, area) in [("area1", self.area1), ("area2", self.area2)] {
            if !(area >= T::zero() && area < two_pi) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 2pi), got {area}"
                )));
            }
        }
        Ok(())
    }

    pub fn first_pulse(&self) -> T {
        self.t0 - self.tau
    }

    pub fn second_pulse(&self) -> T {
        self.t0
    }

    /// Rephasing instant `t0 + tau`.
    pub fn echo_time(&self) -> T {
        self.t0 + self.tau
    }

    /// Same schedule with times expressed in the natural units of `params`.
    pub fn to_natural(&self, params: &PhysicalParams<T>) -> Self {
        PulseSchedule {
            t0: params.time_to_natural(self.t0),
            tau: params.time_to_natural(self.tau),
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unphysical_constants() {
        assert!(PhysicalParams::si(0.0, 1e14, 1e-8, 0.0).is_err());
        assert!(PhysicalParams::si(1e-25, -1.0, 1e-8, 0.0).is_err());
        assert!(PhysicalParams::si(1e-25, 1e14, -1e-8, 0.0).is_err());
        assert!(PhysicalParams::si(1e-25, 1e14, 1e-8, -1.0).is_err());
        assert!(PhysicalParams::new(2.0, 1.0, 1.0, 0.0, UnitSystem::Natural).is_err());
        assert!(PhysicalParams::si(1e-25, 1e14, 0.0, 0.0).is_ok());
    }

    #[test]
    fn rejects_bad_schedules() {
        assert!(PulseSchedule::equal_areas(0.0, 0.0, 1.0).is_err());
        assert!(PulseSchedule::equal_areas(0.0, 1.0, -0.1).is_err());
        assert!(PulseSchedule::equal_areas(0.0, 1.0, std::f64::consts::TAU).is_err());
        assert!(PulseSchedule::new(0.0, 1.0, 0.0, 3.0).is_ok());
    }

    #[test]
    fn natural_momentum_spread() {
        let p = PhysicalParams::<f64>::natural(1.0, 0.0).unwrap();
        assert!((p.momentum_spread() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn si_momentum_spread() {
        let p = PhysicalParams::<f64>::typical_molecule();
        let expected = (HBAR_SI * 1e14 * 1e-25 / 2.0).sqrt();
        assert!((p.momentum_spread() / expected - 1.0).abs() < 1e-14);
        assert!((p.momentum_spread() - 2.296e-23).abs() < 0.001e-23);
    }

    #[test]
    fn dimensionless_force_of_typical_molecule() {
        let f = PhysicalParams::<f64>::typical_molecule().dimensionless_force();
        let expected = 1e-8 / (HBAR_SI * 1e-25 * 1e42f64).sqrt();
        assert!((f / expected - 1.0).abs() < 1e-14);
        assert!((f - 3.079).abs() < 1e-3);
    }

    #[test]
    fn natural_round_trip_keeps_force() {
        let si = PhysicalParams::<f64>::typical_molecule();
        let nat = si.to_natural();
        assert_eq!(nat.units, UnitSystem::Natural);
        assert!((nat.dimensionless_force() - si.dimensionless_force()).abs() < 1e-12);
    }
}
