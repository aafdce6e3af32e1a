//! Time series of the dipole envelope and its pathway decomposition.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::UnitSystem;

/// Dipole contributions sorted by excitation pathway.
///
/// Before the second pulse only `free_induction` is non-zero. After it the
/// state is the sum of two branches: `A` (ground until `t0`) and `B` (excited
/// by the first pulse). The four bilinear overlaps are
///
/// * `ground_path`   `<G_A|E_A>`: second-pulse response of the unexcited branch,
/// * `excited_path`  `<G_B|E_B>`: second-pulse response of the excited branch,
/// * `echo`          `<G_B|E_A>`: the rephasing contribution peaking at `t0 + tau`,
/// * `residual`      `<G_A|E_B>`: a far-detuned cross term.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ResponseTerms<T> {
    pub free_induction: Complex<T>,
    pub ground_path: Complex<T>,
    pub excited_path: Complex<T>,
    pub echo: Complex<T>,
    pub residual: Complex<T>,
}

impl<T: Real> ResponseTerms<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        ResponseTerms {
            free_induction: z,
            ground_path: z,
            excited_path: z,
            echo: z,
            residual: z,
        }
    }

    /// Linear response to the second pulse (both diagonal pathways).
    pub fn second_pulse(&self) -> Complex<T> {
        self.ground_path + self.excited_path
    }

    pub fn total(&self) -> Complex<T> {
        self.free_induction + self.ground_path + self.excited_path + self.echo + self.residual
    }
}

/// Analytic decomposition of the dipole after the second pulse.
pub type EchoTermDecomposition<T> = ResponseTerms<T>;

/// Which carrier has been factored out of the stored dipole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameNote {
    /// `omega_0` in the trace's unit system.
    pub carrier: f64,
}

impl fmt::Display for FrameNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rotating frame: carrier exp(-i w0 t) with w0 = {:e} factored out; dipole is the envelope",
            self.carrier
        )
    }
}

/// Sampled `<d>(t)` with populations and pathway terms.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleTrace<T> {
    pub times: Vec<T>,
    pub dipole: Vec<Complex<T>>,
    pub ground_pop: Vec<T>,
    pub excited_pop: Vec<T>,
    pub terms: Vec<ResponseTerms<T>>,
    pub frame: FrameNote,
    pub units: UnitSystem,
}

impl<T: Real> DipoleTrace<T> {
    pub fn with_capacity(capacity: usize, frame: FrameNote, units: UnitSystem) -> Self {
        DipoleTrace {
            times: Vec::with_capacity(capacity),
            dipole: Vec::with_capacity(capacity),
            ground_pop: Vec::with_capacity(capacity),
            excited_pop: Vec::with_capacity(capacity),
            terms: Vec::with_capacity(capacity),
            frame,
            units,
        }
    }

    pub fn push(&mut self, time: T, dipole: Complex<T>, populations: (T, T), terms: ResponseTerms<T>) {
        self.times.push(time);
        self.dipole.push(dipole);
        self.ground_pop.push(populations.0);
        self.excited_pop.push(populations.1);
        self.terms.push(terms);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.dipole.iter().map(|d| d.norm()).collect()
    }

    pub fn echo_magnitudes(&self) -> Vec<T> {
        self.terms.iter().map(|t| t.echo.norm()).collect()
    }

    /// Index of the sample closest to `t`; errors if `t` is more than half a
    /// sample outside the trace.
    pub fn nearest_index(&self, t: T) -> Result<usize> {
        let (first, last) = match (self.times.first(), self.times.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::TraceTooShort { time: t.as_f64() }),
        };
        let step = if self.len() > 1 {
            (last - first) / T::lit((self.len() - 1) as f64)
        } else {
            T::zero()
        };
        let half = step / T::lit(2.0);
        if t < first - half || t > last + half {
            return Err(Error::TraceTooShort { time: t.as_f64() });
        }
        let idx = self.times.partition_point(|&s| s < t).min(self.len() - 1);
        if idx > 0 && (t - self.times[idx - 1]).abs() <= (self.times[idx] - t).abs() {
            Ok(idx - 1)
        } else {
            Ok(idx)
        }
    }
}
