//! Uniform, centred phase-space grid and the continuous-normalized DFT
//! between its position and momentum representations.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{natural_momentum_spread, natural_position_spread, Real};

pub const DEFAULT_POINTS: usize = 4096;

/// Fraction of the grid on each side treated as guard band by the edge check.
pub const EDGE_BAND_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Position,
    Momentum,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Position => "position",
            Representation::Momentum => "momentum",
        })
    }
}

/// `n` points centred on zero in both representations, in natural units
/// (`hbar = 1`): `x_j = (j - n/2) dx`, `p_k = (k - n/2) dp`, `dx dp = 2 pi / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T> {
    n: usize,
    dx: T,
    dp: T,
}

impl<T: Real> Grid<T> {
    pub fn with_momentum_extent(n: usize, extent: T) -> Result<Self> {
        Self::check_points(n)?;
        if !(extent > T::zero() && extent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid extent must be positive, got {extent}"
            )));
        }
        let dp = extent / T::lit(n as f64);
        let dx = T::TAU() / (T::lit(n as f64) * dp);
        Ok(Grid { n, dx, dp })
    }

    pub fn with_position_extent(n: usize, extent: T) -> Result<Self> {
        Self::check_points(n)?;
        if !(extent > T::zero() && extent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid extent must be positive, got {extent}"
            )));
        }
        let dx = extent / T::lit(n as f64);
        let dp = T::TAU() / (T::lit(n as f64) * dx);
        Ok(Grid { n, dx, dp })
    }

    /// Smallest grid of at least `min_points` points whose guard-band-free
    /// interior holds the ground packet (8 standard deviations) swept out to
    /// momentum `max_momentum` and displaced by `max_displacement`.
    ///
    /// The momentum window is sized first; points are doubled until the
    /// conjugate position window is wide enough too.
    pub fn for_dynamics(min_points: usize, max_momentum: T, max_displacement: T) -> Result<Self> {
        let usable = T::lit(1.0 - 2.0 * EDGE_BAND_FRACTION);
        let eight = T::lit(8.0);
        let half_p = (eight * natural_momentum_spread::<T>() + max_momentum.abs()) / usable;
        let half_x = (eight * natural_position_spread::<T>() + max_displacement.abs()) / usable;
        let mut n = min_points.max(2).next_power_of_two();
        loop {
            let grid = Self::with_momentum_extent(n, half_p + half_p)?;
            if grid.position_extent() >= half_x + half_x {
                return Ok(grid);
            }
            n *= 2;
        }
    }

    fn check_points(n: usize) -> Result<()> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two >= 2, got {n}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn position_spacing(&self) -> T {
        self.dx
    }

    pub fn momentum_spacing(&self) -> T {
        self.dp
    }

    pub fn spacing(&self, rep: Representation) -> T {
        match rep {
            Representation::Position => self.dx,
            Representation::Momentum => self.dp,
        }
    }

    pub fn position_extent(&self) -> T {
        self.dx * T::lit(self.n as f64)
    }

    pub fn momentum_extent(&self) -> T {
        self.dp * T::lit(self.n as f64)
    }

    pub fn extent(&self, rep: Representation) -> T {
        self.spacing(rep) * T::lit(self.n as f64)
    }

    pub fn coordinate(&self, rep: Representation, index: usize) -> T {
        T::lit(index as f64 - (self.n / 2) as f64) * self.spacing(rep)
    }

    pub fn coordinates(&self, rep: Representation) -> Vec<T> {
        (0..self.n).map(|i| self.coordinate(rep, i)).collect()
    }

    pub fn positions(&self) -> Vec<T> {
        self.coordinates(Representation::Position)
    }

    pub fn momenta(&self) -> Vec<T> {
        self.coordinates(Representation::Momentum)
    }

    /// Number of guard points on each side.
    pub fn edge_band(&self) -> usize {
        ((self.n as f64 * EDGE_BAND_FRACTION).ceil() as usize).max(1)
    }

    /// Probability weight inside the guard bands.
    pub fn edge_weight(&self, rep: Representation, amplitudes: &[Complex<T>]) -> T {
        let band = self.edge_band().min(amplitudes.len() / 2);
        let head = amplitudes[..band].iter();
        let tail = amplitudes[amplitudes.len() - band..].iter();
        head.chain(tail)
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |s, v| s + v)
            * self.spacing(rep)
    }
}

/// Planned forward/inverse FFTs for one grid size.
///
/// Maps samples of `psi(x)` to samples of
/// `psi(p) = (2 pi)^{-1/2} \int psi(x) exp(-i p x) dx` and back, so that both
/// arrays are normalized with their own spacing.
#[derive(Clone)]
pub struct Fourier<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    to_momentum_scale: T,
    to_position_scale: T,
    // (-1)^{n/2} from centring both axes
    centre_sign: T,
}

impl<T: Real> fmt::Debug for Fourier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fourier").field("n", &self.n).finish()
    }
}

impl<T: Real> Fourier<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        let inv_sqrt_2pi = T::one() / T::TAU().sqrt();
        Fourier {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            to_momentum_scale: grid.position_spacing() * inv_sqrt_2pi,
            to_position_scale: grid.momentum_spacing() * inv_sqrt_2pi,
            centre_sign: if (n / 2).is_multiple_of(2) {
                T::one()
            } else {
                -T::one()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    pub fn make_scratch(&self) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); self.scratch_len()]
    }

    pub fn to_momentum(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.transform(data, scratch, true);
    }

    pub fn to_position(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        self.transform(data, scratch, false);
    }

    pub fn convert(
        &self,
        data: &mut [Complex<T>],
        scratch: &mut [Complex<T>],
        from: Representation,
        to: Representation,
    ) {
        match (from, to) {
            (Representation::Position, Representation::Momentum) => self.to_momentum(data, scratch),
            (Representation::Momentum, Representation::Position) => self.to_position(data, scratch),
            _ => {}
        }
    }

    fn transform(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>], forward: bool) {
        assert_eq!(data.len(), self.n, "array length does not match the planned grid");
        alternate_signs(data);
        if forward {
            self.forward.process_with_scratch(data, scratch);
        } else {
            self.inverse.process_with_scratch(data, scratch);
        }
        let scale = self.centre_sign
            * if forward {
                self.to_momentum_scale
            } else {
                self.to_position_scale
            };
        for (k, v) in data.iter_mut().enumerate() {
            let s = if k % 2 == 0 { scale } else { -scale };
            *v = v.scale(s);
        }
    }
}

fn alternate_signs<T: Real>(data: &mut [Complex<T>]) {
    for v in data.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}
