//! Two-component vibronic wavefunction and the observables built on it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::grid::{Fourier, Grid, Representation};
use crate::model::params::PhysicalParams;
use crate::scalar::{natural_momentum_spread, natural_position_spread, Real};

/// Largest Gaussian norm fraction allowed outside the grid.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Ground (`|G>`) and excited (`|E>`) vibrational amplitudes sampled on a
/// shared grid, both in the same representation.
#[derive(Clone, Debug, PartialEq)]
pub struct VibronicState<T> {
    grid: Grid<T>,
    representation: Representation,
    ground: Vec<Complex<T>>,
    excited: Vec<Complex<T>>,
}

impl<T: Real> VibronicState<T> {
    pub fn new(
        grid: Grid<T>,
        representation: Representation,
        ground: Vec<Complex<T>>,
        excited: Vec<Complex<T>>,
    ) -> Result<Self> {
        if ground.len() != grid.len() || excited.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(VibronicState {
            grid,
            representation,
            ground,
            excited,
        })
    }

    pub fn zeros(grid: Grid<T>, representation: Representation) -> Self {
        let zero = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        VibronicState {
            grid,
            representation,
            ground: zero.clone(),
            excited: zero,
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn ground(&self) -> &[Complex<T>] {
        &self.ground
    }

    pub fn excited(&self) -> &[Complex<T>] {
        &self.excited
    }

    pub fn ground_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.ground
    }

    pub fn excited_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.excited
    }

    pub(crate) fn components_mut(&mut self) -> (&mut [Complex<T>], &mut [Complex<T>]) {
        (&mut self.ground, &mut self.excited)
    }

    pub fn into_components(self) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        (self.ground, self.excited)
    }

    pub fn spacing(&self) -> T {
        self.grid.spacing(self.representation)
    }

    /// Copy of the state in representation `rep`.
    pub fn in_representation(&self, rep: Representation, fourier: &Fourier<T>) -> Self {
        let mut out = self.clone();
        out.convert(rep, fourier);
        out
    }

    pub fn to_momentum(&self) -> Self {
        self.in_representation(Representation::Momentum, &Fourier::new(&self.grid))
    }

    pub fn to_position(&self) -> Self {
        self.in_representation(Representation::Position, &Fourier::new(&self.grid))
    }

    /// In-place change of representation.
    pub fn convert(&mut self, rep: Representation, fourier: &Fourier<T>) {
        if rep == self.representation {
            return;
        }
        let mut scratch = fourier.make_scratch();
        fourier.convert(&mut self.ground, &mut scratch, self.representation, rep);
        fourier.convert(&mut self.excited, &mut scratch, self.representation, rep);
        self.representation = rep;
    }

    pub fn norm_sqr(&self) -> T {
        let (g, e) = populations(self);
        g + e
    }

    pub fn dipole(&self) -> Complex<T> {
        overlap(&self.ground, &self.excited, self.spacing())
    }

    /// Component-wise sum of two states on the same grid and representation.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let add = |a: &[Complex<T>], b: &[Complex<T>]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(VibronicState {
            grid: self.grid,
            representation: self.representation,
            ground: add(&self.ground, &other.ground),
            excited: add(&self.excited, &other.excited),
        })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.representation != other.representation {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// `\int conj(a) b`, by the rectangle rule (spectrally accurate for smooth,
/// localized samples).
pub fn overlap<T: Real>(a: &[Complex<T>], b: &[Complex<T>], spacing: T) -> Complex<T> {
    let sum = a
        .iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        });
    sum.scale(spacing)
}

pub fn norm_sqr<T: Real>(a: &[Complex<T>], spacing: T) -> T {
    a.iter().map(|v| v.norm_sqr()).fold(T::zero(), |s, v| s + v) * spacing
}

/// `<p>` of one component given in momentum representation.
pub fn mean_momentum<T: Real>(component: &[Complex<T>], grid: &Grid<T>) -> T {
    let p = grid.momenta();
    let weight = norm_sqr(component, grid.momentum_spacing());
    let first = component
        .iter()
        .zip(&p)
        .map(|(v, &pk)| v.norm_sqr() * pk)
        .fold(T::zero(), |s, v| s + v)
        * grid.momentum_spacing();
    first / weight
}

/// Normalized real Gaussian centred on `centre` with standard deviation `sd`
/// of its probability density, sampled on `coords`.
pub(crate) fn gaussian_samples<T: Real>(coords: &[T], centre: T, sd: T) -> Vec<Complex<T>> {
    let norm = (T::TAU() * sd * sd).powf(T::lit(-0.25));
    let four_var = T::lit(4.0) * sd * sd;
    coords
        .iter()
        .map(|&q| {
            let d = q - centre;
            Complex::new(norm * (-(d * d) / four_var).exp(), T::zero())
        })
        .collect()
}

/// Fraction of a normal density with standard deviation `sd` beyond `|q| > half_extent`.
fn gaussian_tail(half_extent: f64, sd: f64) -> f64 {
    libm::erfc(half_extent / (std::f64::consts::SQRT_2 * sd))
}

/// Harmonic vibrational ground state on the electronic ground state, in
/// momentum representation: `psi_G = psi_0`, `psi_E = 0`.
///
/// `psi_0` is the real, positive Gaussian with momentum variance
/// `hbar Omega m / 2`. The grid is in natural units, so the packet has the
/// same samples for every parameter set.
pub fn make_ground_state<T: Real>(params: &PhysicalParams<T>, grid: &Grid<T>) -> Result<VibronicState<T>> {
    params.validate()?;
    let dp = natural_momentum_spread::<T>();
    let dx = natural_position_spread::<T>();
    let checks = [
        (Representation::Momentum, grid.momentum_extent(), dp),
        (Representation::Position, grid.position_extent(), dx),
    ];
    for (representation, extent, sd) in checks {
        let truncated = gaussian_tail(extent.as_f64() / 2.0, sd.as_f64());
        if truncated > TRUNCATION_TOLERANCE {
            return Err(Error::GridTooNarrow {
                representation,
                truncated,
            });
        }
    }
    let ground = gaussian_samples(&grid.momenta(), T::zero(), dp);
    let excited = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    VibronicState::new(*grid, Representation::Momentum, ground, excited)
}

/// `<d> = \int dp conj(psi_G(p)) psi_E(p)`.
///
/// Evaluated in whichever representation the state is in; by Parseval the
/// result does not depend on it.
pub fn dipole_expectation<T: Real>(state: &VibronicState<T>) -> Complex<T> {
    state.dipole()
}

/// `(\int |psi_G|^2, \int |psi_E|^2)`.
pub fn populations<T: Real>(state: &VibronicState<T>) -> (T, T) {
    let h = state.spacing();
    (norm_sqr(&state.ground, h), norm_sqr(&state.excited, h))
}

/// `\int dp conj(psi(p)) psi(p - shift)` for one momentum-space component.
///
/// Computed as the characteristic function of the position density,
/// `\int |psi(x)|^2 exp(i shift x) dx`, which handles shifts that are not
/// multiples of the grid spacing.
pub fn momentum_autocorrelation<T: Real>(
    component: &[Complex<T>],
    grid: &Grid<T>,
    shift: T,
) -> Result<Complex<T>> {
    if component.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    let extent = grid.momentum_extent();
    if shift.abs() > extent {
        return Err(Error::ShiftTooLarge {
            shift: shift.as_f64(),
            extent: extent.as_f64(),
        });
    }
    let fourier = Fourier::new(grid);
    let mut scratch = fourier.make_scratch();
    let mut position = component.to_vec();
    fourier.to_position(&mut position, &mut scratch);
    let x = grid.positions();
    let sum = position
        .iter()
        .zip(&x)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (v, &xj)| {
            acc + Complex::from_polar(v.norm_sqr(), shift * xj)
        });
    Ok(sum.scale(grid.position_spacing()))
}
