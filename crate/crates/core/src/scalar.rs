//! Floating-point abstraction shared by every engine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real scalar the simulator is generic over: `f32` or `f64`.
///
/// Everything that needs an FFT, a transcendental function or a literal goes
/// through this trait, so the whole model can be instantiated at either
/// precision. Tolerances quoted in the tests (1e-10 and tighter) only hold for
/// `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + Debug + Send + Sync
{
    /// Converts an `f64` literal. Panics only if the value is not representable
    /// at all, which cannot happen for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + Debug + Send + Sync
{
}

/// Momentum standard deviation of the harmonic ground state in natural units,
/// `sqrt(hbar * Omega * m / 2)` with `hbar = m = Omega = 1`.
#[inline]
pub(crate) fn natural_momentum_spread<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}

/// Position standard deviation of the same state, `hbar / (2 dp)`.
#[inline]
pub(crate) fn natural_position_spread<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}
