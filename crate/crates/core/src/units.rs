//! Unit systems and the conversion between SI and natural units.
//!
//! Internally everything runs with `hbar = m = Omega = 1`. SI inputs are
//! mapped onto that system once, at the boundary, by multiplying with the
//! scales below. The scales are always held in `f64`: products such as
//! `hbar * m` (about 1e-59) underflow `f32`.

use std::fmt;
use std::str::FromStr;

/// Reduced Planck constant in J s (CODATA 2018, exact since the SI redefinition).
pub const HBAR_SI: f64 = 1.054_571_817e-34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum UnitSystem {
    #[default]
    Si,
    /// `hbar = m = Omega = 1`.
    Natural,
}

impl UnitSystem {
    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::Si => HBAR_SI,
            UnitSystem::Natural => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::Si => "si",
            UnitSystem::Natural => "natural",
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UnitSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "si" | "SI" => Ok(UnitSystem::Si),
            "natural" => Ok(UnitSystem::Natural),
            other => Err(format!("unknown unit system `{other}` (expected si or natural)")),
        }
    }
}

/// Size of one natural unit of each dimension, expressed in the caller's
/// unit system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitScales {
    /// `1 / Omega`
    pub time: f64,
    /// `sqrt(hbar / (m Omega))`
    pub length: f64,
    /// `sqrt(hbar m Omega)`
    pub momentum: f64,
    /// `sqrt(hbar m Omega^3)`
    pub force: f64,
    /// `Omega`
    pub frequency: f64,
}

impl UnitScales {
    pub const NATURAL: UnitScales = UnitScales {
        time: 1.0,
        length: 1.0,
        momentum: 1.0,
        force: 1.0,
        frequency: 1.0,
    };

    pub fn from_constants(hbar: f64, mass: f64, ground_freq: f64) -> Self {
        UnitScales {
            time: 1.0 / ground_freq,
            length: (hbar / (mass * ground_freq)).sqrt(),
            momentum: (hbar * mass * ground_freq).sqrt(),
            force: (hbar * mass * ground_freq.powi(3)).sqrt(),
            frequency: ground_freq,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn si_scales_are_consistent() {
        let s = UnitScales::from_constants(HBAR_SI, 1e-25, 1e14);
        // momentum * length = hbar, force * time = momentum
        assert!((s.momentum * s.length / HBAR_SI - 1.0).abs() < 1e-14);
        assert!((s.force * s.time / s.momentum - 1.0).abs() < 1e-14);
        assert!((s.frequency * s.time - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parses_unit_names() {
        assert_eq!("si".parse::<UnitSystem>().unwrap(), UnitSystem::Si);
        assert_eq!("natural".parse::<UnitSystem>().unwrap(), UnitSystem::Natural);
        assert!("cgs".parse::<UnitSystem>().is_err());
    }
}
