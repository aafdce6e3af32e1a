//! Flat JSON run configuration and its resolution into model objects.

use std::f64::consts::FRAC_PI_3;
use std::path::Path;

use serde::{Deserialize, Serialize};
use vibronic_echo::{
    decoherence_time, dephasing_time, Engine, NumericSettings, Params64, PotentialSpec, Schedule64,
    UnitSystem, WindowSpec,
};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    #[default]
    Analytic,
    Numeric,
}

/// Every key is optional in the file; missing values take the defaults
/// listed in the README. Quantities are in the units named by `units`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Unit system of the quantities in this file: `si` or `natural`.
    pub units: String,
    /// Unit system of the outputs; defaults to `units`.
    pub output_units: Option<String>,
    pub engine: EngineKind,

    pub mass: Option<f64>,
    pub ground_freq: Option<f64>,
    pub excited_force: Option<f64>,
    pub electronic_gap: f64,

    pub t0: Option<f64>,
    pub tau: Option<f64>,
    pub area1: f64,
    pub area2: f64,

    /// Minimum number of steps between the pulses; raised automatically
    /// until the per-step phase bound holds.
    pub steps_per_tau: usize,
    pub lead_steps: usize,
    /// Time simulated past the echo instant.
    pub tail: Option<f64>,
    pub record_stride: usize,
    pub min_points: usize,
    pub ground_curvature: f64,
    pub excited_curvature: f64,
    pub kinetic: bool,
    /// Multiply the analytic echo by the decoherence factor.
    pub decoherence: bool,

    /// Delays for `scan-tau`; when absent an even grid from `tau_min` to
    /// `tau_max` with `tau_points` entries is used.
    pub taus: Option<Vec<f64>>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            units: UnitSystem::Si.name().to_string(),
            output_units: None,
            engine: EngineKind::Analytic,
            mass: None,
            ground_freq: None,
            excited_force: None,
            electronic_gap: 0.0,
            t0: None,
            tau: None,
            area1: FRAC_PI_3,
            area2: FRAC_PI_3,
            steps_per_tau: 100,
            lead_steps: 20,
            tail: None,
            record_stride: 1,
            min_points: vibronic_echo::model::DEFAULT_POINTS,
            ground_curvature: 1.0,
            excited_curvature: 0.0,
            kinetic: true,
            decoherence: true,
            taus: None,
            tau_min: None,
            tau_max: None,
            tau_points: 13,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub engine: Option<EngineKind>,
    pub units: Option<UnitSystem>,
    pub tau: Option<f64>,
    pub area: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(engine) = overrides.engine {
            self.engine = engine;
        }
        if let Some(units) = overrides.units {
            self.output_units = Some(units.name().to_string());
        }
        if let Some(tau) = overrides.tau {
            self.tau = Some(tau);
        }
        if let Some(area) = overrides.area {
            self.area1 = area;
            self.area2 = area;
        }
    }

    fn input_units(&self) -> Result<UnitSystem, CliError> {
        self.units.parse().map_err(CliError::Config)
    }

    fn output_system(&self) -> Result<UnitSystem, CliError> {
        match &self.output_units {
            Some(name) => name.parse().map_err(CliError::Config),
            None => self.input_units(),
        }
    }

    /// Physical parameters in the input units.
    pub fn input_params(&self) -> Result<Params64, CliError> {
        let units = self.input_units()?;
        let typical = Params64::typical_molecule();
        let (mass, freq, force) = match units {
            UnitSystem::Si => (typical.mass, typical.ground_freq, typical.excited_force),
            UnitSystem::Natural => (1.0, 1.0, typical.dimensionless_force()),
        };
        let params = Params64 {
            mass: self.mass.unwrap_or(mass),
            ground_freq: self.ground_freq.unwrap_or(freq),
            excited_force: self.excited_force.unwrap_or(force),
            electronic_gap: self.electronic_gap,
            units,
        };
        params.validate().map_err(CliError::from_validation)?;
        Ok(params)
    }

    /// Fills every derived default so that the result serializes to a file
    /// describing exactly the same run.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let params = self.input_params()?;
        let mut out = self.clone();
        out.mass = Some(params.mass);
        out.ground_freq = Some(params.ground_freq);
        out.excited_force = Some(params.excited_force);
        out.output_units = Some(self.output_system()?.name().to_string());

        let t_phi = dephasing_time(&params);
        if out.tau.is_none() && !t_phi.is_finite() {
            return Err(CliError::Config(
                "tau must be given when the excited-state force is zero".into(),
            ));
        }
        let tau = out.tau.unwrap_or(4.0 * t_phi);
        out.tau = Some(tau);
        out.t0 = Some(out.t0.unwrap_or(tau));
        out.tail = Some(
            out.tail
                .unwrap_or(if t_phi.is_finite() { 3.0 * t_phi } else { tau }),
        );
        if out.taus.is_none() {
            let big_t = decoherence_time(&params);
            let (lo, hi) = if big_t.is_finite() {
                (0.3 * big_t, 1.5 * big_t)
            } else {
                (tau, tau)
            };
            out.tau_min = Some(out.tau_min.unwrap_or(lo));
            out.tau_max = Some(out.tau_max.unwrap_or(hi));
        }
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |m: &str| Err(CliError::Config(m.to_string()));
        if self.steps_per_tau == 0 || self.record_stride == 0 {
            return fail("steps_per_tau and record_stride must be positive");
        }
        if !self.min_points.is_power_of_two() || self.min_points < 2 {
            return fail("min_points must be a power of two of at least 2");
        }
        if self.tail.is_some_and(|t| t.is_nan() || t < 0.0) {
            return fail("tail must be non-negative");
        }
        if !(self.ground_curvature.is_finite() && self.excited_curvature.is_finite()) {
            return fail("curvatures must be finite");
        }
        if self.taus.is_none() && self.tau_points < 2 {
            return fail("tau_points must be at least 2");
        }
        if let (Some(lo), Some(hi)) = (self.tau_min, self.tau_max) {
            if !(lo > 0.0 && hi >= lo) {
                return fail("need 0 < tau_min <= tau_max");
            }
        }
        self.schedule_in_input_units()?;
        Ok(())
    }

    fn schedule_in_input_units(&self) -> Result<Schedule64, CliError> {
        let tau = self
            .tau
            .ok_or_else(|| CliError::Config("tau unresolved".into()))?;
        let t0 = self.t0.unwrap_or(tau);
        Schedule64::new(t0, tau, self.area1, self.area2).map_err(CliError::from_validation)
    }

    /// Model objects expressed in the output unit system. Must be called on
    /// a resolved configuration.
    pub fn setup(&self) -> Result<Setup, CliError> {
        let input = self.input_params()?;
        let schedule = self.schedule_in_input_units()?;
        let output = self.output_system()?;
        let scale_time = input.scales().time;
        let (params, time_factor) = match (input.units, output) {
            (a, b) if a == b => (input, 1.0),
            (UnitSystem::Si, UnitSystem::Natural) => (input.to_natural(), 1.0 / scale_time),
            _ => {
                return Err(CliError::Config(
                    "natural-unit input cannot be reported in SI units".into(),
                ))
            }
        };
        let schedule = Schedule64 {
            t0: schedule.t0 * time_factor,
            tau: schedule.tau * time_factor,
            ..schedule
        };
        let taus: Vec<f64> = match &self.taus {
            Some(list) => list.clone(),
            None => {
                let lo = self.tau_min.unwrap_or(schedule.tau);
                let hi = self.tau_max.unwrap_or(schedule.tau);
                let n = self.tau_points;
                (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect()
            }
        };
        let taus = taus.into_iter().map(|t| t * time_factor).collect();
        let window = WindowSpec {
            steps_per_tau: self.steps_per_tau,
            lead_steps: self.lead_steps,
            tail: self.tail.unwrap_or(0.0) / scale_time,
            record_stride: self.record_stride,
            min_points: self.min_points,
        };
        let settings = NumericSettings {
            ground_curvature: self.ground_curvature,
            excited_curvature: self.excited_curvature,
            kinetic: self.kinetic,
            steps_per_tau: self.steps_per_tau,
            min_points: self.min_points,
        };
        let potentials: PotentialSpec<f64> = settings.potentials(&params);
        potentials.validate().map_err(CliError::from_validation)?;
        Ok(Setup {
            params,
            schedule,
            window,
            potentials,
            engine: match self.engine {
                EngineKind::Analytic => Engine::Analytic,
                EngineKind::Numeric => Engine::Numeric(settings),
            },
            taus,
            decoherence: self.decoherence,
        })
    }
}

/// A resolved run in the output unit system.
#[derive(Clone, Debug)]
pub struct Setup {
    pub params: Params64,
    pub schedule: Schedule64,
    pub window: WindowSpec<f64>,
    pub potentials: PotentialSpec<f64>,
    pub engine: Engine<f64>,
    pub taus: Vec<f64>,
    pub decoherence: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_json(r#"{"tau": 1.0, "frobnicate": 2}"#).unwrap_err();
        assert!(err.to_string().contains("frobnicate"));
    }

    #[test]
    fn resolution_is_idempotent() {
        let resolved = RunConfig::default().resolve().unwrap();
        let text = serde_json::to_string(&resolved).unwrap();
        let again = RunConfig::from_json(&text).unwrap().resolve().unwrap();
        assert_eq!(resolved, again);
    }

    #[test]
    fn default_delay_is_four_dephasing_times() {
        let resolved = RunConfig::default().resolve().unwrap();
        let t_phi = dephasing_time(&Params64::typical_molecule());
        assert!((resolved.tau.unwrap() / t_phi - 4.0).abs() < 1e-12);
        assert_eq!(resolved.t0, resolved.tau);
    }

    #[test]
    fn natural_input_cannot_be_reported_in_si() {
        let mut config = RunConfig {
            units: "natural".into(),
            ..RunConfig::default()
        };
        config.apply(&Overrides {
            units: Some(UnitSystem::Si),
            ..Overrides::default()
        });
        let err = config.resolve().unwrap().setup().unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn si_input_converts_to_natural_output() {
        let mut config = RunConfig::default();
        config.apply(&Overrides {
            units: Some(UnitSystem::Natural),
            ..Overrides::default()
        });
        let setup = config.resolve().unwrap().setup().unwrap();
        let f = Params64::typical_molecule().dimensionless_force();
        assert!((setup.params.excited_force - f).abs() < 1e-12);
        let t_phi = dephasing_time(&setup.params);
        assert!((setup.schedule.tau / t_phi - 4.0).abs() < 1e-12);
    }
}
