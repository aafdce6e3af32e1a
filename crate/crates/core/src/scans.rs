//! Experiments built from the two engines: echo-peak extraction, delay
//! scans, quartic-decay fits and analytic-versus-grid comparisons.

use rayon::prelude::*;

use crate::analytic::{decoherence_factor, dephasing_time, echo_prefactor, AnalyticModel};
use crate::error::{Error, Result};
use crate::model::params::{PhysicalParams, PulseSchedule};
use crate::model::trace::DipoleTrace;
use crate::propagator::{simulate_trace, PotentialSpec, PropagationConfig, WindowSpec};
use crate::scalar::Real;

/// Lobes count as separated once `tau >= SEPARABILITY * t_phi`.
pub const SEPARABILITY: f64 = 3.0;

/// Decoherence factors outside this open interval are excluded from the
/// quartic fit.
pub const FIT_XI_RANGE: (f64, f64) = (0.05, 0.95);

pub const MIN_FIT_POINTS: usize = 5;

/// Both `Omega t_total` and `dx / dx_0` must stay at or below this for the
/// linearized model to apply.
pub const LINEAR_REGIME_LIMIT: f64 = 0.1;

/// Which part of a trace to search for the echo.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EchoSignal {
    /// `|<d>|` as recorded.
    Total,
    /// The rephasing pathway on its own, free of the other lobes.
    EchoPathway,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EchoPeak<T> {
    pub time: T,
    pub magnitude: T,
    /// The delay is below the separability threshold, so in the total signal
    /// the echo overlaps the second-pulse response.
    pub overlapping: bool,
}

/// Maximum of the echo lobe within `t0 + tau +- 3 t_phi` (clipped to start
/// at the second pulse), refined by a parabola through the three samples
/// around the largest one.
pub fn extract_echo_peak<T: Real>(
    trace: &DipoleTrace<T>,
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    signal: EchoSignal,
) -> Result<EchoPeak<T>> {
    let centre = schedule.echo_time();
    match trace.times.last() {
        Some(&end) if end >= centre => {}
        _ => {
            return Err(Error::TraceTooShort {
                time: centre.as_f64(),
            })
        }
    }
    let t_phi = dephasing_time(params);
    let half = T::lit(SEPARABILITY) * t_phi;
    let lo = (centre - half).max(schedule.t0);
    let hi = centre + half;
    let values = match signal {
        EchoSignal::Total => trace.magnitudes(),
        EchoSignal::EchoPathway => trace.echo_magnitudes(),
    };
    let inside: Vec<usize> = (0..trace.len())
        .filter(|&i| trace.times[i] >= lo && trace.times[i] <= hi)
        .collect();
    let best = *inside
        .iter()
        .max_by(|&&a, &&b| values[a].partial_cmp(&values[b]).expect("finite dipole"))
        .ok_or(Error::InsufficientPoints { needed: 1, found: 0 })?;

    let mut time = trace.times[best];
    let mut magnitude = values[best];
    let interior =
        best > 0 && best + 1 < trace.len() && inside.contains(&(best - 1)) && inside.contains(&(best + 1));
    if interior {
        let (ym, y0, yp) = (values[best - 1], values[best], values[best + 1]);
        let curvature = ym - y0 - y0 + yp;
        if curvature < T::zero() {
            let offset = T::lit(0.5) * (ym - yp) / curvature;
            let step = trace.times[best + 1] - trace.times[best];
            time = time + offset * step;
            magnitude = y0 - T::lit(0.25) * (ym - yp) * offset;
        }
    }
    Ok(EchoPeak {
        time,
        magnitude,
        overlapping: schedule.tau < T::lit(SEPARABILITY) * t_phi,
    })
}

/// Settings of the grid engine when used inside scans.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericSettings<T> {
    pub ground_curvature: T,
    pub excited_curvature: T,
    pub kinetic: bool,
    /// Lower bound; refined automatically to meet the phase-advance bound.
    pub steps_per_tau: usize,
    pub min_points: usize,
}

impl<T: Real> Default for NumericSettings<T> {
    fn default() -> Self {
        NumericSettings {
            ground_curvature: T::one(),
            excited_curvature: T::zero(),
            kinetic: true,
            steps_per_tau: 100,
            min_points: crate::model::grid::DEFAULT_POINTS,
        }
    }
}

impl<T: Real> NumericSettings<T> {
    /// Curvature-free potentials with the kinetic term kept: the Hamiltonian
    /// behind the closed-form decoherence factor.
    pub fn linearized() -> Self {
        NumericSettings {
            ground_curvature: T::zero(),
            ..Self::default()
        }
    }

    pub fn potentials(&self, params: &PhysicalParams<T>) -> PotentialSpec<T> {
        PotentialSpec {
            force: params.dimensionless_force(),
            ground_curvature: self.ground_curvature,
            excited_curvature: self.excited_curvature,
            kinetic: self.kinetic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Engine<T> {
    Analytic,
    Numeric(NumericSettings<T>),
}

/// Magnitude of the echo pathway at the rephasing instant `t0 + tau`.
///
/// This is the amplitude the decoherence factor describes: at `t0 + tau` the
/// two interfering packets have equal momentum and differ only by the
/// position shift. (Once decoherence is strong the maximum of the lobe moves
/// earlier, trading momentum mismatch for a smaller shift.)
pub fn echo_amplitude<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    engine: &Engine<T>,
) -> Result<T> {
    match engine {
        Engine::Analytic => {
            let model = AnalyticModel::new(params, schedule)?;
            Ok(model.echo_with_decoherence(schedule.echo_time())?.norm())
        }
        Engine::Numeric(settings) => {
            let window = WindowSpec {
                steps_per_tau: settings.steps_per_tau,
                lead_steps: 1,
                tail: T::zero(),
                record_stride: 1,
                min_points: settings.min_points,
            };
            let potentials = settings.potentials(params);
            let config = PropagationConfig::for_schedule_stable(params, schedule, &window, &potentials)?;
            let trace = simulate_trace(params, schedule, &potentials, &config)?;
            let idx = trace.nearest_index(schedule.echo_time())?;
            Ok(trace.terms[idx].echo.norm())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanFailure<T> {
    pub tau: T,
    pub error: Error,
}

/// Echo amplitudes over a list of delays. Failed points are collected in
/// `failures` and left out of the arrays.
#[derive(Clone, Debug, PartialEq)]
pub struct EchoScan<T> {
    pub tau_values: Vec<T>,
    pub echo_peaks: Vec<T>,
    /// Peaks divided by the echo prefactor of the pulse areas.
    pub xi_values: Vec<T>,
    /// Gaussian closed form for the same delays.
    pub xi_analytic: Vec<T>,
    pub failures: Vec<ScanFailure<T>>,
}

impl<T: Real> EchoScan<T> {
    /// Scan assembled from externally obtained decoherence factors (peaks are
    /// set equal to them).
    pub fn from_xi(tau_values: Vec<T>, xi_values: Vec<T>) -> Self {
        EchoScan {
            echo_peaks: xi_values.clone(),
            xi_analytic: vec![T::nan(); tau_values.len()],
            tau_values,
            xi_values,
            failures: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tau_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau_values.is_empty()
    }

    /// Zero-delay amplitude from a least-squares line through
    /// `(tau^4, ln peak)`, the quartic law's linearization.
    pub fn extrapolated_zero_delay_peak(&self) -> Result<T> {
        if self.len() < 2 {
            return Err(Error::InsufficientPoints {
                needed: 2,
                found: self.len(),
            });
        }
        let x: Vec<T> = self.tau_values.iter().map(|t| t.powi(4)).collect();
        let y: Vec<T> = self.echo_peaks.iter().map(|p| p.ln()).collect();
        let line = least_squares_line(&x, &y).ok_or(Error::DegenerateFit)?;
        Ok(line.intercept.exp())
    }

    /// Decoherence factors normalized by the extrapolated zero-delay peak
    /// instead of the known prefactor.
    pub fn xi_by_extrapolation(&self) -> Result<Vec<T>> {
        let zero = self.extrapolated_zero_delay_peak()?;
        Ok(self.echo_peaks.iter().map(|&p| p / zero).collect())
    }
}

/// Delay scan with equal pulse areas, first pulse at time zero.
pub fn tau_scan<T: Real>(
    params: &PhysicalParams<T>,
    area: T,
    taus: &[T],
    engine: &Engine<T>,
) -> Result<EchoScan<T>> {
    tau_scan_with_areas(params, area, area, taus, engine)
}

pub fn tau_scan_with_areas<T: Real>(
    params: &PhysicalParams<T>,
    area1: T,
    area2: T,
    taus: &[T],
    engine: &Engine<T>,
) -> Result<EchoScan<T>> {
    params.validate()?;
    let prefactor = echo_prefactor(area1, area2);
    if prefactor <= T::epsilon() {
        return Err(Error::ZeroEchoPrefactor);
    }
    let outcomes: Vec<(T, Result<T>)> = taus
        .par_iter()
        .map(|&tau| {
            let amplitude = PulseSchedule::new(tau, tau, area1, area2)
                .and_then(|schedule| echo_amplitude(params, &schedule, engine));
            (tau, amplitude)
        })
        .collect();

    let mut scan = EchoScan {
        tau_values: Vec::with_capacity(taus.len()),
        echo_peaks: Vec::with_capacity(taus.len()),
        xi_values: Vec::with_capacity(taus.len()),
        xi_analytic: Vec::with_capacity(taus.len()),
        failures: Vec::new(),
    };
    for (tau, outcome) in outcomes {
        match outcome {
            Ok(peak) => {
                let xi_analytic = decoherence_factor(params, tau);
                let xi = match engine {
                    Engine::Analytic => xi_analytic,
                    Engine::Numeric(_) => peak / prefactor,
                };
                scan.tau_values.push(tau);
                scan.echo_peaks.push(peak);
                scan.xi_values.push(xi);
                scan.xi_analytic.push(xi_analytic);
            }
            Err(error) => scan.failures.push(ScanFailure { tau, error }),
        }
    }
    Ok(scan)
}

/// Echo amplitude at `t0 + tau` for each equal pulse area in `areas`.
pub fn area_scan<T: Real>(
    params: &PhysicalParams<T>,
    tau: T,
    areas: &[T],
    engine: &Engine<T>,
) -> Result<Vec<T>> {
    areas
        .par_iter()
        .map(|&area| {
            let schedule = PulseSchedule::equal_areas(tau, tau, area)?;
            echo_amplitude(params, &schedule, engine)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticFit<T> {
    /// Slope of `ln(-ln xi)` against `ln tau`; four for the Gaussian law.
    pub exponent: T,
    /// Delay at which the fitted law reaches `1/e`.
    pub decoherence_time: T,
    /// Root-mean-square residual of the line.
    pub residual: T,
    pub points: usize,
}

/// Fits `-ln xi = (tau / T)^k` on the points with `xi` inside
/// [`FIT_XI_RANGE`].
pub fn fit_quartic_decay<T: Real>(scan: &EchoScan<T>) -> Result<QuarticFit<T>> {
    let (lo, hi) = (T::lit(FIT_XI_RANGE.0), T::lit(FIT_XI_RANGE.1));
    let (x, y): (Vec<T>, Vec<T>) = scan
        .tau_values
        .iter()
        .zip(&scan.xi_values)
        .filter(|(_, &xi)| xi > lo && xi < hi)
        .map(|(&tau, &xi)| (tau.ln(), (-xi.ln()).ln()))
        .unzip();
    if x.len() < MIN_FIT_POINTS {
        if !scan.xi_values.is_empty() && scan.xi_values.iter().all(|&xi| xi >= hi) {
            return Err(Error::DegenerateFit);
        }
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            found: x.len(),
        });
    }
    let line = least_squares_line(&x, &y).ok_or(Error::DegenerateFit)?;
    if line.slope == T::zero() {
        return Err(Error::DegenerateFit);
    }
    Ok(QuarticFit {
        exponent: line.slope,
        decoherence_time: (-line.intercept / line.slope).exp(),
        residual: line.rms_residual,
        points: x.len(),
    })
}

struct Line<T> {
    slope: T,
    intercept: T,
    rms_residual: T,
}

fn least_squares_line<T: Real>(x: &[T], y: &[T]) -> Option<Line<T>> {
    let n = T::lit(x.len() as f64);
    let sum = |v: &[T]| v.iter().fold(T::zero(), |s, &a| s + a);
    let mx = sum(x) / n;
    let my = sum(y) / n;
    let (sxx, sxy) = x
        .iter()
        .zip(y)
        .fold((T::zero(), T::zero()), |(sxx, sxy), (&a, &b)| {
            (sxx + (a - mx) * (a - mx), sxy + (a - mx) * (b - my))
        });
    if sxx <= T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| (b - intercept - slope * a).powi(2))
        .fold(T::zero(), |s, v| s + v);
    Some(Line {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeFlags<T> {
    /// `Omega` times the span from the first pulse to the end of the trace.
    pub omega_t_total: T,
    /// Echo position shift `F_E tau^2 / m` over the ground-state width.
    pub shift_ratio: T,
    pub linearized_regime: bool,
}

/// Differences between the grid and closed-form `|<d>(t)|` on a shared time base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport<T> {
    pub sup_norm: T,
    /// `sup_norm` over the largest analytic magnitude.
    pub sup_norm_relative: T,
    pub l2_relative: T,
    /// `|t_peak - (t0 + tau)|` of the numeric echo pathway; `None` without an echo.
    pub peak_time_error: Option<T>,
    /// The same in units of the time step.
    pub peak_time_error_steps: Option<T>,
    pub peak_magnitude_relative_error: Option<T>,
    pub regime: RegimeFlags<T>,
}

pub fn compare_analytic_numeric<T: Real>(
    params: &PhysicalParams<T>,
    schedule: &PulseSchedule<T>,
    potentials: &PotentialSpec<T>,
    config: &PropagationConfig<T>,
) -> Result<ComparisonReport<T>> {
    let numeric = simulate_trace(params, schedule, potentials, config)?;
    let model = AnalyticModel::new(params, schedule)?;
    let analytic = model.trace(&numeric.times, true);

    let num = numeric.magnitudes();
    let ana = analytic.magnitudes();
    let (mut sup, mut diff2, mut ref2, mut scale) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (&n, &a) in num.iter().zip(&ana) {
        let d = (n - a).abs();
        sup = sup.max(d);
        diff2 = diff2 + d * d;
        ref2 = ref2 + a * a;
        scale = scale.max(a);
    }
    let ratio = |a: T, b: T| if b > T::zero() { a / b } else { a };

    let expected_peak = model.echo_with_decoherence(schedule.echo_time())?.norm();
    let dt = params.time_from_natural(config.dt);
    let (peak_time_error, peak_time_error_steps, peak_magnitude_relative_error) =
        if expected_peak > T::zero() && numeric.times.last().is_some_and(|&e| e >= schedule.echo_time()) {
            let peak = extract_echo_peak(&numeric, params, schedule, EchoSignal::EchoPathway)?;
            let err = (peak.time - schedule.echo_time()).abs();
            (
                Some(err),
                Some(err / dt),
                Some((peak.magnitude - expected_peak).abs() / expected_peak),
            )
        } else {
            (None, None, None)
        };

    let natural = schedule.to_natural(params);
    let omega_t_total = config.end() - natural.first_pulse();
    let shift_ratio = crate::analytic::position_shift(params, schedule.tau) / params.position_spread();
    let limit = T::lit(LINEAR_REGIME_LIMIT);
    Ok(ComparisonReport {
        sup_norm: sup,
        sup_norm_relative: ratio(sup, scale),
        l2_relative: ratio(diff2, ref2).sqrt(),
        peak_time_error,
        peak_time_error_steps,
        peak_magnitude_relative_error,
        regime: RegimeFlags {
            omega_t_total,
            shift_ratio,
            linearized_regime: omega_t_total <= limit && shift_ratio <= limit,
        },
    })
}
