use std::f64::consts::PI;

use vibronic_echo::scans::{area_scan, EchoSignal};
use vibronic_echo::{
    decoherence_factor, decoherence_time, echo_amplitude, echo_prefactor, extract_echo_peak,
    fit_quartic_decay, tau_scan, AnalyticModel, Engine, Params64, Schedule64,
};

#[test]
fn analytic_scan_recovers_quartic_law() {
    let params = Params64::typical_molecule();
    let big_t = decoherence_time(&params);
    let taus: Vec<f64> = (0..12).map(|i| big_t * (0.4 + 0.1 * i as f64)).collect();
    let scan = tau_scan(&params, PI / 3.0, &taus, &Engine::Analytic).unwrap();
    assert!(scan.failures.is_empty());
    for (xi, xa) in scan.xi_values.iter().zip(&scan.xi_analytic) {
        assert!((xi - xa).abs() < 1e-12);
    }
    let fit = fit_quartic_decay(&scan).unwrap();
    assert!((fit.exponent - 4.0).abs() < 1e-9);
    assert!((fit.decoherence_time / big_t - 1.0).abs() < 1e-9);
    assert!(fit.residual < 1e-9);
}

#[test]
fn extrapolated_normalization_matches_prefactor() {
    let params = Params64::natural(3.079, 0.0).unwrap();
    let taus: Vec<f64> = (1..=8).map(|i| 0.1 * i as f64).collect();
    let scan = tau_scan(&params, 2.0 * PI / 3.0, &taus, &Engine::Analytic).unwrap();
    let zero = scan.extrapolated_zero_delay_peak().unwrap();
    assert!((zero - echo_prefactor(2.0 * PI / 3.0, 2.0 * PI / 3.0)).abs() < 1e-12);
}

#[test]
fn analytic_amplitude_is_prefactor_times_xi() {
    let params = Params64::natural(2.0, 0.0).unwrap();
    let sched = Schedule64::equal_areas(0.7, 0.7, 1.2).unwrap();
    let amp = echo_amplitude(&params, &sched, &Engine::Analytic).unwrap();
    assert!((amp - echo_prefactor(1.2, 1.2) * decoherence_factor(&params, 0.7)).abs() < 1e-14);
}

#[test]
fn area_scan_peaks_at_two_thirds_pi() {
    let params = Params64::natural(3.079, 0.0).unwrap();
    let areas: Vec<f64> = (1..360).map(|i| PI * i as f64 / 360.0).collect();
    let peaks = area_scan(&params, 0.3, &areas, &Engine::Analytic).unwrap();
    let best = (0..areas.len())
        .max_by(|&a, &b| peaks[a].total_cmp(&peaks[b]))
        .unwrap();
    assert!((areas[best] - 2.0 * PI / 3.0).abs() <= PI / 360.0 + 1e-12);
}

#[test]
fn echo_peak_found_at_rephasing_time() {
    // Delay of about ten dephasing times: the lobes barely overlap.
    let params = Params64::natural(30.0, 0.0).unwrap();
    let sched = Schedule64::equal_areas(0.25, 0.25, PI / 3.0).unwrap();
    let dt = 1e-4;
    let times: Vec<f64> = (0..6000).map(|k| k as f64 * dt).collect();
    let trace = AnalyticModel::new(&params, &sched).unwrap().trace(&times, true);
    for signal in [EchoSignal::Total, EchoSignal::EchoPathway] {
        let peak = extract_echo_peak(&trace, &params, &sched, signal).unwrap();
        assert!((peak.time - 0.5).abs() < dt, "{signal:?}: {}", peak.time);
        assert!(!peak.overlapping);
    }
}

#[test]
fn short_trace_is_rejected() {
    let params = Params64::natural(3.079, 0.0).unwrap();
    let sched = Schedule64::equal_areas(1.0, 1.0, PI / 3.0).unwrap();
    let times: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
    let trace = AnalyticModel::new(&params, &sched).unwrap().trace(&times, true);
    assert!(extract_echo_peak(&trace, &params, &sched, EchoSignal::Total).is_err());
}
