use std::f32::consts::FRAC_PI_3;

use vibronic_echo::{
    simulate_trace, AnalyticModel, Params32, Params64, PotentialSpec, PropagationConfig, Schedule32,
    Schedule64, WindowSpec,
};

#[test]
fn analytic_model_agrees_across_precisions() {
    let p32 = Params32::natural(3.079, 0.0).unwrap();
    let p64 = Params64::natural(3.079, 0.0).unwrap();
    let s32 = Schedule32::equal_areas(0.6, 0.6, FRAC_PI_3).unwrap();
    let s64 = Schedule64::equal_areas(0.6, 0.6, FRAC_PI_3 as f64).unwrap();
    let m32 = AnalyticModel::new(&p32, &s32).unwrap();
    let m64 = AnalyticModel::new(&p64, &s64).unwrap();
    for k in 0..200 {
        let t = 0.01 * k as f64;
        let d32 = m32.dipole(t as f32);
        let d64 = m64.dipole(t);
        assert!((d32.re as f64 - d64.re).abs() < 1e-5 && (d32.im as f64 - d64.im).abs() < 1e-5);
    }
}

#[test]
fn propagation_runs_in_single_precision() {
    let p32 = Params32::natural(3.079, 0.0).unwrap();
    let p64 = Params64::natural(3.079, 0.0).unwrap();
    let s32 = Schedule32::equal_areas(0.05, 0.05, FRAC_PI_3).unwrap();
    let s64 = Schedule64::equal_areas(0.05, 0.05, FRAC_PI_3 as f64).unwrap();
    let w32 = WindowSpec::<f32> {
        min_points: 1024,
        ..WindowSpec::default()
    };
    let w64 = WindowSpec::<f64> {
        min_points: 1024,
        ..WindowSpec::default()
    };
    let c32 = PropagationConfig::for_schedule(&p32, &s32, &w32).unwrap();
    let c64 = PropagationConfig::for_schedule(&p64, &s64, &w64).unwrap();
    let t32 = simulate_trace(&p32, &s32, &PotentialSpec::from_params(&p32), &c32).unwrap();
    let t64 = simulate_trace(&p64, &s64, &PotentialSpec::from_params(&p64), &c64).unwrap();
    assert_eq!(t32.len(), t64.len());
    for (a, b) in t32.dipole.iter().zip(&t64.dipole) {
        assert!((a.norm() as f64 - b.norm()).abs() < 1e-4);
    }
}
