//! Invariants on randomly drawn states, pulse areas and times.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use vibronic_echo::model::Representation;
use vibronic_echo::{
    apply_impulsive_pulse, populations, AnalyticModel, Grid64, Params64, Schedule64, VibronicState,
};

const N: usize = 64;

fn grid() -> Grid64 {
    Grid64::with_position_extent(N, 20.0).unwrap()
}

fn components() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), N)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn random_state() -> impl Strategy<Value = VibronicState<f64>> {
    (components(), components())
        .prop_map(|(g, e)| VibronicState::new(grid(), Representation::Position, g, e).unwrap())
}

proptest! {
    #[test]
    fn dipole_obeys_cauchy_schwarz(state in random_state()) {
        let (g, e) = populations(&state);
        prop_assert!(state.dipole().norm() <= (g * e).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn observables_do_not_depend_on_representation(state in random_state()) {
        let momentum = state.to_momentum();
        let scale = state.norm_sqr();
        prop_assert!((momentum.dipole() - state.dipole()).norm() <= 1e-12 * scale);
        prop_assert!((momentum.norm_sqr() - scale).abs() <= 1e-12 * scale);
    }

    #[test]
    fn pulses_preserve_the_norm(state in random_state(), area in 0.0..TAU) {
        let after = apply_impulsive_pulse(&state, area);
        let before = state.norm_sqr();
        prop_assert!((after.norm_sqr() - before).abs() <= 1e-12 * before);
    }

    #[test]
    fn opposite_pulses_cancel(state in random_state(), area in 0.0..PI) {
        let back = apply_impulsive_pulse(&apply_impulsive_pulse(&state, area), -area);
        for (a, b) in back.ground().iter().zip(state.ground()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn analytic_terms_sum_to_the_dipole(
        f in 0.1f64..5.0,
        a1 in 0.0..TAU,
        a2 in 0.0..TAU,
        tau in 0.05f64..2.0,
        u in -3.0f64..3.0,
    ) {
        let params = Params64::natural(f, 0.0).unwrap();
        let sched = Schedule64::new(tau, tau, a1, a2).unwrap();
        let model = AnalyticModel::new(&params, &sched).unwrap();
        let t = sched.t0 + u;
        let terms = model.terms(t);
        let d = model.dipole(t);
        prop_assert!((terms.total() - d).norm() < 1e-12);
        let (g, e) = model.populations(t);
        prop_assert!((g + e - 1.0).abs() < 1e-12);
        prop_assert!(d.norm() <= (g * e).sqrt() + 1e-12);
    }

    #[test]
    fn analytic_echo_is_symmetric(
        f in 0.5f64..5.0,
        a in 0.1f64..3.0,
        tau in 0.1f64..2.0,
        s in 0.0f64..1.0,
    ) {
        let params = Params64::natural(f, 0.0).unwrap();
        let sched = Schedule64::equal_areas(tau, tau, a).unwrap();
        let model = AnalyticModel::new(&params, &sched).unwrap();
        let offset = s * tau;
        let early = model.echo(sched.echo_time() - offset).unwrap().norm();
        let late = model.echo(sched.echo_time() + offset).unwrap().norm();
        prop_assert!((early - late).abs() < 1e-12);
    }
}
