//! The four subcommands.

use std::path::Path;

use serde_json::{json, Value};
use vibronic_echo::scans::tau_scan_with_areas;
use vibronic_echo::{
    compare_analytic_numeric, decoherence_time, dephasing_time, fit_quartic_decay, simulate_trace,
    timescale_ratio, AnalyticModel, Engine, Params64, PropagationConfig, Trace64, UnitSystem,
};

use crate::config::{RunConfig, Setup};
use crate::error::CliError;
use crate::output::{json_number, number, pretty_json, scan_csv, terms_csv, trace_csv, write_atomic};
use vibronic_echo::scans::SEPARABILITY;

/// Resolves the configuration and records it next to the outputs.
fn prepare(config: &RunConfig, out: &Path) -> Result<Setup, CliError> {
    let resolved = config.resolve()?;
    let setup = resolved.setup()?;
    let text = serde_json::to_string_pretty(&resolved).expect("configuration serializes") + "\n";
    write_atomic(out, "effective_config.json", &text)?;
    Ok(setup)
}

/// Dipole trace of one pulse sequence on the time base of the propagation
/// window. Samples at pulse instants are taken just after the pulse.
pub fn compute_trace(setup: &Setup) -> Result<Trace64, CliError> {
    let Setup {
        params,
        schedule,
        window,
        potentials,
        ..
    } = setup;
    match setup.engine {
        Engine::Numeric(_) => {
            let config = PropagationConfig::for_schedule_stable(params, schedule, window, potentials)?;
            Ok(simulate_trace(params, schedule, potentials, &config)?)
        }
        Engine::Analytic => {
            let config = PropagationConfig::for_schedule(params, schedule, window)?;
            let scale = params.scales().time;
            let snap = 1e-6 * config.dt * scale;
            let times: Vec<f64> = (0..=config.steps)
                .step_by(config.record_stride)
                .map(|k| {
                    let t = config.time_at(k) * scale;
                    [schedule.first_pulse(), schedule.second_pulse()]
                        .into_iter()
                        .find(|p| (t - p).abs() < snap)
                        .unwrap_or(t)
                })
                .collect();
            let model = AnalyticModel::new(params, schedule)?;
            Ok(model.trace(&times, setup.decoherence))
        }
    }
}

pub fn run(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let setup = prepare(config, out)?;
    let trace = compute_trace(&setup)?;
    write_atomic(out, "trace.csv", &trace_csv(&trace))?;
    write_atomic(out, "terms.csv", &terms_csv(&trace))?;
    eprintln!("{}", trace.frame);
    Ok(())
}

pub fn scan_tau(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let setup = prepare(config, out)?;
    let s = &setup.schedule;
    let scan = tau_scan_with_areas(&setup.params, s.area1, s.area2, &setup.taus, &setup.engine)
        .map_err(CliError::from_validation)?;
    write_atomic(out, "scan.csv", &scan_csv(&scan))?;

    let failures: Vec<Value> = scan
        .failures
        .iter()
        .map(|f| json!({"tau": json_number(f.tau), "error": f.error.to_string()}))
        .collect();
    let fit = fit_quartic_decay(&scan);
    let mut report = json!({
        "units": setup.params.units.name(),
        "exponent": Value::Null,
        "T_fit": Value::Null,
        "residual": Value::Null,
        "points": Value::Null,
        "T_analytic": json_number(decoherence_time(&setup.params)),
        "failures": failures,
    });
    match &fit {
        Ok(fit) => {
            report["exponent"] = json_number(fit.exponent);
            report["T_fit"] = json_number(fit.decoherence_time);
            report["residual"] = json_number(fit.residual);
            report["points"] = json!(fit.points);
        }
        Err(error) => report["fit_error"] = json!(error.to_string()),
    }
    write_atomic(out, "fit.json", &pretty_json(&report))?;
    match fit {
        Ok(_) => Ok(()),
        Err(error) => Err(CliError::Numerical(error)),
    }
}

pub fn compare(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let setup = prepare(config, out)?;
    let Setup {
        params,
        schedule,
        window,
        potentials,
        ..
    } = &setup;
    let propagation = PropagationConfig::for_schedule_stable(params, schedule, window, potentials)?;
    let report = compare_analytic_numeric(params, schedule, potentials, &propagation)?;
    let optional = |x: Option<f64>| x.map_or(Value::Null, json_number);
    let value = json!({
        "units": params.units.name(),
        "dt": json_number(propagation.dt * params.scales().time),
        "grid_points": propagation.grid.len(),
        "sup_norm": json_number(report.sup_norm),
        "sup_norm_relative": json_number(report.sup_norm_relative),
        "l2_relative": json_number(report.l2_relative),
        "peak_time_error": optional(report.peak_time_error),
        "peak_time_error_steps": optional(report.peak_time_error_steps),
        "peak_magnitude_relative_error": optional(report.peak_magnitude_relative_error),
        "omega_t_total": json_number(report.regime.omega_t_total),
        "shift_ratio": json_number(report.regime.shift_ratio),
        "linearized_regime": report.regime.linearized_regime,
    });
    write_atomic(out, "compare.json", &pretty_json(&value))?;
    Ok(())
}

/// One row of the `params` table.
pub struct Quantity {
    pub name: &'static str,
    pub si: Option<f64>,
    pub natural: f64,
}

/// Characteristic scales of the parameters in both unit systems. The SI
/// column is absent for natural-unit input.
pub fn quantities(params: &Params64) -> Vec<Quantity> {
    let natural = params.to_natural();
    let rows = |p: &Params64| -> [f64; 8] {
        let t_phi = dephasing_time(p);
        let big_t = decoherence_time(p);
        [
            p.dimensionless_force(),
            p.momentum_spread(),
            p.position_spread(),
            t_phi,
            big_t,
            timescale_ratio(p),
            SEPARABILITY * t_phi,
            big_t * 20f64.ln().powf(0.25),
        ]
    };
    let names = [
        "dimensionless_force",
        "momentum_spread",
        "position_spread",
        "dephasing_time",
        "decoherence_time",
        "decoherence_to_dephasing_ratio",
        "tau_suggested_min",
        "tau_suggested_max",
    ];
    let si = (params.units == UnitSystem::Si).then(|| rows(params));
    let nat = rows(&natural);
    names
        .iter()
        .enumerate()
        .map(|(i, &name)| Quantity {
            name,
            si: si.map(|r| r[i]),
            natural: nat[i],
        })
        .collect()
}

pub fn params_table(params: &Params64) -> String {
    let mut out = String::from("quantity,si,natural\n");
    for q in quantities(params) {
        let si = q.si.map_or_else(|| "n/a".to_string(), number);
        out.push_str(&format!("{},{},{}\n", q.name, si, number(q.natural)));
    }
    out
}

pub fn params(config: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let params = config.input_params()?;
    if params.excited_force == 0.0 {
        eprintln!(
            "warning: the excited-state force is zero; the packets never separate, \
             so dephasing and decoherence times are infinite"
        );
    }
    let table = params_table(&params);
    print!("{table}");
    if let Some(dir) = out {
        write_atomic(dir, "params.csv", &table)?;
    }
    Ok(())
}
