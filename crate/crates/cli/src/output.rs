//! Number formatting and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::Value;
use vibronic_echo::{DipoleTrace, EchoScan};

use crate::error::CliError;

pub const TRACE_HEADER: &str = "t,re_d,im_d,abs_d,ground_pop,excited_pop";
pub const TERMS_HEADER: &str = "t,re_free_induction,im_free_induction,re_ground_path,im_ground_path,\
re_excited_path,im_excited_path,re_echo,im_echo,re_residual,im_residual";
pub const SCAN_HEADER: &str = "tau,peak,xi,xi_analytic";

/// Scientific notation with 17 significant digits, enough to round-trip an
/// `f64`. Non-finite values print as `inf`, `-inf` or `nan`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number, or `null` for values JSON cannot represent.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn csv_row(out: &mut String, values: &[f64]) {
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&number(v));
    }
    out.push('\n');
}

pub fn trace_csv(trace: &DipoleTrace<f64>) -> String {
    let mut out = String::with_capacity(128 * (trace.len() + 1));
    writeln!(out, "{TRACE_HEADER}").unwrap();
    for i in 0..trace.len() {
        let d = trace.dipole[i];
        csv_row(
            &mut out,
            &[
                trace.times[i],
                d.re,
                d.im,
                d.norm(),
                trace.ground_pop[i],
                trace.excited_pop[i],
            ],
        );
    }
    out
}

pub fn terms_csv(trace: &DipoleTrace<f64>) -> String {
    let mut out = String::with_capacity(256 * (trace.len() + 1));
    writeln!(out, "{TERMS_HEADER}").unwrap();
    for (t, terms) in trace.times.iter().zip(&trace.terms) {
        let parts = [
            terms.free_induction,
            terms.ground_path,
            terms.excited_path,
            terms.echo,
            terms.residual,
        ];
        let mut row = vec![*t];
        row.extend(parts.iter().flat_map(|c| [c.re, c.im]));
        csv_row(&mut out, &row);
    }
    out
}

pub fn scan_csv(scan: &EchoScan<f64>) -> String {
    let mut out = String::new();
    writeln!(out, "{SCAN_HEADER}").unwrap();
    for i in 0..scan.len() {
        csv_row(
            &mut out,
            &[
                scan.tau_values[i],
                scan.echo_peaks[i],
                scan.xi_values[i],
                scan.xi_analytic[i],
            ],
        );
    }
    out
}

pub fn pretty_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let temp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&temp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
        fs::rename(&temp, &target)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&temp);
    }
    result.map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -1.5, 1.0 / 3.0, 8.061_002e-15, f64::MIN_POSITIVE] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(number(f64::INFINITY), "inf");
        assert_eq!(number(f64::NAN), "nan");
    }

    #[test]
    fn non_finite_json_is_null() {
        assert_eq!(json_number(f64::INFINITY), Value::Null);
        assert_eq!(json_number(2.0), serde_json::json!(2.0));
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "a.csv", "x\n").unwrap();
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names, vec![std::ffi::OsString::from("a.csv")]);
        assert_eq!(fs::read_to_string(dir.path().join("a.csv")).unwrap(), "x\n");
    }
}
