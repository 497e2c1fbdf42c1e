//! Plain-text ingestion and emission: signal CSV and weights JSON.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Result, SmoothError};
use crate::signal::Signal;
use crate::window::{OffCenterWindow, TaperedWindow, Theta};

/// Parses a signal series: one real per line, or "index,value" rows with
/// the first field ignored. Blank lines and lines starting with '#' are
/// skipped. Error line numbers are 1-based over the raw text.
pub fn parse_signal_csv(text: &str) -> Result<Signal> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let field = match fields.as_slice() {
            [v] => v,
            [_, v] => v,
            _ => {
                return Err(SmoothError::Parse {
                    line: i + 1,
                    message: format!(
                        "expected 1 or 2 comma-separated fields, got {}",
                        fields.len()
                    ),
                })
            }
        };
        let value = field.trim().parse::<f64>().map_err(|_| SmoothError::Parse {
            line: i + 1,
            message: format!("not a real number: {field:?}"),
        })?;
        values.push(value);
    }
    Signal::new(values)
}

pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    parse_signal_csv(&fs::read_to_string(path)?)
}

/// 17 significant digits: enough for f64 values to survive a round trip
/// through text unchanged.
pub fn format_sample(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn signal_to_csv(signal: &Signal) -> String {
    let mut out = String::new();
    for &v in signal.values() {
        out.push_str(&format_sample(v));
        out.push('\n');
    }
    out
}

pub fn write_signal_csv(path: &Path, signal: &Signal) -> Result<()> {
    fs::write(path, signal_to_csv(signal))?;
    Ok(())
}

/// The two accepted weight-file shapes: raw centered arrays, or normalized
/// windows with an explicit data mass (the smoothness mass is 1 - A).
#[derive(Deserialize)]
#[serde(untagged)]
enum WeightsFile {
    AlphaBeta {
        alpha: Vec<f64>,
        beta: Vec<f64>,
    },
    Normalized {
        p: Vec<f64>,
        q: Vec<f64>,
        #[serde(rename = "A")]
        a: f64,
    },
}

/// Parses weights JSON. Keys "alpha"/"beta" hold odd-length arrays centered
/// at offset zero; alternatively "p"/"q"/"A" give normalized windows plus
/// the data mass.
pub fn parse_weights_json(text: &str) -> Result<Theta> {
    let file: WeightsFile = serde_json::from_str(text)
        .map_err(|e| SmoothError::MalformedWeights(e.to_string()))?;
    match file {
        WeightsFile::AlphaBeta { alpha, beta } => Theta::from_full(&alpha, &beta),
        WeightsFile::Normalized { p, q, a } => {
            if !a.is_finite() || a <= 0.0 || a > 1.0 {
                return Err(SmoothError::MalformedWeights(format!(
                    "data mass A must lie in (0, 1], got {a}"
                )));
            }
            let p = TaperedWindow::from_full(&p)?;
            let q = OffCenterWindow::from_full(&q)?;
            Theta::from_masses(a, &p, 1.0 - a, &q)
        }
    }
}

pub fn read_weights_json(path: &Path) -> Result<Theta> {
    parse_weights_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_with_comments_and_blanks() {
        let text = "# header\n1.5\n\n  -2.25  \n# trailing\n3e-2\n";
        let s = parse_signal_csv(text).unwrap();
        assert_eq!(s.values(), &[1.5, -2.25, 0.03]);
    }

    #[test]
    fn two_column_rows_ignore_the_index() {
        let text = "0,1.0\nt=1,2.0\n2,3.0\n";
        let s = parse_signal_csv(text).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn bad_number_reports_its_line() {
        let text = "1.0\n# fine\nnot-a-number\n2.0\n3.0\n";
        match parse_signal_csv(text) {
            Err(SmoothError::Parse { line: 3, .. }) => {}
            other => panic!("expected parse error at line 3, got {other:?}"),
        }
    }

    #[test]
    fn too_many_fields_is_an_error() {
        let text = "1.0\n1,2,3\n2.0\n";
        assert!(matches!(
            parse_signal_csv(text),
            Err(SmoothError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        assert!(matches!(
            parse_signal_csv("1.0\ninf\n2.0\n"),
            Err(SmoothError::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn short_series_is_rejected() {
        assert!(matches!(
            parse_signal_csv("1.0\n2.0\n"),
            Err(SmoothError::TooShort { len: 2, min: 3 })
        ));
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let s = Signal::new(vec![
            1.0 / 3.0,
            -2.718281828459045,
            1e-300,
            6.02214076e23,
            -0.0,
        ])
        .unwrap();
        let back = parse_signal_csv(&signal_to_csv(&s)).unwrap();
        assert_eq!(s.values(), back.values());
    }

    #[test]
    fn alpha_beta_schema() {
        let theta =
            parse_weights_json(r#"{"alpha": [0.3333333333333333], "beta": [0.3333333333333333, 0.0, 0.3333333333333333]}"#)
                .unwrap();
        assert!((theta.a_mass() - 1.0 / 3.0).abs() <= 1e-12);
        assert!((theta.b_mass() - 2.0 / 3.0).abs() <= 1e-10);
        assert_eq!(theta.half_width(), 1);
    }

    #[test]
    fn normalized_schema() {
        let theta = parse_weights_json(
            r#"{"p": [0.2, 0.2, 0.2, 0.2, 0.2], "q": [0.5, 0.0, 0.5], "A": 0.25}"#,
        )
        .unwrap();
        assert!((theta.a_mass() - 0.25).abs() <= 1e-12);
        assert!((theta.b_mass() - 0.75).abs() <= 1e-12);
        assert_eq!(theta.half_width(), 2);
    }

    #[test]
    fn mass_outside_unit_interval_is_rejected() {
        for a in ["0.0", "-0.5", "1.5", "1e400"] {
            let text = format!(r#"{{"p": [1.0], "q": [0.5, 0.0, 0.5], "A": {a}}}"#);
            assert!(
                matches!(
                    parse_weights_json(&text),
                    Err(SmoothError::MalformedWeights(_))
                ),
                "A = {a} should be rejected"
            );
        }
    }

    #[test]
    fn malformed_json_is_reported_as_such() {
        assert!(matches!(
            parse_weights_json("{\"alpha\": ["),
            Err(SmoothError::MalformedWeights(_))
        ));
        assert!(matches!(
            parse_weights_json(r#"{"gamma": [1.0]}"#),
            Err(SmoothError::MalformedWeights(_))
        ));
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        assert!(matches!(
            parse_weights_json(r#"{"alpha": [0.2, 0.6, 0.1], "beta": [0.0, 0.0, 0.0]}"#),
            Err(SmoothError::Asymmetric { .. })
        ));
    }

    #[test]
    fn serialized_theta_parses_back() {
        let theta = Theta::new(vec![0.3, 0.1], vec![0.0, 0.2, 0.05]).unwrap();
        let json = serde_json::to_string(&theta).unwrap();
        let back = parse_weights_json(&json).unwrap();
        assert_eq!(theta.alpha_half(), back.alpha_half());
        assert_eq!(theta.beta_half(), back.beta_half());
    }
}
