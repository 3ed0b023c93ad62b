use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{Format, ScenarioConfig};
use crate::error::CliError;

/// One measured quantity and the bound it was compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "lenient_f64")]
    pub value: f64,
    /// Bound used for the verdict; `None` for empirical quantities whose
    /// only requirement is finiteness.
    #[serde(with = "lenient_opt_f64")]
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass: value <= tolerance,
            witness: None,
        }
    }

    /// Passes when `value > tolerance`.
    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass: value > tolerance,
            witness: None,
        }
    }

    /// Passes when `value` is finite.
    pub fn finite(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: None,
            pass: value.is_finite(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: impl Serialize) -> Self {
        self.witness = serde_json::to_value(w).ok();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario: ScenarioConfig,
    pub rng: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    pub wall_clock_ms: u64,
    pub version: String,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// JSON writes the whole report; CSV writes one row per check with the
/// columns `scenario,check,value,tolerance,pass`.
pub fn emit_report<W: Write>(report: &ExperimentReport, format: Format, mut w: W) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, report).map_err(io)?;
            writeln!(w).map_err(io)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["scenario", "check", "value", "tolerance", "pass"])
                .map_err(io)?;
            for c in &report.checks {
                csv.write_record([
                    report.scenario.scenario.clone(),
                    c.name.clone(),
                    c.value.to_string(),
                    c.tolerance.map(|t| t.to_string()).unwrap_or_default(),
                    c.pass.to_string(),
                ])
                .map_err(io)?;
            }
            csv.flush().map_err(io)?;
        }
    }
    Ok(())
}

/// Non-finite floats are written as the strings `"inf"`, `"-inf"` and
/// `"nan"`, which plain JSON numbers cannot carry.
pub mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string().to_lowercase())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

mod lenient_opt_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::lenient_f64::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::lenient_f64")] f64);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(checks: Vec<Check>) -> ExperimentReport {
        ExperimentReport {
            scenario: ScenarioConfig {
                scenario: "norm".into(),
                q: f64::INFINITY,
                ..ScenarioConfig::default()
            },
            rng: "ChaCha8Rng".into(),
            seed: 0,
            checks,
            result: None,
            wall_clock_ms: 3,
            version: "0.1.0".into(),
        }
    }

    #[test]
    fn empty_report_is_header_only_csv() {
        let mut buf = Vec::new();
        emit_report(&report(vec![]), Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "scenario,check,value,tolerance,pass\n");
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let checks = vec![
            Check::at_most("a", 0.5, 1.0),
            Check::finite("b", f64::INFINITY),
            Check::above("c", 3.0, 2.0),
        ];
        let mut buf = Vec::new();
        emit_report(&report(checks), Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().nth(2).unwrap(), "norm,b,inf,,false");
    }

    #[test]
    fn json_round_trip() {
        let r = report(vec![
            Check::at_most("a", 0.1 + 0.2, 1e-9).with_witness(vec![1.0, 2.0]),
            Check::finite("b", f64::NEG_INFINITY),
        ]);
        let mut buf = Vec::new();
        emit_report(&r, Format::Json, &mut buf).unwrap();
        let back: ExperimentReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, r);
    }
}
