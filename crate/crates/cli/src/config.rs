use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::lenient_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved run configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub p: f64,
    #[serde(with = "lenient_f64")]
    pub q: f64,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub lacunarity: f64,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: String::new(),
            p: 1.0,
            q: 2.0,
            n: 8,
            seed: 0,
            samples: 200,
            lacunarity: 1e-3,
            input: None,
            out: None,
            format: Format::Json,
        }
    }
}

/// Config file layout:
///
/// ```toml
/// scenario = "embed-evidence"
/// n = 256
/// seed = 7
/// samples = 200
/// lacunarity = 0.001
/// input = "x.json"
///
/// [index]
/// p = 1.0
/// q = 2.0
///
/// [output]
/// path = "report.csv"
/// format = "csv"
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub lacunarity: Option<f64>,
    pub input: Option<PathBuf>,
    pub index: Option<IndexSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSection {
    pub p: Option<f64>,
    pub q: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::MalformedInput(m) => CliError::MalformedInput(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::MalformedInput(e.to_string()))
    }
}

/// Values given on the command line; `None` means not given.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub lacunarity: Option<f64>,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Resolves flags over file values over defaults.
pub fn resolve(flags: Overrides, file: FileConfig) -> Result<ScenarioConfig, CliError> {
    let d = ScenarioConfig::default();
    let index = file.index.unwrap_or_default();
    let output = file.output.unwrap_or_default();
    let scenario = flags
        .scenario
        .or(file.scenario)
        .ok_or_else(|| CliError::Usage("no scenario given on the command line or in the config file".into()))?;
    Ok(ScenarioConfig {
        scenario,
        p: flags.p.or(index.p).unwrap_or(d.p),
        q: flags.q.or(index.q).unwrap_or(d.q),
        n: flags.n.or(file.n).unwrap_or(d.n),
        seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        samples: flags.samples.or(file.samples).unwrap_or(d.samples),
        lacunarity: flags.lacunarity.or(file.lacunarity).unwrap_or(d.lacunarity),
        input: flags.input.or(file.input),
        out: flags.out.or(output.path),
        format: flags.format.or(output.format).unwrap_or(d.format),
    })
}
