//! Run configuration: flag collection, config-file override, validation,
//! and the canonical hash recorded in manifests.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qflow::hydro::{DifferenceScheme, Grid2D};
use qflow::noise::ErrorModel;
use qflow::oracle::{FlowKind, FlowParams};

use crate::{CliError, CommonArgs};

/// Complete description of one run. Everything that influences the numbers
/// lives here; the output directory deliberately does not, so re-running a
/// recorded config elsewhere reproduces every artifact byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub flow: String,
    pub n_x: usize,
    pub n_y: usize,
    pub times: Vec<f64>,
    pub shots: u64,
    pub repeats: usize,
    pub seed: u64,
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_model: Option<ErrorModel>,
    #[serde(default)]
    pub exact: bool,
}

/// Config-file form: any subset of the fields. Present values override the
/// command line; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConfig {
    flow: Option<String>,
    n_x: Option<usize>,
    n_y: Option<usize>,
    times: Option<Vec<f64>>,
    shots: Option<u64>,
    repeats: Option<usize>,
    seed: Option<u64>,
    scheme: Option<String>,
    error_model: Option<ErrorModel>,
    exact: Option<bool>,
}

impl RunConfig {
    /// Builds the config from flags, loads --error-model, then overlays
    /// --config file values on top.
    pub fn from_args(args: &CommonArgs) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig {
            flow: args.flow.clone(),
            n_x: args.nx,
            n_y: args.ny,
            times: parse_times(&args.times)?,
            shots: args.shots,
            repeats: args.repeats,
            seed: args.seed,
            scheme: args.scheme.clone(),
            error_model: None,
            exact: args.exact,
        };
        if let Some(path) = &args.error_model {
            cfg.error_model = Some(load_error_model(path)?);
        }
        if let Some(path) = &args.config {
            apply_config_file(&mut cfg, path)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.kind()?;
        self.scheme_enum()?;
        self.grid()?;
        if self.times.is_empty() {
            return Err(CliError::Config("at least one time is required".into()));
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Config("times must be finite".into()));
        }
        if !self.exact && self.shots == 0 {
            return Err(CliError::Config("shots must be at least 1 when sampling".into()));
        }
        if !self.exact && self.repeats == 0 {
            return Err(CliError::Config("repeats must be at least 1 when sampling".into()));
        }
        if let Some(model) = &self.error_model {
            model.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn kind(&self) -> Result<FlowKind, CliError> {
        FlowKind::from_name(&self.flow).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn scheme_enum(&self) -> Result<DifferenceScheme, CliError> {
        DifferenceScheme::from_name(&self.scheme).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid2D, CliError> {
        Grid2D::new(self.n_x, self.n_y).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn flow_params(&self) -> FlowParams {
        FlowParams::default()
    }

    /// Compact canonical serialization; field order is fixed by the struct.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    // A manifest is accepted directly: its embedded config is the config.
    let config_value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    let partial: PartialConfig = serde_json::from_value(config_value)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(v) = partial.flow {
        cfg.flow = v;
    }
    if let Some(v) = partial.n_x {
        cfg.n_x = v;
    }
    if let Some(v) = partial.n_y {
        cfg.n_y = v;
    }
    if let Some(v) = partial.times {
        cfg.times = v;
    }
    if let Some(v) = partial.shots {
        cfg.shots = v;
    }
    if let Some(v) = partial.repeats {
        cfg.repeats = v;
    }
    if let Some(v) = partial.seed {
        cfg.seed = v;
    }
    if let Some(v) = partial.scheme {
        cfg.scheme = v;
    }
    if let Some(v) = partial.error_model {
        cfg.error_model = Some(v);
    }
    if let Some(v) = partial.exact {
        cfg.exact = v;
    }
    Ok(())
}

pub fn load_error_model(path: &Path) -> Result<ErrorModel, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let model: ErrorModel = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    model.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(model)
}

/// Parses a comma-separated time list. Each entry is a float or a multiple
/// of pi: "pi", "pi/4", "2pi", "3pi/8", "-pi/2".
pub fn parse_times(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|tok| {
            parse_time_token(tok.trim())
                .ok_or_else(|| CliError::Config(format!("cannot parse time {tok:?}")))
        })
        .collect()
}

fn parse_time_token(tok: &str) -> Option<f64> {
    if tok.is_empty() {
        return None;
    }
    if let Ok(v) = tok.parse::<f64>() {
        return Some(v);
    }
    let idx = tok.find("pi")?;
    let (pre, post) = (&tok[..idx], &tok[idx + 2..]);
    let coeff = match pre.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().ok()?,
    };
    let divisor = match post.strip_prefix('/') {
        None if post.is_empty() => 1.0,
        None => return None,
        Some(d) => {
            let d = d.parse::<f64>().ok()?;
            if d == 0.0 {
                return None;
            }
            d
        }
    };
    Some(coeff * PI / divisor)
}

/// Top-level manifest written beside every artifact set.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub generator: String,
    pub command: String,
    pub versions: BTreeMap<String, String>,
    pub config: RunConfig,
    pub config_hash: String,
}

impl RunManifest {
    pub fn new(command: &str, cfg: &RunConfig) -> RunManifest {
        let mut versions = BTreeMap::new();
        versions.insert("qflow".to_string(), qflow::VERSION.to_string());
        versions.insert("qflow-cli".to_string(), env!("CARGO_PKG_VERSION").to_string());
        RunManifest {
            generator: "qflow".to_string(),
            command: command.to_string(),
            versions,
            config: cfg.clone(),
            config_hash: cfg.hash(),
        }
    }
}

/// Per-snapshot manifest: grid, time, scheme, component norms, seed.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldManifest {
    /// Qubits per axis.
    pub grid: [usize; 2],
    /// Grid points per axis.
    pub points: [usize; 2],
    pub time: f64,
    pub scheme: String,
    pub norms: Vec<f64>,
    pub seed: u64,
    /// "oracle", "circuit-exact", or "circuit-sampled".
    pub path: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_sugar_forms() {
        let times = parse_times("0, pi/4 ,pi/2,2pi,3pi/8,-pi,1.5,2*pi").unwrap();
        let want =
            [0.0, PI / 4.0, PI / 2.0, 2.0 * PI, 3.0 * PI / 8.0, -PI, 1.5, 2.0 * PI];
        assert_eq!(times.len(), want.len());
        for (t, w) in times.iter().zip(&want) {
            assert!((t - w).abs() < 1e-15, "{t} vs {w}");
        }
        assert!(parse_times("pi/0").is_err());
        assert!(parse_times("pie").is_err());
        assert!(parse_times("").is_err());
        assert!(parse_times("1,,2").is_err());
    }

    #[test]
    fn hash_changes_with_config() {
        let base = RunConfig {
            flow: "diverging".into(),
            n_x: 3,
            n_y: 3,
            times: vec![0.0],
            shots: 100,
            repeats: 2,
            seed: 1,
            scheme: "one-sided-at-boundary".into(),
            error_model: None,
            exact: true,
        };
        let mut other = base.clone();
        other.seed = 2;
        assert_ne!(base.hash(), other.hash());
        assert_eq!(base.hash(), base.clone().hash());
        assert_eq!(base.hash().len(), 64);
    }

    #[test]
    fn config_json_round_trips() {
        let cfg = RunConfig {
            flow: "vortex".into(),
            n_x: 4,
            n_y: 4,
            times: vec![0.0, PI / 4.0],
            shots: 1000,
            repeats: 3,
            seed: 9,
            scheme: "periodic-central".into(),
            error_model: Some(ErrorModel::RandomAllQubits { amplitude: 0.045, seed: 5 }),
            exact: false,
        };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
