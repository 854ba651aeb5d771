//! Reading and writing the artifact directory layout.
//!
//! A run directory looks like:
//!
//! ```text
//! out/
//!   manifest.json  config.json  plan.json
//!   circuits/           prep_c*.txt, evolve_t*.txt, gate_counts.json
//!   oracle/t<i>/        rho.csv jx.csv jy.csv omega.csv psi_c*.csv
//!                       profiles.json manifest.json
//!   circuit/t<i>/       same field files, plus results_c*.csv when sampled
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qflow::fieldio;
use qflow::hydro::{profiles_and_integrals, total_mass, FlowFields, WaveField};

use crate::config::FieldManifest;
use crate::CliError;

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("incomplete run directory: {}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Runtime(format!("cannot parse {}: {e}", path.display())))
}

/// Profile record written as profiles.json. The std vectors hold one
/// sample standard deviation per bin over the measurement repeats and are
/// omitted on exact and oracle paths.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub y: Vec<f64>,
    pub rho_x_avg: Vec<f64>,
    pub jx_x_avg: Vec<f64>,
    pub jy_x_avg: Vec<f64>,
    pub r_centers: Vec<f64>,
    pub omega_theta_avg: Vec<f64>,
    pub kinetic_energy: f64,
    pub enstrophy: f64,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_x_avg_std: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jx_x_avg_std: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jy_x_avg_std: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_theta_std: Option<Vec<f64>>,
}

/// Per-bin standard deviations of the profile vectors over repeats.
#[derive(Debug, Clone)]
pub struct ProfileStds {
    pub rho_x_avg: Vec<f64>,
    pub jx_x_avg: Vec<f64>,
    pub jy_x_avg: Vec<f64>,
    pub omega_theta: Vec<f64>,
}

pub fn profile_record(fields: &FlowFields, stds: Option<&ProfileStds>) -> ProfileRecord {
    let p = profiles_and_integrals(fields);
    ProfileRecord {
        y: p.y,
        rho_x_avg: p.rho_x_avg,
        jx_x_avg: p.jx_x_avg,
        jy_x_avg: p.jy_x_avg,
        r_centers: p.r_centers,
        omega_theta_avg: p.omega_theta_avg,
        kinetic_energy: p.kinetic_energy,
        enstrophy: p.enstrophy,
        mass: total_mass(&fields.rho, fields.grid),
        rho_x_avg_std: stds.map(|s| s.rho_x_avg.clone()),
        jx_x_avg_std: stds.map(|s| s.jx_x_avg.clone()),
        jy_x_avg_std: stds.map(|s| s.jy_x_avg.clone()),
        omega_theta_std: stds.map(|s| s.omega_theta.clone()),
    }
}

/// Writes one snapshot directory: the four real fields, optionally the raw
/// complex components, profiles, and the snapshot manifest.
pub fn write_snapshot(
    dir: &Path,
    fields: &FlowFields,
    field: Option<&WaveField>,
    stds: Option<&ProfileStds>,
    manifest: &FieldManifest,
) -> Result<(), CliError> {
    create_dir(dir)?;
    let grid = fields.grid;
    for (name, values) in [
        ("rho", &fields.rho),
        ("jx", &fields.jx),
        ("jy", &fields.jy),
        ("omega", &fields.omega),
    ] {
        write_text(&dir.join(format!("{name}.csv")), &fieldio::real_field_csv(grid, name, values)?)?;
    }
    if let Some(field) = field {
        for (c, values) in field.components().iter().enumerate() {
            write_text(
                &dir.join(format!("psi_c{c}.csv")),
                &fieldio::complex_field_csv(grid, values)?,
            )?;
        }
    }
    write_json(&dir.join("profiles.json"), &profile_record(fields, stds))?;
    write_json(&dir.join("manifest.json"), manifest)?;
    Ok(())
}

/// Reads one named real field back from a snapshot directory.
pub fn read_field(dir: &Path, name: &str) -> Result<Vec<f64>, CliError> {
    let path = dir.join(format!("{name}.csv"));
    let (col, values) = fieldio::parse_real_field(&read_text(&path)?)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    if col != name {
        return Err(CliError::Runtime(format!(
            "{}: value column is {col:?}, expected {name:?}",
            path.display()
        )));
    }
    Ok(values)
}

pub fn snapshot_dir(root: &Path, path: &str, index: usize) -> PathBuf {
    root.join(path).join(format!("t{index}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qflow::hydro::{flow_fields, init_diverging, DifferenceScheme, Grid2D};

    #[test]
    fn snapshot_round_trips_fields() {
        let grid = Grid2D::new(2, 2).unwrap();
        let field = init_diverging(grid, 1.0).unwrap();
        let fields = flow_fields(&field, DifferenceScheme::PeriodicCentral);
        let dir = std::env::temp_dir().join(format!("qflow-artifact-test-{}", std::process::id()));
        let manifest = FieldManifest {
            grid: [2, 2],
            points: [4, 4],
            time: 0.0,
            scheme: "periodic-central".into(),
            norms: field.component_norms(),
            seed: 0,
            path: "oracle".into(),
        };
        write_snapshot(&dir, &fields, Some(&field), None, &manifest).unwrap();
        assert_eq!(read_field(&dir, "rho").unwrap(), fields.rho);
        assert_eq!(read_field(&dir, "omega").unwrap(), fields.omega);
        let psi = fieldio::parse_complex_field(&read_text(&dir.join("psi_c0.csv")).unwrap()).unwrap();
        assert_eq!(psi, field.component(0).to_vec());
        let record: ProfileRecord = read_json(&dir.join("profiles.json")).unwrap();
        assert!(record.omega_theta_std.is_none());
        assert!(record.mass > 0.0);
        fs::remove_dir_all(&dir).unwrap();
    }
}
