//! Error-model sweeps over qubits and seeds.
//!
//! Each row evolves the configured flow to the last requested time with
//! the error model injected into the evolution circuit, reconstructs the
//! fields through the exact measurement path, and records the dominant
//! stripe frequency of the density error together with the correlations
//! against the noiseless oracle. The exact path is used throughout so the
//! rows show the coherent-error signal, not sampling noise.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qflow::circuits::{amplitude_encode, build_evolution};
use qflow::hydro::encode;
use qflow::noise::{inject, pearson, stripe_spectrum, Axis, ErrorModel};
use qflow::oracle::{initial_field, reference_run};

use crate::artifacts::{create_dir, write_json, write_text};
use crate::config::{RunConfig, RunManifest};
use crate::run::{exact_circuit_fields, Measurer};
use crate::CliError;

/// Which qubits and seeds to grid over.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub qubits: Option<Vec<usize>>,
    pub seeds: Option<Vec<u64>>,
}

impl SweepSpec {
    pub fn parse(qubits: Option<&str>, seeds: Option<&str>) -> Result<SweepSpec, CliError> {
        let qubits = match qubits {
            None => None,
            Some(text) => Some(
                text.split(',')
                    .map(|tok| {
                        tok.trim().parse::<usize>().map_err(|_| {
                            CliError::Config(format!("cannot parse qubit {tok:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let seeds = match seeds {
            None => None,
            Some(text) => Some(parse_seeds(text)?),
        };
        Ok(SweepSpec { qubits, seeds })
    }
}

/// "a..b" is the half-open range a, a+1, ..., b-1; otherwise a comma list.
fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |tok: &str| CliError::Config(format!("cannot parse seed {tok:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad(text))?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad(text))?;
        if hi <= lo {
            return Err(CliError::Config(format!("empty seed range {text:?}")));
        }
        return Ok((lo..hi).collect());
    }
    text.split(',')
        .map(|tok| tok.trim().parse::<u64>().map_err(|_| bad(tok)))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SweepManifest {
    #[serde(flatten)]
    run: RunManifest,
    time: f64,
    qubits: Vec<String>,
    seeds: Vec<u64>,
    rows: usize,
}

fn fmt_r(r: qflow::Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

pub fn cmd_noise_sweep(cfg: &RunConfig, spec: &SweepSpec, out: &Path) -> Result<(), CliError> {
    let model = cfg
        .error_model
        .clone()
        .ok_or_else(|| CliError::Config("noise-sweep needs an error model".into()))?;
    let kind = cfg.kind()?;
    let grid = cfg.grid()?;
    let scheme = cfg.scheme_enum()?;
    let t = *cfg.times.last().expect("validated nonempty");

    // (label, model, seed) per row.
    let rows: Vec<(String, ErrorModel, u64)> = match &model {
        ErrorModel::FixedSingleQubit { targets, gate } => {
            let qubits = spec.qubits.clone().unwrap_or_else(|| targets.clone());
            if let Some(&q) = qubits.iter().find(|&&q| q >= grid.num_qubits()) {
                return Err(CliError::Config(format!(
                    "qubit {q} out of range for {} qubits",
                    grid.num_qubits()
                )));
            }
            let seeds = spec.seeds.clone().unwrap_or_else(|| vec![cfg.seed]);
            qubits
                .iter()
                .flat_map(|&q| {
                    let gate = *gate;
                    seeds.iter().map(move |&s| {
                        (
                            q.to_string(),
                            ErrorModel::FixedSingleQubit { targets: vec![q], gate },
                            s,
                        )
                    })
                })
                .collect()
        }
        ErrorModel::RandomAllQubits { amplitude, seed } => {
            if spec.qubits.is_some() {
                return Err(CliError::Config(
                    "--qubits applies only to fixed-single-qubit models".into(),
                ));
            }
            let seeds = spec.seeds.clone().unwrap_or_else(|| vec![*seed]);
            seeds
                .iter()
                .map(|&s| {
                    ("all".to_string(), ErrorModel::RandomAllQubits { amplitude: *amplitude, seed: s }, s)
                })
                .collect()
        }
    };

    // Noiseless references: the oracle fields and the exact circuit fields.
    let snaps = reference_run(kind, grid, &cfg.flow_params(), &[t], scheme)?;
    let oracle_fields = &snaps[0].fields;
    let raw = initial_field(kind, grid, &cfg.flow_params())?;
    let (normalized, _total) = raw.normalized()?;
    let encoded = encode(&normalized)?;
    let preps = encoded
        .states
        .iter()
        .enumerate()
        .map(|(c, s)| amplitude_encode(s.amplitudes(), format!("prep_c{c}")))
        .collect::<qflow::Result<Vec<_>>>()?;
    let measurer = Measurer::new(grid, scheme)?;
    let evolve = build_evolution(cfg.n_x, cfg.n_y, t)?;
    let noiseless = exact_circuit_fields(&encoded, &preps, &evolve, &measurer)?;

    let mut csv = String::from("qubit,seed,freq,power,r_rho,r_jx,r_jy\n");
    for (label, row_model, seed) in &rows {
        let noisy_circ = inject(&evolve, row_model)?;
        let fields = exact_circuit_fields(&encoded, &preps, &noisy_circ, &measurer)?;
        let delta: Vec<f64> =
            fields.rho.iter().zip(&noiseless.rho).map(|(a, b)| a - b).collect();
        let stripes = stripe_spectrum(&delta, grid, Axis::X)?;
        csv.push_str(&format!(
            "{label},{seed},{},{},{},{},{}\n",
            stripes.frequency,
            stripes.power_fraction,
            fmt_r(pearson(&fields.rho, &oracle_fields.rho)),
            fmt_r(pearson(&fields.jx, &oracle_fields.jx)),
            fmt_r(pearson(&fields.jy, &oracle_fields.jy)),
        ));
    }

    create_dir(out)?;
    write_text(&out.join("sweep.csv"), &csv)?;
    let manifest = SweepManifest {
        run: RunManifest::new("noise-sweep", cfg),
        time: t,
        qubits: rows.iter().map(|(q, _, _)| q.clone()).collect(),
        seeds: rows.iter().map(|(_, _, s)| *s).collect(),
        rows: rows.len(),
    };
    write_json(&out.join("manifest.json"), &manifest)?;
    println!("sweep written to {} ({} rows)", out.display(), rows.len());
    Ok(())
}
