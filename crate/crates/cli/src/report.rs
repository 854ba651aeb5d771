//! Summary of a completed run directory: gate counts, plan size,
//! correlations against the oracle, and mass conservation.

use std::path::Path;

use qflow::circuits::CircuitReport;
use qflow::measurement::MeasurementPlan;
use qflow::noise::pearson;

use crate::artifacts::{read_field, read_json, read_text, snapshot_dir};
use crate::config::RunManifest;
use crate::run::plan_counts;
use crate::CliError;

fn corr(a: &[f64], b: &[f64]) -> String {
    // Correlating two fields that are both zero to rounding yields noise,
    // not signal; report those as undefined rather than alarming.
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak(a) < 1e-10 && peak(b) < 1e-10 {
        return "n/a".to_string();
    }
    match pearson(a, b) {
        Ok(v) => format!("{v:.6}"),
        Err(_) => "n/a".to_string(),
    }
}

pub fn cmd_report(dir: &Path) -> Result<(), CliError> {
    let manifest: RunManifest = read_json(&dir.join("manifest.json"))?;
    if manifest.command != "run" {
        return Err(CliError::Runtime(format!(
            "incomplete run directory: {} was written by `{}`, not `run`",
            dir.display(),
            manifest.command
        )));
    }
    let cfg = &manifest.config;
    let grid = cfg.grid().map_err(|e| CliError::Runtime(e.to_string()))?;
    let plan = MeasurementPlan::from_json(&read_text(&dir.join("plan.json"))?)?;
    let reports: Vec<CircuitReport> = read_json(&dir.join("circuits/gate_counts.json"))?;

    println!("run {}", dir.display());
    println!(
        "flow={} grid={}x{} scheme={} seed={} shots={} repeats={} path={}",
        cfg.flow,
        grid.nx_points(),
        grid.ny_points(),
        cfg.scheme,
        cfg.seed,
        cfg.shots,
        cfg.repeats,
        if cfg.exact { "exact" } else { "sampled" }
    );
    println!("gates:");
    for r in &reports {
        println!(
            "  {}: {} gates ({} single-qubit, {} two-qubit), depth {}",
            r.name, r.gates, r.single_qubit, r.two_qubit, r.depth
        );
    }
    let (ms, mb, _ts, tb) = plan_counts(&plan);
    println!("plan: {ms} momentum strings in {mb} bases ({tb} sampled bases with density)");

    let cell = grid.dx() * grid.dy();
    let mut masses = Vec::with_capacity(cfg.times.len());
    for (i, &t) in cfg.times.iter().enumerate() {
        let odir = snapshot_dir(dir, "oracle", i);
        let cdir = snapshot_dir(dir, "circuit", i);
        let orho = read_field(&odir, "rho")?;
        let ojx = read_field(&odir, "jx")?;
        let ojy = read_field(&odir, "jy")?;
        let crho = read_field(&cdir, "rho")?;
        let cjx = read_field(&cdir, "jx")?;
        let cjy = read_field(&cdir, "jy")?;
        let mass = crho.iter().sum::<f64>() * cell;
        println!(
            "t[{i}]={t}: r_rho={} r_jx={} r_jy={} mass={mass}",
            corr(&crho, &orho),
            corr(&cjx, &ojx),
            corr(&cjy, &ojy),
        );
        masses.push(mass);
    }
    let residual =
        masses.iter().map(|m| (m - masses[0]).abs()).fold(0.0, f64::max);
    println!("conservation residual: {residual:e}");
    Ok(())
}
