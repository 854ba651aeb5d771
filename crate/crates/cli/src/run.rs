//! The run pipeline plus the plan and circuit subcommands.

use std::path::Path;

use num_complex::Complex64;

use qflow::circuit::Circuit;
use qflow::circuits::{amplitude_encode, build_evolution, circuit_report, CircuitReport};
use qflow::hydro::{
    encode, profiles_and_integrals, DifferenceScheme, EncodedField, FlowFields, Grid2D,
    WaveField,
};
use qflow::measurement::{
    density_from_counts, estimate, exact_string_values, group_bases, momentum_from_table,
    momentum_string_table, reconstruct_fields, ComponentEstimates, EstimateOutput,
    MeasurementPlan,
};
use qflow::noise::inject;
use qflow::oracle::{initial_field, reference_run};
use qflow::rng::derive_seed;
use qflow::{PauliString, QuantumState};

use crate::artifacts::{
    create_dir, snapshot_dir, write_json, write_snapshot, write_text, ProfileStds,
};
use crate::config::{FieldManifest, RunConfig, RunManifest};
use crate::{CircuitArgs, CliError};

/// Measurement plan plus the per-point string table needed to assemble
/// momentum fields from string expectations. Built once per grid and
/// reused across times, components, and sweep rows.
pub struct Measurer {
    pub plan: MeasurementPlan,
    pub grid: Grid2D,
    table: Vec<(Vec<PauliString>, Vec<PauliString>)>,
}

impl Measurer {
    pub fn new(grid: Grid2D, scheme: DifferenceScheme) -> Result<Measurer, CliError> {
        let table = momentum_string_table(grid, scheme)?;
        let mut strings: Vec<PauliString> =
            table.iter().flat_map(|(sx, sy)| sx.iter().chain(sy)).cloned().collect();
        // Density reads from the computational basis; one all-Z string
        // forces that basis into the plan.
        strings.push(PauliString::parse(&"Z".repeat(grid.num_qubits()), 1.0)?);
        let plan = group_bases(&strings)?;
        Ok(Measurer { plan, grid, table })
    }

    /// Infinite-shot moments: exact string expectations and probabilities.
    pub fn exact_components(&self, state: &QuantumState) -> Result<ComponentEstimates, CliError> {
        let values = exact_string_values(state, &self.plan)?;
        let (jx, jy) = momentum_from_table(&self.table, &values)?;
        Ok(ComponentEstimates { density: state.probabilities(), jx, jy })
    }

    /// Sampled moments: the repeat-averaged estimates plus one set per
    /// repeat (for error bars) and the raw estimation output.
    pub fn sampled_components(
        &self,
        state: &QuantumState,
        shots: u64,
        repeats: usize,
        seed: u64,
    ) -> Result<(ComponentEstimates, Vec<ComponentEstimates>, EstimateOutput), CliError> {
        let output = estimate(state, &self.plan, shots, repeats, seed)?;
        let means = output.string_means();
        let (jx, jy) = momentum_from_table(&self.table, &means)?;
        let z_tables = output.z_basis_counts()?;
        let density = density_from_counts(self.grid, z_tables)?;
        let mean = ComponentEstimates { density, jx, jy };

        let mut per_repeat = Vec::with_capacity(repeats);
        for (r, values) in output.repeat_string_values()?.iter().enumerate() {
            let (jx, jy) = momentum_from_table(&self.table, values)?;
            let density = density_from_counts(self.grid, std::slice::from_ref(&z_tables[r]))?;
            per_repeat.push(ComponentEstimates { density, jx, jy });
        }
        Ok((mean, per_repeat, output))
    }
}

/// Momentum and total string/basis counts of a plan that may carry the
/// extra density basis.
pub fn plan_counts(plan: &MeasurementPlan) -> (usize, usize, usize, usize) {
    let z = "Z".repeat(plan.num_qubits);
    let momentum_strings = plan.assignments.len() - plan.assignments.contains_key(&z) as usize;
    let momentum_bases = plan.bases.len() - plan.bases.contains(&z) as usize;
    (momentum_strings, momentum_bases, plan.assignments.len(), plan.bases.len())
}

fn field_manifest(cfg: &RunConfig, grid: Grid2D, time: f64, norms: &[f64], path: &str) -> FieldManifest {
    FieldManifest {
        grid: [cfg.n_x, cfg.n_y],
        points: [grid.nx_points(), grid.ny_points()],
        time,
        scheme: cfg.scheme.clone(),
        norms: norms.to_vec(),
        seed: cfg.seed,
        path: path.to_string(),
    }
}

/// Sample standard deviation (ddof 1) per bin over repeat rows.
fn std_per_bin(rows: &[&[f64]]) -> Vec<f64> {
    let bins = rows.first().map_or(0, |r| r.len());
    (0..bins)
        .map(|j| {
            if rows.len() < 2 {
                return 0.0;
            }
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64;
            let var = rows.iter().map(|r| (r[j] - mean) * (r[j] - mean)).sum::<f64>()
                / (rows.len() - 1) as f64;
            var.sqrt()
        })
        .collect()
}

fn profile_stds(per_repeat: &[FlowFields]) -> ProfileStds {
    let profs: Vec<_> = per_repeat.iter().map(profiles_and_integrals).collect();
    let rows = |pick: fn(&qflow::hydro::Profiles) -> &Vec<f64>| -> Vec<&[f64]> {
        profs.iter().map(|p| pick(p).as_slice()).collect()
    };
    ProfileStds {
        rho_x_avg: std_per_bin(&rows(|p| &p.rho_x_avg)),
        jx_x_avg: std_per_bin(&rows(|p| &p.jx_x_avg)),
        jy_x_avg: std_per_bin(&rows(|p| &p.jy_x_avg)),
        omega_theta: std_per_bin(&rows(|p| &p.omega_theta_avg)),
    }
}

pub fn cmd_run(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let kind = cfg.kind()?;
    let grid = cfg.grid()?;
    let scheme = cfg.scheme_enum()?;
    let params = cfg.flow_params();

    create_dir(out)?;
    create_dir(&out.join("circuits"))?;
    write_json(&out.join("manifest.json"), &RunManifest::new("run", cfg))?;
    write_json(&out.join("config.json"), cfg)?;

    // Oracle reference for every time.
    let snaps = reference_run(kind, grid, &params, &cfg.times, scheme)?;
    for (i, snap) in snaps.iter().enumerate() {
        let manifest = field_manifest(cfg, grid, snap.time, &snap.field.component_norms(), "oracle");
        write_snapshot(&snapshot_dir(out, "oracle", i), &snap.fields, Some(&snap.field), None, &manifest)?;
    }

    // Circuit path: encode, prepare, evolve, measure, reconstruct.
    let raw = initial_field(kind, grid, &params)?;
    let (normalized, _total) = raw.normalized()?;
    let encoded = encode(&normalized)?;
    let mut reports: Vec<CircuitReport> = Vec::new();
    let mut preps: Vec<Circuit> = Vec::new();
    for (c, state) in encoded.states.iter().enumerate() {
        let prep = amplitude_encode(state.amplitudes(), format!("prep_c{c}"))?;
        write_text(&out.join(format!("circuits/prep_c{c}.txt")), &prep.to_text())?;
        reports.push(circuit_report(&prep));
        preps.push(prep);
    }

    let measurer = Measurer::new(grid, scheme)?;
    write_text(&out.join("plan.json"), &(measurer.plan.to_json() + "\n"))?;

    for (i, &t) in cfg.times.iter().enumerate() {
        let mut evolve = build_evolution(cfg.n_x, cfg.n_y, t)?;
        evolve.set_name(format!("evolve_t{i}"));
        write_text(&out.join(format!("circuits/evolve_t{i}.txt")), &evolve.to_text())?;
        reports.push(circuit_report(&evolve));
        let run_circ = match &cfg.error_model {
            Some(model) => {
                let mut noisy = inject(&evolve, model)?;
                noisy.set_name(format!("evolve_t{i}_noisy"));
                write_text(&out.join(format!("circuits/evolve_t{i}_noisy.txt")), &noisy.to_text())?;
                reports.push(circuit_report(&noisy));
                noisy
            }
            None => evolve,
        };

        let dir = snapshot_dir(out, "circuit", i);
        create_dir(&dir)?;
        let mut components = Vec::new();
        let mut per_repeat: Vec<Vec<ComponentEstimates>> = vec![Vec::new(); cfg.repeats];
        let mut evolved: Vec<Vec<Complex64>> = Vec::new();
        for (c, prep) in preps.iter().enumerate() {
            let mut state = QuantumState::zero(grid.num_qubits());
            state.apply_circuit(prep)?;
            state.apply_circuit(&run_circ)?;
            if cfg.exact {
                components.push(measurer.exact_components(&state)?);
                let norm = encoded.norms[c];
                evolved.push(state.amplitudes().iter().map(|a| a * norm).collect());
            } else {
                let seed = derive_seed(cfg.seed, &[i as u64, c as u64]);
                let (mean, per, output) =
                    measurer.sampled_components(&state, cfg.shots, cfg.repeats, seed)?;
                write_text(&dir.join(format!("results_c{c}.csv")), &output.to_results_csv())?;
                for (r, est) in per.into_iter().enumerate() {
                    per_repeat[r].push(est);
                }
                components.push(mean);
            }
        }
        let fields = reconstruct_fields(grid, &components, &encoded.norms)?;
        let stds = if cfg.exact {
            None
        } else {
            let per_fields: Vec<FlowFields> = per_repeat
                .iter()
                .map(|comps| reconstruct_fields(grid, comps, &encoded.norms))
                .collect::<Result<_, _>>()?;
            Some(profile_stds(&per_fields))
        };
        let psi = if cfg.exact {
            Some(WaveField::from_components(grid, evolved)?)
        } else {
            None
        };
        let path = if cfg.exact { "circuit-exact" } else { "circuit-sampled" };
        let manifest = field_manifest(cfg, grid, t, &encoded.norms, path);
        write_snapshot(&dir, &fields, psi.as_ref(), stds.as_ref(), &manifest)?;
    }
    write_json(&out.join("circuits/gate_counts.json"), &reports)?;

    let (ms, mb, _ts, tb) = plan_counts(&measurer.plan);
    println!("run written to {}", out.display());
    println!(
        "flow={} grid={}x{} scheme={} seed={} path={}",
        cfg.flow,
        grid.nx_points(),
        grid.ny_points(),
        cfg.scheme,
        cfg.seed,
        if cfg.exact { "exact" } else { "sampled" }
    );
    println!("plan: {ms} momentum strings in {mb} bases ({tb} sampled bases with density)");
    Ok(())
}

/// Applies prep and evolution circuits, then reconstructs fields through
/// the exact measurement path. Shared by the sweep.
pub fn exact_circuit_fields(
    encoded: &EncodedField,
    preps: &[Circuit],
    evolve: &Circuit,
    measurer: &Measurer,
) -> Result<FlowFields, CliError> {
    let mut components = Vec::with_capacity(preps.len());
    for prep in preps {
        let mut state = QuantumState::zero(encoded.grid.num_qubits());
        state.apply_circuit(prep)?;
        state.apply_circuit(evolve)?;
        components.push(measurer.exact_components(&state)?);
    }
    Ok(reconstruct_fields(encoded.grid, &components, &encoded.norms)?)
}

pub fn cmd_plan(
    nx: usize,
    ny: usize,
    scheme_name: &str,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let grid = Grid2D::new(nx, ny).map_err(|e| CliError::Config(e.to_string()))?;
    let scheme =
        DifferenceScheme::from_name(scheme_name).map_err(|e| CliError::Config(e.to_string()))?;
    let measurer = Measurer::new(grid, scheme)?;
    let (ms, mb, _ts, tb) = plan_counts(&measurer.plan);
    let summary =
        format!("plan: {ms} momentum strings in {mb} bases ({tb} sampled bases with density)");
    match out {
        Some(dir) => {
            create_dir(dir)?;
            write_text(&dir.join("plan.json"), &(measurer.plan.to_json() + "\n"))?;
            println!("plan written to {}", dir.join("plan.json").display());
            println!("{summary}");
        }
        None => {
            println!("{}", measurer.plan.to_json());
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn cmd_circuit(args: &CircuitArgs) -> Result<(), CliError> {
    let cfg = RunConfig {
        flow: args.flow.clone(),
        n_x: args.nx,
        n_y: args.ny,
        times: crate::config::parse_times(&args.times)?,
        shots: 0,
        repeats: 0,
        seed: 0,
        scheme: DifferenceScheme::PeriodicCentral.name().to_string(),
        error_model: match &args.error_model {
            Some(path) => Some(crate::config::load_error_model(path)?),
            None => None,
        },
        exact: true,
    };
    cfg.validate()?;
    let kind = cfg.kind()?;
    let grid = cfg.grid()?;
    let out = &args.out;
    create_dir(out)?;
    write_json(&out.join("manifest.json"), &RunManifest::new("circuit", &cfg))?;

    let raw = initial_field(kind, grid, &cfg.flow_params())?;
    let (normalized, _total) = raw.normalized()?;
    let encoded = encode(&normalized)?;
    let mut reports = Vec::new();
    for (c, state) in encoded.states.iter().enumerate() {
        let prep = amplitude_encode(state.amplitudes(), format!("prep_c{c}"))?;
        write_text(&out.join(format!("prep_c{c}.txt")), &prep.to_text())?;
        reports.push(circuit_report(&prep));
    }
    for (i, &t) in cfg.times.iter().enumerate() {
        let mut evolve = build_evolution(cfg.n_x, cfg.n_y, t)?;
        evolve.set_name(format!("evolve_t{i}"));
        write_text(&out.join(format!("evolve_t{i}.txt")), &evolve.to_text())?;
        reports.push(circuit_report(&evolve));
        if let Some(model) = &cfg.error_model {
            let mut noisy = inject(&evolve, model)?;
            noisy.set_name(format!("evolve_t{i}_noisy"));
            write_text(&out.join(format!("evolve_t{i}_noisy.txt")), &noisy.to_text())?;
            reports.push(circuit_report(&noisy));
        }
    }
    write_json(&out.join("gate_counts.json"), &reports)?;
    for r in &reports {
        println!(
            "{}: {} gates ({} single-qubit, {} two-qubit), depth {}",
            r.name, r.gates, r.single_qubit, r.two_qubit, r.depth
        );
    }
    Ok(())
}

