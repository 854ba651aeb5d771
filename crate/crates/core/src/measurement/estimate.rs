//! Shot-based estimation of Pauli expectations and field reconstruction.
//!
//! Each basis is measured independently: the state is rotated so the basis
//! letters become Z (H for X, S-dagger then H for Y), sampled in the
//! computational basis, and every covered string's expectation is the signed
//! parity average over its non-I positions. Sampling seeds derive from
//! (master seed, basis index, repeat index), so threaded and serial runs
//! produce identical results.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hydro::{self, DifferenceScheme, FlowFields, Grid2D};
use crate::measurement::grouping::{parity_mask, MeasurementPlan};
use crate::measurement::observables::{momentum_observable, pauli_decompose};
use crate::pauli::PauliString;
use crate::rng::derive_seed;
use crate::state::QuantumState;

/// One string's sampled expectation: mean and sample standard deviation
/// over the repeats.
#[derive(Debug, Clone, PartialEq)]
pub struct StringEstimate {
    pub label: String,
    pub basis: String,
    pub estimate: f64,
    pub std_dev: f64,
}

/// Everything measured in one estimation pass.
#[derive(Debug, Clone)]
pub struct EstimateOutput {
    pub shots: u64,
    pub repeats: usize,
    pub seed: u64,
    pub bases: Vec<String>,
    /// Per-basis, per-repeat index count tables.
    pub counts: Vec<Vec<Vec<u64>>>,
    pub strings: Vec<StringEstimate>,
}

impl EstimateOutput {
    /// Mean estimate per string label.
    pub fn string_means(&self) -> BTreeMap<String, f64> {
        self.strings.iter().map(|s| (s.label.clone(), s.estimate)).collect()
    }

    /// Count tables for the all-Z basis, the one density reads from.
    pub fn z_basis_counts(&self) -> Result<&Vec<Vec<u64>>> {
        let z = "Z".repeat(self.bases.first().map_or(0, |b| b.len()));
        self.bases
            .iter()
            .position(|b| *b == z)
            .map(|i| &self.counts[i])
            .ok_or(Error::MissingBasis(z))
    }

    /// Rows of `basis,string,estimate,stderr`.
    pub fn to_results_csv(&self) -> String {
        let mut out = String::from("basis,string,estimate,stderr\n");
        for s in &self.strings {
            out.push_str(&format!("{},{},{},{}\n", s.basis, s.label, s.estimate, s.std_dev));
        }
        out
    }

    /// String expectations recomputed per repeat from the stored count
    /// tables, one map per repeat. The mean over repeats of each label
    /// equals its [`StringEstimate::estimate`].
    pub fn repeat_string_values(&self) -> Result<Vec<BTreeMap<String, f64>>> {
        let basis_index: BTreeMap<&str, usize> =
            self.bases.iter().enumerate().map(|(i, b)| (b.as_str(), i)).collect();
        let mut out = vec![BTreeMap::new(); self.repeats];
        for s in &self.strings {
            let &b = basis_index
                .get(s.basis.as_str())
                .ok_or_else(|| Error::MissingBasis(s.basis.clone()))?;
            let mask = parity_mask(s.basis.len(), &s.label);
            for (r, table) in self.counts[b].iter().enumerate() {
                let shots: u64 = table.iter().sum();
                out[r].insert(s.label.clone(), parity_average(table, mask, shots));
            }
        }
        Ok(out)
    }
}

/// Samples every basis of the plan `repeats` times with `shots` shots each.
pub fn estimate(
    state: &QuantumState,
    plan: &MeasurementPlan,
    shots: u64,
    repeats: usize,
    seed: u64,
) -> Result<EstimateOutput> {
    if plan.num_qubits != state.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.num_qubits(),
            actual: plan.num_qubits,
        });
    }
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be positive".into()));
    }

    let mut by_basis: Vec<Vec<&str>> = vec![Vec::new(); plan.bases.len()];
    for (label, &b) in &plan.assignments {
        by_basis[b].push(label);
    }

    let per_basis: Vec<(Vec<Vec<u64>>, Vec<StringEstimate>)> = (0..plan.bases.len())
        .into_par_iter()
        .map(|b| -> Result<(Vec<Vec<u64>>, Vec<StringEstimate>)> {
            let basis = &plan.bases[b];
            let rotated = rotate_into_basis(state, basis)?;
            let mut tables = Vec::with_capacity(repeats);
            for r in 0..repeats {
                let s = derive_seed(seed, &[b as u64, r as u64]);
                tables.push(rotated.sample_index_counts(shots, s)?);
            }
            let estimates = by_basis[b]
                .iter()
                .map(|label| {
                    let mask = parity_mask(plan.num_qubits, label);
                    let per_repeat: Vec<f64> =
                        tables.iter().map(|t| parity_average(t, mask, shots)).collect();
                    let (mean, std_dev) = mean_and_std(&per_repeat);
                    StringEstimate {
                        label: label.to_string(),
                        basis: basis.clone(),
                        estimate: mean,
                        std_dev,
                    }
                })
                .collect();
            Ok((tables, estimates))
        })
        .collect::<Result<_>>()?;

    let mut counts = Vec::with_capacity(per_basis.len());
    let mut strings = Vec::new();
    for (tables, estimates) in per_basis {
        counts.push(tables);
        strings.extend(estimates);
    }
    Ok(EstimateOutput { shots, repeats, seed, bases: plan.bases.clone(), counts, strings })
}

fn rotate_into_basis(state: &QuantumState, basis: &str) -> Result<QuantumState> {
    let mut rotated = state.clone();
    for (q, ch) in basis.chars().enumerate() {
        match ch {
            'Z' => {}
            'X' => rotated.apply_gate(&Gate::H { qubit: q })?,
            'Y' => {
                rotated.apply_gate(&Gate::Rz { qubit: q, theta: -FRAC_PI_2 })?;
                rotated.apply_gate(&Gate::H { qubit: q })?;
            }
            other => {
                return Err(Error::Parse(format!("invalid basis letter {other:?}")));
            }
        }
    }
    Ok(rotated)
}

fn parity_average(table: &[u64], mask: usize, shots: u64) -> f64 {
    let mut acc = 0i64;
    for (i, &c) in table.iter().enumerate() {
        let c = c as i64;
        if (i & mask).count_ones() & 1 == 1 {
            acc -= c;
        } else {
            acc += c;
        }
    }
    acc as f64 / shots as f64
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Exact expectations for every string label in the plan, the infinite-shot
/// reference path.
pub fn exact_string_values(
    state: &QuantumState,
    plan: &MeasurementPlan,
) -> Result<BTreeMap<String, f64>> {
    plan.assignments
        .keys()
        .map(|label| {
            let p = PauliString::parse(label, 1.0)?;
            Ok((label.clone(), state.expectation_pauli(&p)?))
        })
        .collect()
}

/// String decompositions of both momentum components at every grid point,
/// flat-indexed. Building this is the expensive half of assembling fields
/// from string values, so sweeps compute it once and reuse it.
pub fn momentum_string_table(
    grid: Grid2D,
    scheme: DifferenceScheme,
) -> Result<Vec<(Vec<PauliString>, Vec<PauliString>)>> {
    let mut table = Vec::with_capacity(grid.num_points());
    for l in 0..grid.ny_points() {
        for k in 0..grid.nx_points() {
            let (ox, oy) = momentum_observable(grid, k, l, scheme)?;
            table.push((pauli_decompose(&ox), pauli_decompose(&oy)));
        }
    }
    Ok(table)
}

/// Per-point momentum expectations assembled from a precomputed string
/// table, in encoded (unit-norm state) units.
pub fn momentum_from_table(
    table: &[(Vec<PauliString>, Vec<PauliString>)],
    values: &BTreeMap<String, f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut jx = Vec::with_capacity(table.len());
    let mut jy = Vec::with_capacity(table.len());
    for (sx, sy) in table {
        jx.push(combine(sx, values)?);
        jy.push(combine(sy, values)?);
    }
    Ok((jx, jy))
}

/// Per-point momentum expectations assembled from string values,
/// in encoded (unit-norm state) units.
pub fn momentum_from_strings(
    grid: Grid2D,
    scheme: DifferenceScheme,
    values: &BTreeMap<String, f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    momentum_from_table(&momentum_string_table(grid, scheme)?, values)
}

fn combine(strings: &[PauliString], values: &BTreeMap<String, f64>) -> Result<f64> {
    let mut acc = 0.0;
    for s in strings {
        if s.is_identity() {
            acc += s.coefficient;
            continue;
        }
        let v = values
            .get(&s.label())
            .ok_or_else(|| Error::UncoveredString(s.label()))?;
        acc += s.coefficient * v;
    }
    Ok(acc)
}

/// Density per grid point from Z-basis count tables, averaged over repeats,
/// in encoded units (estimates of squared amplitude moduli).
pub fn density_from_counts(grid: Grid2D, tables: &[Vec<u64>]) -> Result<Vec<f64>> {
    if tables.is_empty() {
        return Err(Error::MissingBasis("Z".repeat(grid.num_qubits())));
    }
    let dim = grid.num_points();
    let mut rho = vec![0.0; dim];
    for table in tables {
        if table.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: table.len() });
        }
        let total: u64 = table.iter().sum();
        for (i, &c) in table.iter().enumerate() {
            rho[i] += c as f64 / total as f64;
        }
    }
    for v in &mut rho {
        *v /= tables.len() as f64;
    }
    Ok(rho)
}

/// One wavefunction component's measured moments, in encoded units.
#[derive(Debug, Clone)]
pub struct ComponentEstimates {
    pub density: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
}

/// Assembles physical flow fields from per-component measured moments.
///
/// Encoded units scale back by each component's stored norm squared; the
/// velocity floor and vorticity stencil come from the classical pipeline, so
/// exact inputs reproduce it identically.
pub fn reconstruct_fields(
    grid: Grid2D,
    components: &[ComponentEstimates],
    norms: &[f64],
) -> Result<FlowFields> {
    if components.is_empty() || components.len() != norms.len() {
        return Err(Error::DimensionMismatch {
            expected: norms.len(),
            actual: components.len(),
        });
    }
    let dim = grid.num_points();
    let mut rho = vec![0.0; dim];
    let mut jx = vec![0.0; dim];
    let mut jy = vec![0.0; dim];
    for (c, norm) in components.iter().zip(norms) {
        if c.density.len() != dim || c.jx.len() != dim || c.jy.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: c.density.len() });
        }
        let scale = norm * norm;
        for i in 0..dim {
            rho[i] += scale * c.density[i];
            jx[i] += scale * c.jx[i];
            jy[i] += scale * c.jy[i];
        }
    }
    let (ux, uy, velocity_mask) = hydro::velocity(&rho, &jx, &jy);
    let omega = hydro::vorticity(&ux, &uy, grid);
    Ok(FlowFields { grid, rho, jx, jy, ux, uy, omega, velocity_mask })
}
