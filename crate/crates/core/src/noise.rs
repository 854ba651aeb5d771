//! Coherent-error injection and artifact quantification.
//!
//! Errors are extra unitary gates appended after single-qubit gates, either
//! a fixed rotation on chosen qubits or fresh small U3 rotations on every
//! qubit drawn from a seeded stream. Because the errors are unitary the
//! statevector backend needs no channel machinery, and a zero-angle model
//! reproduces the noiseless state bit for bit.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hydro::{FlowFields, Grid2D};
use crate::rng::rng_from_seed;

/// The unitary inserted as an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ErrorGate {
    Rx { theta: f64 },
    Ry { theta: f64 },
    Rz { theta: f64 },
    U3 { theta: f64, phi: f64, lambda: f64 },
}

impl ErrorGate {
    pub fn to_gate(self, qubit: usize) -> Gate {
        match self {
            ErrorGate::Rx { theta } => Gate::Rx { qubit, theta },
            ErrorGate::Ry { theta } => Gate::Ry { qubit, theta },
            ErrorGate::Rz { theta } => Gate::Rz { qubit, theta },
            ErrorGate::U3 { theta, phi, lambda } => Gate::U3 { qubit, theta, phi, lambda },
        }
    }

    fn angles_finite(self) -> bool {
        match self {
            ErrorGate::Rx { theta } | ErrorGate::Ry { theta } | ErrorGate::Rz { theta } => {
                theta.is_finite()
            }
            ErrorGate::U3 { theta, phi, lambda } => {
                theta.is_finite() && phi.is_finite() && lambda.is_finite()
            }
        }
    }
}

/// How errors are attached to a circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ErrorModel {
    /// The same gate after every single-qubit gate on the listed qubits.
    FixedSingleQubit { targets: Vec<usize>, gate: ErrorGate },
    /// A fresh `U3` with each angle uniform on `[-amplitude, amplitude]`
    /// after every single-qubit gate, drawn in gate order from `seed`.
    RandomAllQubits { amplitude: f64, seed: u64 },
}

impl ErrorModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ErrorModel::FixedSingleQubit { targets, gate } => {
                if targets.is_empty() {
                    return Err(Error::InvalidParameter(
                        "fixed error model needs at least one target qubit".into(),
                    ));
                }
                if !gate.angles_finite() {
                    return Err(Error::InvalidParameter("error gate angles must be finite".into()));
                }
                Ok(())
            }
            ErrorModel::RandomAllQubits { amplitude, .. } => {
                if !amplitude.is_finite() || *amplitude < 0.0 {
                    return Err(Error::InvalidParameter(
                        "random error amplitude must be finite and non-negative".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Appends the model's error gate after every single-qubit gate it targets.
/// Multi-qubit gates pass through untouched.
pub fn inject(circuit: &Circuit, model: &ErrorModel) -> Result<Circuit> {
    model.validate()?;
    let mut out = Circuit::new(circuit.num_qubits(), circuit.name());
    out.add_global_phase(circuit.global_phase());
    let mut rng = match model {
        ErrorModel::RandomAllQubits { seed, .. } => Some(rng_from_seed(*seed)),
        ErrorModel::FixedSingleQubit { .. } => None,
    };
    for gate in circuit.gates() {
        out.push(gate.clone())?;
        if !gate.is_single_qubit() {
            continue;
        }
        let qubit = gate.targets()[0];
        match model {
            ErrorModel::FixedSingleQubit { targets, gate: err } => {
                if targets.contains(&qubit) {
                    out.push(err.to_gate(qubit))?;
                }
            }
            ErrorModel::RandomAllQubits { amplitude, .. } => {
                let rng = rng.as_mut().expect("random mode has a generator");
                let a = *amplitude;
                let mut draw = || {
                    if a == 0.0 { 0.0 } else { rng.gen_range(-a..=a) }
                };
                let err = ErrorGate::U3 { theta: draw(), phi: draw(), lambda: draw() };
                out.push(err.to_gate(qubit))?;
            }
        }
    }
    Ok(out)
}

/// Infidelity figures for a single-qubit error unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    /// `1 - (|Tr E|^2 / 2 + 1) / 3`, the average gate infidelity.
    pub average_infidelity: f64,
    /// `1 - |Tr E|^2 / 4`, the process (entanglement) infidelity.
    pub process_infidelity: f64,
}

/// Both standard infidelity measures of a single-qubit gate against the
/// identity. Gates are unitary by construction, so only arity can fail.
pub fn equivalent_error_rate(gate: &Gate) -> Result<ErrorRates> {
    let m = gate
        .one_qubit_matrix()
        .ok_or_else(|| Error::InvalidParameter("error rate needs a single-qubit gate".into()))?;
    let trace = m[0][0] + m[1][1];
    let t2 = trace.norm_sqr();
    Ok(ErrorRates {
        average_infidelity: 1.0 - (t2 / 2.0 + 1.0) / 3.0,
        process_infidelity: 1.0 - t2 / 4.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn from_name(name: &str) -> Result<Axis> {
        match name {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            other => Err(Error::Parse(format!("unknown axis {other:?} (expected \"x\" or \"y\")"))),
        }
    }
}

/// Dominant non-DC spatial frequency of a field's axis-averaged profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripeSpectrum {
    /// Mode number in cycles per domain, `1..=N/2`; 0 for a constant profile.
    pub frequency: usize,
    /// That mode's share of the non-DC power (conjugate pairs folded).
    pub power_fraction: f64,
}

/// Averages the field along the other axis and takes a plain DFT of the
/// resulting profile; profiles here have at most 64 points, so no transform
/// machinery is warranted.
pub fn stripe_spectrum(field: &[f64], grid: Grid2D, axis: Axis) -> Result<StripeSpectrum> {
    if field.len() != grid.num_points() {
        return Err(Error::DimensionMismatch {
            expected: grid.num_points(),
            actual: field.len(),
        });
    }
    let n = match axis {
        Axis::X => grid.nx_points(),
        Axis::Y => grid.ny_points(),
    };
    let other = grid.num_points() / n;
    let mut profile = vec![0.0; n];
    for l in 0..grid.ny_points() {
        for k in 0..grid.nx_points() {
            let bin = match axis {
                Axis::X => k,
                Axis::Y => l,
            };
            profile[bin] += field[grid.flat_index(k, l)];
        }
    }
    for v in &mut profile {
        *v /= other as f64;
    }

    let mut power = vec![0.0; n];
    for (m, slot) in power.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &p) in profile.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (m * k) as f64 / n as f64;
            acc += p * Complex64::from_polar(1.0, angle);
        }
        *slot = acc.norm_sqr();
    }
    let total: f64 = power[1..].iter().sum();
    // A profile that is constant up to rounding has all its power at DC.
    if total <= 1e-15 * (total + power[0]) {
        return Ok(StripeSpectrum { frequency: 0, power_fraction: 0.0 });
    }
    let mut best = (0usize, 0.0f64);
    for m in 1..=n / 2 {
        let folded = if m != n - m { power[m] + power[n - m] } else { power[m] };
        if folded > best.1 {
            best = (m, folded);
        }
    }
    Ok(StripeSpectrum { frequency: best.0, power_fraction: best.1 / total })
}

/// Pearson correlation over all points.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), actual: b.len() });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / (va.sqrt() * vb.sqrt()))
}

/// Correlations of the measured density and momentum fields against a
/// reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub r_rho: f64,
    pub r_jx: f64,
    pub r_jy: f64,
}

pub fn correlation_report(measured: &FlowFields, exact: &FlowFields) -> Result<CorrelationReport> {
    if measured.grid != exact.grid {
        return Err(Error::DimensionMismatch {
            expected: exact.rho.len(),
            actual: measured.rho.len(),
        });
    }
    Ok(CorrelationReport {
        r_rho: pearson(&measured.rho, &exact.rho)?,
        r_jx: pearson(&measured.jx, &exact.jx)?,
        r_jy: pearson(&measured.jy, &exact.jy)?,
    })
}
