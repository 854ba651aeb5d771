//! Gate set for the dense statevector simulator.
//!
//! Conventions, fixed across the crate:
//!
//! * Qubit 0 is the most significant bit of a basis index. On an n-qubit
//!   register, qubit `q` owns bit `n - 1 - q` of the index.
//! * `Rz(t) = exp(-i t Z / 2) = diag(e^{-it/2}, e^{+it/2})`, and likewise
//!   `Rx`/`Ry` with generators X and Y.
//! * `U3(t, p, l) = Rz(p) · Ry(t) · Rz(l)` exactly (no extra global phase).
//! * `ZZ(t) = exp(-i t Z⊗Z / 2)`.
//! * For two-qubit matrices the first listed target supplies the most
//!   significant bit of the 2-bit local index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}

const ZERO: Complex64 = c(0.0, 0.0);
const ONE: Complex64 = c(1.0, 0.0);

fn expi(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// A single gate instance with bound target qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// General single-qubit rotation `Rz(phi) Ry(theta) Rz(lambda)`.
    U3 { qubit: usize, theta: f64, phi: f64, lambda: f64 },
    Rx { qubit: usize, theta: f64 },
    Ry { qubit: usize, theta: f64 },
    Rz { qubit: usize, theta: f64 },
    /// Rotation by `theta` about the equatorial axis at angle `axis` from X:
    /// `exp(-i theta (cos(axis) X + sin(axis) Y) / 2)`.
    Rphi { qubit: usize, axis: f64, theta: f64 },
    H { qubit: usize },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
    /// Two-qubit phase rotation `exp(-i theta Z⊗Z / 2)`.
    Zz { a: usize, b: usize, theta: f64 },
    /// Controlled phase `diag(1, 1, 1, e^{i theta})`.
    CPhase { a: usize, b: usize, theta: f64 },
    Swap { a: usize, b: usize },
    /// Diagonal phase gate on an ordered qubit list. Entry `v` of `angles`
    /// holds the phase angle applied to the local computational state `v`,
    /// where the first listed qubit is the most significant local bit.
    /// Entries are `e^{i angle}`, unit modulus by construction.
    DiagonalPhase { qubits: Vec<usize>, angles: Vec<f64> },
}

impl Gate {
    /// Builds a diagonal gate from explicit complex entries, rejecting any
    /// entry off the unit circle by more than 1e-9.
    pub fn diagonal_from_entries(qubits: Vec<usize>, entries: &[Complex64]) -> Result<Gate> {
        if entries.len() != 1 << qubits.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits.len(),
                actual: entries.len(),
            });
        }
        for e in entries {
            let m = e.norm();
            if (m - 1.0).abs() > 1e-9 {
                return Err(Error::NonUnitaryDiagonal { modulus: m });
            }
        }
        Ok(Gate::DiagonalPhase {
            qubits,
            angles: entries.iter().map(|e| e.arg()).collect(),
        })
    }

    /// Ordered list of qubits the gate acts on.
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::U3 { qubit, .. }
            | Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::Rphi { qubit, .. }
            | Gate::H { qubit } => vec![*qubit],
            Gate::Cz { a, b } | Gate::Zz { a, b, .. } | Gate::CPhase { a, b, .. } | Gate::Swap { a, b } => {
                vec![*a, *b]
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::DiagonalPhase { qubits, .. } => qubits.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::DiagonalPhase { qubits, .. } => qubits.len(),
            g if g.is_single_qubit() => 1,
            _ => 2,
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            Gate::U3 { .. }
                | Gate::Rx { .. }
                | Gate::Ry { .. }
                | Gate::Rz { .. }
                | Gate::Rphi { .. }
                | Gate::H { .. }
        ) || matches!(self, Gate::DiagonalPhase { qubits, .. } if qubits.len() == 1)
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let targets = self.targets();
        for &q in &targets {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        for i in 0..targets.len() {
            for j in i + 1..targets.len() {
                if targets[i] == targets[j] {
                    return Err(Error::DuplicateTargets);
                }
            }
        }
        if let Gate::DiagonalPhase { qubits, angles } = self {
            if qubits.is_empty() {
                return Err(Error::EmptyRegister);
            }
            if angles.len() != 1 << qubits.len() {
                return Err(Error::DimensionMismatch {
                    expected: 1 << qubits.len(),
                    actual: angles.len(),
                });
            }
        }
        Ok(())
    }

    /// The exact inverse gate.
    pub fn inverse(&self) -> Gate {
        match self {
            // (Rz(p) Ry(t) Rz(l))^-1 = Rz(-l) Ry(-t) Rz(-p)
            Gate::U3 { qubit, theta, phi, lambda } => Gate::U3 {
                qubit: *qubit,
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            Gate::Rx { qubit, theta } => Gate::Rx { qubit: *qubit, theta: -theta },
            Gate::Ry { qubit, theta } => Gate::Ry { qubit: *qubit, theta: -theta },
            Gate::Rz { qubit, theta } => Gate::Rz { qubit: *qubit, theta: -theta },
            Gate::Rphi { qubit, axis, theta } => Gate::Rphi { qubit: *qubit, axis: *axis, theta: -theta },
            Gate::H { qubit } => Gate::H { qubit: *qubit },
            Gate::Cz { a, b } => Gate::Cz { a: *a, b: *b },
            Gate::Cnot { control, target } => Gate::Cnot { control: *control, target: *target },
            Gate::Zz { a, b, theta } => Gate::Zz { a: *a, b: *b, theta: -theta },
            Gate::CPhase { a, b, theta } => Gate::CPhase { a: *a, b: *b, theta: -theta },
            Gate::Swap { a, b } => Gate::Swap { a: *a, b: *b },
            Gate::DiagonalPhase { qubits, angles } => Gate::DiagonalPhase {
                qubits: qubits.clone(),
                angles: angles.iter().map(|a| -a).collect(),
            },
        }
    }

    /// 2x2 matrix for single-qubit gates, `None` otherwise.
    pub fn one_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        match *self {
            Gate::U3 { theta, phi, lambda, .. } => {
                let ct = (theta / 2.0).cos();
                let st = (theta / 2.0).sin();
                Some([
                    [ct * expi(-(phi + lambda) / 2.0), -st * expi(-(phi - lambda) / 2.0)],
                    [st * expi((phi - lambda) / 2.0), ct * expi((phi + lambda) / 2.0)],
                ])
            }
            Gate::Rx { theta, .. } => {
                let ct = (theta / 2.0).cos();
                let st = (theta / 2.0).sin();
                Some([[c(ct, 0.0), c(0.0, -st)], [c(0.0, -st), c(ct, 0.0)]])
            }
            Gate::Ry { theta, .. } => {
                let ct = (theta / 2.0).cos();
                let st = (theta / 2.0).sin();
                Some([[c(ct, 0.0), c(-st, 0.0)], [c(st, 0.0), c(ct, 0.0)]])
            }
            Gate::Rz { theta, .. } => Some([[expi(-theta / 2.0), ZERO], [ZERO, expi(theta / 2.0)]]),
            Gate::Rphi { axis, theta, .. } => {
                let ct = (theta / 2.0).cos();
                let st = (theta / 2.0).sin();
                // exp(-i t/2 (cos a X + sin a Y)); off-diagonals pick up e^{∓ia}.
                Some([
                    [c(ct, 0.0), c(0.0, -st) * expi(-axis)],
                    [c(0.0, -st) * expi(axis), c(ct, 0.0)],
                ])
            }
            Gate::H { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Some([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]])
            }
            Gate::DiagonalPhase { ref qubits, ref angles } if qubits.len() == 1 => {
                Some([[expi(angles[0]), ZERO], [ZERO, expi(angles[1])]])
            }
            _ => None,
        }
    }

    /// 4x4 matrix for two-qubit gates in `targets()` order, `None` otherwise.
    pub fn two_qubit_matrix(&self) -> Option<[[Complex64; 4]; 4]> {
        let diag4 = |d: [Complex64; 4]| {
            let mut m = [[ZERO; 4]; 4];
            for (i, v) in d.into_iter().enumerate() {
                m[i][i] = v;
            }
            m
        };
        match *self {
            Gate::Cz { .. } => Some(diag4([ONE, ONE, ONE, c(-1.0, 0.0)])),
            Gate::CPhase { theta, .. } => Some(diag4([ONE, ONE, ONE, expi(theta)])),
            Gate::Zz { theta, .. } => {
                let m = expi(-theta / 2.0);
                let p = expi(theta / 2.0);
                Some(diag4([m, p, p, m]))
            }
            Gate::Cnot { .. } => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
                Some(m)
            }
            Gate::Swap { .. } => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][2] = ONE;
                m[2][1] = ONE;
                m[3][3] = ONE;
                Some(m)
            }
            Gate::DiagonalPhase { ref qubits, ref angles } if qubits.len() == 2 => {
                Some(diag4([expi(angles[0]), expi(angles[1]), expi(angles[2]), expi(angles[3])]))
            }
            _ => None,
        }
    }
}
