//! Lowering to the native gate set {U3, CZ} and routing onto restricted
//! couplings.
//!
//! Every lowering identity used here is exact, and the global phase each
//! one sheds is accumulated onto the output circuit, so the transpiled
//! unitary equals the input unitary to machine precision, phase included.
//! Single-qubit gates are rewritten one for one and never merged: a
//! circuit already expressed in native gates comes back with the same
//! gate count.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

use super::prep::{multiplexed_rotation, RotationAxis};

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

/// Hardware coupling graph. Qubit labels are the circuit's own indices;
/// routing never leaves a permutation behind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "qubits")]
pub enum Topology {
    /// Open chain 0-1-...-(n-1).
    Line(usize),
    /// Two parallel rows of n/2 with rung couplings: qubit q in the top
    /// row couples to q+n/2 below it. Requires an even qubit count.
    Ladder(usize),
    /// All-to-all coupling.
    Complete(usize),
}

impl Topology {
    pub fn from_name(name: &str, num_qubits: usize) -> Result<Topology> {
        match name {
            "line" => Ok(Topology::Line(num_qubits)),
            "ladder" => Ok(Topology::Ladder(num_qubits)),
            "complete" => Ok(Topology::Complete(num_qubits)),
            other => Err(Error::InvalidParameter(format!("unknown topology '{other}'"))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match *self {
            Topology::Line(n) | Topology::Ladder(n) | Topology::Complete(n) => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits();
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        if let Topology::Ladder(n) = *self {
            if n % 2 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "ladder topology needs an even qubit count, got {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.num_qubits() || b >= self.num_qubits() {
            return false;
        }
        match *self {
            Topology::Line(_) => a.abs_diff(b) == 1,
            Topology::Complete(_) => true,
            Topology::Ladder(n) => {
                let w = n / 2;
                let same_row = (a < w) == (b < w);
                if same_row {
                    a.abs_diff(b) == 1
                } else {
                    a.abs_diff(b) == w
                }
            }
        }
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        (0..self.num_qubits()).filter(|&r| self.are_adjacent(q, r)).collect()
    }

    /// Shortest path from `a` to `b` including both endpoints (BFS).
    pub fn path(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        let n = self.num_qubits();
        if a >= n || b >= n {
            return Err(Error::QubitOutOfRange { qubit: a.max(b), num_qubits: n });
        }
        if a == b {
            return Ok(vec![a]);
        }
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(q) = queue.pop_front() {
            for r in self.neighbors(q) {
                if prev[r] == usize::MAX {
                    prev[r] = q;
                    if r == b {
                        let mut path = vec![b];
                        let mut cur = b;
                        while cur != a {
                            cur = prev[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return Ok(path);
                    }
                    queue.push_back(r);
                }
            }
        }
        Err(Error::Unroutable(format!("no path between qubits {a} and {b}")))
    }
}

/// Summary counters for a circuit, in a form the command line tools can
/// serialize directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitReport {
    pub name: String,
    pub num_qubits: usize,
    pub gates: usize,
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub multi_qubit: usize,
    pub depth: usize,
    pub aligned_depth: usize,
    pub global_phase: f64,
}

pub fn circuit_report(circ: &Circuit) -> CircuitReport {
    let counts = circ.gate_counts();
    CircuitReport {
        name: circ.name().to_string(),
        num_qubits: circ.num_qubits(),
        gates: circ.len(),
        single_qubit: counts.single_qubit,
        two_qubit: counts.two_qubit,
        multi_qubit: counts.multi_qubit,
        depth: circ.depth(),
        aligned_depth: circ.aligned_depth(),
        global_phase: circ.global_phase(),
    }
}

/// Rewrites `circ` over {U3, CZ}, then (if a topology is given) routes
/// each CZ whose endpoints are not coupled by swapping one endpoint along
/// a shortest path and back again afterwards. The output acts on the same
/// qubit labels as the input.
pub fn transpile(circ: &Circuit, topology: Option<&Topology>) -> Result<Circuit> {
    if let Some(top) = topology {
        top.validate()?;
        if top.num_qubits() != circ.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: circ.num_qubits(),
                actual: top.num_qubits(),
            });
        }
    }

    let mut lowered = Vec::new();
    let mut phase = circ.global_phase();
    for gate in circ.gates() {
        lower_into(gate, &mut lowered, &mut phase);
    }

    let mut out = Circuit::new(circ.num_qubits(), format!("{}_native", circ.name()));
    out.add_global_phase(phase);
    match topology {
        None => out.extend(lowered)?,
        Some(top) => {
            for gate in lowered {
                match gate {
                    Gate::Cz { a, b } if !top.are_adjacent(a, b) => {
                        route_cz(top, a, b, &mut out)?;
                    }
                    g => out.push(g)?,
                }
            }
        }
    }
    Ok(out)
}

/// Swap `a` down the path until adjacent to `b`, apply the CZ, swap back.
fn route_cz(top: &Topology, a: usize, b: usize, out: &mut Circuit) -> Result<()> {
    let path = top.path(a, b)?;
    let hops = &path[..path.len() - 1];
    let mut phase = 0.0;
    let mut gates = Vec::new();
    for w in hops.windows(2) {
        lower_into(&Gate::Swap { a: w[0], b: w[1] }, &mut gates, &mut phase);
    }
    gates.push(Gate::Cz { a: hops[hops.len() - 1], b });
    for w in hops.windows(2).rev() {
        lower_into(&Gate::Swap { a: w[0], b: w[1] }, &mut gates, &mut phase);
    }
    out.add_global_phase(phase);
    out.extend(gates)
}

/// Emits the native-gate expansion of one gate, adding any global phase
/// the identity sheds to `phase`. Every branch is exact.
fn lower_into(gate: &Gate, out: &mut Vec<Gate>, phase: &mut f64) {
    match gate {
        Gate::U3 { .. } | Gate::Cz { .. } => out.push(gate.clone()),
        Gate::Rz { qubit, theta } => {
            out.push(Gate::U3 { qubit: *qubit, theta: 0.0, phi: *theta, lambda: 0.0 });
        }
        Gate::Ry { qubit, theta } => {
            out.push(Gate::U3 { qubit: *qubit, theta: *theta, phi: 0.0, lambda: 0.0 });
        }
        Gate::Rx { qubit, theta } => {
            out.push(Gate::U3 { qubit: *qubit, theta: *theta, phi: -FRAC_PI_2, lambda: FRAC_PI_2 });
        }
        Gate::Rphi { qubit, axis, theta } => {
            // Rotation about cos(axis) X + sin(axis) Y is an Rx conjugated
            // by Rz(axis); folding the Rz pair into U3 angles is exact.
            out.push(Gate::U3 {
                qubit: *qubit,
                theta: *theta,
                phi: axis - FRAC_PI_2,
                lambda: FRAC_PI_2 - axis,
            });
        }
        Gate::H { qubit } => {
            // U3(pi/2, 0, pi) = -i H.
            out.push(Gate::U3 { qubit: *qubit, theta: FRAC_PI_2, phi: 0.0, lambda: PI });
            *phase += FRAC_PI_2;
        }
        Gate::Cnot { control, target } => {
            lower_into(&Gate::H { qubit: *target }, out, phase);
            out.push(Gate::Cz { a: *control, b: *target });
            lower_into(&Gate::H { qubit: *target }, out, phase);
        }
        Gate::Zz { a, b, theta } => {
            // ZZ(t) = CNOT · Rz_target(t) · CNOT, no residual phase.
            lower_into(&Gate::Cnot { control: *a, target: *b }, out, phase);
            lower_into(&Gate::Rz { qubit: *b, theta: *theta }, out, phase);
            lower_into(&Gate::Cnot { control: *a, target: *b }, out, phase);
        }
        Gate::CPhase { a, b, theta } => {
            // CP(t) = e^{it/4} Rz_a(t/2) Rz_b(t/2) ZZ(-t/2).
            *phase += theta / 4.0;
            lower_into(&Gate::Rz { qubit: *a, theta: theta / 2.0 }, out, phase);
            lower_into(&Gate::Rz { qubit: *b, theta: theta / 2.0 }, out, phase);
            lower_into(&Gate::Zz { a: *a, b: *b, theta: -theta / 2.0 }, out, phase);
        }
        Gate::Swap { a, b } => {
            lower_into(&Gate::Cnot { control: *a, target: *b }, out, phase);
            lower_into(&Gate::Cnot { control: *b, target: *a }, out, phase);
            lower_into(&Gate::Cnot { control: *a, target: *b }, out, phase);
        }
        Gate::DiagonalPhase { qubits, angles } => {
            lower_diagonal(qubits, angles, out, phase);
        }
    }
}

/// diag(e^{i phi_j}) over k qubits splits into a multiplexed Rz of the
/// pairwise phase differences on the last qubit plus the same kind of
/// diagonal of pairwise means on the rest; the recursion bottoms out in a
/// bare global phase.
fn lower_diagonal(qubits: &[usize], angles: &[f64], out: &mut Vec<Gate>, phase: &mut f64) {
    if qubits.is_empty() {
        *phase += angles[0];
        return;
    }
    let pairs = angles.len() / 2;
    let mut means = Vec::with_capacity(pairs);
    let mut deltas = Vec::with_capacity(pairs);
    for u in 0..pairs {
        means.push((angles[2 * u] + angles[2 * u + 1]) / 2.0);
        deltas.push(angles[2 * u + 1] - angles[2 * u]);
    }
    let (controls, target) = (&qubits[..qubits.len() - 1], qubits[qubits.len() - 1]);
    for g in multiplexed_rotation(RotationAxis::Z, controls, target, &deltas) {
        lower_into(&g, out, phase);
    }
    lower_diagonal(controls, &means, out, phase);
}
