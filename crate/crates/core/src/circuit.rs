//! Ordered gate sequences with metadata.
//!
//! A [`Circuit`] is a validated list of [`Gate`]s on a fixed-width register
//! plus a recorded global phase. Builders that drop a physically irrelevant
//! phase (diagonal evolution constants, gate decompositions) accumulate it in
//! `global_phase` so the represented unitary is always
//! `e^{i global_phase} · (product of gates)`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::Gate;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateCounts {
    pub single_qubit: usize,
    pub two_qubit: usize,
    /// Gates on three or more qubits (wide diagonal phases before lowering).
    pub multi_qubit: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.single_qubit + self.two_qubit + self.multi_qubit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    name: String,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(num_qubits: usize, name: impl Into<String>) -> Circuit {
        Circuit {
            num_qubits,
            name: name.into(),
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends another circuit on the same register, folding its phase in.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        self.extend(other.gates.iter().cloned())?;
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// The exact inverse circuit: reversed gate order, inverted gates.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            name: format!("{}_inv", self.name),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            global_phase: -self.global_phase,
        }
    }

    /// Re-targets the circuit onto a wider register. `map[i]` is the new
    /// index of old qubit `i`; entries must be distinct and in range.
    pub fn remapped(&self, map: &[usize], new_num_qubits: usize, name: impl Into<String>) -> Result<Circuit> {
        if map.len() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: map.len(),
            });
        }
        let remap = |q: usize| map[q];
        let mut out = Circuit::new(new_num_qubits, name);
        out.global_phase = self.global_phase;
        for g in &self.gates {
            let g2 = match g.clone() {
                Gate::U3 { qubit, theta, phi, lambda } => Gate::U3 { qubit: remap(qubit), theta, phi, lambda },
                Gate::Rx { qubit, theta } => Gate::Rx { qubit: remap(qubit), theta },
                Gate::Ry { qubit, theta } => Gate::Ry { qubit: remap(qubit), theta },
                Gate::Rz { qubit, theta } => Gate::Rz { qubit: remap(qubit), theta },
                Gate::Rphi { qubit, axis, theta } => Gate::Rphi { qubit: remap(qubit), axis, theta },
                Gate::H { qubit } => Gate::H { qubit: remap(qubit) },
                Gate::Cz { a, b } => Gate::Cz { a: remap(a), b: remap(b) },
                Gate::Cnot { control, target } => Gate::Cnot { control: remap(control), target: remap(target) },
                Gate::Zz { a, b, theta } => Gate::Zz { a: remap(a), b: remap(b), theta },
                Gate::CPhase { a, b, theta } => Gate::CPhase { a: remap(a), b: remap(b), theta },
                Gate::Swap { a, b } => Gate::Swap { a: remap(a), b: remap(b) },
                Gate::DiagonalPhase { qubits, angles } => Gate::DiagonalPhase {
                    qubits: qubits.into_iter().map(remap).collect(),
                    angles,
                },
            };
            out.push(g2)?;
        }
        Ok(out)
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            match g.arity() {
                1 => counts.single_qubit += 1,
                2 => counts.two_qubit += 1,
                _ => counts.multi_qubit += 1,
            }
        }
        counts
    }

    /// Minimum number of layers such that gates within a layer act on
    /// disjoint qubits, preserving program order per qubit.
    pub fn depth(&self) -> usize {
        let mut next_free = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.targets().iter().map(|&q| next_free[q]).max().unwrap_or(0);
            for q in g.targets() {
                next_free[q] = layer + 1;
            }
            depth = depth.max(layer + 1);
        }
        depth
    }

    /// Layer count when single- and two-qubit gates may not share a layer,
    /// mirroring hardware schedules that stagger the two gate species.
    /// Gates pack greedily, in order, into the earliest compatible layer.
    pub fn aligned_depth(&self) -> usize {
        #[derive(PartialEq, Clone, Copy)]
        enum Kind {
            Single,
            Multi,
        }
        let mut layer_kind: Vec<Kind> = Vec::new();
        let mut layer_used: Vec<u128> = Vec::new();
        let mut earliest = vec![0usize; self.num_qubits];
        for g in &self.gates {
            let kind = if g.arity() == 1 { Kind::Single } else { Kind::Multi };
            let mask: u128 = g.targets().iter().fold(0, |m, &q| m | (1u128 << q));
            let from = g.targets().iter().map(|&q| earliest[q]).max().unwrap_or(0);
            let mut placed = None;
            for l in from..layer_kind.len() {
                if layer_kind[l] == kind && layer_used[l] & mask == 0 {
                    placed = Some(l);
                    break;
                }
            }
            let l = placed.unwrap_or_else(|| {
                layer_kind.push(kind);
                layer_used.push(0);
                layer_kind.len() - 1
            });
            layer_used[l] |= mask;
            for q in g.targets() {
                earliest[q] = l + 1;
            }
        }
        layer_kind.len()
    }

    /// Dense unitary of the whole circuit, including the recorded global
    /// phase. Intended for verification on small registers; cost is 4^n.
    pub fn unitary_matrix(&self) -> Result<Vec<Vec<Complex64>>> {
        use crate::state::QuantumState;
        let dim = 1usize << self.num_qubits;
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[j] = Complex64::new(1.0, 0.0);
            let mut st = QuantumState::from_amplitudes_unchecked(self.num_qubits, amps);
            st.apply_circuit(self)?;
            cols.push(st.into_amplitudes());
        }
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                m[i][j] = col[i];
            }
        }
        Ok(m)
    }

    /// Serializes to the line format `KIND targets... params...`, one gate
    /// per line, preceded by `QUBITS`, `NAME`, and `PHASE` headers. Floats
    /// print in shortest round-trip form, so parse(print(c)) == c.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "QUBITS {}", self.num_qubits);
        let _ = writeln!(s, "NAME {}", self.name);
        let _ = writeln!(s, "PHASE {}", self.global_phase);
        for g in &self.gates {
            match g {
                Gate::U3 { qubit, theta, phi, lambda } => {
                    let _ = writeln!(s, "U3 {qubit} {theta} {phi} {lambda}");
                }
                Gate::Rx { qubit, theta } => {
                    let _ = writeln!(s, "RX {qubit} {theta}");
                }
                Gate::Ry { qubit, theta } => {
                    let _ = writeln!(s, "RY {qubit} {theta}");
                }
                Gate::Rz { qubit, theta } => {
                    let _ = writeln!(s, "RZ {qubit} {theta}");
                }
                Gate::Rphi { qubit, axis, theta } => {
                    let _ = writeln!(s, "RPHI {qubit} {axis} {theta}");
                }
                Gate::H { qubit } => {
                    let _ = writeln!(s, "H {qubit}");
                }
                Gate::Cz { a, b } => {
                    let _ = writeln!(s, "CZ {a} {b}");
                }
                Gate::Cnot { control, target } => {
                    let _ = writeln!(s, "CNOT {control} {target}");
                }
                Gate::Zz { a, b, theta } => {
                    let _ = writeln!(s, "ZZ {a} {b} {theta}");
                }
                Gate::CPhase { a, b, theta } => {
                    let _ = writeln!(s, "CP {a} {b} {theta}");
                }
                Gate::Swap { a, b } => {
                    let _ = writeln!(s, "SWAP {a} {b}");
                }
                Gate::DiagonalPhase { qubits, angles } => {
                    let _ = write!(s, "DIAG {}", qubits.len());
                    for q in qubits {
                        let _ = write!(s, " {q}");
                    }
                    for a in angles {
                        let _ = write!(s, " {a}");
                    }
                    let _ = writeln!(s);
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let parse_err = |msg: &str| Error::Parse(msg.to_string());
        let header = lines.next().ok_or_else(|| parse_err("empty circuit text"))?;
        let num_qubits: usize = header
            .strip_prefix("QUBITS ")
            .ok_or_else(|| parse_err("expected QUBITS header"))?
            .trim()
            .parse()
            .map_err(|_| parse_err("bad QUBITS value"))?;
        let mut circuit = Circuit::new(num_qubits, "restored");
        let mut rest: Vec<&str> = lines.collect();
        let mut idx = 0;
        if let Some(line) = rest.first() {
            if let Some(name) = line.strip_prefix("NAME ") {
                circuit.name = name.trim().to_string();
                idx = 1;
            }
        }
        if let Some(line) = rest.get(idx) {
            if let Some(p) = line.strip_prefix("PHASE ") {
                circuit.global_phase = p.trim().parse().map_err(|_| parse_err("bad PHASE value"))?;
                idx += 1;
            }
        }
        rest.drain(..idx);
        for line in rest {
            let mut tok = line.split_whitespace();
            let kind = tok.next().ok_or_else(|| parse_err("empty gate line"))?;
            let toks: Vec<&str> = tok.collect();
            let q = |i: usize| -> Result<usize> {
                toks.get(i)
                    .ok_or_else(|| parse_err(&format!("missing field {i} in {line:?}")))?
                    .parse()
                    .map_err(|_| parse_err(&format!("bad qubit in {line:?}")))
            };
            let f = |i: usize| -> Result<f64> {
                toks.get(i)
                    .ok_or_else(|| parse_err(&format!("missing field {i} in {line:?}")))?
                    .parse()
                    .map_err(|_| parse_err(&format!("bad float in {line:?}")))
            };
            let gate = match kind {
                "U3" => Gate::U3 { qubit: q(0)?, theta: f(1)?, phi: f(2)?, lambda: f(3)? },
                "RX" => Gate::Rx { qubit: q(0)?, theta: f(1)? },
                "RY" => Gate::Ry { qubit: q(0)?, theta: f(1)? },
                "RZ" => Gate::Rz { qubit: q(0)?, theta: f(1)? },
                "RPHI" => Gate::Rphi { qubit: q(0)?, axis: f(1)?, theta: f(2)? },
                "H" => Gate::H { qubit: q(0)? },
                "CZ" => Gate::Cz { a: q(0)?, b: q(1)? },
                "CNOT" => Gate::Cnot { control: q(0)?, target: q(1)? },
                "ZZ" => Gate::Zz { a: q(0)?, b: q(1)?, theta: f(2)? },
                "CP" => Gate::CPhase { a: q(0)?, b: q(1)?, theta: f(2)? },
                "SWAP" => Gate::Swap { a: q(0)?, b: q(1)? },
                "DIAG" => {
                    let k = q(0)?;
                    let qubits: Vec<usize> = (0..k).map(|i| q(1 + i)).collect::<Result<_>>()?;
                    let angles: Vec<f64> = (0..(1usize << k)).map(|i| f(1 + k + i)).collect::<Result<_>>()?;
                    Gate::DiagonalPhase { qubits, angles }
                }
                other => return Err(parse_err(&format!("unknown gate kind {other:?}"))),
            };
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}
