//! Dense statevector simulation.
//!
//! Amplitudes are stored as one contiguous `Vec<Complex64>` of length `2^n`
//! indexed by computational basis state, with qubit 0 on the most
//! significant bit. Gates update amplitudes in place over strided index
//! pairs; nothing here allocates per gate.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::PauliString;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// The all-zeros computational basis state.
    pub fn zero(num_qubits: usize) -> QuantumState {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        QuantumState { num_qubits, amps }
    }

    /// Wraps amplitudes that must already be normalized (1e-10 tolerance).
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<QuantumState> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                actual: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(QuantumState { num_qubits, amps })
    }

    /// Wraps arbitrary amplitudes and rescales them to unit norm.
    pub fn from_unnormalized(num_qubits: usize, amps: Vec<Complex64>) -> Result<QuantumState> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                actual: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroField);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(QuantumState { num_qubits, amps })
    }

    /// Internal constructor that skips the norm check; used where columns of
    /// a unitary are propagated one basis vector at a time.
    pub(crate) fn from_amplitudes_unchecked(num_qubits: usize, amps: Vec<Complex64>) -> QuantumState {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        QuantumState { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &QuantumState) -> Result<Complex64> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    fn bit_of(&self, qubit: usize) -> usize {
        self.num_qubits - 1 - qubit
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match gate {
            Gate::Cz { a, b } => self.apply_cz(*a, *b),
            Gate::Zz { a, b, theta } => self.apply_zz(*a, *b, *theta),
            Gate::CPhase { a, b, theta } => self.apply_cphase(*a, *b, *theta),
            Gate::Swap { a, b } => self.apply_swap(*a, *b),
            Gate::Cnot { control, target } => self.apply_cnot(*control, *target),
            Gate::DiagonalPhase { qubits, angles } => self.apply_diagonal(qubits, angles),
            g => {
                let m = g
                    .one_qubit_matrix()
                    .expect("non-special gates are single-qubit");
                self.apply_one_qubit(g.targets()[0], m);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: circuit.num_qubits(),
            });
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        if circuit.global_phase() != 0.0 {
            let phase = Complex64::from_polar(1.0, circuit.global_phase());
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        Ok(())
    }

    fn apply_one_qubit(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << self.bit_of(qubit);
        let block = stride << 1;
        let n = self.amps.len();
        let mut base = 0;
        while base < n {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += block;
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let ma = 1usize << self.bit_of(a);
        let mb = 1usize << self.bit_of(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & ma != 0 && i & mb != 0 {
                *amp = -*amp;
            }
        }
    }

    fn apply_cphase(&mut self, a: usize, b: usize, theta: f64) {
        let ma = 1usize << self.bit_of(a);
        let mb = 1usize << self.bit_of(b);
        let phase = Complex64::from_polar(1.0, theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & ma != 0 && i & mb != 0 {
                *amp *= phase;
            }
        }
    }

    fn apply_zz(&mut self, a: usize, b: usize, theta: f64) {
        let ma = 1usize << self.bit_of(a);
        let mb = 1usize << self.bit_of(b);
        let even = Complex64::from_polar(1.0, -theta / 2.0);
        let odd = Complex64::from_polar(1.0, theta / 2.0);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let parity = ((i & ma != 0) as u8) ^ ((i & mb != 0) as u8);
            *amp *= if parity == 1 { odd } else { even };
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let ma = 1usize << self.bit_of(a);
        let mb = 1usize << self.bit_of(b);
        for i in 0..self.amps.len() {
            // Visit each (01, 10) pair once.
            if i & ma != 0 && i & mb == 0 {
                let j = (i & !ma) | mb;
                self.amps.swap(i, j);
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let mc = 1usize << self.bit_of(control);
        let mt = 1usize << self.bit_of(target);
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                let j = i | mt;
                self.amps.swap(i, j);
            }
        }
    }

    fn apply_diagonal(&mut self, qubits: &[usize], angles: &[f64]) {
        let phases: Vec<Complex64> = angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        let bits: Vec<usize> = qubits.iter().map(|&q| self.bit_of(q)).collect();
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let mut local = 0usize;
            for &b in &bits {
                local = (local << 1) | ((i >> b) & 1);
            }
            *amp *= phases[local];
        }
    }

    /// `<psi| P |psi>` for a Hermitian Pauli string (coefficient included).
    pub fn expectation_pauli(&self, pauli: &PauliString) -> Result<f64> {
        if pauli.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: pauli.num_qubits(),
            });
        }
        let m = pauli.masks();
        // i^num_y, exact for the four residues.
        let iy = match m.num_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, amp) in self.amps.iter().enumerate() {
            let sign = if (j & m.sign).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            acc += self.amps[j ^ m.flip].conj() * *amp * sign;
        }
        Ok(pauli.coefficient * (iy * acc).re)
    }

    /// Z-basis sampling: draws `shots` outcomes from `|amp|^2` with the
    /// crate generator and returns per-index counts. Deterministic per seed.
    pub fn sample_index_counts(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.probabilities();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0u64; probs.len()];
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            // First index with cdf[i] > u.
            let mut lo = 0usize;
            let mut hi = cdf.len() - 1;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if cdf[mid] > u {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            counts[lo] += 1;
        }
        Ok(counts)
    }

    /// Like [`sample_index_counts`](Self::sample_index_counts) but keyed by
    /// bitstring (qubit 0 first), omitting zero-count outcomes.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
        let counts = self.sample_index_counts(shots, seed)?;
        let n = self.num_qubits;
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(i, c)| (format!("{i:0n$b}"), c))
            .collect())
    }
}
