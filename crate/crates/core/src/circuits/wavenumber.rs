//! Centered wavenumber operators and the free-evolution circuits built
//! from them.
//!
//! On an n-qubit axis register the wavenumber operator is the diagonal
//! `k = diag(0, 1, ..., 2^{n-1}-1, -2^{n-1}, ..., -1)` in units of the
//! fundamental mode of a `2*pi`-periodic box. Evolution under the free
//! Hamiltonian `k^2/2` for time `t` is implemented exactly as
//! `QFT^dag · exp(-i k^2 t / 2) · QFT` per axis; nothing is split or
//! approximated.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

use super::qft::build_qft;

/// The exact integer diagonal of the centered wavenumber operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavenumberSpec {
    n: usize,
    diagonal: Vec<i64>,
}

impl WavenumberSpec {
    pub fn new(n: usize) -> Result<WavenumberSpec> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        let dim = 1i64 << n;
        let half = dim / 2;
        let diagonal = (0..dim).map(|i| if i < half { i } else { i - dim }).collect();
        Ok(WavenumberSpec { n, diagonal })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.diagonal
    }
}

/// `k = c0·I + sum_j c_j·Z_j` with Z_1 on the register's most significant
/// qubit. Coefficients are half-integers, held doubled so arithmetic stays
/// exact in i64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavenumberDecomposition {
    n: usize,
    twice_c0: i64,
    twice_z: Vec<i64>,
}

impl WavenumberDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c0(&self) -> f64 {
        self.twice_c0 as f64 / 2.0
    }

    /// Coefficient of Z on qubit `j` (0-indexed from the register MSB).
    pub fn z_coefficient(&self, j: usize) -> f64 {
        self.twice_z[j] as f64 / 2.0
    }

    pub fn z_coefficients(&self) -> Vec<f64> {
        self.twice_z.iter().map(|&t| t as f64 / 2.0).collect()
    }

    /// Evaluates the decomposition at a basis index, exactly. `2*k(index)`
    /// is returned so the result stays integral.
    pub fn eval_twice(&self, index: usize) -> i64 {
        let mut acc = self.twice_c0;
        for (j, &tz) in self.twice_z.iter().enumerate() {
            let bit = (index >> (self.n - 1 - j)) & 1;
            acc += if bit == 0 { tz } else { -tz };
        }
        acc
    }
}

/// Decomposes the centered wavenumber diagonal into identity and
/// single-Z terms: `k = -1/2·(I + sum_j 2^{n-j-1} Z_j) + 2^{n-1}·Z_0`
/// (0-indexed; the MSB qubit carries the extra offset term that folds the
/// upper half of the spectrum to negative values).
pub fn decompose_wavenumber(n: usize) -> Result<WavenumberDecomposition> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    let twice_c0 = -1i64;
    let mut twice_z: Vec<i64> = (0..n).map(|j| -(1i64 << (n - 1 - j))).collect();
    // Offset 2^{n-1} on the MSB Z; doubled that is 2^n.
    twice_z[0] += 1i64 << n;
    Ok(WavenumberDecomposition { n, twice_c0, twice_z })
}

/// Builds `exp(-i k^2 t / 2)` on an n-qubit register as Rz and ZZ
/// rotations. Squaring the Z-linear form of `k` produces one Rz per qubit,
/// one ZZ per qubit pair (n(n-1)/2 of them), and an identity term that is
/// dropped into the circuit's global phase.
pub fn build_phase_evolution(n: usize, t: f64) -> Result<Circuit> {
    let dec = decompose_wavenumber(n)?;
    let c0 = dec.c0();
    let cz = dec.z_coefficients();
    let mut circ = Circuit::new(n, format!("phase_evolution_n{n}"));
    // k^2 = (c0^2 + sum c_j^2) I + sum_j 2 c0 c_j Z_j + sum_{i<j} 2 c_i c_j Z_i Z_j.
    let identity_coeff = c0 * c0 + cz.iter().map(|c| c * c).sum::<f64>();
    circ.add_global_phase(-t / 2.0 * identity_coeff);
    for (j, &cj) in cz.iter().enumerate() {
        // exp(-i t c0 c_j Z) = Rz(2 t c0 c_j).
        circ.push(Gate::Rz { qubit: j, theta: 2.0 * t * c0 * cj })?;
    }
    for i in 0..n {
        for j in i + 1..n {
            // exp(-i t c_i c_j Z⊗Z) = ZZ(2 t c_i c_j).
            circ.push(Gate::Zz { a: i, b: j, theta: 2.0 * t * cz[i] * cz[j] })?;
        }
    }
    Ok(circ)
}

/// Global qubit indices of the x register: the least significant `n_x` bits
/// of a basis index `k + 2^{n_x}·l`, listed MSB first.
pub fn x_register(n_x: usize, n_y: usize) -> Vec<usize> {
    (n_y..n_y + n_x).collect()
}

/// Global qubit indices of the y register (the most significant bits).
pub fn y_register(_n_x: usize, n_y: usize) -> Vec<usize> {
    (0..n_y).collect()
}

/// Full free-evolution circuit for a 2D field on `n_x + n_y` qubits:
/// `U(t) = U_x(t) · U_y(t)` with `U_a = QFT_a^dag · exp(-i k_a^2 t/2) · QFT_a`
/// acting on each axis register independently. Basis index convention:
/// grid point (k, l) lives at `k + 2^{n_x}·l`, so the x register occupies
/// the low bits.
pub fn build_evolution(n_x: usize, n_y: usize, t: f64) -> Result<Circuit> {
    if n_x == 0 || n_y == 0 {
        return Err(Error::EmptyRegister);
    }
    let n = n_x + n_y;
    let mut circ = Circuit::new(n, format!("evolution_{n_x}x{n_y}_t{t}"));
    for (reg, width) in [(x_register(n_x, n_y), n_x), (y_register(n_x, n_y), n_y)] {
        let qft = build_qft(width, false)?.remapped(&reg, n, "qft")?;
        let phase = build_phase_evolution(width, t)?.remapped(&reg, n, "phase")?;
        let qft_inv = build_qft(width, true)?.remapped(&reg, n, "qft_inv")?;
        circ.append(&qft)?;
        circ.append(&phase)?;
        circ.append(&qft_inv)?;
    }
    Ok(circ)
}
