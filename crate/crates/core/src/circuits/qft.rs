//! Quantum Fourier transform circuits.

use std::f64::consts::PI;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

/// Builds the n-qubit QFT whose matrix is the unitary DFT with kernel
/// `e^{+2*pi*i*j*k/2^n} / 2^{n/2}` (qubit 0 = most significant index bit).
/// `inverse` builds the conjugate transform.
///
/// Structure: a Hadamard on each qubit followed by controlled phase
/// rotations from every lower-significance qubit, then a qubit-reversal
/// swap network.
pub fn build_qft(n: usize, inverse: bool) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    let mut circ = Circuit::new(n, if inverse { "qft_inv" } else { "qft" });
    for q in 0..n {
        circ.push(Gate::H { qubit: q })?;
        for m in q + 1..n {
            // Distance d contributes the phase 2^-(d+1) of a full turn.
            let theta = 2.0 * PI / (1u64 << (m - q + 1)) as f64;
            circ.push(Gate::CPhase { a: m, b: q, theta })?;
        }
    }
    for q in 0..n / 2 {
        circ.push(Gate::Swap { a: q, b: n - 1 - q })?;
    }
    if inverse {
        Ok(circ.inverse())
    } else {
        Ok(circ)
    }
}
