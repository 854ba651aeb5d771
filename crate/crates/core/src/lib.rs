//! Statevector toolkit for studying unsteady two-dimensional flows with
//! quantum circuits.
//!
//! A scalar or two-component flow field on a periodic grid is encoded
//! into the amplitudes of a qubit register, evolved under the free
//! Schrodinger Hamiltonian by an exact Fourier-space phase circuit, and
//! read back either directly from the statevector or through sampled
//! Pauli-string measurements of density and momentum observables. A
//! classical spectral solver provides the reference answer for every
//! circuit path, and coherent gate errors can be injected to study how
//! hydrodynamic observables degrade.
//!
//! Conventions used throughout:
//! - Qubit 0 is the most significant bit of a basis index.
//! - Grid point (k, l) on an `N_x` by `N_y` grid maps to basis index
//!   `k + N_x * l`, so the x register occupies the low-order qubits.
//! - Rotation gates follow `Rz(t) = exp(-i t Z / 2)` and
//!   `U3(t, p, l) = Rz(p) Ry(t) Rz(l)` with no implicit global phase.

pub mod circuit;
pub mod circuits;
pub mod error;
pub mod fieldio;
pub mod gate;
pub mod hydro;
pub mod measurement;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod rng;
pub mod state;

pub use circuit::{Circuit, GateCounts};
pub use error::{Error, Result};
pub use gate::Gate;
pub use pauli::{PauliOp, PauliString};
pub use state::QuantumState;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
