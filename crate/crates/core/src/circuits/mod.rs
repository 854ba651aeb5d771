//! Circuit builders: Fourier transforms, free-evolution stages, exact
//! state preparation, and lowering onto a native gate set.

pub mod prep;
pub mod qft;
pub mod transpile;
pub mod wavenumber;

pub use prep::amplitude_encode;
pub use qft::build_qft;
pub use transpile::{circuit_report, transpile, CircuitReport, Topology};
pub use wavenumber::{
    build_evolution, build_phase_evolution, decompose_wavenumber, x_register, y_register,
    WavenumberDecomposition, WavenumberSpec,
};
