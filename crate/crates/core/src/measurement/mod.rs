//! Measurement operators, Pauli decomposition, basis grouping, and
//! shot-based field estimation.

mod estimate;
mod grouping;
mod observables;

pub use estimate::{
    density_from_counts, estimate, exact_string_values, momentum_from_strings,
    momentum_from_table, momentum_string_table, reconstruct_fields, ComponentEstimates,
    EstimateOutput, StringEstimate,
};
pub use grouping::{covers, group_bases, MeasurementPlan};
pub use observables::{
    density_observable, momentum_observable, pauli_decompose, SparseHermitian,
};
