//! Classical spectral reference for the free-Schrodinger evolution.
//!
//! On the periodic grid the exact propagator is diagonal in Fourier
//! space: transform each axis, multiply by `exp(-i (k_x^2 + k_y^2) t / 2)`
//! with centered integer wavenumbers, and transform back. This is the
//! ground truth the quantum circuits are checked against; the wavenumbers
//! come from the same [`WavenumberSpec`] the circuits use, so the two
//! paths share a single convention.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circuits::WavenumberSpec;
use crate::error::{Error, Result};
use crate::hydro::{
    flow_fields, init_diverging, init_vortex, DifferenceScheme, FlowFields, Grid2D,
    VortexProfile, WaveField,
};

/// Which initial condition a run starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    Diverging,
    Vortex,
}

impl FlowKind {
    pub fn from_name(name: &str) -> Result<FlowKind> {
        match name {
            "diverging" => Ok(FlowKind::Diverging),
            "vortex" => Ok(FlowKind::Vortex),
            other => Err(Error::UnknownFlow(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FlowKind::Diverging => "diverging",
            FlowKind::Vortex => "vortex",
        }
    }
}

/// Geometry knobs for the two built-in flows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Gaussian layer thickness of the diverging flow.
    pub layer_thickness: f64,
    /// Vortex size r0.
    pub vortex_size: f64,
    pub vortex_profile: VortexProfile,
}

impl Default for FlowParams {
    fn default() -> FlowParams {
        FlowParams { layer_thickness: 1.0, vortex_size: 3.0, vortex_profile: VortexProfile::TwoF }
    }
}

/// Samples the named initial condition on the grid (unnormalized).
pub fn initial_field(kind: FlowKind, grid: Grid2D, params: &FlowParams) -> Result<WaveField> {
    match kind {
        FlowKind::Diverging => init_diverging(grid, params.layer_thickness),
        FlowKind::Vortex => init_vortex(grid, params.vortex_size, params.vortex_profile),
    }
}

fn centered_squares(n: usize) -> Result<Vec<f64>> {
    let spec = WavenumberSpec::new(n)?;
    Ok(spec.diagonal().iter().map(|&m| (m * m) as f64).collect())
}

/// Evolves every component of the field by time `t` under the free
/// Hamiltonian `k^2/2`, exactly on the grid.
pub fn spectral_evolve(field: &WaveField, t: f64) -> Result<WaveField> {
    let grid = field.grid();
    let nx = grid.nx_points();
    let ny = grid.ny_points();
    let kx2 = centered_squares(grid.n_x())?;
    let ky2 = centered_squares(grid.n_y())?;

    let mut planner = FftPlanner::<f64>::new();
    let fwd_x = planner.plan_fft_forward(nx);
    let fwd_y = planner.plan_fft_forward(ny);
    let inv_x = planner.plan_fft_inverse(nx);
    let inv_y = planner.plan_fft_inverse(ny);

    let mut components = Vec::with_capacity(field.num_components());
    for c in field.components() {
        let mut data = c.clone();
        for row in data.chunks_exact_mut(nx) {
            fwd_x.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); ny];
        for k in 0..nx {
            for l in 0..ny {
                col[l] = data[k + nx * l];
            }
            fwd_y.process(&mut col);
            for l in 0..ny {
                data[k + nx * l] = col[l];
            }
        }

        for l in 0..ny {
            for k in 0..nx {
                let phase = Complex64::from_polar(1.0, -(kx2[k] + ky2[l]) * t / 2.0);
                data[k + nx * l] *= phase;
            }
        }

        for k in 0..nx {
            for l in 0..ny {
                col[l] = data[k + nx * l];
            }
            inv_y.process(&mut col);
            for l in 0..ny {
                data[k + nx * l] = col[l];
            }
        }
        for row in data.chunks_exact_mut(nx) {
            inv_x.process(row);
        }
        let scale = 1.0 / (nx * ny) as f64;
        for v in &mut data {
            *v *= scale;
        }
        components.push(data);
    }
    WaveField::from_components(grid, components)
}

/// One reference snapshot: the evolved field in encoded (unit-norm) units
/// and its hydrodynamic decode.
#[derive(Debug, Clone)]
pub struct FlowSnapshot {
    pub time: f64,
    pub field: WaveField,
    pub fields: FlowFields,
}

/// Classical end-to-end run: sample the initial condition, normalize to
/// encoded units, evolve spectrally to each requested time, and decode
/// with the chosen difference scheme. Fully deterministic.
pub fn reference_run(
    kind: FlowKind,
    grid: Grid2D,
    params: &FlowParams,
    times: &[f64],
    scheme: DifferenceScheme,
) -> Result<Vec<FlowSnapshot>> {
    let raw = initial_field(kind, grid, params)?;
    let (normalized, _total) = raw.normalized()?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let field = spectral_evolve(&normalized, t)?;
        let fields = flow_fields(&field, scheme);
        out.push(FlowSnapshot { time: t, field, fields });
    }
    Ok(out)
}
