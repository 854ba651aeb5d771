//! Periodic-grid flow representation: initial conditions, the mapping
//! between wave functions and qubit statevectors, and the hydrodynamic
//! decode (density, momentum, velocity, vorticity, spin diagnostics,
//! averaged profiles, integral invariants).
//!
//! The domain is the periodic box [-pi, pi]^2 sampled on `2^{n_x}` by
//! `2^{n_y}` points, with grid point (k, l) stored at flat index
//! `k + N_x * l`. Units are dimensionless with hbar = m = 1, so momentum
//! density is `J = Im(psi* grad psi)` summed over spin components.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::QuantumState;

use std::f64::consts::PI;

/// Fraction of the density maximum below which velocities are zeroed
/// instead of dividing by a vanishing density.
pub const DENSITY_FLOOR_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid2D {
    n_x: usize,
    n_y: usize,
}

impl Grid2D {
    pub fn new(n_x: usize, n_y: usize) -> Result<Grid2D> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::EmptyRegister);
        }
        Ok(Grid2D { n_x, n_y })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn num_qubits(&self) -> usize {
        self.n_x + self.n_y
    }

    /// Points along x.
    pub fn nx_points(&self) -> usize {
        1 << self.n_x
    }

    /// Points along y.
    pub fn ny_points(&self) -> usize {
        1 << self.n_y
    }

    pub fn num_points(&self) -> usize {
        self.nx_points() * self.ny_points()
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.nx_points() as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * PI / self.ny_points() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        -PI + k as f64 * self.dx()
    }

    pub fn y(&self, l: usize) -> f64 {
        -PI + l as f64 * self.dy()
    }

    pub fn flat_index(&self, k: usize, l: usize) -> usize {
        k + self.nx_points() * l
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx_points(), index / self.nx_points())
    }
}

/// A one- or two-component complex field sampled on a grid. Values are
/// stored as sampled, without normalization; [`encode`] produces the
/// unit-norm statevectors and records the norms it divided out.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid2D,
    components: Vec<Vec<Complex64>>,
}

impl WaveField {
    pub fn single(grid: Grid2D, values: Vec<Complex64>) -> Result<WaveField> {
        WaveField::from_components(grid, vec![values])
    }

    pub fn two_component(grid: Grid2D, plus: Vec<Complex64>, minus: Vec<Complex64>) -> Result<WaveField> {
        WaveField::from_components(grid, vec![plus, minus])
    }

    pub fn from_components(grid: Grid2D, components: Vec<Vec<Complex64>>) -> Result<WaveField> {
        if components.is_empty() || components.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "wave fields have 1 or 2 components, got {}",
                components.len()
            )));
        }
        for c in &components {
            if c.len() != grid.num_points() {
                return Err(Error::DimensionMismatch { expected: grid.num_points(), actual: c.len() });
            }
        }
        Ok(WaveField { grid, components })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &[Complex64] {
        &self.components[i]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    /// L2 norm of each component over the grid.
    pub fn component_norms(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// L2 norm of the combined field (all components stacked).
    pub fn total_l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// The field divided by its combined L2 norm. All hydrodynamic output
    /// is reported in these encoded units so it matches what the quantum
    /// register holds; the divisor is returned alongside.
    pub fn normalized(&self) -> Result<(WaveField, f64)> {
        let total = self.total_l2_norm();
        if total == 0.0 {
            return Err(Error::ZeroField);
        }
        let components = self
            .components
            .iter()
            .map(|c| c.iter().map(|v| v / total).collect())
            .collect();
        Ok((WaveField { grid: self.grid, components }, total))
    }
}

/// Per-component unit statevectors plus the norms divided out at encode
/// time; the exact inverse of [`decode_all`].
#[derive(Debug, Clone)]
pub struct EncodedField {
    pub grid: Grid2D,
    pub states: Vec<QuantumState>,
    pub norms: Vec<f64>,
}

/// Encodes each component as amplitudes over basis index `k + N_x * l`,
/// normalized to a unit statevector.
pub fn encode(field: &WaveField) -> Result<EncodedField> {
    let mut states = Vec::with_capacity(field.num_components());
    let mut norms = Vec::with_capacity(field.num_components());
    for c in field.components() {
        let norm = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroField);
        }
        let amps: Vec<Complex64> = c.iter().map(|v| v / norm).collect();
        states.push(QuantumState::from_amplitudes(field.grid.num_qubits(), amps)?);
        norms.push(norm);
    }
    Ok(EncodedField { grid: field.grid, states, norms })
}

/// Rebuilds one field component from a unit statevector and its recorded
/// norm constant.
pub fn decode(state: &QuantumState, grid: Grid2D, norm: f64) -> Result<WaveField> {
    if state.num_qubits() != grid.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: grid.num_qubits(),
            actual: state.num_qubits(),
        });
    }
    let values = state.amplitudes().iter().map(|a| a * norm).collect();
    WaveField::single(grid, values)
}

/// Rebuilds the full (possibly two-component) field from an encoded set.
pub fn decode_all(encoded: &EncodedField) -> Result<WaveField> {
    if encoded.states.len() != encoded.norms.len() {
        return Err(Error::DimensionMismatch {
            expected: encoded.states.len(),
            actual: encoded.norms.len(),
        });
    }
    let mut components = Vec::with_capacity(encoded.states.len());
    for (state, &norm) in encoded.states.iter().zip(&encoded.norms) {
        if state.num_qubits() != encoded.grid.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: encoded.grid.num_qubits(),
                actual: state.num_qubits(),
            });
        }
        components.push(state.amplitudes().iter().map(|a| a * norm).collect());
    }
    WaveField::from_components(encoded.grid, components)
}

/// Diverging layer flow: `psi(x, y) = exp(-y^2 / (2 rho^2)) e^{ix}`, a
/// potential flow that is uniform in x with a Gaussian density layer
/// around y = 0 of thickness `rho`.
pub fn init_diverging(grid: Grid2D, rho: f64) -> Result<WaveField> {
    if rho <= 0.0 {
        return Err(Error::InvalidParameter(format!("layer thickness must be positive, got {rho}")));
    }
    let mut values = Vec::with_capacity(grid.num_points());
    for l in 0..grid.ny_points() {
        let y = grid.y(l);
        let envelope = (-y * y / (2.0 * rho * rho)).exp();
        for k in 0..grid.nx_points() {
            let x = grid.x(k);
            values.push(Complex64::from_polar(envelope, x));
        }
    }
    WaveField::single(grid, values)
}

/// Two published conventions for the vortex seed function `v` differ in
/// the weight of the decay factor; [`VortexProfile::TwoF`] is the default
/// used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VortexProfile {
    /// `v = i (r^2 + 1 - 2 f) / (1 + r^2)`
    TwoF,
    /// `v = i (r^2 + 1 - f) / (1 + r^2)`
    OneF,
}

impl VortexProfile {
    pub fn from_name(name: &str) -> Result<VortexProfile> {
        match name {
            "two-f" => Ok(VortexProfile::TwoF),
            "one-f" => Ok(VortexProfile::OneF),
            other => Err(Error::InvalidParameter(format!("unknown vortex profile '{other}'"))),
        }
    }
}

/// Centered vortex built from a rational map: with decay rate
/// `f(r) = exp(-(r/r0)^4)` and
/// `u = 2 (x + iy) f / (1 + r^2)`, `v = i (r^2 + 1 - 2f) / (1 + r^2)`,
/// the spin components are `psi+ = u / sqrt(|u|^2 + |v|^4)` and
/// `psi- = v^2 / sqrt(|u|^2 + |v|^4)`. The pointwise density
/// `|psi+|^2 + |psi-|^2` is exactly 1.
pub fn init_vortex(grid: Grid2D, r0: f64, profile: VortexProfile) -> Result<WaveField> {
    if r0 <= 0.0 {
        return Err(Error::InvalidParameter(format!("vortex size must be positive, got {r0}")));
    }
    let mut plus = Vec::with_capacity(grid.num_points());
    let mut minus = Vec::with_capacity(grid.num_points());
    for l in 0..grid.ny_points() {
        let y = grid.y(l);
        for k in 0..grid.nx_points() {
            let x = grid.x(k);
            let r2 = x * x + y * y;
            let r = r2.sqrt();
            let f = (-(r / r0).powi(4)).exp();
            let f_weight = match profile {
                VortexProfile::TwoF => 2.0 * f,
                VortexProfile::OneF => f,
            };
            let u = Complex64::new(x, y) * (2.0 * f / (1.0 + r2));
            let v = Complex64::new(0.0, (r2 + 1.0 - f_weight) / (1.0 + r2));
            let denom = (u.norm_sqr() + v.norm_sqr() * v.norm_sqr()).sqrt();
            plus.push(u / denom);
            minus.push(v * v / denom);
        }
    }
    WaveField::two_component(grid, plus, minus)
}

/// Finite-difference flavor for first derivatives. The vorticity curl and
/// everything downstream of it always wrap periodically; this choice only
/// affects how momentum and spin gradients treat the outermost rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceScheme {
    /// Central differences with periodic wraparound everywhere.
    PeriodicCentral,
    /// Central in the interior, forward/backward at the domain edges.
    OneSidedAtBoundary,
}

impl DifferenceScheme {
    pub fn from_name(name: &str) -> Result<DifferenceScheme> {
        match name {
            "periodic-central" => Ok(DifferenceScheme::PeriodicCentral),
            "one-sided-at-boundary" => Ok(DifferenceScheme::OneSidedAtBoundary),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DifferenceScheme::PeriodicCentral => "periodic-central",
            DifferenceScheme::OneSidedAtBoundary => "one-sided-at-boundary",
        }
    }
}

/// First derivative of a flat-stored field along one axis. `n` points on
/// the axis, `stride` between neighbors, `lines` rows to sweep, and
/// `line_stride` between rows.
fn derivative_axis(
    values: &[Complex64],
    n: usize,
    stride: usize,
    lines: usize,
    line_stride: usize,
    delta: f64,
    scheme: DifferenceScheme,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    for line in 0..lines {
        let base = line * line_stride;
        for i in 0..n {
            let idx = base + i * stride;
            let d = match scheme {
                DifferenceScheme::PeriodicCentral => {
                    let up = base + ((i + 1) % n) * stride;
                    let dn = base + ((i + n - 1) % n) * stride;
                    (values[up] - values[dn]) / (2.0 * delta)
                }
                DifferenceScheme::OneSidedAtBoundary => {
                    if i == 0 {
                        (values[base + stride] - values[base]) / delta
                    } else if i == n - 1 {
                        (values[idx] - values[idx - stride]) / delta
                    } else {
                        (values[idx + stride] - values[idx - stride]) / (2.0 * delta)
                    }
                }
            };
            out[idx] = d;
        }
    }
    out
}

fn ddx(values: &[Complex64], grid: Grid2D, scheme: DifferenceScheme) -> Vec<Complex64> {
    derivative_axis(values, grid.nx_points(), 1, grid.ny_points(), grid.nx_points(), grid.dx(), scheme)
}

fn ddy(values: &[Complex64], grid: Grid2D, scheme: DifferenceScheme) -> Vec<Complex64> {
    derivative_axis(values, grid.ny_points(), grid.nx_points(), grid.nx_points(), 1, grid.dy(), scheme)
}

fn ddx_real(values: &[f64], grid: Grid2D, scheme: DifferenceScheme) -> Vec<f64> {
    let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    ddx(&complex, grid, scheme).into_iter().map(|c| c.re).collect()
}

fn ddy_real(values: &[f64], grid: Grid2D, scheme: DifferenceScheme) -> Vec<f64> {
    let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    ddy(&complex, grid, scheme).into_iter().map(|c| c.re).collect()
}

/// Pointwise mass density, summed over components.
pub fn density(field: &WaveField) -> Vec<f64> {
    let mut rho = vec![0.0; field.grid().num_points()];
    for c in field.components() {
        for (r, v) in rho.iter_mut().zip(c) {
            *r += v.norm_sqr();
        }
    }
    rho
}

/// Momentum density `J = Im(psi* grad psi)` summed over components, with
/// the chosen finite-difference scheme.
pub fn momentum_fd(field: &WaveField, scheme: DifferenceScheme) -> (Vec<f64>, Vec<f64>) {
    let grid = field.grid();
    let mut jx = vec![0.0; grid.num_points()];
    let mut jy = vec![0.0; grid.num_points()];
    for c in field.components() {
        let dx = ddx(c, grid, scheme);
        let dy = ddy(c, grid, scheme);
        for i in 0..c.len() {
            jx[i] += (c[i].conj() * dx[i]).im;
            jy[i] += (c[i].conj() * dy[i]).im;
        }
    }
    (jx, jy)
}

/// Velocity `u = J / rho` with the density floor applied: where
/// `rho < 1e-6 * max(rho)` the velocity is set to zero and the mask entry
/// is false.
pub fn velocity(rho: &[f64], jx: &[f64], jy: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<bool>) {
    let max_rho = rho.iter().cloned().fold(0.0, f64::max);
    let floor = DENSITY_FLOOR_FRACTION * max_rho;
    let mut ux = vec![0.0; rho.len()];
    let mut uy = vec![0.0; rho.len()];
    let mut mask = vec![false; rho.len()];
    for i in 0..rho.len() {
        if rho[i] >= floor && rho[i] > 0.0 {
            ux[i] = jx[i] / rho[i];
            uy[i] = jy[i] / rho[i];
            mask[i] = true;
        }
    }
    (ux, uy, mask)
}

/// Vorticity `omega = d(u_y)/dx - d(u_x)/dy`, always with periodic
/// central differences.
pub fn vorticity(ux: &[f64], uy: &[f64], grid: Grid2D) -> Vec<f64> {
    let duy_dx = ddx_real(uy, grid, DifferenceScheme::PeriodicCentral);
    let dux_dy = ddy_real(ux, grid, DifferenceScheme::PeriodicCentral);
    duy_dx.iter().zip(&dux_dy).map(|(a, b)| a - b).collect()
}

/// The full hydrodynamic decode of one field.
#[derive(Debug, Clone)]
pub struct FlowFields {
    pub grid: Grid2D,
    pub rho: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
    pub ux: Vec<f64>,
    pub uy: Vec<f64>,
    pub omega: Vec<f64>,
    /// True where the density cleared the velocity floor.
    pub velocity_mask: Vec<bool>,
}

pub fn flow_fields(field: &WaveField, scheme: DifferenceScheme) -> FlowFields {
    let grid = field.grid();
    let rho = density(field);
    let (jx, jy) = momentum_fd(field, scheme);
    let (ux, uy, velocity_mask) = velocity(&rho, &jx, &jy);
    let omega = vorticity(&ux, &uy, grid);
    FlowFields { grid, rho, jx, jy, ux, uy, omega, velocity_mask }
}

/// Spin-vector diagnostics of a two-component field: the spin `s`, the
/// curvature vector `zeta = -(1/4) div(grad s / rho)`, quantum pressure
/// `p = zeta . s`, effective potential `U_F = -|grad s|^2 / (8 rho^2)`
/// (zero external potential), and body force `f = (grad s . zeta) / rho`.
#[derive(Debug, Clone)]
pub struct SpinDiagnostics {
    pub s: [Vec<f64>; 3],
    pub zeta: [Vec<f64>; 3],
    pub p: Vec<f64>,
    pub u_f: Vec<f64>,
    pub f_x: Vec<f64>,
    pub f_y: Vec<f64>,
}

pub fn spin_diagnostics(field: &WaveField, scheme: DifferenceScheme) -> Result<SpinDiagnostics> {
    if field.num_components() != 2 {
        return Err(Error::InvalidParameter(
            "spin diagnostics need a two-component field".to_string(),
        ));
    }
    let grid = field.grid();
    let points = grid.num_points();
    let plus = field.component(0);
    let minus = field.component(1);
    let rho = density(field);
    let max_rho = rho.iter().cloned().fold(0.0, f64::max);
    let floor = DENSITY_FLOOR_FRACTION * max_rho;

    let mut s = [vec![0.0; points], vec![0.0; points], vec![0.0; points]];
    for i in 0..points {
        let cross = plus[i].conj() * minus[i];
        s[0][i] = plus[i].norm_sqr() - minus[i].norm_sqr();
        s[1][i] = -2.0 * cross.im;
        s[2][i] = 2.0 * cross.re;
    }

    let mut zeta = [vec![0.0; points], vec![0.0; points], vec![0.0; points]];
    let mut grad_sq = vec![0.0; points];
    let mut grads = Vec::with_capacity(3);
    for a in 0..3 {
        let gx = ddx_real(&s[a], grid, scheme);
        let gy = ddy_real(&s[a], grid, scheme);
        let over_rho = |g: &[f64]| -> Vec<f64> {
            g.iter()
                .zip(&rho)
                .map(|(&v, &r)| if r >= floor && r > 0.0 { v / r } else { 0.0 })
                .collect()
        };
        let gx_rho = over_rho(&gx);
        let gy_rho = over_rho(&gy);
        let div_x = ddx_real(&gx_rho, grid, scheme);
        let div_y = ddy_real(&gy_rho, grid, scheme);
        for i in 0..points {
            zeta[a][i] = -0.25 * (div_x[i] + div_y[i]);
            grad_sq[i] += gx[i] * gx[i] + gy[i] * gy[i];
        }
        grads.push((gx, gy));
    }

    let mut p = vec![0.0; points];
    let mut u_f = vec![0.0; points];
    let mut f_x = vec![0.0; points];
    let mut f_y = vec![0.0; points];
    for i in 0..points {
        p[i] = (0..3).map(|a| zeta[a][i] * s[a][i]).sum();
        if rho[i] >= floor && rho[i] > 0.0 {
            u_f[i] = -grad_sq[i] / (8.0 * rho[i] * rho[i]);
            f_x[i] = (0..3).map(|a| grads[a].0[i] * zeta[a][i]).sum::<f64>() / rho[i];
            f_y[i] = (0..3).map(|a| grads[a].1[i] * zeta[a][i]).sum::<f64>() / rho[i];
        }
    }

    Ok(SpinDiagnostics { s, zeta, p, u_f, f_x, f_y })
}

/// Averaged profiles and integral diagnostics of a flow snapshot.
#[derive(Debug, Clone, Serialize)]
pub struct Profiles {
    /// y coordinate of each x-averaged row.
    pub y: Vec<f64>,
    pub rho_x_avg: Vec<f64>,
    pub jx_x_avg: Vec<f64>,
    pub jy_x_avg: Vec<f64>,
    /// Radial bin centers (i + 1/2) * dx about the domain center.
    pub r_centers: Vec<f64>,
    /// Vorticity averaged over direction within each radial bin.
    pub omega_theta_avg: Vec<f64>,
    pub kinetic_energy: f64,
    pub enstrophy: f64,
}

pub fn profiles_and_integrals(fields: &FlowFields) -> Profiles {
    let grid = fields.grid;
    let nx = grid.nx_points();
    let ny = grid.ny_points();
    let dx = grid.dx();
    let dy = grid.dy();

    let mut y = Vec::with_capacity(ny);
    let mut rho_x_avg = Vec::with_capacity(ny);
    let mut jx_x_avg = Vec::with_capacity(ny);
    let mut jy_x_avg = Vec::with_capacity(ny);
    for l in 0..ny {
        let row = l * nx..(l + 1) * nx;
        let mean = |v: &[f64]| v[row.clone()].iter().sum::<f64>() / nx as f64;
        y.push(grid.y(l));
        rho_x_avg.push(mean(&fields.rho));
        jx_x_avg.push(mean(&fields.jx));
        jy_x_avg.push(mean(&fields.jy));
    }

    // Radial bins of width dx out to r = pi (the inscribed circle); the
    // square's corners fall outside every bin.
    let nbins = nx / 2;
    let mut sums = vec![0.0; nbins];
    let mut counts = vec![0usize; nbins];
    for l in 0..ny {
        for k in 0..nx {
            let r = grid.x(k).hypot(grid.y(l));
            let bin = (r / dx).floor() as usize;
            if bin < nbins {
                sums[bin] += fields.omega[grid.flat_index(k, l)];
                counts[bin] += 1;
            }
        }
    }
    let r_centers = (0..nbins).map(|i| (i as f64 + 0.5) * dx).collect();
    let omega_theta_avg = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();

    let cell = dx * dy;
    let kinetic_energy = (0..fields.rho.len())
        .map(|i| 0.5 * fields.rho[i] * (fields.ux[i] * fields.ux[i] + fields.uy[i] * fields.uy[i]))
        .sum::<f64>()
        * cell;
    let enstrophy = fields.omega.iter().map(|w| w * w).sum::<f64>() * cell;

    Profiles {
        y,
        rho_x_avg,
        jx_x_avg,
        jy_x_avg,
        r_centers,
        omega_theta_avg,
        kinetic_energy,
        enstrophy,
    }
}

/// Total mass `sum(rho) dx dy`, conserved by unitary evolution.
pub fn total_mass(rho: &[f64], grid: Grid2D) -> f64 {
    rho.iter().sum::<f64>() * grid.dx() * grid.dy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn grid(n: usize) -> Grid2D {
        Grid2D::new(n, n).unwrap()
    }

    fn plane_wave(g: Grid2D) -> WaveField {
        let mut values = Vec::with_capacity(g.num_points());
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                let _ = l;
                values.push(Complex64::from_polar(1.0, g.x(k)));
            }
        }
        WaveField::single(g, values).unwrap()
    }

    #[test]
    fn grid_conventions() {
        let g = Grid2D::new(5, 4).unwrap();
        assert_eq!(g.nx_points(), 32);
        assert_eq!(g.ny_points(), 16);
        assert!((g.x(0) + PI).abs() < 1e-15);
        assert!((g.dx() * g.nx_points() as f64 - 2.0 * PI).abs() < 1e-12);
        assert_eq!(g.flat_index(3, 2), 3 + 32 * 2);
        assert_eq!(g.coords(67), (3, 2));
    }

    #[test]
    fn diverging_flow_density_and_velocity() {
        let g = grid(5);
        let field = init_diverging(g, 1.0).unwrap();
        // Pre-normalization |psi|^2 = e^{-y^2}: 1 at y=0, e^{-pi^2} at y=-pi.
        let l0 = g.ny_points() / 2;
        assert!((field.component(0)[g.flat_index(0, l0)].norm_sqr() - 1.0).abs() < 1e-12);
        let edge = field.component(0)[g.flat_index(0, 0)].norm_sqr();
        assert!((edge - (-PI * PI).exp()).abs() < 1e-12);

        let fields = flow_fields(&field, DifferenceScheme::PeriodicCentral);
        for l in 0..g.ny_points() {
            let yv = g.y(l);
            for k in 0..g.nx_points() {
                let i = g.flat_index(k, l);
                assert!((fields.rho[i] - (-yv * yv).exp()).abs() < 1e-12);
                // Central-difference plane wave: u_x = sin(dx)/dx.
                assert!((fields.ux[i] - g.dx().sin() / g.dx()).abs() < 1e-9, "u_x at {i}");
                assert!(fields.uy[i].abs() < 1e-12);
                assert!(fields.omega[i].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_wave_momentum() {
        let g = grid(5);
        let field = plane_wave(g);
        let (jx, jy) = momentum_fd(&field, DifferenceScheme::PeriodicCentral);
        let expected = g.dx().sin() / g.dx();
        assert!((expected - 0.9936).abs() < 2e-4);
        for i in 0..g.num_points() {
            assert!((jx[i] - expected).abs() < 1e-12);
            assert!(jy[i].abs() < 1e-12);
        }
    }

    #[test]
    fn real_field_has_no_momentum() {
        let g = grid(4);
        let values: Vec<Complex64> = (0..g.num_points())
            .map(|i| Complex64::new(1.0 + (i as f64 * 0.37).sin(), 0.0))
            .collect();
        let field = WaveField::single(g, values).unwrap();
        let (jx, jy) = momentum_fd(&field, DifferenceScheme::PeriodicCentral);
        assert!(jx.iter().chain(&jy).all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn one_sided_scheme_differs_only_at_edges() {
        // A generic complex field; the layer flows are too symmetric to
        // exercise the boundary rows.
        let g = grid(4);
        let mut rng = rng_from_seed(97);
        let values: Vec<Complex64> = (0..g.num_points())
            .map(|_| Complex64::new(rng.gen::<f64>() + 0.2, rng.gen::<f64>() - 0.5))
            .collect();
        let field = WaveField::single(g, values).unwrap();
        let (cx, cy) = momentum_fd(&field, DifferenceScheme::PeriodicCentral);
        let (ox, oy) = momentum_fd(&field, DifferenceScheme::OneSidedAtBoundary);
        let n = g.nx_points();
        for l in 0..g.ny_points() {
            for k in 0..n {
                let i = g.flat_index(k, l);
                let x_edge = k == 0 || k == n - 1;
                let y_edge = l == 0 || l == n - 1;
                if !x_edge {
                    assert!((cx[i] - ox[i]).abs() < 1e-14);
                }
                if !y_edge {
                    assert!((cy[i] - oy[i]).abs() < 1e-14);
                }
            }
        }
        let edge_diff_y: f64 = (0..n).map(|k| (cy[k] - oy[k]).abs()).fold(0.0, f64::max);
        let edge_diff_x: f64 = (0..g.ny_points())
            .map(|l| {
                let i = g.flat_index(0, l);
                (cx[i] - ox[i]).abs()
            })
            .fold(0.0, f64::max);
        assert!(edge_diff_x > 1e-6 && edge_diff_y > 1e-6);
    }

    #[test]
    fn encode_delta_and_uniform() {
        let g = Grid2D::new(5, 2).unwrap();
        let mut values = vec![Complex64::new(0.0, 0.0); g.num_points()];
        values[g.flat_index(3, 2)] = Complex64::new(2.5, 0.0);
        let field = WaveField::single(g, values).unwrap();
        let enc = encode(&field).unwrap();
        assert_eq!(enc.states[0].amplitudes()[67], Complex64::new(1.0, 0.0));
        assert!((enc.norms[0] - 2.5).abs() < 1e-12);

        let uniform = WaveField::single(g, vec![Complex64::new(0.3, 0.0); g.num_points()]).unwrap();
        let enc = encode(&uniform).unwrap();
        let expect = 1.0 / (g.num_points() as f64).sqrt();
        for a in enc.states[0].amplitudes() {
            assert!((a - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let g = grid(3);
        let mut rng = rng_from_seed(41);
        let components: Vec<Vec<Complex64>> = (0..2)
            .map(|_| {
                (0..g.num_points())
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        let field = WaveField::from_components(g, components).unwrap();
        let back = decode_all(&encode(&field).unwrap()).unwrap();
        for c in 0..2 {
            for (a, b) in field.component(c).iter().zip(back.component(c)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_field_rejected() {
        let g = grid(2);
        let field = WaveField::single(g, vec![Complex64::new(0.0, 0.0); g.num_points()]).unwrap();
        assert!(matches!(encode(&field), Err(Error::ZeroField)));
    }

    #[test]
    fn vortex_center_and_far_field() {
        let g = grid(5);
        let field = init_vortex(g, 3.0, VortexProfile::TwoF).unwrap();
        let center = g.flat_index(g.nx_points() / 2, g.ny_points() / 2);
        assert!(field.component(0)[center].norm() < 1e-14);
        assert!((field.component(1)[center] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let corner = g.flat_index(0, 0);
        assert!(field.component(0)[corner].norm() < 0.01);
        assert!((field.component(1)[corner].norm() - 1.0).abs() < 0.01);
        // Unit pointwise density by construction.
        let rho = density(&field);
        assert!(rho.iter().all(|r| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn vortex_core_vorticity_single_signed() {
        // The initial swirl u_theta = c^2 r / (c^2 r^2 + b^4) peaks at a
        // finite radius (near r = 1.06 on this grid), so omega changes sign
        // there and is negative in the outer annulus. Only the inner core is
        // single-signed.
        let g = grid(5);
        let field = init_vortex(g, 3.0, VortexProfile::TwoF).unwrap();
        let fields = flow_fields(&field, DifferenceScheme::PeriodicCentral);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                if g.x(k).hypot(g.y(l)) < 1.0 {
                    let w = fields.omega[g.flat_index(k, l)];
                    lo = lo.min(w);
                    hi = hi.max(w);
                }
            }
        }
        assert!(lo > 0.0, "core omega in [{lo}, {hi}]");
        // Near the origin c -> 2 and b^4 -> 1, so u_theta ~ 4r and
        // omega(0) = (1/r) d(4r^2)/dr = 8; the grid estimate lands nearby.
        let center = fields.omega[g.flat_index(g.nx_points() / 2, g.ny_points() / 2)];
        assert!((center - 8.0).abs() < 0.8, "center omega {center}");
    }

    #[test]
    fn spin_identities() {
        let g = grid(3);
        let mut rng = rng_from_seed(55);
        let plus: Vec<Complex64> = (0..g.num_points())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let minus: Vec<Complex64> = (0..g.num_points())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let field = WaveField::two_component(g, plus, minus).unwrap();
        let rho = density(&field);
        let diag = spin_diagnostics(&field, DifferenceScheme::PeriodicCentral).unwrap();
        for i in 0..g.num_points() {
            let s_norm =
                (diag.s[0][i].powi(2) + diag.s[1][i].powi(2) + diag.s[2][i].powi(2)).sqrt();
            assert!((s_norm - rho[i]).abs() < 1e-12, "point {i}");
        }
    }

    #[test]
    fn spin_of_pure_up_and_constant_spinor() {
        let g = grid(3);
        let plus = vec![Complex64::new(0.6, 0.3); g.num_points()];
        let minus = vec![Complex64::new(0.0, 0.0); g.num_points()];
        let field = WaveField::two_component(g, plus, minus).unwrap();
        let rho = density(&field);
        let diag = spin_diagnostics(&field, DifferenceScheme::PeriodicCentral).unwrap();
        for i in 0..g.num_points() {
            assert!((diag.s[0][i] - rho[i]).abs() < 1e-14);
            assert!(diag.s[1][i].abs() < 1e-14);
            assert!(diag.s[2][i].abs() < 1e-14);
            // Constant spinor: all gradients vanish.
            assert!(diag.zeta.iter().all(|z| z[i].abs() < 1e-12));
            assert!(diag.p[i].abs() < 1e-12);
            assert!(diag.f_x[i].abs() < 1e-12 && diag.f_y[i].abs() < 1e-12);
        }
        assert!(spin_diagnostics(&plane_wave(g), DifferenceScheme::PeriodicCentral).is_err());
    }

    #[test]
    fn velocity_floor_masks_null_density() {
        let rho = vec![1.0, 0.5, 1e-9, 0.0];
        let jx = vec![1.0, 1.0, 1.0, 1.0];
        let jy = vec![0.0, 0.0, 0.0, 0.0];
        let (ux, _uy, mask) = velocity(&rho, &jx, &jy);
        assert!((ux[0] - 1.0).abs() < 1e-15);
        assert!((ux[1] - 2.0).abs() < 1e-15);
        assert_eq!(ux[2], 0.0);
        assert_eq!(ux[3], 0.0);
        assert_eq!(mask, vec![true, true, false, false]);
    }

    #[test]
    fn profiles_uniform_and_symmetry() {
        let g = grid(5);
        let field = init_diverging(g, 1.0).unwrap();
        let fields = flow_fields(&field, DifferenceScheme::PeriodicCentral);
        let profiles = profiles_and_integrals(&fields);
        // J_y vanishes identically for the layer flow.
        assert!(profiles.jy_x_avg.iter().all(|v| v.abs() < 1e-12));
        // x-averaged rho is the Gaussian itself (the flow is x-uniform).
        for (l, &val) in profiles.rho_x_avg.iter().enumerate() {
            let yv = g.y(l);
            assert!((val - (-yv * yv).exp()).abs() < 1e-12);
        }

        let uniform = FlowFields {
            grid: g,
            rho: vec![0.7; g.num_points()],
            jx: vec![0.0; g.num_points()],
            jy: vec![0.0; g.num_points()],
            ux: vec![0.0; g.num_points()],
            uy: vec![0.0; g.num_points()],
            omega: vec![0.0; g.num_points()],
            velocity_mask: vec![true; g.num_points()],
        };
        let p = profiles_and_integrals(&uniform);
        assert!(p.rho_x_avg.iter().all(|v| (v - 0.7).abs() < 1e-15));
    }

    #[test]
    fn theta_average_recovers_radial_profile() {
        let g = grid(6);
        let mut omega = vec![0.0; g.num_points()];
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                let r = g.x(k).hypot(g.y(l));
                omega[g.flat_index(k, l)] = (-r * r).exp();
            }
        }
        let fields = FlowFields {
            grid: g,
            rho: vec![1.0; g.num_points()],
            jx: vec![0.0; g.num_points()],
            jy: vec![0.0; g.num_points()],
            ux: vec![0.0; g.num_points()],
            uy: vec![0.0; g.num_points()],
            omega,
            velocity_mask: vec![true; g.num_points()],
        };
        let p = profiles_and_integrals(&fields);
        for (i, (&r, &avg)) in p.r_centers.iter().zip(&p.omega_theta_avg).enumerate() {
            let expected = (-r * r).exp();
            assert!((avg - expected).abs() < 0.25 * g.dx(), "bin {i}: {avg} vs {expected}");
        }
    }

    #[test]
    fn mass_of_unit_state() {
        let g = grid(4);
        let field = init_diverging(g, 1.0).unwrap();
        let (normalized, _) = field.normalized().unwrap();
        let mass = total_mass(&density(&normalized), g);
        // Unit-norm field: sum(rho) = 1, so mass = dx*dy exactly.
        assert!((mass - g.dx() * g.dy()).abs() < 1e-12);
    }
}
