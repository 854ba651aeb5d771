//! Shared helpers for the integration suites. The dense DFT evolution here
//! is an independent reference path: plain O(N^2) transforms with locally
//! computed centered wavenumbers, sharing no code with the library's FFT
//! oracle or the circuits it checks.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use qflow::circuits::build_evolution;
use qflow::hydro::{encode, Grid2D, WaveField};
use qflow::oracle::{initial_field, spectral_evolve, FlowKind, FlowParams};

fn centered(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i < n / 2 { i as f64 } else { i as f64 - n as f64 }).collect()
}

/// Free evolution by naive quadratic-cost DFTs. Slow and simple on purpose;
/// keep grids small.
pub fn dense_dft_evolve(field: &WaveField, t: f64) -> WaveField {
    let grid = field.grid();
    let nx = grid.nx_points();
    let ny = grid.ny_points();
    let kx = centered(nx);
    let ky = centered(ny);
    let dim = nx * ny;

    let mut components = Vec::with_capacity(field.num_components());
    for c in field.components() {
        let mut f = vec![Complex64::new(0.0, 0.0); dim];
        for my in 0..ny {
            for mx in 0..nx {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..ny {
                    for k in 0..nx {
                        let angle = -2.0 * PI
                            * ((mx * k) as f64 / nx as f64 + (my * l) as f64 / ny as f64);
                        acc += c[k + nx * l] * Complex64::from_polar(1.0, angle);
                    }
                }
                f[mx + nx * my] = acc * Complex64::from_polar(1.0, -(kx[mx] * kx[mx] + ky[my] * ky[my]) * t / 2.0);
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for l in 0..ny {
            for k in 0..nx {
                let mut acc = Complex64::new(0.0, 0.0);
                for my in 0..ny {
                    for mx in 0..nx {
                        let angle = 2.0 * PI
                            * ((mx * k) as f64 / nx as f64 + (my * l) as f64 / ny as f64);
                        acc += f[mx + nx * my] * Complex64::from_polar(1.0, angle);
                    }
                }
                out[k + nx * l] = acc / dim as f64;
            }
        }
        components.push(out);
    }
    WaveField::from_components(grid, components).unwrap()
}

/// Largest amplitude deviation after aligning one global phase, fixed at
/// the reference vector's largest entry.
pub fn max_dev_up_to_phase(actual: &[Complex64], expected: &[Complex64]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    let anchor = expected
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let phase = if actual[anchor].norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let p = expected[anchor] / actual[anchor];
        p / p.norm()
    };
    actual
        .iter()
        .zip(expected)
        .map(|(a, e)| (a * phase - e).norm())
        .fold(0.0, f64::max)
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    cov / (va.sqrt() * vb.sqrt())
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) }
}

/// One circuit-vs-oracle equivalence case at 32x32: evolve every encoded
/// component of the named flow with the gate circuit and report the worst
/// amplitude deviation from the spectral reference, plus the wall time.
pub fn evolution_case(kind: FlowKind, t: f64) -> (f64, f64) {
    let start = Instant::now();
    let grid = Grid2D::new(5, 5).unwrap();
    let raw = initial_field(kind, grid, &FlowParams::default()).unwrap();
    let (normalized, _) = raw.normalized().unwrap();
    let enc = encode(&normalized).unwrap();
    let oracle = spectral_evolve(&normalized, t).unwrap();
    let circuit = build_evolution(5, 5, t).unwrap();

    let mut worst: f64 = 0.0;
    for (c, state) in enc.states.iter().enumerate() {
        let mut evolved = state.clone();
        evolved.apply_circuit(&circuit).unwrap();
        let reference: Vec<Complex64> =
            oracle.component(c).iter().map(|v| v / enc.norms[c]).collect();
        worst = worst.max(max_dev_up_to_phase(evolved.amplitudes(), &reference));
    }
    (worst, start.elapsed().as_secs_f64())
}
