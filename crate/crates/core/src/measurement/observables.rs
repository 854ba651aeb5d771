//! Density and momentum measurement operators and their Pauli expansions.
//!
//! The density operator at a grid point is the rank-1 projector onto that
//! point's basis index, so one Z-basis count table yields the whole density
//! field. Momentum needs off-diagonal antisymmetric hops between a point and
//! its finite-difference neighbors; those expand into Pauli strings with an
//! odd number of Y letters on the bits where the two indices differ.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hydro::{DifferenceScheme, Grid2D};
use crate::pauli::{PauliOp, PauliString};
use crate::state::QuantumState;

/// Sparse Hermitian operator on `2^n` dimensions.
///
/// Entries store both halves of every conjugate pair explicitly; the
/// constructor rejects inputs whose transpose conjugate differs.
#[derive(Debug, Clone)]
pub struct SparseHermitian {
    num_qubits: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    pub fn from_entries(
        num_qubits: usize,
        entries: Vec<(usize, usize, Complex64)>,
    ) -> Result<SparseHermitian> {
        let dim = 1usize << num_qubits;
        let mut map: HashMap<(usize, usize), Complex64> = HashMap::new();
        for &(r, c, v) in &entries {
            if r >= dim || c >= dim {
                return Err(Error::InvalidParameter(format!(
                    "entry ({r}, {c}) outside dimension {dim}"
                )));
            }
            *map.entry((r, c)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let scale = map.values().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
        for (&(r, c), &v) in &map {
            let mirror = map.get(&(c, r)).copied().unwrap_or(Complex64::new(0.0, 0.0));
            if (v - mirror.conj()).norm() > 1e-12 * scale {
                return Err(Error::NotHermitian);
            }
        }
        Ok(SparseHermitian { num_qubits, entries })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    /// `<psi| O |psi>`; real because the operator is Hermitian.
    pub fn expectation(&self, state: &QuantumState) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                actual: 1 << state.num_qubits(),
            });
        }
        let amps = state.amplitudes();
        let acc: Complex64 = self
            .entries
            .iter()
            .map(|&(r, c, v)| amps[r].conj() * v * amps[c])
            .sum();
        Ok(acc.re)
    }
}

/// Rank-1 projector onto the basis index of grid point `(k, l)`
/// (`k` along x, `l` along y).
pub fn density_observable(grid: Grid2D, k: usize, l: usize) -> Result<SparseHermitian> {
    check_point(grid, k, l)?;
    let p = grid.flat_index(k, l);
    SparseHermitian::from_entries(grid.num_qubits(), vec![(p, p, Complex64::new(1.0, 0.0))])
}

/// Momentum operators (x and y parts) at grid point `(k, l)`.
///
/// Built from the same difference stencils as the classical evaluation:
/// interior points couple to both neighbors with weight `1/(4 delta)` per
/// hop, and under the one-sided scheme edge points couple to their single
/// inward neighbor with weight `1/(2 delta)`.
pub fn momentum_observable(
    grid: Grid2D,
    k: usize,
    l: usize,
    scheme: DifferenceScheme,
) -> Result<(SparseHermitian, SparseHermitian)> {
    check_point(grid, k, l)?;
    let n = grid.num_qubits();
    let p = grid.flat_index(k, l);
    let nx = grid.nx_points();
    let ny = grid.ny_points();

    // hop(r, c, w) stands for the Hermitian pair i w (|r><c| - |c><r|).
    let hop = |entries: &mut Vec<(usize, usize, Complex64)>, r: usize, c: usize, w: f64| {
        entries.push((r, c, Complex64::new(0.0, w)));
        entries.push((c, r, Complex64::new(0.0, -w)));
    };

    let mut ex = Vec::new();
    let at_edge_x = k == 0 || k == nx - 1;
    if scheme == DifferenceScheme::OneSidedAtBoundary && at_edge_x {
        if k == 0 {
            hop(&mut ex, grid.flat_index(k + 1, l), p, 1.0 / (2.0 * grid.dx()));
        } else {
            hop(&mut ex, grid.flat_index(k - 1, l), p, -1.0 / (2.0 * grid.dx()));
        }
    } else {
        hop(&mut ex, grid.flat_index((k + 1) % nx, l), p, 1.0 / (4.0 * grid.dx()));
        hop(&mut ex, grid.flat_index((k + nx - 1) % nx, l), p, -1.0 / (4.0 * grid.dx()));
    }

    let mut ey = Vec::new();
    let at_edge_y = l == 0 || l == ny - 1;
    if scheme == DifferenceScheme::OneSidedAtBoundary && at_edge_y {
        if l == 0 {
            hop(&mut ey, grid.flat_index(k, l + 1), p, 1.0 / (2.0 * grid.dy()));
        } else {
            hop(&mut ey, grid.flat_index(k, l - 1), p, -1.0 / (2.0 * grid.dy()));
        }
    } else {
        hop(&mut ey, grid.flat_index(k, (l + 1) % ny), p, 1.0 / (4.0 * grid.dy()));
        hop(&mut ey, grid.flat_index(k, (l + ny - 1) % ny), p, -1.0 / (4.0 * grid.dy()));
    }

    Ok((
        SparseHermitian::from_entries(n, ex)?,
        SparseHermitian::from_entries(n, ey)?,
    ))
}

fn check_point(grid: Grid2D, k: usize, l: usize) -> Result<()> {
    if k >= grid.nx_points() || l >= grid.ny_points() {
        return Err(Error::InvalidParameter(format!(
            "grid point ({k}, {l}) outside {}x{}",
            grid.nx_points(),
            grid.ny_points()
        )));
    }
    Ok(())
}

/// Expands a sparse Hermitian operator into Pauli strings with real
/// coefficients `Tr(O P) / 2^n`.
///
/// Only strings that connect some stored entry are visited: an entry
/// `(r, c)` meets exactly the strings with X or Y on the bits where `r` and
/// `c` differ and I or Z elsewhere, `2^n` of them, walked with a
/// subset-product table instead of scanning all `4^n` strings. Exact zero
/// coefficients are dropped; the result is sorted by label.
pub fn pauli_decompose(op: &SparseHermitian) -> Vec<PauliString> {
    let n = op.num_qubits();
    let dim = 1usize << n;
    let norm = 1.0 / dim as f64;
    // Key: (differing-bit mask, letter-choice mask). At each bit position,
    // choice 0 means I or X, choice 1 means Z or Y.
    let mut coeffs: HashMap<(usize, usize), Complex64> = HashMap::new();
    let mut products = vec![Complex64::new(0.0, 0.0); dim];
    for &(r, c, v) in op.entries() {
        let diff = r ^ c;
        // Toggling bit j multiplies the matrix element <c|P|r> by a fixed
        // factor: Z picks up (-1)^{r_j}, Y relative to X picks up +/-i.
        let factor = |j: usize| -> Complex64 {
            let rj = (r >> j) & 1;
            if (diff >> j) & 1 == 1 {
                if rj == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) }
            } else if rj == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        };
        products[0] = Complex64::new(1.0, 0.0);
        for choice in 1..dim {
            let low = choice.trailing_zeros() as usize;
            products[choice] = products[choice & (choice - 1)] * factor(low);
        }
        for choice in 0..dim {
            *coeffs.entry((diff, choice)).or_insert(Complex64::new(0.0, 0.0)) +=
                v * products[choice] * norm;
        }
    }

    let mut strings: Vec<PauliString> = coeffs
        .into_iter()
        .filter(|&(_, v)| v.re != 0.0)
        .map(|((diff, choice), v)| {
            debug_assert!(v.im.abs() < 1e-12 * v.re.abs().max(1.0));
            let ops = (0..n)
                .map(|q| {
                    let bit = n - 1 - q;
                    match ((diff >> bit) & 1, (choice >> bit) & 1) {
                        (0, 0) => PauliOp::I,
                        (0, 1) => PauliOp::Z,
                        (1, 0) => PauliOp::X,
                        _ => PauliOp::Y,
                    }
                })
                .collect();
            PauliString::new(ops, v.re)
        })
        .collect();
    strings.sort_by(|a, b| a.ops.cmp(&b.ops));
    strings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::{encode, init_diverging, momentum_fd, WaveField};
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn dense_of_entries(n: usize, entries: &[(usize, usize, Complex64)]) -> Vec<Vec<Complex64>> {
        let dim = 1 << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for &(r, c, v) in entries {
            m[r][c] += v;
        }
        m
    }

    fn dense_of_strings(n: usize, strings: &[PauliString]) -> Vec<Vec<Complex64>> {
        let dim = 1usize << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        let elem = |op: PauliOp, cb: usize, rb: usize| -> Complex64 {
            match op {
                PauliOp::I => {
                    if cb == rb { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
                }
                PauliOp::Z => {
                    if cb != rb {
                        Complex64::new(0.0, 0.0)
                    } else if rb == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(-1.0, 0.0)
                    }
                }
                PauliOp::X => {
                    if cb != rb { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
                }
                PauliOp::Y => {
                    if cb == rb {
                        Complex64::new(0.0, 0.0)
                    } else if rb == 1 {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    }
                }
            }
        };
        for s in strings {
            for row in 0..dim {
                for col in 0..dim {
                    let mut e = Complex64::new(1.0, 0.0);
                    for (q, &op) in s.ops.iter().enumerate() {
                        let bit = n - 1 - q;
                        e *= elem(op, (row >> bit) & 1, (col >> bit) & 1);
                        if e.norm_sqr() == 0.0 {
                            break;
                        }
                    }
                    m[row][col] += s.coefficient * e;
                }
            }
        }
        m
    }

    #[test]
    fn density_projector_and_completeness() {
        let g = Grid2D::new(2, 2).unwrap();
        let op = density_observable(g, 0, 0).unwrap();
        assert_eq!(op.entries(), &[(0, 0, Complex64::new(1.0, 0.0))]);
        let mut uniform = QuantumState::zero(4);
        for q in 0..4 {
            uniform.apply_gate(&crate::gate::Gate::H { qubit: q }).unwrap();
        }
        assert!((op.expectation(&uniform).unwrap() - 1.0 / 16.0).abs() < 1e-12);

        let mut diag = vec![Complex64::new(0.0, 0.0); 16];
        for l in 0..4 {
            for k in 0..4 {
                let o = density_observable(g, k, l).unwrap();
                for &(r, c, v) in o.entries() {
                    assert_eq!(r, c);
                    diag[r] += v;
                }
            }
        }
        for d in diag {
            assert_eq!(d, Complex64::new(1.0, 0.0));
        }
        assert!(density_observable(g, 4, 0).is_err());
    }

    #[test]
    fn density_expectation_matches_amplitudes() {
        let g = Grid2D::new(3, 2).unwrap();
        let field = init_diverging(g, 1.0).unwrap();
        let enc = encode(&field).unwrap();
        let total: f64 = field.component(0).iter().map(|a| a.norm_sqr()).sum();
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                let op = density_observable(g, k, l).unwrap();
                let got = op.expectation(&enc.states[0]).unwrap();
                let want = field.component(0)[g.flat_index(k, l)].norm_sqr() / total;
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antisymmetric_hop_is_half_y() {
        let op = SparseHermitian::from_entries(
            1,
            vec![(1, 0, Complex64::new(0.0, 0.5)), (0, 1, Complex64::new(0.0, -0.5))],
        )
        .unwrap();
        let strings = pauli_decompose(&op);
        assert_eq!(strings.len(), 1);
        assert_eq!(strings[0].label(), "Y");
        assert!((strings[0].coefficient - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projector_decomposes_to_half_i_plus_z() {
        let op =
            SparseHermitian::from_entries(1, vec![(0, 0, Complex64::new(1.0, 0.0))]).unwrap();
        let strings = pauli_decompose(&op);
        let labels: Vec<(String, f64)> =
            strings.iter().map(|s| (s.label(), s.coefficient)).collect();
        assert_eq!(labels, vec![("I".to_string(), 0.5), ("Z".to_string(), 0.5)]);
    }

    #[test]
    fn lone_x_decomposes_to_itself() {
        let op = SparseHermitian::from_entries(
            1,
            vec![(0, 1, Complex64::new(1.0, 0.0)), (1, 0, Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let strings = pauli_decompose(&op);
        assert_eq!(strings.len(), 1);
        assert_eq!(strings[0].label(), "X");
        assert!((strings[0].coefficient - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        assert!(matches!(
            SparseHermitian::from_entries(1, vec![(0, 1, Complex64::new(1.0, 0.0))]),
            Err(Error::NotHermitian)
        ));
        assert!(matches!(
            SparseHermitian::from_entries(1, vec![(0, 0, Complex64::new(0.0, 1.0))]),
            Err(Error::NotHermitian)
        ));
        assert!(SparseHermitian::from_entries(1, vec![(0, 4, Complex64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn decomposition_rebuilds_random_operator() {
        let mut rng = rng_from_seed(31);
        let n = 3;
        let dim = 1 << n;
        let mut entries = Vec::new();
        for _ in 0..10 {
            let r = rng.gen_range(0..dim);
            let c = rng.gen_range(0..dim);
            let v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            if r == c {
                entries.push((r, c, Complex64::new(v.re, 0.0)));
            } else {
                entries.push((r, c, v));
                entries.push((c, r, v.conj()));
            }
        }
        let op = SparseHermitian::from_entries(n, entries.clone()).unwrap();
        let rebuilt = dense_of_strings(n, &pauli_decompose(&op));
        let direct = dense_of_entries(n, &entries);
        for r in 0..dim {
            for c in 0..dim {
                assert!((rebuilt[r][c] - direct[r][c]).norm() < 1e-12, "({r},{c})");
            }
        }
    }

    #[test]
    fn momentum_expectation_matches_finite_differences() {
        let g = Grid2D::new(3, 2).unwrap();
        let mut rng = rng_from_seed(77);
        let values: Vec<Complex64> = (0..g.num_points())
            .map(|_| Complex64::new(rng.gen::<f64>() + 0.1, rng.gen::<f64>() - 0.5))
            .collect();
        let field = WaveField::single(g, values).unwrap();
        let enc = encode(&field).unwrap();
        let scale = enc.norms[0] * enc.norms[0];
        for scheme in [DifferenceScheme::PeriodicCentral, DifferenceScheme::OneSidedAtBoundary] {
            let (jx, jy) = momentum_fd(&field, scheme);
            for l in 0..g.ny_points() {
                for k in 0..g.nx_points() {
                    let (ox, oy) = momentum_observable(g, k, l, scheme).unwrap();
                    let i = g.flat_index(k, l);
                    assert!(
                        (scale * ox.expectation(&enc.states[0]).unwrap() - jx[i]).abs() < 1e-10,
                        "x ({k},{l}) {scheme:?}"
                    );
                    assert!(
                        (scale * oy.expectation(&enc.states[0]).unwrap() - jy[i]).abs() < 1e-10,
                        "y ({k},{l}) {scheme:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn plane_wave_total_momentum() {
        // psi = e^{ix}: summed <J_x> relates to summed density by the
        // discrete factor sin(dx)/dx.
        let g = Grid2D::new(4, 2).unwrap();
        let values: Vec<Complex64> = (0..g.num_points())
            .map(|i| {
                let (k, _) = g.coords(i);
                Complex64::from_polar(1.0, g.x(k))
            })
            .collect();
        let field = WaveField::single(g, values).unwrap();
        let enc = encode(&field).unwrap();
        let mut total_j = 0.0;
        let mut total_mass = 0.0;
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                let (ox, _) = momentum_observable(g, k, l, DifferenceScheme::PeriodicCentral).unwrap();
                total_j += ox.expectation(&enc.states[0]).unwrap() * g.dx() * g.dy();
                let d = density_observable(g, k, l).unwrap();
                total_mass += d.expectation(&enc.states[0]).unwrap() * g.dx() * g.dy();
            }
        }
        let expect = g.dx().sin() / g.dx() * total_mass;
        assert!((total_j - expect).abs() < 1e-12, "{total_j} vs {expect}");
    }

    #[test]
    fn momentum_string_count_small_grid() {
        // On an 8x8 grid the hops connect index pairs differing on one of 3
        // trailing-bit masks per register. A mask of size k yields 2^{6-k}
        // I/Z fillings times 2^{k-1} odd-Y patterns, 2^5 = 32 strings, so
        // each register contributes 96 and the registers are disjoint: 192.
        let g = Grid2D::new(3, 3).unwrap();
        let mut labels = std::collections::BTreeSet::new();
        for l in 0..g.ny_points() {
            for k in 0..g.nx_points() {
                let (ox, oy) =
                    momentum_observable(g, k, l, DifferenceScheme::OneSidedAtBoundary).unwrap();
                for s in pauli_decompose(&ox) {
                    labels.insert(s.label());
                }
                for s in pauli_decompose(&oy) {
                    labels.insert(s.label());
                }
            }
        }
        assert_eq!(labels.len(), 192);
    }
}
