//! Independent dense reference path.
//!
//! Builds explicit 2^N × 2^N Hamiltonian matrices in the z basis and
//! exponentiates them with a scaled-and-squared Taylor series, then evolves
//! by plain matrix-vector products. This deliberately shares nothing with
//! the Walsh–Hadamard diagonalization it validates (bond enumeration is the
//! one shared input; it is covered by hand-checked examples instead). Not
//! built for speed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::floquet::{apply_kick, build_floquet};
use crate::lattice::{build_bond_table, magnetization, Boundary, ChargerParams, CouplingRange};
use crate::observables::stored_energy;
use crate::statevector::StateVector;

/// Site cap for building dense operators (dimension 1024).
pub const DENSE_BUILD_CAP: usize = 10;
/// Site cap for full cross-validation runs.
pub const CROSS_VALIDATE_CAP: usize = 8;
/// Default Taylor truncation tolerance.
pub const DEFAULT_EXPM_TOL: f64 = 1e-12;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn add_assign_at(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] += value;
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::MatrixDimension(self.dim, other.dim));
        }
        Ok(DenseMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::MatrixDimension(self.dim, other.dim));
        }
        let dim = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        // i-k-j order keeps the inner loop contiguous in both operands.
        for i in 0..dim {
            for k in 0..dim {
                let aik = self.entries[i * dim + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_k = &other.entries[k * dim..(k + 1) * dim];
                let row_i = &mut out[i * dim..(i + 1) * dim];
                for (o, b) in row_i.iter_mut().zip(row_k) {
                    *o += aik * b;
                }
            }
        }
        Ok(DenseMatrix { dim, entries: out })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.entries
            .chunks_exact(self.dim)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim;
        let mut out = DenseMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.entries[j * dim + i] = self.entries[i * dim + j].conj();
            }
        }
        out
    }

    /// Max-row-sum (infinity) norm.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .map(|e| e.norm())
                    .sum()
            })
            .fold(0.0, f64::max)
    }

    /// Largest elementwise distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from Hermiticity, max |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

/// The three Hamiltonian pieces as dense matrices in the z basis.
#[derive(Debug, Clone)]
pub struct DenseOperators {
    pub h_xx: DenseMatrix,
    pub h_x: DenseMatrix,
    pub h_z: DenseMatrix,
}

/// Builds H_xx, H_x, H_z for the given geometry. H_z is diagonal with the
/// magnetization; H_x couples single-bit flips; H_xx couples double-bit
/// flips weighted by the bond table.
pub fn build_dense_operators(params: &ChargerParams) -> Result<DenseOperators> {
    params.validate()?;
    if params.n_sites > DENSE_BUILD_CAP {
        return Err(Error::DenseCap {
            cap: DENSE_BUILD_CAP,
            got: params.n_sites,
        });
    }
    let n = params.n_sites;
    let dim = params.dim();

    let mut h_z = DenseMatrix::zeros(dim);
    for b in 0..dim {
        h_z.set(b, b, Complex64::new(magnetization(b, n), 0.0));
    }

    let mut h_x = DenseMatrix::zeros(dim);
    for b in 0..dim {
        for j in 0..n {
            h_x.add_assign_at(b ^ (1 << j), b, Complex64::new(1.0, 0.0));
        }
    }

    let table = build_bond_table(params)?;
    let mut h_xx = DenseMatrix::zeros(dim);
    for bond in table.bonds() {
        let mask = (1usize << bond.i) | (1usize << bond.j);
        for b in 0..dim {
            h_xx.add_assign_at(b ^ mask, b, Complex64::new(bond.weight, 0.0));
        }
    }

    Ok(DenseOperators { h_xx, h_x, h_z })
}

/// U = exp(−i·H·t) by scaling-and-squaring Taylor summation.
///
/// The scale s is chosen so that ‖H·t‖/2^s ≤ 0.5 in the max-row-sum norm;
/// terms are accumulated until the running term norm drops below tol·2^(−s),
/// then the result is squared s times. The result is unitary to within an
/// order of magnitude of `tol` for Hermitian input.
pub fn dense_expm(h: &DenseMatrix, t: f64, tol: f64) -> Result<DenseMatrix> {
    if !h.is_finite() || !t.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let dim = h.dim();
    let mut squarings: u32 = 0;
    let mut scaled_norm = h.max_row_sum() * t.abs();
    while scaled_norm > 0.5 && squarings < 64 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let scale = 2f64.powi(squarings as i32);
    let a = h.scale(Complex64::new(0.0, -t / scale));
    let term_tol = tol / scale;

    let mut sum = DenseMatrix::identity(dim);
    let mut term = DenseMatrix::identity(dim);
    for k in 1..=200u32 {
        term = term
            .matmul(&a)?
            .scale(Complex64::new(1.0 / f64::from(k), 0.0));
        sum = sum.add(&term)?;
        if term.max_row_sum() <= term_tol {
            break;
        }
    }
    let mut u = sum;
    for _ in 0..squarings {
        u = u.matmul(&u)?;
    }
    Ok(u)
}

/// Dense one-period operator exp(−i·τ1·h_z·H_z)·exp(−i·τ0·(J·H_xx + h_x·H_x)).
pub fn dense_floquet_operator(params: &ChargerParams, expm_tol: f64) -> Result<DenseMatrix> {
    let ops = build_dense_operators(params)?;
    let h_first = ops
        .h_xx
        .scale(Complex64::new(params.coupling, 0.0))
        .add(&ops.h_x.scale(Complex64::new(params.h_x, 0.0)))?;
    let u_first = dense_expm(&h_first, params.tau0, expm_tol)?;
    let h_second = ops.h_z.scale(Complex64::new(params.h_z, 0.0));
    let u_second = dense_expm(&h_second, params.tau1, expm_tol)?;
    u_second.matmul(&u_first)
}

/// Outcome of one fast-path-versus-dense comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossValidation {
    /// Largest per-amplitude deviation seen at any kick.
    pub max_amp_dev: f64,
    /// Largest stored-energy deviation seen at any kick.
    pub max_energy_dev: f64,
    pub pass: bool,
}

/// Evolves the ground state `n_kicks` times along both routes — the
/// Walsh–Hadamard fast path and dense matrix-vector products under the
/// Taylor-exponentiated period operator — comparing amplitudes and stored
/// energy at every kick. Passes when the amplitude deviation stays within
/// `tol`.
pub fn cross_validate(params: &ChargerParams, n_kicks: usize, tol: f64) -> Result<CrossValidation> {
    params.validate()?;
    if params.n_sites > CROSS_VALIDATE_CAP {
        return Err(Error::DenseCap {
            cap: CROSS_VALIDATE_CAP,
            got: params.n_sites,
        });
    }
    let u_f = dense_floquet_operator(params, DEFAULT_EXPM_TOL)?;
    let op = build_floquet(params)?;

    let mut fast = StateVector::ground_state(params.n_sites, params.omega)?;
    let mut dense: Vec<Complex64> = fast.amplitudes().to_vec();

    let mut max_amp_dev = 0.0f64;
    let mut max_energy_dev = 0.0f64;
    for _ in 0..n_kicks {
        apply_kick(&mut fast, &op)?;
        dense = u_f.mul_vec(&dense);
        let amp_dev = fast
            .amplitudes()
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_amp_dev = max_amp_dev.max(amp_dev);

        let dense_state = StateVector::from_amplitudes(params.n_sites, dense.clone())?;
        let energy_dev =
            (stored_energy(&fast, params.omega) - stored_energy(&dense_state, params.omega)).abs();
        max_energy_dev = max_energy_dev.max(energy_dev);
    }
    Ok(CrossValidation {
        max_amp_dev,
        max_energy_dev,
        pass: max_amp_dev <= tol,
    })
}

/// One entry of the fixed validation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPoint {
    pub params: ChargerParams,
}

impl ValidationPoint {
    pub fn label(&self) -> String {
        let p = &self.params;
        format!(
            "N={} {} {} hx={} tau0={:.6} tau1={:.6}",
            p.n_sites, p.range, p.boundary, p.h_x, p.tau0, p.tau1
        )
    }
}

/// The fixed validation grid: N ∈ {2..6} × both boundaries × both ranges ×
/// h_x ∈ {0, 1}, with τ0 and τ1 cycling deterministically through
/// {π/8, π/4, 3π/8, π/2}. Forty points total; frozen so repeated runs are
/// comparable.
pub fn validation_grid() -> Vec<ValidationPoint> {
    use std::f64::consts::PI;
    let taus = [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0];
    let mut grid = Vec::new();
    let mut index = 0usize;
    for n_sites in 2..=6usize {
        for boundary in [Boundary::Periodic, Boundary::Open] {
            for range in [CouplingRange::LongRange, CouplingRange::NearestNeighbor] {
                for h_x in [0.0, 1.0] {
                    let params = ChargerParams {
                        n_sites,
                        h_x,
                        boundary,
                        range,
                        tau0: taus[index % 4],
                        tau1: taus[(index / 4 + index) % 4],
                        ..ChargerParams::new(n_sites, 0.0)
                    };
                    grid.push(ValidationPoint { params });
                    index += 1;
                }
            }
        }
    }
    grid
}
