//! Shared fixtures for the kernel benchmarks.

use fqb_core::{ChargerParams, StateVector};

/// Resonant long-range ring parameters at J = h_z = ω = 1.
pub fn ring_params(n_sites: usize) -> ChargerParams {
    ChargerParams::new(n_sites, std::f64::consts::FRAC_PI_2)
}

/// A normalized state with structure in every amplitude, for kernels whose
/// cost should not depend on sparsity.
pub fn dense_state(n_sites: usize) -> StateVector {
    let mut psi = StateVector::ground_state(n_sites, 1.0).expect("valid size");
    psi.fwht_inplace();
    let dim = psi.dim();
    let phases: Vec<f64> = (0..dim).map(|b| (b as f64) * 0.37).collect();
    psi.apply_diagonal_phase(&phases).expect("matching table");
    psi
}
