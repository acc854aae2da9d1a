//! Full 2^N complex state vector in the z-product basis, together with the
//! normalized fast Walsh–Hadamard transform that switches between the z and
//! x product bases, diagonal phase application, and inner-product machinery.
//!
//! A state is exclusively owned by one evolution at a time; all operations
//! mutate in place. The norm is never corrected during evolution — drift is
//! asserted at observation points so numerical bugs surface instead of
//! hiding.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::magnetization;

/// 2^N complex amplitudes indexed by z-basis bit pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The fully discharged product state: every local z-eigenvalue −1,
    /// i.e. amplitude 1 at index 2^N − 1. Its battery energy is −ωN.
    ///
    /// `omega` must be positive; a nonpositive splitting leaves the ground
    /// state ill-defined or inverted.
    pub fn ground_state(n_sites: usize, omega: f64) -> Result<Self> {
        if n_sites < 1 {
            return Err(Error::SiteCount(n_sites));
        }
        if n_sites > 30 {
            return Err(Error::TooManySites(n_sites));
        }
        if omega <= 0.0 || omega.is_nan() {
            return Err(Error::NonPositiveOmega(omega));
        }
        let dim = 1usize << n_sites;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[dim - 1] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_sites, amps })
    }

    /// Wraps an existing amplitude buffer; the length must be 2^n_sites.
    pub fn from_amplitudes(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_sites < 1 {
            return Err(Error::SiteCount(n_sites));
        }
        let want = 1usize << n_sites;
        if amps.len() != want {
            return Err(Error::AmplitudeLength {
                want,
                got: amps.len(),
            });
        }
        Ok(StateVector { n_sites, amps })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// ℓ₂ norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
    }

    /// In-place normalized fast Walsh–Hadamard transform H^(⊗N) with
    /// H = (1/√2)[[1,1],[1,−1]].
    ///
    /// Self-inverse and norm-preserving; O(2^N·N) time, O(1) extra space.
    /// The 1/√2 factor is applied per butterfly stage so intermediate
    /// magnitudes stay O(1).
    pub fn fwht_inplace(&mut self) {
        let amps = &mut self.amps;
        let n = amps.len();
        let mut half = 1;
        while half < n {
            let stride = half << 1;
            let mut block = 0;
            while block < n {
                for i in block..block + half {
                    let a = amps[i];
                    let b = amps[i + half];
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i + half] = (a - b) * FRAC_1_SQRT_2;
                }
                block += stride;
            }
            half = stride;
        }
    }

    /// Multiplies each amplitude by exp(−i·phase[b]).
    ///
    /// Preserves |amps[b]| per element up to rounding. The table length must
    /// match the state dimension.
    pub fn apply_diagonal_phase(&mut self, phase: &[f64]) -> Result<()> {
        if phase.len() != self.amps.len() {
            return Err(Error::PhaseTableLength {
                want: self.amps.len(),
                got: phase.len(),
            });
        }
        for (a, &theta) in self.amps.iter_mut().zip(phase) {
            *a *= Complex64::new(theta.cos(), -theta.sin());
        }
        Ok(())
    }

    /// Battery-Hamiltonian expectation ⟨ω Σ_j σ_j^z⟩ = Σ_b |amps[b]|²·ω·m(b).
    pub fn energy_expectation_z(&self, omega: f64) -> f64 {
        let n = self.n_sites;
        self.amps
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * magnetization(b, n))
            .sum::<f64>()
            * omega
    }

    /// Debug dump: a 4-byte little-endian site count followed by interleaved
    /// re/im doubles. Not a stability contract.
    pub fn write_amplitudes<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(&(self.n_sites as u32).to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn ground_state_examples() {
        let psi = StateVector::ground_state(2, 1.0).unwrap();
        assert_eq!(psi.amplitudes()[3], Complex64::new(1.0, 0.0));
        assert_eq!(psi.energy_expectation_z(1.0), -2.0);

        let psi = StateVector::ground_state(1, 1.0).unwrap();
        assert_eq!(psi.amplitudes()[1], Complex64::new(1.0, 0.0));
        assert_eq!(psi.energy_expectation_z(1.0), -1.0);

        let psi = StateVector::ground_state(8, 1.0).unwrap();
        assert_eq!(psi.energy_expectation_z(1.0), -8.0);
    }

    #[test]
    fn ground_state_rejects_nonpositive_omega() {
        assert!(StateVector::ground_state(2, 0.0).is_err());
        assert!(StateVector::ground_state(2, -1.0).is_err());
        assert!(StateVector::ground_state(2, f64::NAN).is_err());
    }

    #[test]
    fn single_hadamard() {
        let mut psi = StateVector::from_amplitudes(
            1,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        psi.fwht_inplace();
        assert!(close(
            psi.amplitudes()[0],
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            1e-15
        ));
        assert!(close(
            psi.amplitudes()[1],
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            1e-15
        ));
    }

    #[test]
    fn two_site_hadamard_column() {
        // H⊗H applied to |11⟩ gives (1, −1, −1, 1)/2.
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[3] = Complex64::new(1.0, 0.0);
        let mut psi = StateVector::from_amplitudes(2, amps).unwrap();
        psi.fwht_inplace();
        let want = [0.5, -0.5, -0.5, 0.5];
        for (a, w) in psi.amplitudes().iter().zip(want) {
            assert!(close(*a, Complex64::new(w, 0.0), 1e-15));
        }
    }

    #[test]
    fn equal_superposition_has_zero_energy() {
        for n in 1..=6 {
            let mut psi = StateVector::ground_state(n, 1.0).unwrap();
            psi.fwht_inplace();
            assert!(psi.energy_expectation_z(1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn phase_table_identity_and_global_phase() {
        let mut psi = StateVector::ground_state(3, 1.0).unwrap();
        psi.fwht_inplace();
        let before = psi.clone();
        psi.apply_diagonal_phase(&[0.0; 8]).unwrap();
        assert_eq!(psi, before);
        psi.apply_diagonal_phase(&[0.37; 8]).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
        assert!((psi.energy_expectation_z(1.0) - before.energy_expectation_z(1.0)).abs() < 1e-12);
    }

    #[test]
    fn phase_table_length_mismatch() {
        let mut psi = StateVector::ground_state(3, 1.0).unwrap();
        assert_eq!(
            psi.apply_diagonal_phase(&[0.0; 4]),
            Err(Error::PhaseTableLength { want: 8, got: 4 })
        );
    }

    #[test]
    fn fully_flipped_state_has_energy_plus_omega_n() {
        let n = 5;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        let psi = StateVector::from_amplitudes(n, amps).unwrap();
        assert_eq!(psi.energy_expectation_z(2.0), 2.0 * n as f64);
    }

    #[test]
    fn inner_product_basics() {
        let a = StateVector::ground_state(2, 1.0).unwrap();
        assert_eq!(a.inner(&a), Complex64::new(1.0, 0.0));
        let mut b = a.clone();
        b.fwht_inplace();
        // <Wg|g> picks out the last amplitude of the transformed state.
        assert!((b.inner(&a) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let mut c = a.clone();
        c.apply_diagonal_phase(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        let ip = a.inner(&c);
        assert!((ip - Complex64::new(1f64.cos(), -(1f64.sin()))).norm() < 1e-15);
    }

    #[test]
    fn amplitude_dump_layout() {
        let psi = StateVector::ground_state(1, 1.0).unwrap();
        let mut buf = Vec::new();
        psi.write_amplitudes(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 2 * 16);
        assert_eq!(u32::from_le_bytes(buf[..4].try_into().unwrap()), 1);
        let re1 = f64::from_le_bytes(buf[20..28].try_into().unwrap());
        assert_eq!(re1, 1.0);
    }
}
