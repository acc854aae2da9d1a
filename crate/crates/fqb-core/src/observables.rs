//! Charging metrics and entanglement diagnostics on stroboscopic series:
//! stored energy, average charging power, reduced density matrices and their
//! von Neumann entropy, maximum-energy extraction, and empirical period
//! detection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::floquet::KickSeries;
use crate::jacobi;
use crate::statevector::StateVector;

/// Dense reduced-matrix cap: subsystems above this size are rejected.
pub const MAX_SUBSYSTEM_SITES: usize = 12;

/// Logarithm base used for entropies. The natural log is the default;
/// base 2 reports in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        }
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "e" | "natural" => Ok(LogBase::Natural),
            "2" | "two" => Ok(LogBase::Two),
            other => Err(format!("unknown log base `{other}` (expected e or 2)")),
        }
    }
}

/// A subsystem X of the chain, given as 0-based site indices, plus the log
/// base for its entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionSpec {
    sites: Vec<usize>,
    log_base: LogBase,
}

impl BipartitionSpec {
    /// Builds a spec from site indices; duplicates are rejected, order is
    /// normalized ascending.
    pub fn new(sites: impl IntoIterator<Item = usize>, log_base: LogBase) -> Result<Self> {
        let mut sites: Vec<usize> = sites.into_iter().collect();
        sites.sort_unstable();
        if let Some(w) = sites.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSite(w[0]));
        }
        if sites.is_empty() {
            return Err(Error::BipartitionSize { got: 0, n_sites: 0 });
        }
        if sites.len() > MAX_SUBSYSTEM_SITES {
            return Err(Error::BipartitionTooLarge(sites.len(), MAX_SUBSYSTEM_SITES));
        }
        Ok(BipartitionSpec { sites, log_base })
    }

    /// Single-site subsystem, the 1|(N−1) bipartition used throughout.
    pub fn single_site(site: usize, log_base: LogBase) -> Self {
        BipartitionSpec {
            sites: vec![site],
            log_base,
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    pub fn in_natural_log(mut self) -> Self {
        self.log_base = LogBase::Natural;
        self
    }

    /// Checks the subsystem against a concrete chain length: 1 ≤ |X| ≤ N−1
    /// and every site in range.
    pub fn validated_for(self, n_sites: usize) -> Result<Self> {
        if self.sites.is_empty() || self.sites.len() >= n_sites {
            return Err(Error::BipartitionSize {
                got: self.sites.len(),
                n_sites,
            });
        }
        if let Some(&site) = self.sites.iter().find(|&&s| s >= n_sites) {
            return Err(Error::SiteOutOfRange { site, n_sites });
        }
        Ok(self)
    }
}

/// Stored energy ΔE = ⟨H_B⟩ + ωN relative to the analytic ground energy
/// −ωN. Using the analytic baseline removes one rounding source; starting
/// from the ground state is a protocol invariant.
pub fn stored_energy(psi: &StateVector, omega: f64) -> f64 {
    psi.energy_expectation_z(omega) + omega * psi.n_sites() as f64
}

/// Average charging power P = ΔE / (n·T) with T = τ0 + τ1; defined as 0 at
/// n = 0. A zero period with n > 0 leaves the elapsed time zero and is an
/// error.
pub fn charging_power(delta_e: f64, n: usize, tau0: f64, tau1: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let period = tau0 + tau1;
    if period == 0.0 {
        return Err(Error::ZeroPeriod);
    }
    Ok(delta_e / (n as f64 * period))
}

/// Reduced density matrix ρ_X of a subsystem, stored dense row-major.
/// Hermitian and unit-trace by construction (up to rounding).
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ReducedDensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim + i].re)
            .sum()
    }

    /// Eigenvalues via cyclic Jacobi; the 2×2 case uses the closed form.
    /// Convergence: off-diagonal Frobenius norm ≤ 1e−13 or 100 sweeps.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim == 2 {
            let a = self.entry(0, 0).re;
            let d = self.entry(1, 1).re;
            let mid = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + self.entry(0, 1).norm_sqr()).sqrt();
            return vec![mid - disc, mid + disc];
        }
        jacobi::hermitian_eigenvalues(self.entries.clone(), self.dim, 100, 1e-13)
    }
}

/// Partial trace over the complement of X by bit extraction: amplitudes are
/// reshaped into a 2^|X| × 2^(N−|X|) matrix A and ρ_X = A·A† is returned.
pub fn reduced_density_matrix(
    psi: &StateVector,
    spec: &BipartitionSpec,
) -> Result<ReducedDensityMatrix> {
    let spec = spec.clone().validated_for(psi.n_sites())?;
    let n = psi.n_sites();
    let in_x: Vec<usize> = spec.sites().to_vec();
    let out_x: Vec<usize> = (0..n).filter(|s| !in_x.contains(s)).collect();

    let x_dim = 1usize << in_x.len();
    let env_dim = 1usize << out_x.len();
    let mut reshaped = vec![Complex64::new(0.0, 0.0); x_dim * env_dim];
    for (b, &amp) in psi.amplitudes().iter().enumerate() {
        let mut row = 0usize;
        for (pos, &site) in in_x.iter().enumerate() {
            row |= ((b >> site) & 1) << pos;
        }
        let mut col = 0usize;
        for (pos, &site) in out_x.iter().enumerate() {
            col |= ((b >> site) & 1) << pos;
        }
        reshaped[row * env_dim + col] = amp;
    }

    let mut entries = vec![Complex64::new(0.0, 0.0); x_dim * x_dim];
    for row in 0..x_dim {
        for col in row..x_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..env_dim {
                acc += reshaped[row * env_dim + e] * reshaped[col * env_dim + e].conj();
            }
            entries[row * x_dim + col] = acc;
            entries[col * x_dim + row] = acc.conj();
        }
    }
    Ok(ReducedDensityMatrix {
        dim: x_dim,
        entries,
    })
}

/// Eigenvalue floor below which a spectral weight contributes no entropy.
const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-14;

/// Von Neumann entropy S_X = −Σ λ·log λ of the reduced state of X, in the
/// base requested by the spec. Eigenvalues are clamped to [0, 1]; weights at
/// or below 1e−14 contribute zero.
pub fn entanglement_entropy(psi: &StateVector, spec: &BipartitionSpec) -> Result<f64> {
    let rho = reduced_density_matrix(psi, spec)?;
    let mut entropy = 0.0;
    for lambda in rho.eigenvalues() {
        let lambda = lambda.clamp(0.0, 1.0);
        if lambda > ENTROPY_EIGENVALUE_FLOOR {
            entropy -= lambda * lambda.ln();
        }
    }
    Ok(match spec.log_base() {
        LogBase::Natural => entropy,
        LogBase::Two => entropy / std::f64::consts::LN_2,
    })
}

/// The largest stored energy of a series and the first kick attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxStoredEnergy {
    pub delta_e_max: f64,
    pub n_star: usize,
}

/// Energy window within which revival peaks count as ties for `n_star`.
const N_STAR_TOL: f64 = 1e-9;

/// Scans a series for its maximum ΔE; ties break toward the smallest kick
/// count. Periodic series revisit the peak with rounding-level differences,
/// so any record within 1e−9 of the maximum counts as attaining it and
/// `n_star` is the earliest such kick. Errors on an empty series.
pub fn max_stored_energy(series: &KickSeries) -> Result<MaxStoredEnergy> {
    let delta_e_max = series
        .records
        .iter()
        .map(|r| r.delta_e)
        .fold(f64::NEG_INFINITY, f64::max);
    series
        .records
        .iter()
        .find(|r| r.delta_e >= delta_e_max - N_STAR_TOL)
        .map(|r| MaxStoredEnergy {
            delta_e_max,
            n_star: r.n,
        })
        .ok_or(Error::EmptySeries)
}

/// Default ΔE tolerance for period detection, in units of ω.
pub const PERIOD_TOL: f64 = 1e-9;

/// Smallest p ≥ 1 with |ΔE(n+p) − ΔE(n)| ≤ tol for every recorded n with
/// n+p in range; `None` when no p up to half the series length qualifies.
pub fn detect_period(series: &KickSeries, tol: f64) -> Option<usize> {
    let values: Vec<f64> = series.delta_e().collect();
    let len = values.len();
    (1..=len / 2).find(|&p| (0..len - p).all(|n| (values[n + p] - values[n]).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{evolve, KickRecord, ObservableSet};
    use crate::lattice::{Boundary, ChargerParams, CouplingRange};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_state() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_amplitudes(2, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
            .unwrap()
    }

    #[test]
    fn stored_energy_endpoints() {
        let ground = StateVector::ground_state(6, 1.5).unwrap();
        assert_eq!(stored_energy(&ground, 1.5), 0.0);
        let mut amps = vec![c(0.0, 0.0); 64];
        amps[0] = c(1.0, 0.0);
        let flipped = StateVector::from_amplitudes(6, amps).unwrap();
        assert_eq!(stored_energy(&flipped, 1.5), 2.0 * 1.5 * 6.0);
    }

    #[test]
    fn stored_energy_ignores_global_phase() {
        let mut psi = StateVector::ground_state(4, 1.0).unwrap();
        psi.fwht_inplace();
        let e0 = stored_energy(&psi, 1.0);
        psi.apply_diagonal_phase(&[1.234; 16]).unwrap();
        assert!((stored_energy(&psi, 1.0) - e0).abs() < 1e-12);
    }

    #[test]
    fn charging_power_examples() {
        assert_eq!(charging_power(0.0, 7, 0.5, 0.5).unwrap(), 0.0);
        assert_eq!(charging_power(5.0, 0, 0.5, 0.5).unwrap(), 0.0);
        let p = charging_power(16.0, 4, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((p - 16.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((p - 1.2732395447351628).abs() < 1e-10);
        assert_eq!(charging_power(1.0, 3, 0.0, 0.0), Err(Error::ZeroPeriod));
    }

    #[test]
    fn product_state_gives_rank_one_projector() {
        let psi = StateVector::ground_state(3, 1.0).unwrap();
        let spec = BipartitionSpec::new([0, 2], LogBase::Natural).unwrap();
        let rho = reduced_density_matrix(&psi, &spec).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        // All population sits in |11> of the subsystem.
        assert!((rho.entry(3, 3).re - 1.0).abs() < 1e-12);
        let eigs = rho.eigenvalues();
        let top = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((top - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_state_traces_to_maximally_mixed() {
        let spec = BipartitionSpec::single_site(0, LogBase::Natural);
        let rho = reduced_density_matrix(&bell_state(), &spec).unwrap();
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-12);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-12);
        assert!(rho.entry(0, 1).norm() < 1e-12);
    }

    #[test]
    fn plus_state_projector_on_varying_site() {
        // (|00> + |01>)/sqrt(2) with site 1 varying: indices 0 and 2.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi =
            StateVector::from_amplitudes(2, vec![c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)])
                .unwrap();
        let spec = BipartitionSpec::single_site(1, LogBase::Natural);
        let rho = reduced_density_matrix(&psi, &spec).unwrap();
        for (row, col, want) in [(0, 0, 0.5), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.5)] {
            assert!((rho.entry(row, col) - c(want, 0.0)).norm() < 1e-12);
        }
        assert!(entanglement_entropy(&psi, &spec).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_of_product_and_bell_states() {
        let ground = StateVector::ground_state(4, 1.0).unwrap();
        let spec = BipartitionSpec::new([1, 2], LogBase::Natural).unwrap();
        assert!(entanglement_entropy(&ground, &spec).unwrap().abs() < 1e-12);

        let spec = BipartitionSpec::single_site(0, LogBase::Natural);
        let s = entanglement_entropy(&bell_state(), &spec).unwrap();
        assert!((s - LN_2).abs() < 1e-12);

        let spec = BipartitionSpec::single_site(0, LogBase::Two);
        let s = entanglement_entropy(&bell_state(), &spec).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bipartition_validation() {
        assert!(BipartitionSpec::new([0, 0], LogBase::Natural).is_err());
        assert!(BipartitionSpec::new(0..13, LogBase::Natural).is_err());
        let spec = BipartitionSpec::new([0, 3], LogBase::Natural).unwrap();
        assert!(spec.clone().validated_for(3).is_err());
        assert!(spec.clone().validated_for(4).is_ok());
        let whole = BipartitionSpec::new([0, 1], LogBase::Natural).unwrap();
        assert!(whole.validated_for(2).is_err());
    }

    #[test]
    fn schmidt_symmetry_on_an_evolved_state() {
        let mut params = ChargerParams::new(6, FRAC_PI_4);
        params.h_x = 1.0;
        let op = crate::floquet::build_floquet(&params).unwrap();
        let mut psi = StateVector::ground_state(6, 1.0).unwrap();
        for _ in 0..7 {
            crate::floquet::apply_kick(&mut psi, &op).unwrap();
        }
        let x = BipartitionSpec::new([0, 2], LogBase::Natural).unwrap();
        let xc = BipartitionSpec::new([1, 3, 4, 5], LogBase::Natural).unwrap();
        let sx = entanglement_entropy(&psi, &x).unwrap();
        let sxc = entanglement_entropy(&psi, &xc).unwrap();
        assert!((sx - sxc).abs() < 1e-9, "{sx} vs {sxc}");
        assert!((0.0..=2.0 * LN_2 + 1e-12).contains(&sx));
    }

    #[test]
    fn max_energy_extraction() {
        let params = ChargerParams::new(8, FRAC_PI_2);
        let series = evolve(&params, 500, &ObservableSet::default()).unwrap();
        let m = max_stored_energy(&series).unwrap();
        assert!((m.delta_e_max - 16.0).abs() < 1e-8);
        assert_eq!(m.n_star, 4);
    }

    #[test]
    fn max_energy_of_all_zero_series() {
        let series = evolve(&ChargerParams::new(3, 0.0), 5, &ObservableSet::default()).unwrap();
        let m = max_stored_energy(&series).unwrap();
        assert_eq!((m.delta_e_max, m.n_star), (0.0, 0));
    }

    #[test]
    fn max_energy_rejects_empty_series() {
        let series = KickSeries {
            params: ChargerParams::new(2, 0.1),
            records: vec![],
        };
        assert_eq!(max_stored_energy(&series), Err(Error::EmptySeries));
    }

    #[test]
    fn max_energy_ignores_smaller_appended_records() {
        let params = ChargerParams::new(4, FRAC_PI_2);
        let mut series = evolve(&params, 50, &ObservableSet::default()).unwrap();
        let before = max_stored_energy(&series).unwrap();
        series.records.push(KickRecord {
            n: 51,
            delta_e: before.delta_e_max - 1.0,
            power: 0.0,
            entropy: None,
        });
        assert_eq!(max_stored_energy(&series).unwrap(), before);
    }

    #[test]
    fn constant_series_has_period_one() {
        let series = evolve(&ChargerParams::new(3, 0.0), 30, &ObservableSet::default()).unwrap();
        assert_eq!(detect_period(&series, PERIOD_TOL), Some(1));
    }

    #[test]
    fn open_ring_period_doubles_per_site() {
        let mut params = ChargerParams::new(4, FRAC_PI_2);
        params.boundary = Boundary::Open;
        let series = evolve(&params, 500, &ObservableSet::default()).unwrap();
        assert_eq!(detect_period(&series, PERIOD_TOL), Some(8));
    }

    #[test]
    fn nearest_neighbor_quarter_pi_period_equals_system_size() {
        let mut params = ChargerParams::new(8, FRAC_PI_4);
        params.range = CouplingRange::NearestNeighbor;
        let series = evolve(&params, 500, &ObservableSet::default()).unwrap();
        assert_eq!(detect_period(&series, PERIOD_TOL), Some(8));
    }

    #[test]
    fn aperiodic_series_yields_none() {
        let mut params = ChargerParams::new(5, 3.0 * FRAC_PI_4 / 2.0);
        params.h_x = 1.0;
        let series = evolve(&params, 60, &ObservableSet::default()).unwrap();
        assert_eq!(detect_period(&series, PERIOD_TOL), None);
    }
}
