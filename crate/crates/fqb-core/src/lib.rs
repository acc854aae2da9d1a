//! Exact stroboscopic simulation of spin-1/2 quantum batteries charged by a
//! periodically driven Ising charger.
//!
//! A battery of N spins with splitting ω starts in its fully discharged
//! ground state and is kicked by a two-step Floquet protocol: an interval τ0
//! under the Ising coupling J·H_xx plus transverse field h_x·H_x, then an
//! interval τ1 under the field h_z·H_z. Both steps are diagonal in a product
//! basis (x and z respectively), so a kick costs two fast Walsh–Hadamard
//! transforms and two diagonal phase multiplications over the 2^N amplitude
//! vector — no operator is ever materialized on the fast path.
//!
//! Module map:
//!
//! - [`lattice`]: coupling geometry (bond tables) and the classical diagonal
//!   energy functions evaluated on basis bit patterns.
//! - [`statevector`]: the amplitude vector, the Walsh–Hadamard kernel, and
//!   diagonal phase application.
//! - [`floquet`]: the one-period operator, kick application, and
//!   stroboscopic evolution into a [`KickSeries`].
//! - [`observables`]: stored energy, charging power, reduced density
//!   matrices, bipartite entanglement entropy, and period detection.
//! - [`oracle`]: the independent dense Taylor-exponential reference used to
//!   validate the fast path.
//! - [`experiments`]: parameter sweeps and the structural optimization
//!   landscape.

pub mod error;
pub mod experiments;
pub mod floquet;
pub mod jacobi;
pub mod lattice;
pub mod observables;
pub mod oracle;
pub mod statevector;

pub use error::{Error, Result};
pub use experiments::{
    default_tau_grid, landscape_table, sweep_asymmetric, sweep_coupling, sweep_size, sweep_tau,
    with_workers, FixedInterval, LandscapeRow, Prediction, SweepAxis, SweepPoint, SweepResult,
    TauPoint, DEFAULT_N_MAX,
};
pub use floquet::{
    apply_kick, build_floquet, evolve, FloquetOperator, KickRecord, KickSeries, ObservableSet,
};
pub use lattice::{
    build_bond_table, interaction_energy, magnetization, Bond, BondTable, Boundary, ChargerParams,
    CouplingRange,
};
pub use observables::{
    charging_power, detect_period, entanglement_entropy, max_stored_energy, reduced_density_matrix,
    stored_energy, BipartitionSpec, LogBase, MaxStoredEnergy, ReducedDensityMatrix, PERIOD_TOL,
};
pub use oracle::{
    build_dense_operators, cross_validate, dense_expm, dense_floquet_operator, validation_grid,
    CrossValidation, DenseMatrix, DenseOperators, ValidationPoint,
};
pub use statevector::StateVector;
