//! Phonon-induced dephasing and entanglement dynamics of two donor-based
//! charge qubits.
//!
//! Units throughout: lengths in the mean Bohr radius `a_B`, times as
//! `st/a_B` (`s` the sound speed), rates in `Γ_T`.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod rates;

pub use dynamics::{
    find_extrema, find_extrema_above, wootters_concurrence, ConcurrenceCurve, DensityMatrix4, Extremum, NoPhase, PhaseMode, PhaseModel,
    TwoQubitAmplitudes, TwoQubitSystem,
};
pub use error::{Error, Result};
pub use geometry::{preset, DonorSite, Preset, PseudoSpin, QubitSpec, RegisterState, SystemGeometry, Vec3};
pub use oracle::{calibrate_normalization, KQuadratureSpec, ModeSumOracle, ThermalWeight};
pub use rates::{
    decoherence_rate, gamma_general, gamma_identical, gamma_inter_bit, gamma_zero, integrated_exponent, RateCurve,
    RateModel, ONE_EXCITATION, TWO_EXCITATION,
};
