//! Precision limits of entanglement-assisted phase estimation through noisy
//! qubit channels.
//!
//! The crate models the standard three-stage estimation pipeline: a probe
//! state (optionally entangled with noiseless ancillas) picks up a phase
//! `U_φ = |0⟩⟨0| + e^{iφ}|1⟩⟨1|` on each probe qubit, passes through a Kraus
//! noise channel, and is measured. From the output state and its analytic
//! φ-derivative it computes
//!
//! * the quantum Fisher information (QFI) of arbitrary mixed states,
//! * closed-form QFI values for amplitude-damping and generalized Pauli
//!   channels (with and without ancillas), usable as cross-checking oracles,
//! * error-propagation variances of explicit observables and the quantum
//!   Cramér–Rao bound they saturate at their sweet spots,
//! * seeded Monte Carlo estimation runs with feedback that drives the
//!   operating point to the sweet spot,
//! * numerical QFI maximization over probe-state families,
//! * a single-photon polarization/path simulator realizing the same
//!   probe-ancilla scheme with Bell-type detection.
//!
//! Every routine is deterministic: random sampling is driven by a named
//! counter-based generator so results are reproducible across platforms and
//! worker counts. See the `examples/` directory for runnable entry points and
//! the `qfi-lab` binary for the command-line surface.

pub mod channel;
pub mod cli;
pub mod estimate;
pub mod fisher;
pub mod matcore;
pub mod optimize;
pub mod photonics;
pub mod qstate;
pub mod rng;

pub(crate) mod par;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NonConvergence(usize),

    #[error("observable has stationary mean at this operating point (|d⟨O⟩/dφ| < {0:e})")]
    StationaryPoint(f64),

    #[error("quantum Fisher information is zero; the Cramér–Rao bound is unbounded")]
    ZeroInformation,

    #[error("bound diverges at η = 0")]
    InfiniteBound,

    #[error("unknown observable id: {0}")]
    UnknownObservable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use channel::{KrausChannel, Layout, NoiseModel, PhaseScenario};
pub use estimate::{EstimationRun, Observable, ObservableId};
pub use fisher::ClosedFormId;
pub use matcore::{CMat, EigDecomposition};
pub use optimize::{FamilyShape, OptResult};
pub use qstate::{PureState, StateFamily};
