//! Work extraction from a bipartite quantum system by thermalization.
//!
//! Two subsystems A and B start in their local thermal states. An
//! interaction `H_I` is switched on, the pair thermalizes with a bath at
//! temperature `T`, and the interaction is switched off again. The work
//! left in the local states is measured with free-energy differences and
//! compared with the interaction energy spent by the switching agent.
//!
//! Units: `ħ = k_B = 1` and energies are in units of the reference frequency
//! `ω`, so temperatures are `k_B T / ħω`.
//!
//! * [`qmath`]: operators, tensor products, partial traces, eigensolver.
//! * [`thermo`]: Gibbs states, entropy, free energy, mutual information.
//! * [`protocol`]: one run of the protocol for arbitrary `(H_A, H_B, H_I, T)`
//!   and the randomized bound audit.
//! * [`rabi`]: the resonant quantum Rabi model on a truncated Fock space.
//!
//! With the default `parallel` feature, sweeps and audits fan out over
//! rayon; without it they run on the calling thread.

pub mod par;
pub mod protocol;
pub mod qmath;
pub mod rabi;
pub mod thermo;

pub use protocol::{run_protocol, verify_bound, BoundCheck, ProtocolInput, ProtocolReport};
pub use qmath::{
    eig_hermitian, expectation, partial_trace, tensor, BipartiteSpace, Operator,
    SpectralDecomposition, Subsystem,
};
pub use rabi::{RabiConfig, RabiPoint};
pub use thermo::{Temperature, ThermalEnsemble};

pub use par::Execution;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(
        "inconsistent bipartition: {d_a}x{d_b} does not match composite dimension {composite}"
    )]
    InvalidBipartition {
        d_a: usize,
        d_b: usize,
        composite: usize,
    },
    #[error("operator is not Hermitian (max |M - M^dagger| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("Hermitian eigensolver did not converge")]
    EigenFailure,
    #[error("expectation value has imaginary part {imag:e}")]
    ComplexExpectation { imag: f64 },
    #[error("invalid density matrix: {reason}")]
    InvalidState { reason: String },
    #[error("invalid temperature {0}: must be finite and non-negative")]
    InvalidTemperature(f64),
    #[error("free energy below the thermal value by {deficit:e}")]
    GibbsViolation { deficit: f64 },
    #[error("mutual information is negative ({value:e})")]
    NegativeMutualInformation { value: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "Fock cutoff {cutoff} not converged (top-level population {tail:e}); use a larger cutoff"
    )]
    CutoffNotConverged { cutoff: usize, tail: f64 },
    #[error(
        "no convergence below the Fock cutoff ceiling {ceiling} (last change in work {delta:e})"
    )]
    ConvergenceCeiling { ceiling: usize, delta: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
