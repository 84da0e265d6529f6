//! Monte-Carlo trajectory simulation of scheduled circuits.
//!
//! Each shot owns two random streams derived from the master seed: one for
//! register preparation and one for the circuit. Turning noise channels off
//! therefore never changes which outcomes the circuit stream draws, and
//! shots can run on any number of threads with identical results.

mod noise;
mod run;
mod state;

use thiserror::Error;

pub use noise::{
    atom_loss, depolarize, fidelity_to_depolarizing, idle_decoherence, sample_detunings,
    sample_pauli_error, NoiseCounts, NoiseFlags, NoiseModel,
};
pub use run::{
    execute_schedule, ideal_distribution, read_out, run, run_transpiled, to_logical, PrepStats,
    RunConfig, RunReport, ShotResult,
};
pub use state::{bitstring, sample_index, GateOutcome, Pauli, StateVector, C64, MAX_QUBITS};

use crate::prep::PrepError;
use crate::transpile::TranspileError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{n} qubits exceed the state-vector limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error("register preparation failed: {0}")]
    Prep(#[from] PrepError),
    #[error("could not start worker threads: {0}")]
    ThreadPool(String),
}
