//! Analog mode: global Rydberg drive on arbitrary atom layouts.
//!
//! Atoms are two-level systems (ground, Rydberg). The evolution is a dense
//! state vector integrated with fixed-step RK4, which keeps layouts up to
//! [`MAX_ATOMS`] atoms within desk-scale memory.

mod evolve;
mod hamiltonian;
mod layout;
mod mis;
mod sweep;

use thiserror::Error;

pub use evolve::{evolve, evolve_from, max_stable_dt, Evolution};
pub use hamiltonian::{RydbergHamiltonian, MAX_ATOMS};
pub use layout::{AtomLayout, UnitDiskGraph, DEFAULT_EXPONENT};
pub use mis::{brute_force_mis, repair, sample_mis, MisSample, MAX_BRUTE_FORCE};
pub use sweep::{PiecewiseLinear, SweepSchedule};

#[derive(Debug, Error, PartialEq)]
pub enum AnalogError {
    #[error("{n} atoms exceed the limit of {max}")]
    TooManyAtoms { n: usize, max: usize },
    #[error("atoms {a} and {b} share a position")]
    CoincidentAtoms { a: usize, b: usize },
    #[error("time step {dt} exceeds the stability bound {max}")]
    StepTooLarge { dt: f64, max: f64 },
    #[error("{0}")]
    InvalidParameter(String),
}
