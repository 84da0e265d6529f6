//! Simulation of a neutral-atom (Rydberg) quantum computer, end to end.
//!
//! The crate follows one shot of the machine through its life cycle:
//!
//! 1. [`profile`]: the machine model (rates, fidelities, durations, lattice)
//!    and the blockade-radius [`lattice::ConnectivityGraph`].
//! 2. [`prep`]: stochastic trap loading, minimum-distance rearrangement and
//!    transfer losses, repeated until the register is defect free.
//! 3. [`circuit`]: a small line-oriented circuit format, lowering to the
//!    native gate set and structural validation.
//! 4. [`transpile`]: placement, routing by SWAP insertion or shuttling,
//!    layer scheduling under the parallelism rules, wall-clock estimates.
//! 5. [`sim`]: Monte-Carlo trajectory execution with gate errors, idle
//!    decoherence, atom loss and readout errors.
//! 6. [`analog`]: analog Rydberg evolution for maximum independent set on
//!    unit-disk graphs.
//! 7. [`bench`]: GHZ, heavy-output and layer-throughput benchmark suites.
//!
//! Qubit `q` of a state vector is bit `q` of the basis index. Bitstrings are
//! printed with qubit 0 first.

pub mod analog;
pub mod bench;
pub mod circuit;
pub mod lattice;
pub mod prep;
pub mod profile;
pub mod rng;
pub mod sim;
pub mod transpile;

pub use circuit::{Circuit, Gate, GateKind};
pub use lattice::{ConnectivityGraph, Site};
pub use profile::HardwareProfile;
