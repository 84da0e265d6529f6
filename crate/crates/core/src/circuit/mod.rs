//! Circuit model, text format and lowering to native gates.

mod gate;
mod lower;
mod parse;
mod validate;

pub use gate::{Circuit, CircuitError, Gate, GateKind};
pub use lower::lower_to_native;
pub use parse::{parse_circuit, ParseError};
pub use validate::{max_blockade_clique, validate, Diagnostic};
