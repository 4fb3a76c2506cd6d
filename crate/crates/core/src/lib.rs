//! Shift-wise sequence comparison circuits with Grover search, state-vector
//! and decision-diagram simulators, and the classical references used to
//! check them.

pub mod circuit;
pub mod classical;
pub mod distance;
pub mod encoder;
pub mod error;
pub mod grover;
pub mod shifter;
pub mod sim;

pub use circuit::{Circuit, GateApp, GateKind, RegisterLayout, Role};
pub use encoder::{Base, DnaSequence, SequenceSet};
pub use error::{CircuitError, GroverError, SequenceError, SimError};
