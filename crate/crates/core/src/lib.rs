//! Dense statevector simulator with the textbook oracle algorithms built on
//! top of it.
//!
//! Qubit 0 is always the leftmost bit of a ket and the most significant bit
//! of an amplitude index.
//!
//! ```
//! use qlesson::algorithms::grover;
//! use qlesson::{parse, wavefunction, DisplayOptions};
//!
//! let program = parse("H 0\nCNOT 0 1\n")?;
//! let (_state, text) = wavefunction(&program, 0, &DisplayOptions::default())?;
//! assert_eq!(text, "0.70711|00⟩ + 0.70711|11⟩");
//!
//! let result = grover(&"101".parse()?, None, 7)?;
//! assert_eq!(result.plan.iterations, 2);
//! # Ok::<(), qlesson::Error>(())
//! ```

pub mod algorithms;
pub mod blackbox;
pub mod composite;
pub mod error;
pub mod gates;
pub mod program;
pub mod quil;
pub mod simulator;
pub mod state;

pub use error::{Error, Result};
pub use gates::{def_gate, standard_gate, tensor, GateDef, StandardGate};
pub use program::{ClassicalRegister, Instruction, Program};
pub use quil::{parse, print, SourceError, SourceErrorKind};
pub use simulator::{run, wavefunction, DisplayOptions, TrialResults};
pub use state::{Amplitude, BasisLabel, StateVector};
