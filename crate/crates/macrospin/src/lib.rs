//! Exact desk-scale simulations of macroscopic-spin gedanken experiments:
//! truncated-Fock cat states under Kerr evolution, multi-qubit GHZ and
//! Bell registers with reversible measurement-setting unitaries, NOON-state
//! qubits, and an executable hidden-variable ledger that tracks direct and
//! inferred ±1 values through sequences of setting changes.
//!
//! The primary interface is the `experiments` module, whose `run_*`
//! functions produce self-describing [`report::ExperimentReport`]s; the
//! `examples/` directory exercises one capability each, and a thin
//! `macrospin` binary exposes the same runs as subcommands.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod ledger;
pub mod noon;
pub mod quad;
pub mod qubit;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use report::ExperimentReport;
