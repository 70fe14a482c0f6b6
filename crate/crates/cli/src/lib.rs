//! I/O layer of the command-line tool: the instance file format and the
//! dual-rendered report structures. The binary in `main.rs` wires these to
//! the core library; tests and the acceptance suite reuse them directly.

pub mod format;
pub mod report;
