//! Command-line surface for the conelp solvers.
//!
//! The binary (`conelp`) is a thin dispatcher over this library:
//!
//! * [`files`] — the JSON problem/result documents and their validation.
//! * [`gen`] — seeded generation of strictly tangent instances.
//! * [`commands`] — the `feas`, `solve`, and `oracle` subcommand bodies,
//!   mapping solver outcomes to result documents and exit codes.
//! * [`bench`] — the `bench` differential/benchmark harness.

pub mod bench;
pub mod commands;
pub mod files;
pub mod gen;
