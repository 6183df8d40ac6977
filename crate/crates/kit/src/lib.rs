//! Toolkit around the core library: the runner wire protocol supervisor,
//! the reference-runner request handler, the response validator, and the
//! coverage-guided fuzz loop. The `acvpkit` binary exposes all of it on
//! the command line.

pub mod fuzz;
pub mod protocol;
pub mod runner;
pub mod validator;
