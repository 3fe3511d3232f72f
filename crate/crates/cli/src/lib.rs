//! Command-line driver for `crem` machines: list, render, run with an event
//! log, and replay a log against a fresh machine.

pub mod app;
pub mod codec;
pub mod eventlog;
pub mod registry;

pub use app::{resolve_run_config, run, Exit, Io, FEEDBACK_CAP_ENV};
pub use registry::{default_registry, Registry};
