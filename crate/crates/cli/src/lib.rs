//! File formats, experiment harness, and report rendering behind the
//! `funcpd` binary. Kept as a library so the pieces are testable without
//! spawning the executable.

pub mod config;
pub mod harness;
pub mod ingest;
pub mod report;
