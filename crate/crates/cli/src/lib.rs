//! Command line and HTTP front ends for the `stream-audit` library.

pub mod cli;
pub mod service;
pub mod workflow;
