//! Library side of the `rsaa` binary: configuration, experiment harness,
//! figure generation and file outputs. The acceptance suite drives these
//! directly; the binary in `main.rs` is a thin argument layer on top.

pub mod commands;
pub mod config;
pub mod figures;
pub mod harness;
pub mod output;
