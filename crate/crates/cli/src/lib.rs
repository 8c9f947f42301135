//! Command-line front end for `rittcalc-core`: file formats, subcommands and report types.

pub mod commands;
pub mod dto;
pub mod error;
pub mod io;
