//! Command-line front end for `hgm-core`: argument handling, configuration
//! files and record formats.

pub mod cli;
pub mod config;
pub mod dump;
pub mod format;
pub mod selftest;
