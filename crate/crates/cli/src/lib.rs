//! File formats, configuration and the `kq` command line for `kq-core`.

pub mod cli;
pub mod config;
pub mod dot;
pub mod exec;
pub mod formats;
