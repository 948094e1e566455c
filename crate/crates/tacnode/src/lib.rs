//! File formats, resolvent caching, kernel grids and the `tacnode`
//! command-line driver on top of `tacnode-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod cli;
pub mod error;
pub mod grid;
pub mod table;

pub use error::CliError;
pub use grid::{KernelGrid, Method};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
