//! Command-line front end for the XY-chain complexity toolkit.
//!
//! Every subcommand resolves its parameters through the same precedence
//! chain (built-in defaults, then a `key=value` config file, then flags),
//! writes a CSV data file plus a `.manifest` sidecar listing every
//! parameter and tolerance that produced it, and exits 0 on success, 2 on
//! a usage or configuration error, and 3 when a computation or write
//! fails.

mod commands;
mod config;
mod error;
mod figures;
mod manifest;
mod sweep;
mod table;

pub use commands::{run, Cli, Cmd};
pub use config::{linspace, Axis, RunConfig};
pub use error::CliError;
pub use figures::{reproduce_figure, Artifact, FigureRegistry};
pub use manifest::Manifest;
pub use table::{fmt_float, Cell, Table};
