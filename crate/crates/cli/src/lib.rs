//! Command-line front end for the `pshodge` engine: expression parsing,
//! subcommands, and the on-disk intersection-number table.

pub mod cache;
pub mod commands;
pub mod expr;
pub mod selfcheck;

pub use cache::CacheFile;
pub use commands::{evaluate, Cli, Space};
pub use expr::{parse, parse_expression, ParseError, TautExpr};
