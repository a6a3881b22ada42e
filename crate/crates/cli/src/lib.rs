//! Library side of the `spcsep` command-line tool: the matrix file format,
//! report documents and the subcommand implementations.

pub mod commands;
pub mod matrix_file;
pub mod report;
