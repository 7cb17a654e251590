//! Command-line front end for `atiyah-core`.

pub mod commands;
pub mod number;
pub mod points_file;
pub mod report;
