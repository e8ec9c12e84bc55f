//! Library side of the `tetk` command line tool.

pub mod battery;
pub mod cli;
pub mod formats;
pub mod report;
