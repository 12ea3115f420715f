//! IO, file formats, and report plumbing for the pattern analysis CLI.

pub mod commands;
pub mod fnspec;
pub mod patfile;
pub mod report;
