//! Command pipelines, report model, and file formats behind the
//! `holoscope` binary.
//!
//! The binary is a thin wrapper: everything it does is callable from
//! here, one function per subcommand in [`pipeline`].

pub mod formats;
pub mod pipeline;
pub mod report;
pub mod text;
