//! Library surface of the command-line tool: the file formats it reads and
//! writes. The binary in `main.rs` is a thin driver over these plus the
//! core crate.

pub mod formats;
