//! File formats, fuzzing, and report plumbing for the `fimod` command-line
//! tool. The algorithms live in `fimod-core`; this crate adds IO.

pub mod formats;
pub mod fuzz;
