//! Command-line front end and file formats for [`hnbb_core`].
//!
//! - [`formats`]: JSON, CSV, DOT and text renderings of strata, components,
//!   limits and incidence tables.
//! - [`verify`]: the acceptance checks over a sweep of genera and degrees.
//! - [`cli`]: argument parsing and dispatch for the `hnbb` binary.
#![deny(unsafe_code)]
#![warn(missing_docs)]

pub mod cli;
pub mod formats;
pub mod verify;
