//! Command-line companion for the curvature workbench: metric files,
//! the finite-difference oracle, self-verification suites, and the
//! `qcst` binary's command drivers.

pub mod cli;
pub mod csvout;
pub mod format;
pub mod oracle;
pub mod report;
pub mod verify;
