//! Std companion to `philab-core`: the structure file format, inline
//! generator specs, JSON certificates, the regression corpus and the
//! verification suites behind the `philab` binary.

pub mod certs;
pub mod corpus;
pub mod format;
pub mod genspec;
pub mod suites;
