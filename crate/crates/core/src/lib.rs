//! Finite-model laboratory for partitioned formulas `φ(x; y)`.
//!
//! A formula is given by its truth matrix over a finite set of elements `X`
//! and parameters `Y` ([`BipartiteStructure`]). On top of that the crate
//! computes φ-types and type spaces, the independence dimension, Δ-types,
//! good configurations of a type, φ-isolated extensions together with their
//! φ-defining formulas, and a set of deliberately naive reference oracles.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bits;
pub mod cover;
pub mod delta;
pub mod error;
pub mod generators;
pub mod goodconfig;
pub mod isolation;
pub mod lab;
pub mod limits;
pub mod oracle;
pub mod structure;
pub mod vc;

pub use delta::{DeltaFamily, DeltaType, Satisfiability};
pub use error::{Error, Result};
pub use goodconfig::{GoodConfiguration, Strategy};
pub use isolation::{DefiningFormula, IsolationCertificate};
pub use lab::Lab;
pub use limits::Limits;
pub use structure::{BipartiteStructure, Elem, Param, PhiType};
pub use vc::IndependenceReport;
