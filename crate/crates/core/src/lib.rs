//! Error-correcting output code (ECOC) ensemble analysis.
//!
//! The crate covers four layers:
//!
//! * [`code_matrix`]: Sylvester-Hadamard code construction, distance
//!   parameters and nearest-codeword decoding.
//! * [`prob`]: exact distributions of the number of base-classifier bit
//!   errors under independent, pair-correlated and exchangeable (second-order
//!   Bahadur) models, plus a brute-force enumeration oracle.
//! * [`bounds`]: the 4·ē bound, the Feller rational bound, the Chernoff bound
//!   in its μ- and λ-forms, and the correlation-corrected KZ bound.
//! * [`simulator`] and [`experiment`]: seeded Monte Carlo estimation and
//!   fold-level experiment analysis with bundled published fold summaries.
//!
//! The command-line front end lives in [`cli`].

pub mod bounds;
pub mod cli;
pub mod code_matrix;
pub mod error;
pub mod experiment;
pub mod prob;
pub mod simulator;

pub use bounds::{BoundInputs, BoundReport, KzGate};
pub use code_matrix::{BitMatrix, CodeMatrix, Decoded, Orientation, TiePolicy};
pub use error::{EcocError, Result};
pub use prob::{DependenceModel, ErrorProfile, ExchangeableModel, PairModel};
pub use simulator::{Determinism, EstimateMode, SimConfig, SimResult, TrueClass};
