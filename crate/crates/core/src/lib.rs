//! Max-algebra (max-times) and distinguished classical spectra of
//! nonnegative matrices, the limit formulas connecting them, and checks
//! of Hadamard-product inequalities for local spectral radii.
//!
//! Every quantity has a brute-force counterpart in [`oracles`].

pub mod asymptotics;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod graph;
pub mod inequalities;
pub mod io;
pub mod logdomain;
pub mod matrix;
pub mod oracles;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
pub use matrix::{NonnegMatrix, NonnegVector};
pub use report::{CheckReport, Verdict};
pub use spectrum::{spectrum, SpectralProfile};
