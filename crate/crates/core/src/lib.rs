//! Bijective substitutions, generalized Morse sequences over finite groups,
//! odometers and Veech systems, plus a deterministic harness for
//! Möbius-disjointness numerics (Sarnak sums and KBSZ correlations).
//!
//! Every sequence is exposed as a [`stream::SymbolSource`]; experiments sum
//! over index ranges with a fixed pairwise reduction tree so reports are
//! bit-identical across thread counts.

pub mod arith;
pub mod error;
pub mod experiment;
pub mod frontend;
pub mod morse;
pub mod odometer;
pub mod permgrp;
pub mod reduce;
pub mod seq;
pub mod spectral;
pub mod stream;
pub mod subst;

pub use error::{Error, Result};
pub use num_complex::Complex64;
