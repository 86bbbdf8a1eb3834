//! Inversion statistics of partially sorted random permutations and the
//! constants that govern the average cost of three-increment shellsort.
//!
//! The crate is organized around four layers:
//!
//! * [`core_model`] — arrays, increment plans, stride sorting with cost
//!   accounting, and exact inversion counting.
//! * [`pass_analysis`] — the Y/J table machinery that locates every
//!   remaining inversion after an h-sort followed by a g-sort.
//! * [`psi`] — exact and asymptotic evaluation of the inversion constant
//!   ψ(h, g), plus the supporting binomial and coupling formulas.
//! * [`simulation`] — seeded, reproducible Monte Carlo experiments that
//!   compare empirical pass costs against the analytic targets.
//!
//! The `shellsort-lab` binary exposes all of this behind subcommands with
//! CSV/JSON output; see [`output`] for the record format.

pub mod core_model;
pub mod output;
pub mod pass_analysis;
pub mod psi;
pub mod simulation;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Greatest common divisor by Euclid's algorithm.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
