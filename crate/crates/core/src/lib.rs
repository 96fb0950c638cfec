//! Exact tools for the split Diophantine equations
//! `i + a*x + b*y = (a-1)(b-1)/2`, `i` in `{0, 1}`.
//!
//! - [`split`]: the classifier `gamma`, the one-inverse solver and the
//!   enumeration oracle.
//! - [`sequences`]: integer sequence families, residues, recurrences and
//!   closed-form solutions for Fibonacci-type pairs.
//! - [`periodicity`]: `gamma` bit rows along sequences and certified
//!   eventual periods.
//! - [`density`]: the greedy construction steering the frequency of
//!   `gamma = 0` towards a target ratio.
//! - [`explorer`]: brute-force scans over more variables and shifted
//!   right-hand sides.

pub mod arith;
pub mod density;
mod error;
pub mod explorer;
pub mod periodicity;
pub mod ratio;
pub mod sequences;
pub mod split;

pub use arith::{gcd, mod_inverse, nat, Int, Nat};
pub use error::{Error, Result};
pub use ratio::Ratio;
pub use sequences::{term, term_mod, terms, SequenceSpec};
pub use split::{brute_force_split, gamma, solve_split, theta, SplitInstance, SplitSolution};
