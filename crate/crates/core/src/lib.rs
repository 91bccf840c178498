//! Computations for extending finite analytic covers across an enlarged
//! ramification divisor, carried out at the level of permutation monodromy.
//!
//! A connected `b`-sheeted cover of a space `X` is the same thing as a
//! transitive homomorphism `pi_1(X) -> S_b` up to conjugation. Extending a
//! cover from `X_0` to a larger `X_1` becomes a problem about the induced map
//! `pi_1(X_0) -> pi_1(X_1)`: the sheets of the maximal extension are the cosets
//! of the pushed-forward point stabilizer, which [`coset`] enumerates.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod braid;
pub mod coset;
pub mod cpoly;
pub mod extend;
pub mod hartogs;
mod linalg;
pub mod monodromy;
pub mod perm;
pub mod slice;
pub mod word;

pub use coset::{CosetTable, SchreierData, TableStatus};
pub use cpoly::{CPoly, RootSet};
pub use extend::{ExtensionProblem, ExtensionResult};
pub use monodromy::MonodromyRep;
pub use perm::Permutation;
pub use word::{Alphabet, GeneratorSymbol, InclusionMap, Letter, Presentation, Word};

pub use num_complex::Complex64;
