//! Exact computations in the quon algebra `a(k) a†(l) - q a†(l) a(k) = δ(k, l)`
//! with Fock vacuum `a(k)|0⟩ = 0`.
//!
//! * [`qpoly`]: exact rational polynomials in `q`.
//! * [`permutations`] and [`characters`]: place permutations, inversion
//!   numbers, representation coefficients and `S_n` character tables.
//! * [`wick`]: scalar products of creation words by subset-DP q-permanent,
//!   with a brute-force enumeration oracle.
//! * [`fock`]: representation-weighted states, normalization polynomials,
//!   Gram matrices, positivity and irrep weights.
//! * [`composite`]: two-composite scalar products split into direct,
//!   exchange and cross contractions; the exchange exponent `n²`.
//! * [`bounds`]: propagation of statistics-violation limits to constituents.
//! * [`cli`]: the `quon` command-line front end.

pub mod bounds;
pub mod characters;
pub mod cli;
pub mod composite;
pub mod error;
pub mod fock;
pub mod permutations;
pub mod qpoly;
pub mod wick;

pub use error::{QuonError, Result};
pub use qpoly::QPolynomial;
