//! genusforge: explicit curves over finite fields with prescribed genus and
//! certified lower bounds on rational points.
//!
//! Three constructive families cover every genus: Artin-Schreier towers over
//! the projective line (with a quadratic twist over odd fields), curves cut
//! out of toric surfaces by their Newton polygon, and tame cyclic covers
//! planned by a congruence solver over products of small primes.  Every
//! construction ships with an independent verification path: lattice-point
//! genus oracles, exact point counts (trace/character kernels cross-checked
//! against direct enumeration), and zeta-function consistency checks.

pub mod abelian;
pub mod bivar;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod field;
pub mod lattice;
pub mod par;
pub mod tame;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
