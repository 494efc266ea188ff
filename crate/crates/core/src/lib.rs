//! Submodule lattices of semilocal principal ideal domains, the closure
//! operations acting on them, and the finite spectral spaces these produce.
//!
//! The base ring is Z localized away from finitely many primes. Everything
//! downstream, closure operations, their finite-type and stable refinements,
//! and the associated topological spaces, is computed exactly on small
//! integer vectors, so every structural claim can be checked by enumeration.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod model;
pub mod semistar;
pub mod spaces;
pub mod spectral;
pub mod topology;
pub mod verify;
