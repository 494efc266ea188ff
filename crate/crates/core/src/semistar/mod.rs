//! Closure operations on the submodule lattice.
//!
//! Every such operation is determined by a closure operator on the subsets of
//! prime indices ([`support::SupportMap`]), acts by widening components to
//! `K`, and never shifts a finite bound. [`expr`] gives a syntax for building
//! operations from named generators; [`op`] pairs an expression with its
//! extracted support map and carries the structural predicates (finite type,
//! stability, spectrality, semifiniteness).

pub mod expr;
pub mod op;
pub mod support;
