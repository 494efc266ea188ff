//! Operations induced by sets of primes, and when two sets induce the same
//! one.
//!
//! A set Y of primes acts on a module by intersecting the extensions to the
//! localizations at its members. Distinct Y can act identically; the
//! equivalence is controlled by the inverse topology of the spectrum. Here
//! the spectrum is tiny, so every characterization is computed outright:
//! the induced operations themselves, closures in the inverse topology, and
//! the quasi-compact opens separating the sets.

use alloc::vec::Vec;

use crate::model::{ModuleVec, PrimeSet};
use crate::semistar::expr::SemistarExpr;
use crate::semistar::op::{OpError, SemistarOp};
use crate::spaces::spec_space;
use crate::topology::FinSpace;

/// The operation F -> intersection of F A_P over P in `y`, built through
/// the definitional evaluator.
pub fn localization_op(k: u8, y: PrimeSet, depth: i64) -> Result<SemistarOp, OpError> {
    SemistarOp::new(k, SemistarExpr::Spectral(y), depth)
}

/// A prime set as a point mask of the spectrum space: bit 0 is the zero
/// ideal, bit i+1 is m_{i+1}.
pub fn primes_mask(k: u8, y: PrimeSet) -> u32 {
    let mut mask = 0u32;
    if y.zero {
        mask |= 1;
    }
    for i in y.maxes.indices(k) {
        mask |= 1 << (i + 1);
    }
    mask
}

pub fn mask_primes(k: u8, mask: u32) -> PrimeSet {
    let mut maxes = crate::model::Subset::EMPTY;
    for i in 0..k {
        if mask & (1 << (i + 1)) != 0 {
            maxes = maxes.with(i);
        }
    }
    PrimeSet::new(mask & 1 != 0, maxes)
}

/// Closure of a set of primes in the inverse topology of the spectrum.
pub fn inverse_closure_primes(k: u8, y: PrimeSet) -> PrimeSet {
    let spec = spec_space(k);
    mask_primes(k, spec.inverse_closure(primes_mask(k, y)))
}

/// The three faces of weak equivalence of two prime sets. On a spectral
/// space they agree; each is computed independently here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WeakEquivalence {
    /// The induced operations coincide.
    pub same_operation: bool,
    /// The closures in the inverse topology coincide.
    pub same_inverse_closure: bool,
    /// Exactly the same quasi-compact opens contain the two sets.
    pub same_compact_opens: bool,
}

impl WeakEquivalence {
    pub fn all_agree(self) -> bool {
        self.same_operation == self.same_inverse_closure
            && self.same_operation == self.same_compact_opens
    }

    pub fn holds(self) -> bool {
        self.same_operation
    }
}

pub fn weak_equivalence(
    k: u8,
    y: PrimeSet,
    z: PrimeSet,
    depth: i64,
) -> Result<WeakEquivalence, OpError> {
    let op_y = localization_op(k, y, depth)?;
    let op_z = localization_op(k, z, depth)?;
    let same_operation = op_y.eq_op(&op_z);

    let spec = spec_space(k);
    let my = primes_mask(k, y);
    let mz = primes_mask(k, z);
    let same_inverse_closure = spec.inverse_closure(my) == spec.inverse_closure(mz);

    // The subbasics are the principal opens cut out by 0/1 element
    // patterns; separating by them is the same as separating by arbitrary
    // quasi-compact opens, and both renditions are computed.
    let same_compact_opens = spec
        .subbasis()
        .iter()
        .all(|&o| (my & !o == 0) == (mz & !o == 0));
    let over_all_compacts = spec
        .compact_opens()
        .iter()
        .all(|&o| (my & !o == 0) == (mz & !o == 0));
    assert_eq!(same_compact_opens, over_all_compacts);

    Ok(WeakEquivalence {
        same_operation,
        same_inverse_closure,
        same_compact_opens,
    })
}

/// A set of primes and its inverse closure induce the same operation.
pub fn inverse_closure_induces_same_op(
    k: u8,
    y: PrimeSet,
    depth: i64,
) -> Result<bool, OpError> {
    let closed = inverse_closure_primes(k, y);
    let a = localization_op(k, y, depth)?;
    let b = localization_op(k, closed, depth)?;
    Ok(a.eq_op(&b))
}

/// The stable closure of the operation induced by `y`, obtained by
/// localizing at the inverse closure instead. The detour through the
/// topology must land on the same operation as the direct stable closure,
/// and that is asserted.
pub fn stable_closure_spectral(k: u8, y: PrimeSet, depth: i64) -> Result<SemistarOp, OpError> {
    let closed = inverse_closure_primes(k, y);
    let via_topology = localization_op(k, closed, depth)?;
    let direct = localization_op(k, y, depth)?.stable_closure()?;
    assert!(
        via_topology.eq_op(&direct),
        "localizing at the inverse closure must compute the stable closure"
    );
    Ok(via_topology)
}

/// Why `semifinite_stable` refused its input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SemifiniteError {
    Op(OpError),
    /// A proper quasi-ideal contained in no surviving maximal ideal.
    NotSemifinite { ideal: ModuleVec },
}

impl From<OpError> for SemifiniteError {
    fn from(e: OpError) -> SemifiniteError {
        SemifiniteError::Op(e)
    }
}

impl core::fmt::Display for SemifiniteError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SemifiniteError::Op(e) => write!(f, "{e}"),
            SemifiniteError::NotSemifinite { ideal } => {
                write!(f, "not semifinite: quasi-ideal {ideal} lies in no surviving maximal ideal")
            }
        }
    }
}

impl core::error::Error for SemifiniteError {}

/// For a semifinite operation, the stable closure is the localization at
/// the inverse closure of the quasi-spectrum; and it is the identity
/// exactly when the quasi-spectrum is dense in the inverse topology.
/// Non-semifinite input is rejected with a failing quasi-ideal.
pub fn semifinite_stable(op: &SemistarOp, depth: i64) -> Result<SemistarOp, SemifiniteError> {
    let k = op.k();
    let qmax = op.quasi_maximals();
    for ideal in ModuleVec::integral_family(k, depth) {
        if ideal.is_ring() || !op.is_quasi_ideal(&ideal).map_err(OpError::Eval)? {
            continue;
        }
        let covered = qmax
            .maxes
            .indices(k)
            .any(|i| ideal.is_submodule_of(&ModuleVec::maximal_ideal(k, i)));
        if !covered {
            return Err(SemifiniteError::NotSemifinite { ideal });
        }
    }

    let closed = inverse_closure_primes(k, op.quasi_spectrum());
    let via_topology = localization_op(k, closed, depth)?;
    let tilde = op.stable_closure()?;
    assert!(
        via_topology.eq_op(&tilde),
        "the stable closure of a semifinite operation localizes at the inverse closure of its quasi-spectrum"
    );

    let dense = primes_mask(k, closed) == spec_space(k).full_mask();
    let trivial = tilde.table() == &crate::semistar::support::SupportMap::identity(k);
    assert_eq!(
        trivial, dense,
        "the stable closure is the identity exactly when the quasi-spectrum is inverse-dense"
    );
    Ok(via_topology)
}

/// All localization-induced operations, one per subset of the maximal
/// ideals, each tagged with its canonical inducing set.
pub fn spectral_family(k: u8, depth: i64) -> Result<Vec<(PrimeSet, SemistarOp)>, OpError> {
    let mut out = Vec::new();
    for maxes in crate::model::Subset::all(k) {
        let y = PrimeSet::new(true, maxes);
        out.push((y, localization_op(k, y, depth)?));
    }
    Ok(out)
}

/// The spectrum space, re-exported next to the helpers above for callers
/// working with prime masks.
pub fn spectrum(k: u8) -> FinSpace {
    spec_space(k)
}
