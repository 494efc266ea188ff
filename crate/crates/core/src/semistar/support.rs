//! Closure operators on the subsets of {1, ..., k} and their action on
//! module vectors.
//!
//! A star operation on our model can only widen components to `K`, never move
//! a finite bound: applying it to x A for all x forces any finite shift to be
//! the same on every module, and idempotency then forces the shift to be
//! zero. So the operation is exactly "send F to the module unconstrained on
//! g(S(F)) and untouched elsewhere" for g a closure operator on index sets,
//! where S(F) is the set of unconstrained components of F. Monotonicity,
//! extensivity and idempotency of the star correspond one to one with the
//! closure operator axioms for g.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::model::{Comp, ModuleVec, Subset};

/// Closure operator g on the 2^k subsets of prime indices, tabulated.
///
/// `table[m]` is g of the subset with bitmask m. The derived ordering is the
/// lexicographic one on tables; it is only used to keep enumerations and
/// report output deterministic, not for the pointwise order (see [`leq`]).
///
/// [`leq`]: SupportMap::leq
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportMap {
    k: u8,
    table: Vec<Subset>,
}

impl SupportMap {
    /// Validating constructor: checks the closure operator axioms.
    pub fn new(k: u8, table: Vec<Subset>) -> Result<SupportMap, ClosureViolation> {
        assert!(k <= 16);
        assert_eq!(table.len(), 1 << k);
        let m = SupportMap { k, table };
        m.check_axioms()?;
        Ok(m)
    }

    /// Unchecked constructor for tables known to be closure operators.
    pub(crate) fn from_table_unchecked(k: u8, table: Vec<Subset>) -> SupportMap {
        debug_assert_eq!(table.len(), 1 << k);
        SupportMap { k, table }
    }

    /// The identity operation d: every set is already closed.
    pub fn identity(k: u8) -> SupportMap {
        SupportMap {
            k,
            table: Subset::all(k).collect(),
        }
    }

    /// The operation e sending every module to the whole field.
    pub fn constant_full(k: u8) -> SupportMap {
        SupportMap {
            k,
            table: vec![Subset::full(k); 1 << k],
        }
    }

    /// The operation F -> intersection of F B_T over the T in `family`.
    ///
    /// Component i of F B_T keeps its bound exactly when i lies in T, so the
    /// intersection keeps component i exactly when some family member covers
    /// i: the result is the finite-type operator whose kernel is the set of
    /// uncovered indices, g(S) = S union (U minus the union of the family).
    /// The empty family (or the family {B_{}} = {K}) gives the constant-K
    /// operation.
    pub fn wedge(k: u8, family: &BTreeSet<Subset>) -> SupportMap {
        let mut covered = Subset::EMPTY;
        for &t in family {
            covered = covered.union(t);
        }
        SupportMap::finite_type_with_kernel(k, covered.complement(k))
    }

    /// The divisorial operation v = (A : (A : -)). Closes every nonempty set
    /// to the whole index set and leaves the empty set alone.
    pub fn divisorial(k: u8) -> SupportMap {
        let table = Subset::all(k)
            .map(|s| if s.is_empty() { s } else { Subset::full(k) })
            .collect();
        SupportMap { k, table }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn table(&self) -> &[Subset] {
        &self.table
    }

    pub fn apply_set(&self, s: Subset) -> Subset {
        self.table[s.bits() as usize]
    }

    /// Closure of the empty set: the indices every closed module ignores.
    pub fn kernel(&self) -> Subset {
        self.table[0]
    }

    /// Apply to a module vector: widen the components in g(S(F)) to `K`.
    pub fn apply(&self, f: &ModuleVec) -> ModuleVec {
        assert_eq!(f.k(), self.k);
        let closed = self.apply_set(f.support());
        ModuleVec::new(
            f.comps()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if closed.contains(i as u8) {
                        Comp::Full
                    } else {
                        *c
                    }
                })
                .collect(),
        )
    }

    /// The closure operator axioms, with the offending input on failure.
    pub fn check_axioms(&self) -> Result<(), ClosureViolation> {
        for s in Subset::all(self.k) {
            let gs = self.apply_set(s);
            if !s.is_subset_of(gs) {
                return Err(ClosureViolation::NotExtensive { input: s, output: gs });
            }
            let ggs = self.apply_set(gs);
            if ggs != gs {
                return Err(ClosureViolation::NotIdempotent {
                    input: s,
                    once: gs,
                    twice: ggs,
                });
            }
            for t in Subset::all(self.k) {
                if s.is_subset_of(t) && !gs.is_subset_of(self.apply_set(t)) {
                    return Err(ClosureViolation::NotMonotone {
                        small: s,
                        large: t,
                        small_out: gs,
                        large_out: self.apply_set(t),
                    });
                }
            }
        }
        Ok(())
    }

    /// Order on operations: `self.leq(other)` iff F^self is contained in
    /// F^other for every module F, which on tables reads g_self(S) subset of
    /// g_other(S) for every S. The identity is the bottom, the constant-K
    /// operation the top.
    pub fn leq(&self, other: &SupportMap) -> bool {
        assert_eq!(self.k, other.k);
        self.table
            .iter()
            .zip(&other.table)
            .all(|(a, b)| a.is_subset_of(*b))
    }

    /// Greatest lower bound: the pointwise intersection, which is again a
    /// closure operator. Idempotency survives because g(g(S)) sits inside
    /// each g_i(g(S)), which sits inside g_i(g_i(S)) = g_i(S).
    pub fn meet(&self, other: &SupportMap) -> SupportMap {
        assert_eq!(self.k, other.k);
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a.inter(*b))
            .collect();
        SupportMap { k: self.k, table }
    }

    /// Least upper bound: iterate the pointwise union of tables to its
    /// fixpoint. Each pass reapplies both operators to the current table
    /// entries, so the limit is the least closure operator above both.
    pub fn join(&self, other: &SupportMap) -> SupportMap {
        assert_eq!(self.k, other.k);
        let mut table: Vec<Subset> = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a.union(*b))
            .collect();
        loop {
            let mut changed = false;
            for m in 0..table.len() {
                let cur = table[m];
                let next = self
                    .apply_set(cur)
                    .union(other.apply_set(cur))
                    .union(table[cur.bits() as usize]);
                if next != cur {
                    table[m] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        SupportMap { k: self.k, table }
    }

    /// Finite type: determined by the closure of the empty set alone,
    /// g(S) = S union g({}). Equivalently the operation is the meet of the
    /// valuation overrings avoiding g({}).
    pub fn is_finite_type(&self) -> bool {
        let kernel = self.kernel();
        Subset::all(self.k).all(|s| self.apply_set(s) == s.union(kernel))
    }

    /// The finite-type operation with the given kernel.
    pub fn finite_type_with_kernel(k: u8, kernel: Subset) -> SupportMap {
        let table = Subset::all(k).map(|s| s.union(kernel)).collect();
        SupportMap { k, table }
    }

    /// Sets fixed by the operator, in mask order.
    pub fn closed_sets(&self) -> Vec<Subset> {
        Subset::all(self.k)
            .filter(|&s| self.apply_set(s) == s)
            .collect()
    }

    /// Render the full table, one arrow per input set.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for s in Subset::all(self.k) {
            if !out.is_empty() {
                out.push_str(", ");
            }
            out.push_str(&format!("{} -> {}", s, self.apply_set(s)));
        }
        out
    }
}

impl fmt::Display for SupportMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl fmt::Debug for SupportMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportMap[{}]", self.describe())
    }
}

/// Why a table fails to be a closure operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureViolation {
    NotExtensive {
        input: Subset,
        output: Subset,
    },
    NotMonotone {
        small: Subset,
        large: Subset,
        small_out: Subset,
        large_out: Subset,
    },
    NotIdempotent {
        input: Subset,
        once: Subset,
        twice: Subset,
    },
}

impl fmt::Display for ClosureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureViolation::NotExtensive { input, output } => {
                write!(f, "not extensive: {input} maps to {output}")
            }
            ClosureViolation::NotMonotone {
                small,
                large,
                small_out,
                large_out,
            } => write!(
                f,
                "not monotone: {small} -> {small_out} but {large} -> {large_out}"
            ),
            ClosureViolation::NotIdempotent { input, once, twice } => {
                write!(f, "not idempotent: {input} -> {once} -> {twice}")
            }
        }
    }
}

impl core::error::Error for ClosureViolation {}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(indices: &[u8]) -> Subset {
        Subset::from_indices(indices)
    }

    #[test]
    fn named_operators_are_closure_operators() {
        for k in 1..=4u8 {
            SupportMap::identity(k).check_axioms().unwrap();
            SupportMap::constant_full(k).check_axioms().unwrap();
            SupportMap::divisorial(k).check_axioms().unwrap();
            let singles: BTreeSet<Subset> = (0..k).map(Subset::singleton).collect();
            SupportMap::wedge(k, &singles).check_axioms().unwrap();
        }
    }

    #[test]
    fn wedge_over_single_overring_k2() {
        // Meet with V_1 alone: supports containing 1 close to everything,
        // the rest gain nothing.
        let fam: BTreeSet<Subset> = [sub(&[0])].into_iter().collect();
        let w = SupportMap::wedge(2, &fam);
        assert_eq!(w.apply_set(sub(&[])), sub(&[1]));
        assert_eq!(w.apply_set(sub(&[0])), sub(&[0, 1]));
        assert_eq!(w.apply_set(sub(&[1])), sub(&[1]));
        assert_eq!(w.apply_set(sub(&[0, 1])), sub(&[0, 1]));
    }

    #[test]
    fn wedge_action_matches_direct_intersection() {
        // F^w = intersection of F B_T over the family, checked by direct
        // module arithmetic for every depth-2 module and family at k = 2, 3.
        for k in 2..=3u8 {
            let all_t: Vec<Subset> = Subset::all(k).collect();
            // Families: every nonempty set of nonempty subsets is legal; we
            // walk a representative slice (all families of size <= 2 plus the
            // full family).
            let mut families: Vec<BTreeSet<Subset>> = Vec::new();
            for &a in &all_t {
                families.push([a].into_iter().collect());
                for &b in &all_t {
                    families.push([a, b].into_iter().collect());
                }
            }
            families.push(all_t.iter().copied().collect());
            for fam in families {
                let w = SupportMap::wedge(k, &fam);
                w.check_axioms().unwrap();
                for f in ModuleVec::depth_family(k, 2) {
                    let mut acc = ModuleVec::field(k);
                    for &t in &fam {
                        acc = acc.intersect(&f.multiply(&ModuleVec::overring(k, t)));
                    }
                    assert_eq!(w.apply(&f), acc, "family {fam:?} on {f}");
                }
            }
        }
    }

    #[test]
    fn divisorial_table_k2() {
        let v = SupportMap::divisorial(2);
        assert_eq!(v.apply_set(sub(&[])), sub(&[]));
        assert_eq!(v.apply_set(sub(&[0])), sub(&[0, 1]));
        assert_eq!(v.apply_set(sub(&[1])), sub(&[0, 1]));
        // Matches the double colon on modules.
        let a = ModuleVec::ring(2);
        for f in ModuleVec::depth_family(2, 2) {
            let inner = a.colon_module(&f);
            let double = match &inner {
                crate::model::ModuleOrZero::Zero => ModuleVec::field(2),
                crate::model::ModuleOrZero::Module(g) => {
                    a.colon_module(g).expect_module("(A : G) with G fractional-like")
                }
            };
            assert_eq!(v.apply(&f), double, "F = {f}");
        }
    }

    #[test]
    fn meet_and_join_are_lattice_bounds() {
        // Exhaustive over all 7 operators at k = 2.
        let ops = all_ops_k2();
        assert_eq!(ops.len(), 7);
        for a in &ops {
            for b in &ops {
                let m = a.meet(b);
                let j = a.join(b);
                m.check_axioms().unwrap();
                j.check_axioms().unwrap();
                assert!(m.leq(a) && m.leq(b));
                assert!(a.leq(&j) && b.leq(&j));
                for c in &ops {
                    if c.leq(a) && c.leq(b) {
                        assert!(c.leq(&m));
                    }
                    if a.leq(c) && b.leq(c) {
                        assert!(j.leq(c));
                    }
                }
            }
        }
    }

    fn all_ops_k2() -> Vec<SupportMap> {
        // Brute force every table and keep the closure operators.
        let mut out = Vec::new();
        for t0 in Subset::all(2) {
            for t1 in Subset::all(2) {
                for t2 in Subset::all(2) {
                    for t3 in Subset::all(2) {
                        let m = SupportMap {
                            k: 2,
                            table: vec![t0, t1, t2, t3],
                        };
                        if m.check_axioms().is_ok() {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn finite_type_detection() {
        assert!(SupportMap::identity(2).is_finite_type());
        assert!(SupportMap::constant_full(2).is_finite_type());
        assert!(!SupportMap::divisorial(2).is_finite_type());
        let ft = SupportMap::finite_type_with_kernel(3, sub(&[1]));
        assert!(ft.is_finite_type());
        ft.check_axioms().unwrap();
        assert_eq!(ft.apply_set(sub(&[0])), sub(&[0, 1]));
    }

    #[test]
    fn axiom_violations_are_reported() {
        let not_ext = SupportMap {
            k: 1,
            table: vec![Subset::EMPTY, Subset::EMPTY],
        };
        assert!(matches!(
            not_ext.check_axioms(),
            Err(ClosureViolation::NotExtensive { .. })
        ));
        let not_mono = SupportMap {
            k: 2,
            table: vec![sub(&[0, 1]), sub(&[0]), sub(&[1]), sub(&[0, 1])],
        };
        assert!(matches!(
            not_mono.check_axioms(),
            Err(ClosureViolation::NotMonotone { .. }) | Err(ClosureViolation::NotIdempotent { .. })
        ));
    }

    #[test]
    fn display_format() {
        let d = SupportMap::identity(1);
        assert_eq!(format!("{d}"), "{} -> {}, {1} -> {1}");
    }
}
