//! The spaces attached to the model and the maps between them.
//!
//! Four spaces: the prime spectrum, the space of overrings, its subspace of
//! valuation overrings plus the field, and the space of closure operations
//! with the topology generated by the sets V_F = "operations whose closure
//! of F contains 1". The probe modules generate that topology, because
//! membership of 1 in a closed probe reads off one entry of the support
//! table.
//!
//! Small spaces are materialized through [`crate::topology::FinSpace`].
//! The operation space outgrows the engine past k = 2, so it also exists in
//! a subbasis-level form ([`ProbeSpace`]) where neighborhoods, closures and
//! the specialization order are computed pointwise without enumerating
//! opens.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::model::Subset;
use crate::semistar::op::op_label;
use crate::semistar::support::SupportMap;
use crate::topology::FinSpace;

/// The prime spectrum: the zero ideal followed by the maximal ideals.
/// Basic opens are the nonvanishing loci D(a); the 0/1 valuation patterns
/// already produce all of them.
pub fn spec_space(k: u8) -> FinSpace {
    let mut labels = vec!["(0)".to_string()];
    for i in 0..k {
        labels.push(format!("m{}", i + 1));
    }
    let subbasis = Subset::all(k)
        .map(|ones| {
            // a with valuation 1 on `ones`, 0 elsewhere: a avoids (0) and
            // exactly the m_i with i outside `ones`.
            let mut mask = 1u32;
            for i in 0..k {
                if !ones.contains(i) {
                    mask |= 1 << (i + 1);
                }
            }
            mask
        })
        .collect();
    FinSpace::from_subbasis(labels, subbasis)
}

/// The space of overrings, one point per index set T giving B_T. Basic
/// opens are "overrings containing x", which are the down-sets of index
/// sets disjoint from the poles of x; every down-set of (P(U), inclusion)
/// arises as a union of those.
pub fn over_space(k: u8) -> FinSpace {
    let labels = Subset::all(k).map(|t| overring_label(k, t)).collect();
    let subbasis = Subset::all(k)
        .map(|w| {
            let mut mask = 0u32;
            for t in Subset::all(k) {
                if t.is_subset_of(w) {
                    mask |= 1 << t.bits();
                }
            }
            mask
        })
        .collect();
    FinSpace::from_subbasis(labels, subbasis)
}

pub fn overring_label(k: u8, t: Subset) -> String {
    if t.is_empty() {
        "K".to_string()
    } else if t == Subset::full(k) {
        "A".to_string()
    } else {
        format!("B{t}")
    }
}

/// The valuation overrings together with the field: the trace of the
/// overring space on the points B_{} and the B_{i}.
pub fn local_space(k: u8) -> FinSpace {
    let mut labels = vec!["K".to_string()];
    for i in 0..k {
        labels.push(format!("V{}", i + 1));
    }
    let subbasis = Subset::all(k)
        .map(|w| {
            let mut mask = 1u32;
            for i in 0..k {
                if w.contains(i) {
                    mask |= 1 << (i + 1);
                }
            }
            mask
        })
        .collect();
    FinSpace::from_subbasis(labels, subbasis)
}

/// The probes, empty-support pairs first, each giving one subbasic open of
/// the operation space. Order: by support set, then by positive part.
pub fn default_probes(k: u8) -> Vec<(Subset, Subset)> {
    let mut out = Vec::new();
    for s in Subset::all(k) {
        for p_bits in Subset::all(k) {
            if p_bits.minus(s) == p_bits {
                out.push((s, p_bits));
            }
        }
    }
    out
}

/// Membership of an operation in the subbasic open cut out by a probe:
/// 1 lies in the closure of the probe module exactly when the operation
/// glues all of P over S.
pub fn op_in_probe_basic(sm: &SupportMap, s: Subset, p: Subset) -> bool {
    p.is_subset_of(sm.apply_set(s))
}

/// The operation space, materialized. Points in the order given; the
/// subbasis comes from the default probes.
pub fn sstar_space(ops: &[SupportMap]) -> FinSpace {
    assert!(!ops.is_empty());
    let k = ops[0].k();
    let labels = ops.iter().map(|sm| op_label(sm, ops)).collect();
    let subbasis = default_probes(k)
        .into_iter()
        .map(|(s, p)| {
            let mut mask = 0u32;
            for (i, sm) in ops.iter().enumerate() {
                if op_in_probe_basic(sm, s, p) {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();
    FinSpace::from_subbasis(labels, subbasis)
}

/// The operation space at the subbasis level, for families too large to
/// materialize. Everything is computed pointwise from probe membership.
pub struct ProbeSpace<'a> {
    ops: &'a [SupportMap],
    probes: Vec<(Subset, Subset)>,
}

impl<'a> ProbeSpace<'a> {
    pub fn new(ops: &'a [SupportMap]) -> ProbeSpace<'a> {
        assert!(!ops.is_empty());
        ProbeSpace {
            ops,
            probes: default_probes(ops[0].k()),
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[SupportMap] {
        self.ops
    }

    pub fn probes(&self) -> &[(Subset, Subset)] {
        &self.probes
    }

    /// y lies in every subbasic open around x.
    pub fn in_nbhd(&self, x: usize, y: usize) -> bool {
        self.probes
            .iter()
            .all(|&(s, p)| !op_in_probe_basic(&self.ops[x], s, p) || op_in_probe_basic(&self.ops[y], s, p))
    }

    /// x lies in the closure of {y}.
    pub fn specialization_leq(&self, x: usize, y: usize) -> bool {
        self.in_nbhd(x, y)
    }

    /// Closure of a set of points: everything whose least neighborhood
    /// meets it. For this subbasis that is the down-set in the pointwise
    /// order of support maps, and the two descriptions are checked against
    /// each other.
    pub fn closure_indices(&self, seed: &[usize]) -> Vec<usize> {
        let out: Vec<usize> = (0..self.ops.len())
            .filter(|&x| seed.iter().any(|&y| self.in_nbhd(x, y)))
            .collect();
        for (x, sm) in self.ops.iter().enumerate() {
            let by_order = seed.iter().any(|&y| sm.leq(&self.ops[y]));
            assert_eq!(
                out.contains(&x),
                by_order,
                "probe closure must be the order down-set"
            );
        }
        out
    }

    /// Distinct points are separated by some subbasic open.
    pub fn is_t0(&self) -> bool {
        for x in 0..self.ops.len() {
            for y in (x + 1)..self.ops.len() {
                if self.in_nbhd(x, y) && self.in_nbhd(y, x) {
                    return false;
                }
            }
        }
        true
    }
}

/// Index of a support map inside an enumerated family.
pub fn op_index(ops: &[SupportMap], sm: &SupportMap) -> Option<usize> {
    ops.iter().position(|o| o == sm)
}

/// The overring-to-operation map: T goes to the meet with B_T alone.
pub fn phi_table(k: u8, t: Subset) -> SupportMap {
    SupportMap::finite_type_with_kernel(k, t.complement(k))
}

/// Point map of phi from the overring space into an operation family, by
/// index. Fails if some wedge is missing from the family.
pub fn phi_point_map(k: u8, ops: &[SupportMap]) -> Option<Vec<usize>> {
    Subset::all(k)
        .map(|t| op_index(ops, &phi_table(k, t)))
        .collect()
}

/// The finite-type reflection as a point map of the operation family into
/// itself (or into a subfamily).
pub fn ft_point_map(ops: &[SupportMap], target: &[SupportMap]) -> Option<Vec<usize>> {
    ops.iter()
        .map(|sm| op_index(target, &SupportMap::finite_type_with_kernel(sm.k(), sm.kernel())))
        .collect()
}

/// The pointwise identity showing phi pulls subbasics back to subbasics:
/// the wedge at T glues P over S exactly when T misses P. Returns a
/// violating (T, S, P) triple if any.
pub fn phi_subbasic_identity(k: u8) -> Option<(Subset, Subset, Subset)> {
    for t in Subset::all(k) {
        let w = phi_table(k, t);
        for (s, p) in default_probes(k) {
            if op_in_probe_basic(&w, s, p) != t.disjoint(p) {
                return Some((t, s, p));
            }
        }
    }
    None
}

/// The pointwise identity showing the finite-type reflection is continuous:
/// the reflected operation glues P over S exactly when the original glues
/// P over the empty set. Returns a violating (index, S, P) triple if any.
pub fn ft_subbasic_identity(ops: &[SupportMap]) -> Option<(usize, Subset, Subset)> {
    for (i, sm) in ops.iter().enumerate() {
        let k = sm.k();
        let refl = SupportMap::finite_type_with_kernel(k, sm.kernel());
        for (s, p) in default_probes(k) {
            if op_in_probe_basic(&refl, s, p) != op_in_probe_basic(sm, Subset::EMPTY, p) {
                return Some((i, s, p));
            }
        }
    }
    None
}

/// The labels-to-labels homeomorphism between the valuation subspace and
/// the spectrum: K to (0) and V_i to m_i, the identity on indices.
pub fn lambda_point_map(k: u8) -> Vec<usize> {
    (0..=k as usize).collect()
}
