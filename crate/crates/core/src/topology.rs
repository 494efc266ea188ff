//! Finite topological spaces, materialized.
//!
//! Points are indices, point sets are bitmasks. A finite space is Alexandrov:
//! every point has a least open neighborhood, the intersection of the
//! subbasic opens around it, and the open sets are exactly the unions of
//! these neighborhoods. Everything below (closure, specialization, T0,
//! sobriety, compactness, the inverse topology) is computed from that.
//!
//! The engine is meant for spaces small enough to enumerate opens. Larger
//! spaces in this crate are checked at the subbasis level by their builders
//! instead of being materialized.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

/// Largest point count the engine materializes.
pub const MAX_POINTS: usize = 20;

/// Safety valve for pathological open lattices.
const MAX_OPENS: usize = 1 << 20;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinSpace {
    labels: Vec<String>,
    subbasis: Vec<u32>,
    nbhd: Vec<u32>,
    opens: Vec<u32>,
}

impl FinSpace {
    /// Build the topology generated by `subbasis` on `labels.len()` points.
    pub fn from_subbasis(labels: Vec<String>, subbasis: Vec<u32>) -> FinSpace {
        let n = labels.len();
        assert!(n >= 1 && n <= MAX_POINTS, "space must have 1..={MAX_POINTS} points");
        let full: u32 = (1 << n) - 1;
        for &s in &subbasis {
            assert_eq!(s & !full, 0, "subbasic set mentions a point out of range");
        }
        // Least open neighborhood: intersection of the subbasics around the
        // point; the empty intersection is the whole space.
        let nbhd: Vec<u32> = (0..n)
            .map(|x| {
                subbasis
                    .iter()
                    .filter(|&&s| s & (1 << x) != 0)
                    .fold(full, |acc, &s| acc & s)
            })
            .collect();
        // Opens are unions of least neighborhoods: saturate from the empty
        // set. A mask is open iff it contains the neighborhood of each of
        // its points, so the saturation below reaches every open.
        let mut opens: Vec<u32> = Vec::new();
        let mut seen = alloc::collections::BTreeSet::new();
        seen.insert(0u32);
        let mut frontier = vec![0u32];
        while let Some(o) = frontier.pop() {
            opens.push(o);
            assert!(opens.len() <= MAX_OPENS, "open lattice too large to materialize");
            for x in 0..n {
                let next = o | nbhd[x];
                if seen.insert(next) {
                    frontier.push(next);
                }
            }
        }
        opens.sort_by_key(|&o| (o.count_ones(), o));
        let space = FinSpace {
            labels,
            subbasis,
            nbhd,
            opens,
        };
        debug_assert!(space.opens.iter().all(|&o| space.is_open(o)));
        space
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.n()) - 1
    }

    pub fn subbasis(&self) -> &[u32] {
        &self.subbasis
    }

    /// All open sets, sorted by size then by mask.
    pub fn opens(&self) -> &[u32] {
        &self.opens
    }

    /// All closed sets, in the complement order of `opens`.
    pub fn closeds(&self) -> Vec<u32> {
        let full = self.full_mask();
        self.opens.iter().map(|&o| full & !o).collect()
    }

    pub fn nbhd(&self, x: usize) -> u32 {
        self.nbhd[x]
    }

    pub fn is_open(&self, m: u32) -> bool {
        (0..self.n()).all(|x| m & (1 << x) == 0 || self.nbhd[x] & !m == 0)
    }

    pub fn is_closed(&self, m: u32) -> bool {
        self.is_open(self.full_mask() & !m)
    }

    /// Smallest closed superset: the points whose every neighborhood meets
    /// `y`, which for the least neighborhood is the whole story.
    pub fn closure(&self, y: u32) -> u32 {
        let mut out = 0u32;
        for x in 0..self.n() {
            if self.nbhd[x] & y != 0 {
                out |= 1 << x;
            }
        }
        out
    }

    /// Largest open subset.
    pub fn interior(&self, y: u32) -> u32 {
        let mut out = 0u32;
        for x in 0..self.n() {
            if y & (1 << x) != 0 && self.nbhd[x] & !y == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    /// x lies in the closure of {y}: every open around x sees y.
    pub fn specialization_leq(&self, x: usize, y: usize) -> bool {
        self.nbhd[x] & (1 << y) != 0
    }

    /// No two points share all their opens.
    pub fn is_t0(&self) -> bool {
        for x in 0..self.n() {
            for y in (x + 1)..self.n() {
                if self.nbhd[x] == self.nbhd[y] {
                    return false;
                }
            }
        }
        true
    }

    /// Nonempty closed sets that are not the union of two proper closed
    /// subsets.
    pub fn irreducible_closeds(&self) -> Vec<u32> {
        let closeds = self.closeds();
        let mut out = Vec::new();
        'outer: for &c in &closeds {
            if c == 0 {
                continue;
            }
            for &a in &closeds {
                if a & !c != 0 || a == c {
                    continue;
                }
                for &b in &closeds {
                    if b & !c != 0 || b == c {
                        continue;
                    }
                    if a | b == c {
                        continue 'outer;
                    }
                }
            }
            out.push(c);
        }
        out
    }

    /// The point whose closure is exactly `closed`, if any.
    pub fn generic_point(&self, closed: u32) -> Option<usize> {
        (0..self.n()).find(|&y| self.closure(1 << y) == closed)
    }

    /// Every irreducible closed set is the closure of exactly one point.
    pub fn is_sober(&self) -> bool {
        self.irreducible_closeds().iter().all(|&c| {
            let generics = (0..self.n())
                .filter(|&y| self.closure(1 << y) == c)
                .count();
            generics == 1
        })
    }

    /// A subcover of `y` drawn from `cover`, greedily minimized, or None
    /// when `cover` does not reach all of `y`.
    pub fn minimal_subcover(&self, y: u32, cover: &[u32]) -> Option<Vec<u32>> {
        let mut picked: Vec<u32> = Vec::new();
        let mut left = y;
        while left != 0 {
            let best = cover
                .iter()
                .copied()
                .max_by_key(|&o| (o & left).count_ones())?;
            if best & left == 0 {
                return None;
            }
            picked.push(best);
            left &= !best;
        }
        // Drop members made redundant by later greedy picks.
        let mut i = 0;
        while i < picked.len() {
            let without: u32 = picked
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &o)| o)
                .fold(0, |a, o| a | o);
            if y & !without == 0 {
                picked.remove(i);
            } else {
                i += 1;
            }
        }
        Some(picked)
    }

    /// Finitely many opens exist in total, so every open cover of any
    /// subset admits a finite subcover. This still exercises the canonical
    /// covers, all opens meeting the set and the least neighborhoods of its
    /// points, as a sanity check.
    pub fn is_quasi_compact(&self, y: u32) -> bool {
        let meeting: Vec<u32> = self.opens.iter().copied().filter(|&o| o & y != 0 || y == 0).collect();
        let nbhds: Vec<u32> = (0..self.n())
            .filter(|&x| y & (1 << x) != 0)
            .map(|x| self.nbhd[x])
            .collect();
        let by_opens = y == 0 || self.minimal_subcover(y, &meeting).is_some();
        let by_nbhds = y == 0 || self.minimal_subcover(y, &nbhds).is_some();
        by_opens && by_nbhds
    }

    /// Opens whose every open cover admits a finite subcover. Finiteness
    /// makes this all of them; kept explicit so callers can state it.
    pub fn compact_opens(&self) -> Vec<u32> {
        self.opens
            .iter()
            .copied()
            .filter(|&o| self.is_quasi_compact(o))
            .collect()
    }

    /// Quasi-compact, T0, sober, with a quasi-compact open basis closed
    /// under intersection. For finite spaces everything except T0 is
    /// automatic, but each part is computed, not assumed.
    pub fn is_spectral(&self) -> bool {
        if !self.is_t0() || !self.is_sober() || !self.is_quasi_compact(self.full_mask()) {
            return false;
        }
        // The compact opens must form a basis closed under intersection.
        let compact = self.compact_opens();
        let basis = self.opens.iter().all(|&o| {
            (0..self.n()).all(|x| {
                o & (1 << x) == 0
                    || compact
                        .iter()
                        .any(|&b| b & (1 << x) != 0 && b & !o == 0)
            })
        });
        let inter_closed = compact
            .iter()
            .all(|&a| compact.iter().all(|&b| compact.contains(&(a & b))));
        basis && inter_closed
    }

    /// The inverse topology: opens and closeds swap roles. Only meaningful
    /// for spectral spaces, where the closed sets are exactly the
    /// complements of the quasi-compact opens; here that is all of them.
    ///
    /// The construction regenerates the space from the complements and
    /// checks the expected exchange properties.
    pub fn inverse(&self) -> FinSpace {
        let full = self.full_mask();
        let inv_subbasis: Vec<u32> = self.opens.iter().map(|&o| full & !o).collect();
        let inv = FinSpace::from_subbasis(self.labels.clone(), inv_subbasis);
        // The inverse opens are exactly the original closeds.
        let mut expected: Vec<u32> = self.closeds();
        expected.sort_by_key(|&o| (o.count_ones(), o));
        assert_eq!(inv.opens, expected, "inverse topology must flip opens and closeds");
        // Specialization flips.
        for x in 0..self.n() {
            for y in 0..self.n() {
                assert_eq!(
                    self.specialization_leq(x, y),
                    inv.specialization_leq(y, x),
                    "specialization must reverse in the inverse topology"
                );
            }
        }
        inv
    }

    /// Closure in the inverse topology: the up-set of `y` under
    /// specialization. Computed through the inverse space and cross-checked
    /// against the order description.
    pub fn inverse_closure(&self, y: u32) -> u32 {
        let inv = self.inverse();
        let via_inverse = inv.closure(y);
        let mut via_order = 0u32;
        for x in 0..self.n() {
            for g in 0..self.n() {
                if y & (1 << g) != 0 && self.specialization_leq(g, x) {
                    via_order |= 1 << x;
                }
            }
        }
        assert_eq!(via_inverse, via_order);
        // Inverse-closed sets of spectral spaces stay quasi-compact.
        assert!(self.is_quasi_compact(via_inverse));
        via_inverse
    }

    /// Covering pairs of the specialization order, x strictly below y with
    /// nothing in between. Rendered as x -> y edges.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n() {
            for y in 0..self.n() {
                if x == y || !self.specialization_leq(x, y) || self.specialization_leq(y, x) {
                    continue;
                }
                let between = (0..self.n()).any(|z| {
                    z != x
                        && z != y
                        && self.specialization_leq(x, z)
                        && self.specialization_leq(z, y)
                        && !self.specialization_leq(z, x)
                        && !self.specialization_leq(y, z)
                });
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Index of the point carrying `label`.
    pub fn point(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Render a mask through the point labels.
    pub fn set_label(&self, m: u32) -> String {
        let mut parts = Vec::new();
        for x in 0..self.n() {
            if m & (1 << x) != 0 {
                parts.push(self.labels[x].clone());
            }
        }
        format!("{{{}}}", parts.join(","))
    }
}

/// Preimages of opens are open.
pub fn check_continuous(src: &FinSpace, dst: &FinSpace, map: &[usize]) -> bool {
    assert_eq!(map.len(), src.n());
    dst.opens().iter().all(|&o| {
        let pre = preimage(src.n(), map, o);
        src.is_open(pre)
    })
}

/// Injective, continuous, and the source topology is exactly the pullback:
/// every source open is the preimage of some target open.
pub fn check_embedding(src: &FinSpace, dst: &FinSpace, map: &[usize]) -> bool {
    let injective = {
        let mut seen = alloc::collections::BTreeSet::new();
        map.iter().all(|&y| seen.insert(y))
    };
    injective
        && check_continuous(src, dst, map)
        && src.opens().iter().all(|&u| {
            dst.opens()
                .iter()
                .any(|&o| preimage(src.n(), map, o) == u)
        })
}

/// `retract` after `include` is the identity and both directions are
/// continuous.
pub fn check_retraction(
    big: &FinSpace,
    small: &FinSpace,
    include: &[usize],
    retract: &[usize],
) -> bool {
    assert_eq!(include.len(), small.n());
    assert_eq!(retract.len(), big.n());
    (0..small.n()).all(|x| retract[include[x]] == x)
        && check_continuous(small, big, include)
        && check_continuous(big, small, retract)
}

fn preimage(src_n: usize, map: &[usize], target: u32) -> u32 {
    let mut pre = 0u32;
    for x in 0..src_n {
        if target & (1 << map[x]) != 0 {
            pre |= 1 << x;
        }
    }
    pre
}
