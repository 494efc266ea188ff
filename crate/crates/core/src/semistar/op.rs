//! An expression paired with its extracted support map.
//!
//! Construction evaluates the expression on probe modules, reads off the
//! table, checks the closure operator axioms, and then replays every probe
//! through both the table and the definitional evaluator. The two paths are
//! independent, so agreement here is a real check and not a tautology.
//! Composites are the one legitimate failure: a composition of closure
//! operations need not be idempotent, and such an operation carries a defect
//! description instead of a table.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::model::{ModuleVec, PrimeSet, Subset};
use crate::semistar::expr::{EvalError, SemistarExpr};
use crate::semistar::support::{ClosureViolation, SupportMap};

/// Largest k for which tables are extracted (probe count grows as 3^k).
pub const MAX_OP_ARITY: u8 = 8;

/// Largest k for which the full operation lattice is enumerated.
pub const MAX_ENUM_ARITY: u8 = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemistarOp {
    k: u8,
    depth: i64,
    expr: SemistarExpr,
    nf: Option<SupportMap>,
    defect: Option<String>,
}

/// Construction failures. `NotClosure` and `ProbeMismatch` cannot arise from
/// the primitive constructors, only from a bug, so they are surfaced loudly
/// rather than folded into a defect.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OpError {
    Eval(EvalError),
    UnsupportedArity { k: u8, max: u8 },
    NotClosure(ClosureViolation),
    ProbeMismatch {
        input: ModuleVec,
        via_expr: ModuleVec,
        via_table: ModuleVec,
    },
}

impl fmt::Display for OpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpError::Eval(e) => write!(f, "{e}"),
            OpError::UnsupportedArity { k, max } => {
                write!(f, "k = {k} exceeds the supported maximum {max}")
            }
            OpError::NotClosure(v) => write!(f, "extracted table is not a closure operator: {v}"),
            OpError::ProbeMismatch {
                input,
                via_expr,
                via_table,
            } => write!(
                f,
                "evaluator and table disagree on {input}: {via_expr} vs {via_table}"
            ),
        }
    }
}

impl core::error::Error for OpError {}

impl From<EvalError> for OpError {
    fn from(e: EvalError) -> OpError {
        OpError::Eval(e)
    }
}

impl SemistarOp {
    pub fn new(k: u8, expr: SemistarExpr, depth: i64) -> Result<SemistarOp, OpError> {
        if k == 0 || k > MAX_OP_ARITY {
            return Err(OpError::UnsupportedArity { k, max: MAX_OP_ARITY });
        }
        expr.validate(k)?;
        // Read the table off the overring probes: the closure of B_{U \ S}
        // has support exactly g(S).
        let mut table = Vec::with_capacity(1 << k);
        for s in Subset::all(k) {
            let closed = expr.eval(k, &ModuleVec::probe(k, s, Subset::EMPTY), depth)?;
            table.push(closed.support());
        }
        let composite = matches!(expr, SemistarExpr::Compose(_));
        let candidate = match SupportMap::new(k, table) {
            Ok(sm) => Some(sm),
            Err(violation) if composite => {
                return Ok(SemistarOp {
                    k,
                    depth,
                    expr,
                    nf: None,
                    defect: Some(format!("not idempotent as a map of modules: {violation}")),
                });
            }
            Err(violation) => return Err(OpError::NotClosure(violation)),
        };
        let sm = candidate.expect("non-defective path always has a table");
        // Replay every disjoint probe pair through both evaluation paths.
        for s in Subset::all(k) {
            for p_bits in Subset::all(k) {
                let p = p_bits.minus(s);
                if p != p_bits {
                    continue;
                }
                let probe = ModuleVec::probe(k, s, p);
                let via_expr = expr.eval(k, &probe, depth)?;
                let via_table = sm.apply(&probe);
                if via_expr != via_table {
                    return Err(OpError::ProbeMismatch {
                        input: probe,
                        via_expr,
                        via_table,
                    });
                }
            }
        }
        Ok(SemistarOp {
            k,
            depth,
            expr,
            nf: Some(sm),
            defect: None,
        })
    }

    /// Wrap an explicit table. The expression is the table itself, so the
    /// probe replay in `new` is a consistency check of the two apply paths.
    pub fn from_table(sm: SupportMap, depth: i64) -> SemistarOp {
        let k = sm.k();
        SemistarOp::new(k, SemistarExpr::Table(sm), depth)
            .expect("a valid table wraps without defect")
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn expr(&self) -> &SemistarExpr {
        &self.expr
    }

    /// The extracted support map, absent exactly when the expression is a
    /// non-idempotent composite.
    pub fn normal_form(&self) -> Option<&SupportMap> {
        self.nf.as_ref()
    }

    pub fn defect(&self) -> Option<&str> {
        self.defect.as_deref()
    }

    /// The support map, for operations known to have one.
    pub fn table(&self) -> &SupportMap {
        match &self.nf {
            Some(sm) => sm,
            None => panic!(
                "operation has no support map: {}",
                self.defect.as_deref().unwrap_or("unknown defect")
            ),
        }
    }

    /// Evaluate, through the table when there is one.
    pub fn evaluate(&self, f: &ModuleVec) -> Result<ModuleVec, EvalError> {
        match &self.nf {
            Some(sm) => Ok(sm.apply(f)),
            None => self.expr.eval(self.k, f, self.depth),
        }
    }

    /// Evaluate straight from the definitions, bypassing the table.
    pub fn evaluate_definitional(&self, f: &ModuleVec) -> Result<ModuleVec, EvalError> {
        self.expr.eval(self.k, f, self.depth)
    }

    pub fn leq(&self, other: &SemistarOp) -> bool {
        self.table().leq(other.table())
    }

    pub fn eq_op(&self, other: &SemistarOp) -> bool {
        self.nf.is_some() && self.nf == other.nf
    }

    /// Indices closed into every image, g of the empty set.
    pub fn kernel(&self) -> Subset {
        self.table().kernel()
    }

    pub fn is_finite_type(&self) -> bool {
        self.table().is_finite_type()
    }

    /// The finite-type companion: the union of the closures of the finitely
    /// generated submodules. Computed definitionally and cross-checked
    /// against the closed form, the finite-type operator with this
    /// operation's kernel.
    pub fn finite_type_closure(&self) -> Result<SemistarOp, OpError> {
        let ft = SemistarOp::new(
            self.k,
            SemistarExpr::FiniteType(alloc::boxed::Box::new(self.expr.clone())),
            self.depth,
        )?;
        let closed_form = SupportMap::finite_type_with_kernel(self.k, self.kernel());
        assert_eq!(
            ft.table(),
            &closed_form,
            "finite-type companion must be the kernel wedge"
        );
        Ok(ft)
    }

    /// Primes surviving the operation: the zero ideal always does, and m_i
    /// does exactly when the closure of m_i contracts back to m_i, which
    /// says i is outside the kernel.
    pub fn quasi_spectrum(&self) -> PrimeSet {
        PrimeSet::new(true, self.kernel().complement(self.k))
    }

    /// The maximal members of the quasi spectrum: the surviving maximal
    /// ideals, or the zero ideal alone when none survive.
    pub fn quasi_maximals(&self) -> PrimeSet {
        let maxes = self.kernel().complement(self.k);
        if maxes.is_empty() {
            PrimeSet::new(true, maxes)
        } else {
            PrimeSet::new(false, maxes)
        }
    }

    /// Integral ideal fixed by closure-then-contraction.
    pub fn is_quasi_ideal(&self, ideal: &ModuleVec) -> Result<bool, EvalError> {
        if !ideal.is_integral() {
            return Ok(false);
        }
        let closed = self.evaluate(ideal)?;
        let contracted = closed.intersect(&ModuleVec::ring(self.k));
        Ok(contracted == *ideal)
    }

    /// Every proper quasi-ideal sits inside a surviving maximal ideal. On
    /// this model that is a structural fact; the check walks a bounded
    /// family of integral ideals and verifies it anyway.
    pub fn is_semifinite(&self, bound: i64) -> Result<bool, EvalError> {
        let qmax = self.quasi_maximals();
        for ideal in ModuleVec::integral_family(self.k, bound) {
            if ideal.is_ring() || !self.is_quasi_ideal(&ideal)? {
                continue;
            }
            let covered = qmax
                .maxes
                .indices(self.k)
                .any(|i| ideal.is_submodule_of(&ModuleVec::maximal_ideal(self.k, i)));
            if !covered {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether closure distributes over intersections, checked on every pair
    /// from the exhaustive depth-d family.
    pub fn is_stable(&self, d: i64) -> Result<bool, EvalError> {
        let family = ModuleVec::depth_family(self.k, d);
        let mut evals = Vec::with_capacity(family.len());
        for f in &family {
            evals.push(self.evaluate(f)?);
        }
        for (i, f) in family.iter().enumerate() {
            for (j, g) in family.iter().enumerate() {
                if j > i {
                    break;
                }
                let meet = f.intersect(g);
                let idx = meet
                    .depth_index(d)
                    .expect("intersection stays inside the family");
                if evals[idx] != evals[i].intersect(&evals[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A witness pair breaking stability, if one exists in the depth-d
    /// family.
    pub fn stability_witness(&self, d: i64) -> Result<Option<(ModuleVec, ModuleVec)>, EvalError> {
        let family = ModuleVec::depth_family(self.k, d);
        for f in &family {
            for g in &family {
                let lhs = self.evaluate(&f.intersect(g))?;
                let rhs = self.evaluate(f)?.intersect(&self.evaluate(g)?);
                if lhs != rhs {
                    return Ok(Some((f.clone(), g.clone())));
                }
            }
        }
        Ok(None)
    }

    /// The set of primes inducing this operation by localization, when one
    /// exists. The search is exhaustive over the subsets of the spectrum.
    pub fn spectral_witness(&self) -> Option<PrimeSet> {
        let table = self.table();
        for maxes in Subset::all(self.k) {
            let induced = SupportMap::finite_type_with_kernel(self.k, maxes.complement(self.k));
            if &induced == table {
                return Some(PrimeSet::new(true, maxes));
            }
        }
        None
    }

    pub fn is_spectral_op(&self) -> bool {
        self.spectral_witness().is_some()
    }

    /// The stable companion, computed three ways that must agree: from the
    /// definition (union of transporters out of qualifying ideals), as the
    /// finite-type companion, and as the operation induced by the surviving
    /// primes.
    pub fn stable_closure(&self) -> Result<SemistarOp, OpError> {
        let definitional = SemistarOp::new(
            self.k,
            SemistarExpr::StableClosure(alloc::boxed::Box::new(self.expr.clone())),
            self.depth,
        )?;
        let via_kernel = SupportMap::finite_type_with_kernel(self.k, self.kernel());
        let via_spectrum = SemistarOp::new(
            self.k,
            SemistarExpr::Spectral(self.quasi_spectrum()),
            self.depth,
        )?;
        assert_eq!(
            definitional.table(),
            &via_kernel,
            "stable companion must match the kernel wedge"
        );
        assert_eq!(
            definitional.table(),
            via_spectrum.table(),
            "stable companion must match localization at the surviving primes"
        );
        Ok(definitional)
    }

    /// Meet of two operations, as an operation.
    pub fn inf(&self, other: &SemistarOp) -> Result<SemistarOp, OpError> {
        let op = SemistarOp::new(
            self.k,
            SemistarExpr::Inf(vec![self.expr.clone(), other.expr.clone()]),
            self.depth,
        )?;
        assert_eq!(op.table(), &self.table().meet(other.table()));
        Ok(op)
    }

    /// Join of two operations, as an operation.
    pub fn sup(&self, other: &SemistarOp) -> Result<SemistarOp, OpError> {
        let op = SemistarOp::new(
            self.k,
            SemistarExpr::Sup(vec![self.expr.clone(), other.expr.clone()]),
            self.depth,
        )?;
        assert_eq!(op.table(), &self.table().join(other.table()));
        Ok(op)
    }
}

/// All closure operators on the index subsets, i.e. all operations on the
/// model, sorted by table. The families of closed sets are exactly the
/// intersection-closed subset families containing the full set, so the
/// enumeration walks those.
pub fn enumerate_support_maps(k: u8) -> Vec<SupportMap> {
    assert!(
        (1..=MAX_ENUM_ARITY).contains(&k),
        "enumeration is supported for 1 <= k <= {MAX_ENUM_ARITY}"
    );
    let n = 1u32 << k;
    let full = Subset::full(k);
    let mut out = Vec::new();
    // A family of subsets of U is a bitset over the 2^k subsets.
    for fam in 0u32..(1 << n) {
        if fam & (1 << full.bits()) == 0 {
            continue;
        }
        let members: Vec<Subset> = Subset::all(k)
            .filter(|s| fam & (1 << s.bits()) != 0)
            .collect();
        let closed_under_meet = members.iter().all(|a| {
            members
                .iter()
                .all(|b| fam & (1 << a.inter(*b).bits()) != 0)
        });
        if !closed_under_meet {
            continue;
        }
        let table = Subset::all(k)
            .map(|s| {
                let mut acc = full;
                for &c in &members {
                    if s.is_subset_of(c) {
                        acc = acc.inter(c);
                    }
                }
                acc
            })
            .collect();
        out.push(SupportMap::from_table_unchecked(k, table));
    }
    out.sort();
    out
}

/// The canonical short names: d and e at the lattice ends, v for the
/// divisorial operation, w{T} for the other overring meets, x<n> for the
/// rest in enumeration order.
pub fn op_label(sm: &SupportMap, enumerated: &[SupportMap]) -> String {
    let k = sm.k();
    if *sm == SupportMap::identity(k) {
        return "d".to_string();
    }
    if *sm == SupportMap::constant_full(k) {
        return "e".to_string();
    }
    if *sm == SupportMap::divisorial(k) {
        return "v".to_string();
    }
    if sm.is_finite_type() {
        let t = sm.kernel().complement(k);
        return format!("w{t}");
    }
    let mut n = 0;
    for other in enumerated {
        if other == sm {
            return format!("x{}", n + 1);
        }
        if !(other.is_finite_type()
            || *other == SupportMap::divisorial(k))
        {
            n += 1;
        }
    }
    format!("x?{}", sm.describe())
}

/// The named generators available on every model.
pub fn named_ops(k: u8, depth: i64) -> Vec<(String, SemistarOp)> {
    let mut out = Vec::new();
    let mk = |e: SemistarExpr| SemistarOp::new(k, e, depth).expect("named generators are valid");
    out.push(("d".to_string(), mk(SemistarExpr::Identity)));
    out.push(("e".to_string(), mk(SemistarExpr::FieldOp)));
    out.push(("v".to_string(), mk(SemistarExpr::Divisorial)));
    out.push(("b".to_string(), mk(crate::semistar::expr::b_op(k))));
    out.push(("t".to_string(), mk(crate::semistar::expr::t_op())));
    out.push(("w".to_string(), mk(crate::semistar::expr::w_op())));
    out
}

/// Wedges over single overrings, the image of the overring space inside the
/// operation space.
pub fn single_wedge(k: u8, t: Subset, depth: i64) -> SemistarOp {
    let fam: BTreeSet<Subset> = [t].into_iter().collect();
    SemistarOp::new(k, SemistarExpr::Wedge(fam), depth).expect("wedges are valid")
}

/// How an operation sits in the classification hierarchy. On this model
/// `finite_type`, `stable`, and `spectral` always agree and imply the rest,
/// but every flag is computed from its own definition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub finite_type: bool,
    pub stable: bool,
    pub spectral: bool,
    pub semifinite: bool,
    /// Fixpoint of the stable closure, i.e. already of the form "intersect
    /// the extensions to the localizations at the quasi-spectrum".
    pub stable_closure_fixpoint: bool,
}

impl SemistarOp {
    pub fn classify(&self) -> Result<Classification, OpError> {
        let finite_type = self.is_finite_type();
        let stable = self.is_stable(self.depth).map_err(OpError::Eval)?;
        let spectral = self.is_spectral_op();
        let semifinite = self.is_semifinite(self.depth).map_err(OpError::Eval)?;
        let stable_closure_fixpoint = self.stable_closure()?.eq_op(self);
        assert_eq!(
            stable_closure_fixpoint,
            stable && finite_type,
            "an operation equals its stable closure exactly when it is stable and of finite type"
        );
        assert_eq!(
            stable_closure_fixpoint,
            spectral && finite_type,
            "an operation equals its stable closure exactly when it is spectral and of finite type"
        );
        Ok(Classification {
            finite_type,
            stable,
            spectral,
            semifinite,
            stable_closure_fixpoint,
        })
    }
}

/// Largest number of family members in which a single ring element fails to
/// be invertible. An element is a unit in B_T exactly when its valuations
/// vanish on T, so only its support pattern matters and nonempty patterns
/// suffice.
pub fn non_invertibility_bound(k: u8, family: &[Subset]) -> usize {
    Subset::all(k)
        .filter(|s| !s.is_empty())
        .map(|s| family.iter().filter(|t| !t.disjoint(s)).count())
        .max()
        .unwrap_or(0)
}

/// Whether the overrings B_T for the listed index sets form a locally
/// finite family: every nonzero ring element is non-invertible in only
/// finitely many of them. A finite family always qualifies; the bound is
/// computed anyway so callers can report it.
pub fn is_locally_finite(k: u8, family: &[Subset]) -> bool {
    non_invertibility_bound(k, family) <= family.len()
}

/// The operation F -> intersection over pairs (T, inner) of the inner
/// closure of F B_T, pulled back to the base model. With finite-type inner
/// operations the result is again of finite type, and that is asserted.
pub fn locfin_build(
    k: u8,
    pairs: &[(Subset, &SemistarOp)],
    depth: i64,
) -> Result<SemistarOp, OpError> {
    let spec: Vec<(Subset, SemistarExpr)> = pairs
        .iter()
        .map(|(t, op)| (*t, op.expr().clone()))
        .collect();
    let family: Vec<Subset> = pairs.iter().map(|(t, _)| *t).collect();
    assert!(is_locally_finite(k, &family));
    let built = SemistarOp::new(k, SemistarExpr::LocFin(spec), depth)?;
    if pairs.iter().all(|(_, op)| op.is_finite_type()) {
        assert!(
            built.is_finite_type(),
            "a locally finite family of overrings with finite-type operations yields finite type"
        );
    }
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Comp;
    use crate::semistar::expr::{b_op, t_op, w_op};
    use alloc::boxed::Box;

    fn op(k: u8, e: SemistarExpr) -> SemistarOp {
        SemistarOp::new(k, e, 2).unwrap()
    }

    fn sub(indices: &[u8]) -> Subset {
        Subset::from_indices(indices)
    }

    #[test]
    fn tables_of_the_named_operations_k2() {
        let d = op(2, SemistarExpr::Identity);
        assert_eq!(d.table(), &SupportMap::identity(2));
        let e = op(2, SemistarExpr::FieldOp);
        assert_eq!(e.table(), &SupportMap::constant_full(2));
        let v = op(2, SemistarExpr::Divisorial);
        assert_eq!(v.table(), &SupportMap::divisorial(2));
        // t and w collapse to the identity here, b too.
        assert!(op(2, t_op()).eq_op(&d));
        assert!(op(2, w_op()).eq_op(&d));
        assert!(op(2, b_op(2)).eq_op(&d));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_support_maps(1).len(), 2);
        assert_eq!(enumerate_support_maps(2).len(), 7);
        assert_eq!(enumerate_support_maps(3).len(), 61);
    }

    #[test]
    fn enumeration_members_are_valid_and_sorted() {
        let ops = enumerate_support_maps(2);
        for sm in &ops {
            sm.check_axioms().unwrap();
        }
        let mut sorted = ops.clone();
        sorted.sort();
        assert_eq!(ops, sorted);
        // Finite-type count at k = 2: the four kernel wedges.
        assert_eq!(ops.iter().filter(|sm| sm.is_finite_type()).count(), 4);
        // Operators with nothing glued at the empty set.
        assert_eq!(ops.iter().filter(|sm| sm.kernel().is_empty()).count(), 4);
    }

    #[test]
    fn every_enumerated_table_round_trips_through_an_op() {
        for sm in enumerate_support_maps(2) {
            let o = SemistarOp::from_table(sm.clone(), 2);
            assert_eq!(o.table(), &sm);
            assert!(o.defect().is_none());
        }
    }

    #[test]
    fn composite_without_idempotency_reports_a_defect() {
        // v first, then the wedge towards B_{1}: the empty support goes to
        // {2} after one pass but to everything after two, since v closes
        // {2} completely. Not idempotent, so no table.
        let w1 = SemistarExpr::Wedge([sub(&[0])].into_iter().collect());
        let c = SemistarOp::new(
            2,
            SemistarExpr::Compose(vec![w1, SemistarExpr::Divisorial]),
            2,
        )
        .unwrap();
        assert!(c.normal_form().is_none());
        assert!(c.defect().unwrap().contains("not idempotent"));
        // The composite still evaluates definitionally.
        let out = c.evaluate(&ModuleVec::from_exps(&[0, 0])).unwrap();
        assert_eq!(out, ModuleVec::new(vec![Comp::Exp(0), Comp::Full]));
    }

    #[test]
    fn idempotent_composites_keep_their_table() {
        // Composing an operation with itself is idempotent.
        let c = op(
            2,
            SemistarExpr::Compose(vec![SemistarExpr::Divisorial, SemistarExpr::Divisorial]),
        );
        assert_eq!(c.table(), &SupportMap::divisorial(2));
        assert!(c.defect().is_none());
    }

    #[test]
    fn quasi_spectrum_of_the_named_ops() {
        let v = op(2, SemistarExpr::Divisorial);
        assert_eq!(format!("{}", v.quasi_spectrum()), "{(0),m1,m2}");
        let e = op(2, SemistarExpr::FieldOp);
        assert_eq!(format!("{}", e.quasi_spectrum()), "{(0)}");
        assert_eq!(format!("{}", e.quasi_maximals()), "{(0)}");
        let w1 = single_wedge(2, sub(&[0]), 2);
        assert_eq!(format!("{}", w1.quasi_spectrum()), "{(0),m1}");
        assert_eq!(format!("{}", w1.quasi_maximals()), "{m1}");
    }

    #[test]
    fn stability_and_finite_type_line_up() {
        // On this model stability, finite type and spectrality coincide;
        // checked here for all seven operations at k = 2 with independent
        // procedures for each predicate.
        for sm in enumerate_support_maps(2) {
            let o = SemistarOp::from_table(sm, 2);
            let ft = o.is_finite_type();
            assert_eq!(o.is_stable(2).unwrap(), ft);
            assert_eq!(o.is_spectral_op(), ft);
            assert!(o.is_semifinite(2).unwrap());
        }
    }

    #[test]
    fn divisorial_stability_witness() {
        let v = op(2, SemistarExpr::Divisorial);
        let (f, g) = v.stability_witness(1).unwrap().unwrap();
        let lhs = v.evaluate(&f.intersect(&g)).unwrap();
        let rhs = v.evaluate(&f).unwrap().intersect(&v.evaluate(&g).unwrap());
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn stable_closure_routes_agree() {
        for sm in enumerate_support_maps(2) {
            let o = SemistarOp::from_table(sm, 2);
            let st = o.stable_closure().unwrap();
            assert_eq!(
                st.table(),
                &SupportMap::finite_type_with_kernel(2, o.kernel())
            );
        }
    }

    #[test]
    fn finite_type_closure_of_v_is_identity() {
        let v = op(2, SemistarExpr::Divisorial);
        let t = v.finite_type_closure().unwrap();
        assert_eq!(t.table(), &SupportMap::identity(2));
    }

    #[test]
    fn lattice_operations_match_table_lattice() {
        let v = op(2, SemistarExpr::Divisorial);
        let w1 = single_wedge(2, sub(&[0]), 2);
        let meet = v.inf(&w1).unwrap();
        assert_eq!(
            meet.table().table(),
            &[sub(&[]), sub(&[0, 1]), sub(&[1]), sub(&[0, 1])]
        );
        let join = v.sup(&w1).unwrap();
        assert_eq!(join.table(), &SupportMap::constant_full(2));
    }

    #[test]
    fn op_labels() {
        let ops = enumerate_support_maps(2);
        let labels: Vec<String> = ops.iter().map(|sm| op_label(sm, &ops)).collect();
        assert!(labels.contains(&"d".to_string()));
        assert!(labels.contains(&"e".to_string()));
        assert!(labels.contains(&"v".to_string()));
        assert!(labels.contains(&"w{1}".to_string()));
        assert!(labels.contains(&"w{2}".to_string()));
        assert!(labels.contains(&"x1".to_string()));
        assert!(labels.contains(&"x2".to_string()));
        // Labels are distinct.
        let set: BTreeSet<&String> = labels.iter().collect();
        assert_eq!(set.len(), labels.len());
    }

    #[test]
    fn locfin_single_pair_acts_through_the_overring()  {
        // sigma of v over B_{2}: support map sends S to (closure over the
        // submodel of S meet T) join the complement of T.
        let o = op(
            2,
            SemistarExpr::LocFin(vec![(sub(&[1]), SemistarExpr::Divisorial)]),
        );
        let tbl = o.table();
        assert_eq!(tbl.apply_set(sub(&[])), sub(&[0]));
        assert_eq!(tbl.apply_set(sub(&[0])), sub(&[0]));
        assert_eq!(tbl.apply_set(sub(&[1])), sub(&[0, 1]));
    }

    #[test]
    fn nested_closures_build() {
        let o = op(
            2,
            SemistarExpr::StableClosure(Box::new(SemistarExpr::FiniteType(Box::new(
                SemistarExpr::Divisorial,
            )))),
        );
        assert_eq!(o.table(), &SupportMap::identity(2));
    }

    #[test]
    fn classification_flags_line_up() {
        let v = op(2, SemistarExpr::Divisorial);
        let c = v.classify().unwrap();
        assert!(!c.finite_type && !c.stable && !c.spectral);
        assert!(c.semifinite);
        assert!(!c.stable_closure_fixpoint);

        let w1 = single_wedge(2, sub(&[0]), 2);
        let c = w1.classify().unwrap();
        assert!(c.finite_type && c.stable && c.spectral && c.semifinite);
        assert!(c.stable_closure_fixpoint);
    }

    #[test]
    fn locfin_of_identities_over_the_valuation_rings_is_identity() {
        let d1 = op(1, SemistarExpr::Identity);
        let built = locfin_build(2, &[(sub(&[0]), &d1), (sub(&[1]), &d1)], 2).unwrap();
        assert_eq!(built.table(), &SupportMap::identity(2));
    }

    #[test]
    fn locfin_of_a_field_op_collapses() {
        let e1 = op(1, SemistarExpr::FieldOp);
        let built = locfin_build(2, &[(sub(&[0]), &e1)], 2).unwrap();
        assert_eq!(built.table(), &SupportMap::constant_full(2));
    }

    #[test]
    fn locfin_singleton_identity_is_the_wedge() {
        for t_bits in 1..4u16 {
            let t = Subset::from_bits(t_bits);
            let inner = op(t.len() as u8, SemistarExpr::Identity);
            let built = locfin_build(2, &[(t, &inner)], 2).unwrap();
            assert_eq!(built.table(), single_wedge(2, t, 2).table());
        }
    }

    #[test]
    fn locfin_with_non_finite_type_inner_can_lose_finite_type() {
        // v on the 2-prime submodel B_{1,2} inside the 3-prime model: the
        // transfer widens {1} to {1,2}, breaking g(S) = S union g({}).
        let v2 = op(2, SemistarExpr::Divisorial);
        let spec = vec![(sub(&[0, 1]), v2.expr().clone())];
        let built = op(3, SemistarExpr::LocFin(spec));
        assert!(!built.is_finite_type());
        assert_eq!(built.kernel(), sub(&[2]));
        assert_eq!(built.table().apply_set(sub(&[0])), sub(&[0, 1, 2]));
    }

    #[test]
    fn finite_families_are_locally_finite() {
        let fam = [sub(&[0]), sub(&[1]), sub(&[0, 1])];
        assert_eq!(non_invertibility_bound(2, &fam), 3);
        assert!(is_locally_finite(2, &fam));
        assert_eq!(non_invertibility_bound(2, &[]), 0);
        assert!(is_locally_finite(2, &[]));
    }
}
