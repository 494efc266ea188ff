//! Expression trees for building closure operations, and the definitional
//! evaluator that computes them straight from module arithmetic.
//!
//! The evaluator never consults a support map. It exists to be checked
//! against one: [`super::op::SemistarOp`] extracts a table from probe
//! evaluations and then verifies the two agree, so the table-based fast path
//! and this model-theoretic slow path validate each other.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use alloc::vec;
use core::fmt;

use crate::model::{Comp, ModuleOrZero, ModuleVec, PrimeSet, Subset};
use crate::semistar::support::SupportMap;

/// Syntax for closure operations on the module lattice.
///
/// `Compose` applies its rightmost operand first, matching the textual order
/// of function composition. `LocFin` pairs carry expressions over the
/// submodel picked out by the index set: indices inside the expression are
/// relative to the members of that set in increasing order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SemistarExpr {
    /// d: leaves every module alone.
    Identity,
    /// e: sends every module to the whole field.
    FieldOp,
    /// v: the divisorial operation (A : (A : -)).
    Divisorial,
    /// Intersection with the overrings B_T for T in the family.
    Wedge(BTreeSet<Subset>),
    /// Intersection of the localizations at the chosen primes.
    Spectral(PrimeSet),
    /// Finite-type companion: union over finitely generated submodules.
    FiniteType(Box<SemistarExpr>),
    /// Stable companion: union of (F : J) over finitely generated integral
    /// ideals J whose closure is the closure of the ring.
    StableClosure(Box<SemistarExpr>),
    /// Pointwise intersection of the operands.
    Inf(Vec<SemistarExpr>),
    /// Least closure operation above the operands.
    Sup(Vec<SemistarExpr>),
    /// Composite, rightmost operand applied first. Need not be idempotent.
    Compose(Vec<SemistarExpr>),
    /// F -> intersection over pairs of (F B_T)^op, the operation induced by
    /// extension to the overring B_T. Indices inside each expression refer
    /// to the submodel primes.
    LocFin(Vec<(Subset, SemistarExpr)>),
    /// An explicit table. Produced by enumeration, has no parseable syntax.
    Table(SupportMap),
}

/// Evaluation and validation failures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    /// A subset mentions an index outside 1..=k.
    IndexOutOfRange { bits: u16, k: u8 },
    /// Inf, Sup, Compose, or LocFin with no operands.
    EmptyOperands(&'static str),
    /// A LocFin pair restricting to no primes at all.
    EmptyRestriction,
    /// A Table operand built for a different k.
    TableArity { table_k: u8, k: u8 },
    /// Escalating-depth sampling did not settle; the reported depth is the
    /// largest one tried.
    Unstable { depth: i64 },
    /// The directed family sampled for a closure limit shrank somewhere.
    NotMonotone,
    /// The least-upper-bound iteration exceeded its step budget.
    NoFixpoint { limit: u32 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::IndexOutOfRange { bits, k } => {
                write!(f, "index set {} out of range for k = {k}", Subset::from_bits(*bits))
            }
            EvalError::EmptyOperands(which) => write!(f, "{which} needs at least one operand"),
            EvalError::EmptyRestriction => {
                write!(f, "an overring restriction needs at least one prime")
            }
            EvalError::TableArity { table_k, k } => {
                write!(f, "table is over k = {table_k}, model has k = {k}")
            }
            EvalError::Unstable { depth } => {
                write!(f, "sampling did not stabilize by depth {depth}")
            }
            EvalError::NotMonotone => write!(f, "sampled family was not increasing"),
            EvalError::NoFixpoint { limit } => {
                write!(f, "upper bound iteration exceeded {limit} steps")
            }
        }
    }
}

impl core::error::Error for EvalError {}

impl SemistarExpr {
    /// Check that every index set fits the model and every operand list is
    /// populated.
    pub fn validate(&self, k: u8) -> Result<(), EvalError> {
        let check_subset = |s: Subset| {
            if s.is_subset_of(Subset::full(k)) {
                Ok(())
            } else {
                Err(EvalError::IndexOutOfRange { bits: s.bits(), k })
            }
        };
        match self {
            SemistarExpr::Identity | SemistarExpr::FieldOp | SemistarExpr::Divisorial => Ok(()),
            SemistarExpr::Wedge(fam) => fam.iter().try_for_each(|&t| check_subset(t)),
            SemistarExpr::Spectral(ps) => check_subset(ps.maxes),
            SemistarExpr::FiniteType(e) | SemistarExpr::StableClosure(e) => e.validate(k),
            SemistarExpr::Inf(es) => {
                if es.is_empty() {
                    return Err(EvalError::EmptyOperands("inf"));
                }
                es.iter().try_for_each(|e| e.validate(k))
            }
            SemistarExpr::Sup(es) => {
                if es.is_empty() {
                    return Err(EvalError::EmptyOperands("sup"));
                }
                es.iter().try_for_each(|e| e.validate(k))
            }
            SemistarExpr::Compose(es) => {
                if es.is_empty() {
                    return Err(EvalError::EmptyOperands("compose"));
                }
                es.iter().try_for_each(|e| e.validate(k))
            }
            SemistarExpr::LocFin(pairs) => {
                if pairs.is_empty() {
                    return Err(EvalError::EmptyOperands("locfin"));
                }
                for (t, e) in pairs {
                    if t.is_empty() {
                        return Err(EvalError::EmptyRestriction);
                    }
                    check_subset(*t)?;
                    e.validate(t.len() as u8)?;
                }
                Ok(())
            }
            SemistarExpr::Table(sm) => {
                if sm.k() == k {
                    Ok(())
                } else {
                    Err(EvalError::TableArity { table_k: sm.k(), k })
                }
            }
        }
    }

    /// Evaluate on a module straight from the definitions.
    ///
    /// `depth` is the starting size for the escalating samples behind the
    /// finite-type and stable constructions; any value >= 1 gives the same
    /// answer when sampling stabilizes, larger values only widen the check.
    pub fn eval(&self, k: u8, f: &ModuleVec, depth: i64) -> Result<ModuleVec, EvalError> {
        debug_assert_eq!(f.k(), k);
        match self {
            SemistarExpr::Identity => Ok(f.clone()),
            SemistarExpr::FieldOp => Ok(ModuleVec::field(k)),
            SemistarExpr::Divisorial => {
                let a = ModuleVec::ring(k);
                let inner = a.colon_module(f);
                Ok(match inner {
                    ModuleOrZero::Zero => ModuleVec::field(k),
                    ModuleOrZero::Module(g) => a
                        .colon_module(&g)
                        .expect_module("(A : G) with G free of full components"),
                })
            }
            SemistarExpr::Wedge(fam) => {
                let mut acc = ModuleVec::field(k);
                for &t in fam {
                    acc = acc.intersect(&f.multiply(&ModuleVec::overring(k, t)));
                }
                Ok(acc)
            }
            SemistarExpr::Spectral(ps) => {
                // Localizing at a prime and contracting keeps exactly the
                // bounds at the chosen maximal ideals; the zero prime
                // contributes the whole field.
                let mut acc = ModuleVec::field(k);
                for i in ps.maxes.indices(k) {
                    acc = acc.intersect(&f.multiply(&ModuleVec::overring(k, Subset::singleton(i))));
                }
                Ok(acc)
            }
            SemistarExpr::FiniteType(e) => {
                // Union of G^e over finitely generated G inside F. The
                // finitely generated submodules are exactly the all-finite
                // vectors below F, and the corner vectors with the finite
                // bounds of F and bound d on the unconstrained components
                // are cofinal among them.
                let support = f.support();
                if support.is_empty() {
                    return e.eval(k, f, depth);
                }
                let corner = |d: i64| {
                    ModuleVec::new(
                        f.comps()
                            .iter()
                            .enumerate()
                            .map(|(i, c)| {
                                if support.contains(i as u8) {
                                    Comp::Exp(-d)
                                } else {
                                    *c
                                }
                            })
                            .collect(),
                    )
                };
                let samples = [
                    e.eval(k, &corner(depth), depth)?,
                    e.eval(k, &corner(depth + 1), depth)?,
                    e.eval(k, &corner(depth + 2), depth)?,
                ];
                extrapolate_limit(&samples, depth)
            }
            SemistarExpr::StableClosure(e) => {
                // Union of (F : J) over finitely generated integral ideals J
                // whose closure equals the closure of the ring. At each
                // sample size the union is the componentwise minimum over
                // the qualifying J with bounds capped at that size.
                let ring_closed = e.eval(k, &ModuleVec::ring(k), depth)?;
                let sample = |j: i64| -> Result<ModuleVec, EvalError> {
                    let mut acc: Option<ModuleVec> = None;
                    for cand in ModuleVec::integral_family(k, j) {
                        if e.eval(k, &cand, depth)? != ring_closed {
                            continue;
                        }
                        let quot = f
                            .colon_module(&cand)
                            .expect_module("(F : J) with J free of full components");
                        acc = Some(match acc {
                            None => quot,
                            Some(m) => m.join(&quot),
                        });
                    }
                    // The ring itself always qualifies, so the family is
                    // never empty.
                    Ok(acc.expect("the ring qualifies"))
                };
                let samples = [sample(depth)?, sample(depth + 1)?, sample(depth + 2)?];
                extrapolate_limit(&samples, depth)
            }
            SemistarExpr::Inf(es) => {
                let mut acc = ModuleVec::field(k);
                for e in es {
                    acc = acc.intersect(&e.eval(k, f, depth)?);
                }
                Ok(acc)
            }
            SemistarExpr::Sup(es) => {
                // Least module containing F fixed by every operand: iterate
                // the pointwise join of the operand closures. Each strict
                // step widens at least one component to K, so k steps
                // suffice; the budget only guards against defects.
                let limit = 2 * (k as u32) + 4;
                let mut cur = f.clone();
                for _ in 0..limit {
                    let mut next = cur.clone();
                    for e in es {
                        next = next.join(&e.eval(k, &cur, depth)?);
                    }
                    if next == cur {
                        return Ok(cur);
                    }
                    cur = next;
                }
                Err(EvalError::NoFixpoint { limit })
            }
            SemistarExpr::Compose(es) => {
                let mut cur = f.clone();
                for e in es.iter().rev() {
                    cur = e.eval(k, &cur, depth)?;
                }
                Ok(cur)
            }
            SemistarExpr::LocFin(pairs) => {
                let mut acc = ModuleVec::field(k);
                for (t, e) in pairs {
                    let sub_k = t.len() as u8;
                    // F B_T as a module over the submodel: take the bounds at
                    // the members of T.
                    let restricted = ModuleVec::new(
                        t.indices(k).map(|i| f.comp(i)).collect(),
                    );
                    let closed = e.eval(sub_k, &restricted, depth)?;
                    // Re-embed: off T the extension F B_T is unconstrained.
                    let mut comps = vec![Comp::Full; k as usize];
                    for (sub_i, i) in t.indices(k).enumerate() {
                        comps[i as usize] = closed.comp(sub_i as u8);
                    }
                    acc = acc.intersect(&ModuleVec::new(comps));
                }
                Ok(acc)
            }
            SemistarExpr::Table(sm) => Ok(sm.apply(f)),
        }
    }

    /// Number of nodes, a crude complexity measure for corpus budgets.
    pub fn size(&self) -> usize {
        match self {
            SemistarExpr::Identity
            | SemistarExpr::FieldOp
            | SemistarExpr::Divisorial
            | SemistarExpr::Wedge(_)
            | SemistarExpr::Spectral(_)
            | SemistarExpr::Table(_) => 1,
            SemistarExpr::FiniteType(e) | SemistarExpr::StableClosure(e) => 1 + e.size(),
            SemistarExpr::Inf(es) | SemistarExpr::Sup(es) | SemistarExpr::Compose(es) => {
                1 + es.iter().map(SemistarExpr::size).sum::<usize>()
            }
            SemistarExpr::LocFin(pairs) => {
                1 + pairs.iter().map(|(_, e)| e.size()).sum::<usize>()
            }
        }
    }
}

/// Extrapolate three increasing samples of a directed union to its limit:
/// a component that is still strictly growing between consecutive samples is
/// unbounded and goes to K, a repeated component is the limit value. The two
/// consecutive extrapolations must agree.
fn extrapolate_limit(samples: &[ModuleVec; 3], depth: i64) -> Result<ModuleVec, EvalError> {
    let step = |a: &ModuleVec, b: &ModuleVec| -> Result<ModuleVec, EvalError> {
        let mut comps = Vec::with_capacity(a.k() as usize);
        for (ca, cb) in a.comps().iter().zip(b.comps()) {
            comps.push(match (ca, cb) {
                (Comp::Full, Comp::Full) => Comp::Full,
                (Comp::Exp(_), Comp::Full) => Comp::Full,
                (Comp::Full, Comp::Exp(_)) => return Err(EvalError::NotMonotone),
                (Comp::Exp(x), Comp::Exp(y)) if y == x => Comp::Exp(*x),
                (Comp::Exp(x), Comp::Exp(y)) if y < x => Comp::Full,
                _ => return Err(EvalError::NotMonotone),
            });
        }
        Ok(ModuleVec::new(comps))
    };
    let first = step(&samples[0], &samples[1])?;
    let second = step(&samples[1], &samples[2])?;
    if first == second {
        Ok(first)
    } else {
        Err(EvalError::Unstable { depth: depth + 2 })
    }
}

impl fmt::Display for SemistarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemistarExpr::Identity => write!(f, "d"),
            SemistarExpr::FieldOp => write!(f, "e"),
            SemistarExpr::Divisorial => write!(f, "v"),
            SemistarExpr::Wedge(fam) => {
                // Surface syntax names one overring per wedge; a family is
                // the meet of its single wedges, and an empty family never
                // intersects anything, so it is the constant-field map.
                match fam.len() {
                    0 => write!(f, "e"),
                    1 => write!(f, "wedge{}", fam.iter().next().expect("len 1")),
                    _ => {
                        write!(f, "inf(")?;
                        for (i, t) in fam.iter().enumerate() {
                            if i > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "wedge{t}")?;
                        }
                        write!(f, ")")
                    }
                }
            }
            SemistarExpr::Spectral(ps) => write!(f, "s{ps}"),
            SemistarExpr::FiniteType(e) => write!(f, "ft({e})"),
            SemistarExpr::StableClosure(e) => write!(f, "stable({e})"),
            SemistarExpr::Inf(es) => write_list(f, "inf", es),
            SemistarExpr::Sup(es) => write_list(f, "sup", es),
            SemistarExpr::Compose(es) => write_list(f, "compose", es),
            SemistarExpr::LocFin(pairs) => {
                write!(f, "locfin(")?;
                for (i, (t, e)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}:{e}")?;
                }
                write!(f, ")")
            }
            SemistarExpr::Table(sm) => write!(f, "table[{}]", sm.describe()),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, es: &[SemistarExpr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

/// t: the finite-type companion of the divisorial operation.
pub fn t_op() -> SemistarExpr {
    SemistarExpr::FiniteType(Box::new(SemistarExpr::Divisorial))
}

/// w: the stable companion of t.
pub fn w_op() -> SemistarExpr {
    SemistarExpr::StableClosure(Box::new(t_op()))
}

/// b: the intersection of all valuation overrings, the field included.
pub fn b_op(k: u8) -> SemistarExpr {
    let mut fam: BTreeSet<Subset> = (0..k).map(Subset::singleton).collect();
    fam.insert(Subset::EMPTY);
    SemistarExpr::Wedge(fam)
}
