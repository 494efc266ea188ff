//! Modules over a semilocal localization of the integers.
//!
//! Fix distinct primes p_1, ..., p_k and let A be the ring of rationals with
//! nonnegative p_i-adic valuation for every i. A is a principal ideal domain
//! with exactly k maximal ideals m_i = p_i A, fraction field Q, and valuation
//! overrings V_i (the rationals with nonnegative p_i-adic valuation).
//!
//! A nonzero A-submodule F of Q is cut out by the lower bounds it imposes on
//! the k valuations: x != 0 lies in F exactly when v_i(x) >= e_i for every
//! component carrying a finite bound, while a component may impose no bound at
//! all. Since A is a semilocal PID, F equals the intersection of its
//! extensions F V_i, so the vector of bounds determines F completely and every
//! bound vector occurs. [`ModuleVec`] encodes that vector; the unconstrained
//! component is rendered `K`.
//!
//! All module arithmetic is exact integer arithmetic on bound vectors.
//! Rational witnesses ([`ElementVec`]) tie the encoding back to actual
//! elements of Q: for any integer vector of valuations the product of prime
//! powers realizes it on the nose.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

/// Subset of the prime indices 0..k as a bitmask.
///
/// Rendered with 1-based indices (`{1,3}`) to match the p_1, ..., p_k
/// numbering used everywhere in output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u16);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(k: u8) -> Subset {
        debug_assert!(k <= 16);
        Subset(((1u32 << k) - 1) as u16)
    }

    pub fn singleton(i: u8) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices(indices: &[u8]) -> Subset {
        let mut s = Subset::EMPTY;
        for &i in indices {
            s = s.with(i);
        }
        s
    }

    pub fn from_bits(bits: u16) -> Subset {
        Subset(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: u8) -> Subset {
        Subset(self.0 | (1 << i))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn inter(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, k: u8) -> Subset {
        Subset::full(k).minus(self)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn indices(self, k: u8) -> impl Iterator<Item = u8> {
        (0..k).filter(move |&i| self.contains(i))
    }

    /// All 2^k subsets in mask order (the canonical enumeration order).
    pub fn all(k: u8) -> impl Iterator<Item = Subset> {
        (0..1u32 << k).map(|b| Subset(b as u16))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in 0..16 {
            if self.contains(i) {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One component of a module vector: a finite lower bound on the valuation,
/// or no constraint at all (the component is all of K, rendered `K`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Comp {
    Exp(i64),
    Full,
}

impl Comp {
    pub fn is_full(self) -> bool {
        matches!(self, Comp::Full)
    }

    pub fn exp(self) -> Option<i64> {
        match self {
            Comp::Exp(e) => Some(e),
            Comp::Full => None,
        }
    }

    /// Sum of bounds, with the unconstrained component absorbing.
    fn bound_add(self, other: Comp) -> Comp {
        match (self, other) {
            (Comp::Exp(a), Comp::Exp(b)) => Comp::Exp(a + b),
            _ => Comp::Full,
        }
    }

    /// Larger bound (smaller module component); Full is neutral.
    fn bound_max(self, other: Comp) -> Comp {
        match (self, other) {
            (Comp::Exp(a), Comp::Exp(b)) => Comp::Exp(a.max(b)),
            (Comp::Full, c) | (c, Comp::Full) => c,
        }
    }

    /// Smaller bound (larger module component); Full dominates.
    fn bound_min(self, other: Comp) -> Comp {
        match (self, other) {
            (Comp::Exp(a), Comp::Exp(b)) => Comp::Exp(a.min(b)),
            _ => Comp::Full,
        }
    }
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comp::Exp(e) => write!(f, "{e}"),
            Comp::Full => write!(f, "K"),
        }
    }
}

/// Nonzero A-submodule of Q, as its vector of valuation bounds.
///
/// The zero vector is the ring A itself; the all-`K` vector is Q. A vector
/// without `K` components is a fractional ideal (nonzero and principal here,
/// generated by the prime-power product realizing the bounds).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleVec {
    comps: Vec<Comp>,
}

impl ModuleVec {
    pub fn new(comps: Vec<Comp>) -> ModuleVec {
        debug_assert!(!comps.is_empty());
        ModuleVec { comps }
    }

    /// The ring A: every bound zero.
    pub fn ring(k: u8) -> ModuleVec {
        ModuleVec::new(vec![Comp::Exp(0); k as usize])
    }

    /// The fraction field Q: no bound anywhere.
    pub fn field(k: u8) -> ModuleVec {
        ModuleVec::new(vec![Comp::Full; k as usize])
    }

    /// The overring B_T = intersection of the V_i with i in T; B_{} = Q.
    pub fn overring(k: u8, t: Subset) -> ModuleVec {
        ModuleVec::new(
            (0..k)
                .map(|i| if t.contains(i) { Comp::Exp(0) } else { Comp::Full })
                .collect(),
        )
    }

    /// The maximal ideal m_i = p_i A.
    pub fn maximal_ideal(k: u8, i: u8) -> ModuleVec {
        ModuleVec::new(
            (0..k)
                .map(|j| Comp::Exp(if j == i { 1 } else { 0 }))
                .collect(),
        )
    }

    pub fn from_exps(exps: &[i64]) -> ModuleVec {
        ModuleVec::new(exps.iter().map(|&e| Comp::Exp(e)).collect())
    }

    /// Probe module: unconstrained on `s`, bound 1 on `p`, bound 0 elsewhere.
    pub fn probe(k: u8, s: Subset, p: Subset) -> ModuleVec {
        assert!(s.disjoint(p), "probe index sets must be disjoint");
        ModuleVec::new(
            (0..k)
                .map(|i| {
                    if s.contains(i) {
                        Comp::Full
                    } else if p.contains(i) {
                        Comp::Exp(1)
                    } else {
                        Comp::Exp(0)
                    }
                })
                .collect(),
        )
    }

    pub fn k(&self) -> u8 {
        self.comps.len() as u8
    }

    pub fn comp(&self, i: u8) -> Comp {
        self.comps[i as usize]
    }

    pub fn comps(&self) -> &[Comp] {
        &self.comps
    }

    /// Indices of the unconstrained components.
    pub fn support(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_full() {
                s = s.with(i as u8);
            }
        }
        s
    }

    /// Indices of components with a strictly positive bound.
    pub fn positive_part(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for (i, c) in self.comps.iter().enumerate() {
            if matches!(c, Comp::Exp(e) if *e > 0) {
                s = s.with(i as u8);
            }
        }
        s
    }

    /// Indices with a finite bound <= 0; together with `support` these are
    /// exactly the components whose local piece contains 1.
    pub fn nonneg_positions(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for (i, c) in self.comps.iter().enumerate() {
            if matches!(c, Comp::Exp(e) if *e >= 0) {
                s = s.with(i as u8);
            }
        }
        s
    }

    pub fn is_fractional(&self) -> bool {
        self.support().is_empty()
    }

    /// Integral: contained in A, i.e. every bound finite and nonnegative.
    pub fn is_integral(&self) -> bool {
        self.comps
            .iter()
            .all(|c| matches!(c, Comp::Exp(e) if *e >= 0))
    }

    pub fn is_ring(&self) -> bool {
        self.comps.iter().all(|c| matches!(c, Comp::Exp(0)))
    }

    pub fn is_field(&self) -> bool {
        self.comps.iter().all(|c| c.is_full())
    }

    pub fn contains_one(&self) -> bool {
        self.comps
            .iter()
            .all(|c| match c {
                Comp::Exp(e) => *e <= 0,
                Comp::Full => true,
            })
    }

    /// Containment F <= G of the denoted modules.
    pub fn is_submodule_of(&self, other: &ModuleVec) -> bool {
        assert_eq!(self.k(), other.k());
        self.comps
            .iter()
            .zip(&other.comps)
            .all(|(f, g)| match (f, g) {
                (_, Comp::Full) => true,
                (Comp::Full, Comp::Exp(_)) => false,
                (Comp::Exp(a), Comp::Exp(b)) => a >= b,
            })
    }

    /// Module product F G: componentwise sum of bounds.
    pub fn multiply(&self, other: &ModuleVec) -> ModuleVec {
        assert_eq!(self.k(), other.k());
        ModuleVec::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.bound_add(*b))
                .collect(),
        )
    }

    /// Intersection: componentwise maximum of bounds.
    pub fn intersect(&self, other: &ModuleVec) -> ModuleVec {
        assert_eq!(self.k(), other.k());
        ModuleVec::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.bound_max(*b))
                .collect(),
        )
    }

    /// Module sum F + G, the least module containing both: componentwise
    /// minimum of bounds.
    pub fn join(&self, other: &ModuleVec) -> ModuleVec {
        assert_eq!(self.k(), other.k());
        ModuleVec::new(
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.bound_min(*b))
                .collect(),
        )
    }

    /// Principal multiple x F: shifts every finite bound by the valuations
    /// of x.
    pub fn scale(&self, x: &ElementVec) -> ModuleVec {
        self.scale_vals(x.vals())
    }

    pub fn scale_vals(&self, vals: &[i64]) -> ModuleVec {
        assert_eq!(self.comps.len(), vals.len());
        ModuleVec::new(
            self.comps
                .iter()
                .zip(vals)
                .map(|(c, v)| match c {
                    Comp::Exp(e) => Comp::Exp(e + v),
                    Comp::Full => Comp::Full,
                })
                .collect(),
        )
    }

    /// Colon module (F : G) = { x in K : x G <= F }.
    ///
    /// The result can be the zero module (never an error): as soon as some
    /// component of F is a finite bound while the same component of G is
    /// unconstrained, no nonzero x works. Dividing by the zero module gives
    /// all of K.
    pub fn colon(&self, g: &ModuleOrZero) -> ModuleOrZero {
        let g = match g {
            ModuleOrZero::Zero => return ModuleOrZero::Module(ModuleVec::field(self.k())),
            ModuleOrZero::Module(g) => g,
        };
        assert_eq!(self.k(), g.k());
        let mut comps = Vec::with_capacity(self.comps.len());
        for (f, gc) in self.comps.iter().zip(&g.comps) {
            match (f, gc) {
                (Comp::Full, _) => comps.push(Comp::Full),
                (Comp::Exp(_), Comp::Full) => return ModuleOrZero::Zero,
                (Comp::Exp(a), Comp::Exp(b)) => comps.push(Comp::Exp(a - b)),
            }
        }
        ModuleOrZero::Module(ModuleVec::new(comps))
    }

    pub fn colon_module(&self, g: &ModuleVec) -> ModuleOrZero {
        self.colon(&ModuleOrZero::Module(g.clone()))
    }

    /// All vectors with components in {K} + [-d, d], in canonical order.
    /// This is the exhaustive probe family at depth d.
    pub fn depth_family(k: u8, d: i64) -> Vec<ModuleVec> {
        let base = (2 * d + 2) as usize;
        let mut out = Vec::with_capacity(base.pow(k as u32));
        let mut digits = vec![0usize; k as usize];
        loop {
            out.push(ModuleVec::new(
                digits
                    .iter()
                    .map(|&t| {
                        if t == 0 {
                            Comp::Full
                        } else {
                            Comp::Exp(t as i64 - 1 - d)
                        }
                    })
                    .collect(),
            ));
            let mut i = 0;
            loop {
                if i == k as usize {
                    return out;
                }
                digits[i] += 1;
                if digits[i] < base {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// Position of a depth-d family member in `depth_family(k, d)` order.
    pub fn depth_index(&self, d: i64) -> Option<usize> {
        let base = (2 * d + 2) as usize;
        let mut idx = 0usize;
        for (i, c) in self.comps.iter().enumerate() {
            let digit = match c {
                Comp::Full => 0usize,
                Comp::Exp(e) if *e >= -d && *e <= d => (e + 1 + d) as usize,
                _ => return None,
            };
            idx += digit * base.pow(i as u32);
        }
        Some(idx)
    }

    /// All integral vectors with bounds in [0, d], the ring first.
    pub fn integral_family(k: u8, d: i64) -> Vec<ModuleVec> {
        let base = (d + 1) as usize;
        let mut out = Vec::with_capacity(base.pow(k as u32));
        let mut digits = vec![0i64; k as usize];
        loop {
            out.push(ModuleVec::from_exps(&digits));
            let mut i = 0;
            loop {
                if i == k as usize {
                    return out;
                }
                digits[i] += 1;
                if digits[i] <= d {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for ModuleVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for ModuleVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A module vector or the zero module. Colon is the only operation that
/// produces or consumes the zero module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModuleOrZero {
    Zero,
    Module(ModuleVec),
}

impl ModuleOrZero {
    pub fn as_module(&self) -> Option<&ModuleVec> {
        match self {
            ModuleOrZero::Zero => None,
            ModuleOrZero::Module(m) => Some(m),
        }
    }

    pub fn expect_module(self, msg: &str) -> ModuleVec {
        match self {
            ModuleOrZero::Zero => panic!("{msg}"),
            ModuleOrZero::Module(m) => m,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ModuleOrZero::Zero)
    }
}

impl From<ModuleVec> for ModuleOrZero {
    fn from(m: ModuleVec) -> ModuleOrZero {
        ModuleOrZero::Module(m)
    }
}

impl fmt::Display for ModuleOrZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleOrZero::Zero => write!(f, "0"),
            ModuleOrZero::Module(m) => write!(f, "{m}"),
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rational_valuation(p: u64, q: &BigRational) -> i64 {
    assert!(!q.is_zero(), "valuation of zero is undefined");
    let p = BigInt::from(p);
    fn int_val(mut n: BigInt, p: &BigInt) -> i64 {
        let mut v = 0;
        n = n.abs();
        while (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        v
    }
    int_val(q.numer().clone(), &p) - int_val(q.denom().clone(), &p)
}

/// Element of Q^* recorded by its k valuations, with an exact rational
/// witness realizing them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementVec {
    vals: Vec<i64>,
    witness: Option<BigRational>,
}

impl ElementVec {
    /// Realize arbitrary valuations: the product of prime powers has exactly
    /// the requested valuation at each of the k distinct primes.
    pub fn from_vals(m: &ModelSpec, vals: Vec<i64>) -> ElementVec {
        assert_eq!(vals.len(), m.k() as usize);
        let mut numer = BigInt::one();
        let mut denom = BigInt::one();
        for (&p, &v) in m.primes().iter().zip(&vals) {
            let e = v.unsigned_abs() as u32;
            if v >= 0 {
                numer *= BigInt::from(p).pow(e);
            } else {
                denom *= BigInt::from(p).pow(e);
            }
        }
        let witness = BigRational::new(numer, denom);
        debug_assert!(m
            .primes()
            .iter()
            .zip(&vals)
            .all(|(&p, &v)| rational_valuation(p, &witness) == v));
        ElementVec {
            vals,
            witness: Some(witness),
        }
    }

    pub fn from_rational(m: &ModelSpec, q: BigRational) -> Result<ElementVec, ModelError> {
        if q.is_zero() {
            return Err(ModelError::ZeroElement);
        }
        let vals = m
            .primes()
            .iter()
            .map(|&p| rational_valuation(p, &q))
            .collect();
        Ok(ElementVec {
            vals,
            witness: Some(q),
        })
    }

    pub fn vals(&self) -> &[i64] {
        &self.vals
    }

    pub fn witness(&self) -> Option<&BigRational> {
        self.witness.as_ref()
    }

    /// Membership of the witnessed element in the denoted module.
    pub fn member_of(&self, f: &ModuleVec) -> bool {
        assert_eq!(self.vals.len(), f.k() as usize);
        self.vals.iter().zip(f.comps()).all(|(v, c)| match c {
            Comp::Exp(e) => v >= e,
            Comp::Full => true,
        })
    }
}

/// Least module containing the given nonzero generators: componentwise
/// minimum of their valuations.
pub fn module_from_generators(
    m: &ModelSpec,
    gens: &[BigRational],
) -> Result<ModuleVec, ModelError> {
    if gens.is_empty() {
        return Err(ModelError::EmptyGenerators);
    }
    let mut comps: Option<Vec<i64>> = None;
    for g in gens {
        if g.is_zero() {
            return Err(ModelError::ZeroElement);
        }
        let vals: Vec<i64> = m
            .primes()
            .iter()
            .map(|&p| rational_valuation(p, g))
            .collect();
        comps = Some(match comps {
            None => vals,
            Some(acc) => acc.iter().zip(&vals).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    Ok(ModuleVec::from_exps(&comps.unwrap()))
}

/// The base model: k distinct primes, hence k maximal ideals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelSpec {
    primes: Vec<u64>,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl ModelSpec {
    pub fn new(primes: Vec<u64>) -> Result<ModelSpec, ModelError> {
        if primes.is_empty() {
            return Err(ModelError::EmptyPrimes);
        }
        if primes.len() > 16 {
            return Err(ModelError::TooManyPrimes(primes.len()));
        }
        for (i, &p) in primes.iter().enumerate() {
            if !is_prime_u64(p) {
                return Err(ModelError::NotPrime(p));
            }
            if primes[..i].contains(&p) {
                return Err(ModelError::DuplicatePrime(p));
            }
        }
        Ok(ModelSpec { primes })
    }

    pub fn k(&self) -> u8 {
        self.primes.len() as u8
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prime(&self, i: u8) -> u64 {
        self.primes[i as usize]
    }

    /// The overring B_T as a model in its own right (a semilocal PID on the
    /// primes indexed by T). Component i of the submodel is the i-th smallest
    /// member of T.
    pub fn submodel(&self, t: Subset) -> ModelSpec {
        assert!(!t.is_empty(), "a submodel needs at least one prime");
        ModelSpec {
            primes: t.indices(self.k()).map(|i| self.primes[i as usize]).collect(),
        }
    }

    /// Short label used in reports: the primes, comma separated.
    pub fn label(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{p}"));
        }
        s
    }
}

/// Subset of the prime spectrum {(0), m_1, ..., m_k}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PrimeSet {
    pub zero: bool,
    pub maxes: Subset,
}

impl PrimeSet {
    pub fn new(zero: bool, maxes: Subset) -> PrimeSet {
        PrimeSet { zero, maxes }
    }

    pub fn whole_spectrum(k: u8) -> PrimeSet {
        PrimeSet {
            zero: true,
            maxes: Subset::full(k),
        }
    }

    pub fn is_empty(self) -> bool {
        !self.zero && self.maxes.is_empty()
    }

    /// All 2^(k+1) subsets of the spectrum.
    pub fn all(k: u8) -> impl Iterator<Item = PrimeSet> {
        Subset::all(k).flat_map(|maxes| {
            [false, true]
                .into_iter()
                .map(move |zero| PrimeSet { zero, maxes })
        })
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        if self.zero {
            write!(f, "(0)")?;
            first = false;
        }
        for i in 0..16 {
            if self.maxes.contains(i) {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "m{}", i + 1)?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

/// Model construction and validation failures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModelError {
    EmptyPrimes,
    TooManyPrimes(usize),
    NotPrime(u64),
    DuplicatePrime(u64),
    ZeroElement,
    EmptyGenerators,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyPrimes => write!(f, "at least one prime is required"),
            ModelError::TooManyPrimes(n) => write!(f, "at most 16 primes are supported, got {n}"),
            ModelError::NotPrime(p) => write!(f, "{p} is not prime"),
            ModelError::DuplicatePrime(p) => write!(f, "duplicate prime {p}"),
            ModelError::ZeroElement => write!(f, "zero is not a valid element or generator"),
            ModelError::EmptyGenerators => write!(f, "a module needs at least one generator"),
        }
    }
}

impl core::error::Error for ModelError {}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> ModelSpec {
        ModelSpec::new(vec![2, 3]).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn mv(comps: &[Comp]) -> ModuleVec {
        ModuleVec::new(comps.to_vec())
    }

    const K: Comp = Comp::Full;
    const fn e(x: i64) -> Comp {
        Comp::Exp(x)
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::new(vec![]).is_err());
        assert_eq!(ModelSpec::new(vec![4]), Err(ModelError::NotPrime(4)));
        assert_eq!(ModelSpec::new(vec![2, 2]), Err(ModelError::DuplicatePrime(2)));
        assert!(ModelSpec::new(vec![2, 3, 5, 7]).is_ok());
    }

    #[test]
    fn generators_take_componentwise_minimum() {
        let f = module_from_generators(&m2(), &[rat(1, 2), rat(3, 1)]).unwrap();
        assert_eq!(f, mv(&[e(-1), e(0)]));
        assert_eq!(format!("{f}"), "<-1,0>");
    }

    #[test]
    fn generator_module_contains_its_generators() {
        let m = m2();
        let gens = [rat(4, 9), rat(5, 6), rat(7, 1)];
        let f = module_from_generators(&m, &gens).unwrap();
        for g in &gens {
            let x = ElementVec::from_rational(&m, g.clone()).unwrap();
            assert!(x.member_of(&f));
        }
        // The module is least: raising any bound expels some generator.
        for i in 0..m.k() {
            let mut comps = f.comps().to_vec();
            if let Comp::Exp(b) = comps[i as usize] {
                comps[i as usize] = Comp::Exp(b + 1);
                let tighter = ModuleVec::new(comps);
                assert!(gens.iter().any(|g| {
                    !ElementVec::from_rational(&m, g.clone()).unwrap().member_of(&tighter)
                }));
            }
        }
    }

    #[test]
    fn arithmetic_matches_worked_examples() {
        let a = mv(&[e(-1), K]);
        let b = mv(&[e(0), e(2)]);
        assert_eq!(a.multiply(&b), mv(&[e(-1), K]));
        assert_eq!(a.intersect(&b), mv(&[e(0), e(2)]));
        let x = ElementVec::from_vals(&m2(), vec![-2, 1]);
        assert_eq!(mv(&[e(0), e(1)]).scale(&x), mv(&[e(-2), e(2)]));
    }

    #[test]
    fn colon_examples() {
        let k2 = 2;
        let ring = ModuleVec::ring(k2);
        assert_eq!(
            ring.colon_module(&mv(&[e(1), e(0)])),
            ModuleOrZero::Module(mv(&[e(-1), e(0)]))
        );
        // A finite bound against an unconstrained component kills everything.
        assert_eq!(
            mv(&[e(0), K]).colon_module(&mv(&[K, e(0)])),
            ModuleOrZero::Zero
        );
        // Dividing by the zero module gives the whole field.
        assert_eq!(
            ring.colon(&ModuleOrZero::Zero),
            ModuleOrZero::Module(ModuleVec::field(k2))
        );
    }

    #[test]
    fn colon_is_the_transporter_on_witnesses() {
        // x in (F : G) iff x G <= F, spot checked with exact rationals over
        // a grid of candidate elements.
        let m = m2();
        let f = mv(&[e(-1), e(2)]);
        let g = mv(&[e(1), e(1)]);
        let q = f.colon_module(&g).expect_module("nonzero");
        for a in -3..=3 {
            for b in -3..=3 {
                let x = ElementVec::from_vals(&m, vec![a, b]);
                // x G <= F iff the shifted module sits inside F.
                let shifted = g.scale(&x);
                assert_eq!(x.member_of(&q), shifted.is_submodule_of(&f));
            }
        }
    }

    #[test]
    fn containment_and_membership_agree() {
        // F <= G iff every realized corner element of F lies in G. Corners
        // realize the finite bounds exactly and push unconstrained
        // components far down.
        let m = m2();
        let family = ModuleVec::depth_family(2, 1);
        for f in &family {
            for g in &family {
                let rule = f.is_submodule_of(g);
                let corner: Vec<i64> = f
                    .comps()
                    .iter()
                    .map(|c| match c {
                        Comp::Exp(e) => *e,
                        Comp::Full => -4,
                    })
                    .collect();
                let x = ElementVec::from_vals(&m, corner);
                let witnessed = x.member_of(g)
                    && f.support().is_subset_of(g.support());
                assert_eq!(rule, witnessed, "F = {f}, G = {g}");
            }
        }
    }

    #[test]
    fn overrings_and_probes() {
        assert_eq!(ModuleVec::overring(2, Subset::singleton(0)), mv(&[e(0), K]));
        assert_eq!(ModuleVec::overring(2, Subset::EMPTY), ModuleVec::field(2));
        assert!(mv(&[e(0), K]).contains_one());
        assert!(!mv(&[e(1), e(0)]).contains_one());
        assert_eq!(
            ModuleVec::probe(2, Subset::singleton(0), Subset::singleton(1)),
            mv(&[K, e(1)])
        );
        assert_eq!(format!("{}", mv(&[K, e(1)])), "<K,1>");
    }

    #[test]
    fn depth_family_enumerates_and_indexes() {
        let fam = ModuleVec::depth_family(2, 2);
        assert_eq!(fam.len(), 36);
        for (i, f) in fam.iter().enumerate() {
            assert_eq!(f.depth_index(2), Some(i));
        }
        let fam3 = ModuleVec::depth_family(3, 1);
        assert_eq!(fam3.len(), 64);
        // Intersections stay inside the family.
        for f in &fam {
            for g in &fam {
                assert!(f.intersect(g).depth_index(2).is_some());
            }
        }
    }

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational_valuation(2, &rat(12, 1)), 2);
        assert_eq!(rational_valuation(3, &rat(12, 1)), 1);
        assert_eq!(rational_valuation(2, &rat(-5, 8)), -3);
        assert_eq!(rational_valuation(7, &rat(5, 9)), 0);
        let x = ElementVec::from_vals(&m2(), vec![-2, 3]);
        assert_eq!(x.witness().unwrap(), &rat(27, 4));
    }

    #[test]
    fn subset_rendering() {
        assert_eq!(format!("{}", Subset::EMPTY), "{}");
        assert_eq!(format!("{}", Subset::from_indices(&[0, 2])), "{1,3}");
        assert_eq!(
            format!("{}", PrimeSet::new(true, Subset::singleton(0))),
            "{(0),m1}"
        );
    }
}
