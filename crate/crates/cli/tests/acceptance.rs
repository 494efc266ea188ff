//! Acceptance gate for the workspace. Ten checks, one test each, every test
//! ending in a single `ACCEPTANCE n PASS` line (visible under
//! `--nocapture`). Each check recomputes its claim against an oracle that
//! shares as little code as possible with the implementation under test:
//! brute-force function enumeration for the operation counts, exhaustive
//! lattice search for suprema, definitional evaluation against table
//! evaluation, and the specialization order against topological closure.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semistar_core::model::{Comp, ModuleVec, PrimeSet, Subset};
use semistar_core::semistar::expr::SemistarExpr;
use semistar_core::semistar::op::{enumerate_support_maps, SemistarOp};
use semistar_core::semistar::support::SupportMap;
use semistar_core::spaces::{
    ft_subbasic_identity, ft_point_map, op_index, over_space, phi_point_map,
    phi_subbasic_identity, sstar_space, ProbeSpace,
};
use semistar_core::spectral::{
    inverse_closure_induces_same_op, inverse_closure_primes, localization_op, mask_primes,
    stable_closure_spectral, weak_equivalence,
};
use semistar_core::topology::{check_embedding, check_retraction};

fn identity_index(maps: &[SupportMap]) -> usize {
    op_index(maps, &SupportMap::identity(maps[0].k())).expect("identity is enumerated")
}

fn top_index(maps: &[SupportMap]) -> usize {
    op_index(maps, &SupportMap::constant_full(maps[0].k())).expect("top is enumerated")
}

// ---------------------------------------------------------------------------
// 1. Table evaluation agrees with definitional evaluation on a generated
//    corpus of constructor expressions, across every depth-2 module.

struct ExprGen {
    rng: ChaCha8Rng,
    seen: BTreeSet<&'static str>,
}

impl ExprGen {
    fn new(seed: u64) -> ExprGen {
        ExprGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seen: BTreeSet::new(),
        }
    }

    fn subset(&mut self, k: u8) -> Subset {
        Subset::from_bits(self.rng.gen_range(0..(1u16 << k)))
    }

    fn nonempty_subset(&mut self, k: u8) -> Subset {
        loop {
            let s = self.subset(k);
            if !s.is_empty() {
                return s;
            }
        }
    }

    fn leaf(&mut self, k: u8, tables: &[SupportMap]) -> SemistarExpr {
        match self.rng.gen_range(0..6) {
            0 => SemistarExpr::Identity,
            1 => SemistarExpr::FieldOp,
            2 => SemistarExpr::Divisorial,
            3 => {
                let mut fam = BTreeSet::new();
                for _ in 0..self.rng.gen_range(0..=2) {
                    fam.insert(self.subset(k));
                }
                SemistarExpr::Wedge(fam)
            }
            4 => SemistarExpr::Spectral(PrimeSet::new(self.rng.gen(), self.subset(k))),
            _ => {
                let sm = tables[self.rng.gen_range(0..tables.len())].clone();
                SemistarExpr::Table(sm)
            }
        }
    }

    fn combinator(&mut self, k: u8, tables: &[SupportMap]) -> SemistarExpr {
        match self.rng.gen_range(0..4) {
            0 => SemistarExpr::Inf(self.leaves(k, tables)),
            1 => SemistarExpr::Sup(self.leaves(k, tables)),
            2 => SemistarExpr::Compose(self.leaves(k, tables)),
            _ => {
                let mut pairs = Vec::new();
                for _ in 0..self.rng.gen_range(1..=2) {
                    let t = self.nonempty_subset(k);
                    let inner_k = t.len() as u8;
                    let inner_tables = enumerate_support_maps(inner_k);
                    pairs.push((t, self.leaf(inner_k, &inner_tables)));
                }
                SemistarExpr::LocFin(pairs)
            }
        }
    }

    fn leaves(&mut self, k: u8, tables: &[SupportMap]) -> Vec<SemistarExpr> {
        (0..self.rng.gen_range(1..=3))
            .map(|_| self.leaf(k, tables))
            .collect()
    }

    /// At most one finite-type or stable layer per expression: nesting the
    /// sampling constructors multiplies evaluation cost without adding
    /// coverage, and the unit property tests exercise nesting separately.
    fn expr(&mut self, k: u8, tables: &[SupportMap]) -> SemistarExpr {
        let e = match self.rng.gen_range(0..10) {
            0..=3 => self.leaf(k, tables),
            4..=7 => self.combinator(k, tables),
            8 => SemistarExpr::FiniteType(Box::new(self.combinator(k, tables))),
            _ => SemistarExpr::StableClosure(Box::new(self.leaf(k, tables))),
        };
        self.record(&e);
        e
    }

    fn record(&mut self, e: &SemistarExpr) {
        let name = match e {
            SemistarExpr::Identity => "Identity",
            SemistarExpr::FieldOp => "FieldOp",
            SemistarExpr::Divisorial => "Divisorial",
            SemistarExpr::Wedge(_) => "Wedge",
            SemistarExpr::Spectral(_) => "Spectral",
            SemistarExpr::FiniteType(_) => "FiniteType",
            SemistarExpr::StableClosure(_) => "StableClosure",
            SemistarExpr::Inf(_) => "Inf",
            SemistarExpr::Sup(_) => "Sup",
            SemistarExpr::Compose(_) => "Compose",
            SemistarExpr::LocFin(_) => "LocFin",
            SemistarExpr::Table(_) => "Table",
        };
        self.seen.insert(name);
        match e {
            SemistarExpr::FiniteType(inner) | SemistarExpr::StableClosure(inner) => {
                self.record(inner)
            }
            SemistarExpr::Inf(v) | SemistarExpr::Sup(v) | SemistarExpr::Compose(v) => {
                v.iter().for_each(|x| self.record(x))
            }
            SemistarExpr::LocFin(pairs) => pairs.iter().for_each(|(_, x)| self.record(x)),
            _ => {}
        }
    }
}

#[test]
fn acceptance_01_oracle_equivalence() {
    let mut gen = ExprGen::new(0x5eed_0001);
    let mut corpus = 0usize;
    let mut comparisons = 0usize;
    for (k, count) in [(1u8, 90usize), (2, 90), (3, 70)] {
        let tables = enumerate_support_maps(k);
        let family = ModuleVec::depth_family(k, 2);
        for _ in 0..count {
            let mut expr = gen.expr(k, &tables);
            let mut op = SemistarOp::new(k, expr.clone(), 2)
                .unwrap_or_else(|e| panic!("{expr} does not wrap at k={k}: {e}"));
            if op.defect().is_some() {
                // A random composite need not be idempotent; squaring a single
                // closure always is, and still routes through Compose.
                let leaf = gen.leaf(k, &tables);
                expr = SemistarExpr::Compose(vec![leaf.clone(), leaf]);
                gen.record(&expr);
                op = SemistarOp::new(k, expr.clone(), 2)
                    .unwrap_or_else(|e| panic!("{expr} does not wrap at k={k}: {e}"));
                assert!(op.defect().is_none(), "{expr} still defective");
            }
            corpus += 1;
            for f in &family {
                let via_table = op.evaluate(f).unwrap();
                let via_expr = op.evaluate_definitional(f).unwrap();
                assert_eq!(
                    via_table, via_expr,
                    "k={k} expr {expr} disagrees on {f}: table {via_table} vs definitional {via_expr}"
                );
                comparisons += 1;
            }
        }
    }
    assert!(corpus >= 200, "corpus has only {corpus} expressions");
    let all = [
        "Identity", "FieldOp", "Divisorial", "Wedge", "Spectral", "FiniteType",
        "StableClosure", "Inf", "Sup", "Compose", "LocFin", "Table",
    ];
    for name in all {
        assert!(gen.seen.contains(name), "corpus never used {name}");
    }
    println!(
        "ACCEPTANCE 1 PASS: {corpus} expressions over k=1,2,3, {comparisons} module \
         evaluations, table and definitional paths agree everywhere"
    );
}

// ---------------------------------------------------------------------------
// 2. Operation counts, confirmed by brute force over all self-maps of the
//    subset lattice.

/// Every function P(U) -> P(U) satisfying the three closure axioms, as a
/// table of bit masks indexed by input bits. Built by odometer over all
/// (2^k)^(2^k) candidate functions, independently of `SupportMap`.
fn brute_closure_tables(k: u8) -> Vec<Vec<u16>> {
    let n = 1usize << k;
    let mut out = Vec::new();
    let mut t = vec![0u16; n];
    'odometer: loop {
        let extensive = (0..n).all(|s| (s as u16) & !t[s] == 0);
        let monotone = (0..n).all(|a| {
            (0..n).all(|b| (a as u16) & !(b as u16) != 0 || t[a] & !t[b] == 0)
        });
        let idempotent = (0..n).all(|s| t[t[s] as usize] == t[s]);
        if extensive && monotone && idempotent {
            out.push(t.clone());
        }
        for digit in t.iter_mut() {
            *digit += 1;
            if (*digit as usize) < n {
                continue 'odometer;
            }
            *digit = 0;
        }
        return out;
    }
}

fn as_bit_table(sm: &SupportMap, k: u8) -> Vec<u16> {
    Subset::all(k).map(|s| sm.apply_set(s).bits()).collect()
}

#[test]
fn acceptance_02_enumeration_counts() {
    let one = enumerate_support_maps(1);
    assert_eq!(one.len(), 2);

    let two = enumerate_support_maps(2);
    assert_eq!(two.len(), 7);
    let finite_type = two.iter().filter(|m| m.is_finite_type()).count();
    assert_eq!(finite_type, 4);
    let ring_fixing = two.iter().filter(|m| m.kernel().is_empty()).count();
    assert_eq!(ring_fixing, 4);

    for (k, maps) in [(1u8, &one), (2, &two)] {
        let brute = brute_closure_tables(k);
        let mut enumerated: Vec<Vec<u16>> = maps.iter().map(|m| as_bit_table(m, k)).collect();
        let mut oracle = brute.clone();
        enumerated.sort();
        oracle.sort();
        assert_eq!(enumerated, oracle, "enumeration differs from brute force at k={k}");
        let brute_ft = brute
            .iter()
            .filter(|t| (0..t.len()).all(|s| t[s] == (s as u16) | t[0]))
            .count();
        let brute_rf = brute.iter().filter(|t| t[0] == 0).count();
        if k == 2 {
            assert_eq!(brute_ft, 4);
            assert_eq!(brute_rf, 4);
        }
    }
    println!(
        "ACCEPTANCE 2 PASS: 2 operations at k=1 and 7 at k=2 (4 finite-type, 4 fixing the \
         ring), matching brute-force enumeration of all closure functions"
    );
}

// ---------------------------------------------------------------------------
// 3. In the operation topology, the closure of a point is its down-set; the
//    bottom is the unique closed point and the top is generic.

#[test]
fn acceptance_03_point_closures() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut checked = 0usize;
    for k in 1..=3u8 {
        let maps = enumerate_support_maps(k);
        let probe = ProbeSpace::new(&maps);
        let bottom = identity_index(&maps);
        let top = top_index(&maps);
        let mut closed_points = Vec::new();
        for (i, sm) in maps.iter().enumerate() {
            let closure = probe.closure_indices(&[i]);
            let down: Vec<usize> = (0..maps.len()).filter(|&j| maps[j].leq(sm)).collect();
            assert_eq!(closure, down, "closure of point {i} at k={k} is not its down-set");
            if closure == vec![i] {
                closed_points.push(i);
            }
            checked += 1;
        }
        assert_eq!(closed_points, vec![bottom], "k={k} closed points");
        assert_eq!(
            probe.closure_indices(&[top]).len(),
            maps.len(),
            "k={k} top point is not generic"
        );

        // Subfamilies small enough to materialize get the same answer from
        // the full engine: closure masks match the order again.
        let mut subfamilies = vec![];
        if maps.len() <= 16 {
            subfamilies.push(maps.clone());
        }
        for _ in 0..6 {
            if maps.len() < 4 {
                break;
            }
            let size = rng.gen_range(3..=maps.len().min(14));
            let mut idx: Vec<usize> = (0..maps.len()).collect();
            idx.shuffle(&mut rng);
            let mut chosen: BTreeSet<usize> = idx.into_iter().take(size).collect();
            chosen.insert(bottom);
            chosen.insert(top);
            subfamilies.push(chosen.iter().map(|&i| maps[i].clone()).collect());
        }
        for fam in subfamilies {
            let space = sstar_space(&fam);
            let sub_probe = ProbeSpace::new(&fam);
            for i in 0..fam.len() {
                let mask = space.closure(1 << i);
                let from_probes: u32 = sub_probe
                    .closure_indices(&[i])
                    .iter()
                    .map(|&j| 1u32 << j)
                    .sum();
                let from_order: u32 = (0..fam.len())
                    .filter(|&j| fam[j].leq(&fam[i]))
                    .map(|j| 1u32 << j)
                    .sum();
                assert_eq!(mask, from_probes, "k={k} engine vs probe closure");
                assert_eq!(mask, from_order, "k={k} engine closure vs order");
            }
        }
    }
    println!(
        "ACCEPTANCE 3 PASS: closure of every point equals its down-set for k=1,2,3 \
         ({checked} points), d is the unique closed point and the constant-field \
         operation is generic"
    );
}

// ---------------------------------------------------------------------------
// 4. The overring space embeds into the finite-type subspace, which the full
//    space retracts onto.

#[test]
fn acceptance_04_embedding_and_retraction() {
    for k in 1..=4u8 {
        let maps = enumerate_support_maps(k);
        let ft_maps: Vec<SupportMap> = Subset::all(k)
            .map(|ker| SupportMap::finite_type_with_kernel(k, ker))
            .collect();
        {
            let mut from_filter: Vec<Vec<u16>> = maps
                .iter()
                .filter(|m| m.is_finite_type())
                .map(|m| as_bit_table(m, k))
                .collect();
            let mut from_kernels: Vec<Vec<u16>> =
                ft_maps.iter().map(|m| as_bit_table(m, k)).collect();
            from_filter.sort();
            from_kernels.sort();
            assert_eq!(from_filter, from_kernels, "finite-type family mismatch at k={k}");
        }

        let over = over_space(k);
        let ft_space = sstar_space(&ft_maps);
        let phi = phi_point_map(k, &ft_maps).expect("every overring wedge is finite-type");
        assert!(
            check_embedding(&over, &ft_space, &phi),
            "overring space does not embed at k={k}"
        );
        assert_eq!(phi_subbasic_identity(k), None, "k={k}");

        // The reflection is the identity on finite-type points and pulls
        // subbasic opens back to subbasic opens over the whole family.
        let retract = ft_point_map(&maps, &ft_maps)
            .unwrap_or_else(|| panic!("reflection leaves the finite-type family at k={k}"));
        assert_eq!(
            ft_point_map(&ft_maps, &ft_maps).unwrap(),
            (0..ft_maps.len()).collect::<Vec<_>>(),
            "reflection moves a finite-type point at k={k}"
        );
        assert_eq!(ft_subbasic_identity(&maps), None, "k={k}");

        if maps.len() <= 16 {
            let big = sstar_space(&maps);
            let include: Vec<usize> = ft_maps
                .iter()
                .map(|m| op_index(&maps, m).unwrap())
                .collect();
            assert!(
                check_retraction(&big, &ft_space, &include, &retract),
                "reflection fails the retraction check at k={k}"
            );
        }
    }
    println!(
        "ACCEPTANCE 4 PASS: overring embedding and finite-type retraction hold for \
         k=1..4 (retraction literal at k<=2, via subbasic preimages beyond)"
    );
}

// ---------------------------------------------------------------------------
// 5. The finite-type space is spectral, and so is its ring-fixing subspace.

#[test]
fn acceptance_05_spectral_spaces() {
    for k in 1..=4u8 {
        let maps = enumerate_support_maps(k);
        let ft_maps: Vec<SupportMap> =
            maps.iter().filter(|m| m.is_finite_type()).cloned().collect();
        let space = sstar_space(&ft_maps);
        assert!(space.is_t0(), "k={k} finite-type space not T0");
        assert!(space.is_sober(), "k={k} finite-type space not sober");
        assert!(
            space.is_quasi_compact(space.full_mask()),
            "k={k} finite-type space not quasi-compact"
        );
        assert!(space.is_spectral(), "k={k} finite-type space not spectral");

        let star_ft: Vec<SupportMap> = ft_maps
            .iter()
            .filter(|m| m.kernel().is_empty())
            .cloned()
            .collect();
        assert_eq!(
            star_ft,
            vec![SupportMap::identity(k)],
            "k={k}: a finite-type operation fixing the ring pins every support"
        );
        assert!(sstar_space(&star_ft).is_spectral());

        if maps.len() <= 16 {
            let star: Vec<SupportMap> = maps
                .iter()
                .filter(|m| m.kernel().is_empty())
                .cloned()
                .collect();
            assert!(
                sstar_space(&star).is_spectral(),
                "k={k} ring-fixing subspace not spectral"
            );
        }
    }
    println!(
        "ACCEPTANCE 5 PASS: finite-type spaces for k=1..4 are T0, sober, quasi-compact \
         spectral spaces, and the ring-fixing subspaces are spectral too"
    );
}

// ---------------------------------------------------------------------------
// 6. The iterated-composition supremum equals the least upper bound found by
//    exhaustive search in the enumerated lattice.

fn brute_lub<'a>(family: &[&SupportMap], lattice: &'a [SupportMap]) -> &'a SupportMap {
    let uppers: Vec<&SupportMap> = lattice
        .iter()
        .filter(|m| family.iter().all(|f| f.leq(m)))
        .collect();
    assert!(!uppers.is_empty(), "no upper bound in the lattice");
    let least: Vec<&&SupportMap> = uppers
        .iter()
        .filter(|m| uppers.iter().all(|u| m.leq(u)))
        .collect();
    assert_eq!(least.len(), 1, "least upper bound is not unique");
    least[0]
}

fn fold_join(family: &[&SupportMap]) -> SupportMap {
    family[1..]
        .iter()
        .fold((*family[0]).clone(), |acc, m| acc.join(m))
}

#[test]
fn acceptance_06_supremum_against_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut pairs = 0usize;
    let mut randoms = 0usize;
    for k in 1..=3u8 {
        let maps = enumerate_support_maps(k);
        for i in 0..maps.len() {
            for j in (i + 1)..maps.len() {
                let family = [&maps[i], &maps[j]];
                let joined = fold_join(&family);
                assert_eq!(&joined, brute_lub(&family, &maps));
                if k <= 2 {
                    // Tie the expression-level supremum to the table join.
                    let expr = SemistarExpr::Sup(vec![
                        SemistarExpr::Table(maps[i].clone()),
                        SemistarExpr::Table(maps[j].clone()),
                    ]);
                    let op = SemistarOp::new(k, expr, 2).unwrap();
                    assert_eq!(op.table(), &joined);
                }
                pairs += 1;
            }
        }
        if maps.len() < 3 {
            continue;
        }
        for _ in 0..100 {
            let size = rng.gen_range(3..=maps.len().min(6));
            let mut idx: Vec<usize> = (0..maps.len()).collect();
            idx.shuffle(&mut rng);
            let family: Vec<&SupportMap> = idx[..size].iter().map(|&i| &maps[i]).collect();
            assert_eq!(&fold_join(&family), brute_lub(&family, &maps));
            randoms += 1;
        }
    }
    println!(
        "ACCEPTANCE 6 PASS: supremum by composition fixpoint equals exhaustive least \
         upper bound on {pairs} two-element and {randoms} random larger families, k=1,2,3"
    );
}

// ---------------------------------------------------------------------------
// 7. The three faces of weak equivalence agree on every pair of nonempty
//    prime sets, and localizing at an inverse closure changes nothing.

#[test]
fn acceptance_07_weak_equivalence() {
    for k in 1..=4u8 {
        let points = k as u32 + 1;
        let masks: Vec<u32> = (1..(1u32 << points)).collect();
        let sets: Vec<PrimeSet> = masks.iter().map(|&m| mask_primes(k, m)).collect();

        // Every localization is already stable and of finite type, so equal
        // operations and equal stable closures are the same condition.
        let ops: Vec<SemistarOp> = sets
            .iter()
            .map(|&y| localization_op(k, y, 2).unwrap())
            .collect();
        for (y, op) in sets.iter().zip(&ops) {
            assert!(op.is_finite_type());
            assert!(op.is_stable(2).unwrap());
            assert!(op.stable_closure().unwrap().eq_op(op), "k={k} Y={y}");
            assert!(inverse_closure_induces_same_op(k, *y, 2).unwrap(), "k={k} Y={y}");
            stable_closure_spectral(k, *y, 2).unwrap();
        }

        let mut agreements = 0usize;
        for (i, &y) in sets.iter().enumerate() {
            for (j, &z) in sets.iter().enumerate() {
                let we = weak_equivalence(k, y, z, 2).unwrap();
                assert!(
                    we.all_agree(),
                    "k={k} Y={y} Z={z}: operation {}, inverse closure {}, compact opens {}",
                    we.same_operation,
                    we.same_inverse_closure,
                    we.same_compact_opens
                );
                assert_eq!(we.same_operation, ops[i].eq_op(&ops[j]));
                agreements += 1;
            }
        }
        if k == 4 {
            assert_eq!(agreements, 961);
        }
    }
    println!(
        "ACCEPTANCE 7 PASS: same operation, same inverse closure and same compact-open \
         pattern coincide on all nonempty prime-set pairs for k=1..4, and every set \
         matches its inverse closure"
    );
}

// ---------------------------------------------------------------------------
// 8. Three renditions of the stable closure agree on every enumerated
//    operation and do not move between sampling depths 2 and 3.

#[test]
fn acceptance_08_stable_closure_triple() {
    for k in 2..=3u8 {
        let maps = enumerate_support_maps(k);
        for sm in &maps {
            let mut per_depth = Vec::new();
            for depth in [2i64, 3] {
                let op = SemistarOp::from_table(sm.clone(), depth);
                let definitional = op.stable_closure().unwrap();
                let qmax = op.finite_type_closure().unwrap().quasi_maximals();
                let via_qmax = localization_op(k, qmax, depth).unwrap();
                let closed = inverse_closure_primes(k, op.quasi_spectrum());
                let via_inverse = localization_op(k, closed, depth).unwrap();
                assert!(
                    definitional.eq_op(&via_qmax),
                    "k={k} depth={depth} {}: union formula vs localization at {qmax}",
                    sm.describe()
                );
                assert!(
                    via_qmax.eq_op(&via_inverse),
                    "k={k} depth={depth} {}: qmax vs inverse closure {closed}",
                    sm.describe()
                );
                per_depth.push(definitional.table().clone());
            }
            assert_eq!(per_depth[0], per_depth[1], "k={k} {} depth drift", sm.describe());
        }
    }
    println!(
        "ACCEPTANCE 8 PASS: definitional union, quasi-maximal localization and \
         inverse-closure localization give the same stable closure for all 7 operations \
         at k=2 and all 61 at k=3, identically at depths 2 and 3"
    );
}

// ---------------------------------------------------------------------------
// 9. The divisorial operation at k=2: semifinite, not of finite type, with
//    the documented witness module, and with exactly one finite-type
//    operation above it.

#[test]
fn acceptance_09_divisorial_example() {
    let v = SemistarOp::new(2, SemistarExpr::Divisorial, 2).unwrap();
    assert!(v.is_semifinite(2).unwrap());
    assert!(v.is_semifinite(3).unwrap());
    assert!(!v.is_finite_type());

    let witness = ModuleVec::new(vec![Comp::Full, Comp::Exp(0)]);
    assert_eq!(v.evaluate(&witness).unwrap(), ModuleVec::field(2));
    let ft = v.finite_type_closure().unwrap();
    assert_eq!(ft.evaluate(&witness).unwrap(), witness);
    assert_eq!(
        v.evaluate_definitional(&witness).unwrap(),
        ModuleVec::field(2)
    );

    let maps = enumerate_support_maps(2);
    let uppers: Vec<&SupportMap> = maps
        .iter()
        .filter(|m| m.is_finite_type() && v.table().leq(m))
        .collect();
    assert_eq!(uppers, vec![&SupportMap::constant_full(2)]);
    println!(
        "ACCEPTANCE 9 PASS: at k=2 the divisorial operation is semifinite but not of \
         finite type, sends <K,0> to <K,K> while its finite-type companion fixes <K,0>, \
         and its only finite-type upper bound is the constant-field operation"
    );
}

// ---------------------------------------------------------------------------
// 10. The verification suite is byte-deterministic end to end.

#[test]
fn acceptance_10_determinism() {
    let exe = env!("CARGO_BIN_EXE_semistar");
    for primes in ["2,3", "2,3,5"] {
        let run = || {
            std::process::Command::new(exe)
                .args(["--primes", primes, "verify"])
                .output()
                .expect("verify run")
        };
        let first = run();
        let second = run();
        assert!(first.status.success(), "verify exited nonzero for {primes}");
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "stdout drifted for {primes}");
        assert_eq!(first.stderr, second.stderr);
        let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
        let reports = parsed.as_array().expect("verify emits a JSON array");
        assert_eq!(reports.len(), 20);
        assert!(reports
            .iter()
            .all(|r| r["status"] == "PASS" || r["status"] == "SKIP"));
    }
    println!(
        "ACCEPTANCE 10 PASS: two verify runs per model produce byte-identical JSON \
         with exit code 0"
    );
}
