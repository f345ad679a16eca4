//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Random instances come from ChaCha generators with fixed seeds, so every
//! run checks the same inputs.

mod common;

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tcbound_core::bounds::{bounds_for, FactBase, Interval, Quantity, QuantityKind, Report, RuleId};
use tcbound_core::catalog::Catalog;
use tcbound_core::cohomology::cohomology_ring_z2;
use tcbound_core::complex::fixtures;
use tcbound_core::cover::{diagonal_product, ostrand_extend, product_cover, CoverError, IndexedFamily, PointSet};
use tcbound_core::nerve::{extend_same_nerve, nerve_of, restrict};
use tcbound_core::ring::zero_divisor_cup_length;

use common::*;

/// Wall-clock limits.
const ORDER_CRITERION_LIMIT: Duration = Duration::from_secs(60);
const COHOMOLOGY_LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All ordered families of `m` subsets of `0..g`.
fn all_families(g: usize, m: usize) -> impl Iterator<Item = IndexedFamily> {
    let per_set = 1usize << g;
    (0..per_set.pow(m as u32)).map(move |mut code| {
        let sets = (0..m)
            .map(|_| {
                let mask = code % per_set;
                code /= per_set;
                PointSet::from_indices(g, (0..g).filter(|p| mask >> p & 1 == 1)).unwrap()
            })
            .collect();
        IndexedFamily::new(numbered(g), sets).unwrap()
    })
}

fn compare_order_criterion(family: &IndexedFamily) -> Result<usize, String> {
    for k in 1..=family.len() {
        let fast = family.is_k_cover_fast(k).map_err(|e| e.to_string())?;
        let oracle = family.is_k_cover_oracle(k).map_err(|e| e.to_string())?;
        if fast != oracle {
            return Err(format!("k = {k}: fast {fast}, oracle {oracle} on {family:?}"));
        }
    }
    Ok(family.len())
}

fn order_criterion() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0usize;
    let mut checks = 0usize;
    for g in 1..=5 {
        for m in 1..=4 {
            for family in all_families(g, m) {
                checks += compare_order_criterion(&family)?;
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random = 10_000;
    for _ in 0..random {
        let g = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=6);
        let density = rng.gen_range(0.2..0.95);
        checks += compare_order_criterion(&random_family(&mut rng, g, m, density))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORDER_CRITERION_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{exhaustive} exhaustive + {random} random families, {checks} (family, k) checks, 0 disagreements in {elapsed:.1?}"))
}

fn ostrand_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let runs = 1_000;
    let mut largest_group = 0;
    let mut appended = 0;
    for run in 0..runs {
        let ground = rng.gen_range(1..=12);
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(n..=10);
        let (action, order) = random_action(&mut rng, ground, 24);
        largest_group = largest_group.max(order);
        let family = random_invariant_cover(&mut rng, &action, n + 1);
        let out = ostrand_extend(&family, n, m, Some(&action)).map_err(|e| format!("run {run}: {e}"))?;
        let ctx = || format!("run {run} (ground {ground}, n {n}, m {m})");
        ensure(out.len() == m + 1, || format!("{}: {} sets", ctx(), out.len()))?;
        ensure(out.sets()[..=n] == family.sets()[..], || format!("{}: prefix changed", ctx()))?;
        ensure(every_k_subfamily_covers(&out, n + 1), || format!("{}: not an (n+1)-cover", ctx()))?;
        ensure(out.verify_witnesses(), || format!("{}: witnesses fail", ctx()))?;
        for k in n + 1..=m {
            ensure(action.is_invariant(&out.sets()[k]), || format!("{}: set {k} not invariant", ctx()))?;
        }
        appended += m - n;
    }
    Ok(format!("{runs} random inputs, {appended} appended sets, groups up to order {largest_group}, 0 failures"))
}

/// Multisets of 1..=4 membership patterns over `s` sets with at least `s - n` bits.
fn pattern_families(s: usize, n: usize) -> Vec<Vec<u32>> {
    let patterns: Vec<u32> = (0..1u32 << s).filter(|p| p.count_ones() as usize >= s - n).collect();
    (1..=4).flat_map(|size| patterns.iter().copied().combinations_with_replacement(size)).collect()
}

/// `family` is the least of its images under permutations of the set indices.
fn is_canonical(family: &[u32], perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|perm| {
        let mut image: Vec<u32> = family
            .iter()
            .map(|&p| perm.iter().enumerate().filter(|(i, _)| p >> i & 1 == 1).map(|(_, &j)| 1u32 << j).sum())
            .collect();
        image.sort_unstable();
        image.as_slice() >= family
    })
}

/// Point `i` lies in set `k` iff bit `k` of `patterns[i]` is set.
fn family_of(patterns: &[u32], s: usize) -> IndexedFamily {
    let sets = (0..s)
        .map(|k| PointSet::from_indices(patterns.len(), (0..patterns.len()).filter(|&i| patterns[i] >> k & 1 == 1)).unwrap())
        .collect();
    IndexedFamily::new(numbered(patterns.len()), sets).unwrap()
}

fn pigeonhole_product() -> Outcome {
    let mut pairs = 0usize;
    for s in 1..=5 {
        let perms: Vec<Vec<usize>> = (0..s).permutations(s).collect();
        for n in 0..s {
            let m = s - 1 - n;
            let (fa, fb) = (pattern_families(s, n), pattern_families(s, m));
            // Covering is unchanged by relabelling points (multisets) and by a
            // common permutation of the set indices, so one side can be canonical.
            let canonical_a = fa.len() >= fb.len();
            let keep = |f: &Vec<u32>| is_canonical(f, &perms);
            let fa: Vec<&Vec<u32>> = fa.iter().filter(|f| !canonical_a || keep(f)).collect();
            let fb: Vec<&Vec<u32>> = fb.iter().filter(|f| canonical_a || keep(f)).collect();
            let built_b: Vec<IndexedFamily> = fb.iter().map(|p| family_of(p, s)).collect();
            for pa in &fa {
                let a = family_of(pa, s);
                for (pb, b) in fb.iter().zip(&built_b) {
                    let product = product_cover(&a, n, b, m).map_err(|e| format!("s {s}, n {n}: {e}"))?;
                    let expected = pa.iter().all(|x| pb.iter().all(|y| x & y != 0));
                    ensure(expected && product.covers(), || format!("s {s} n {n}: {pa:?} x {pb:?} not covered"))?;
                    pairs += 1;
                }
            }
        }
    }

    let a = IndexedFamily::from_ids(numbered(2), &[vec!["0"], vec!["1"]]).unwrap();
    let b = IndexedFamily::from_ids(tcbound_core::cover::GroundSet::new(["x", "y"]).unwrap(), &[vec!["x"], vec!["y"]])
        .unwrap();
    let rejected = matches!(product_cover(&a, 1, &b, 1), Err(CoverError::ProductPrecondition(_)));
    ensure(rejected, || "s = n + m counterexample was accepted".to_string())?;
    let diagonal = diagonal_product(&a, &b).unwrap();
    let missed = diagonal.first_uncovered().map(|p| diagonal.ground().id(p).to_string());
    ensure(missed.as_deref() == Some("(0,y)"), || format!("diagonal misses {missed:?}, expected (0,y)"))?;
    Ok(format!("{pairs} family pairs up to relabelling, all covered; s = n + m counterexample rejected, misses (0,y)"))
}

fn nerve_extension() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let runs = 1_000;
    for run in 0..runs {
        let points = rng.gen_range(1..=12);
        let space = random_metric(&mut rng, points);
        let sub = random_subspace(&mut rng, &space);
        let sets = rng.gen_range(1..=5);
        let relative = random_cover_of(&mut rng, &sub, sets);
        let extended = extend_same_nerve(&space, &relative).map_err(|e| format!("run {run}: {e}"))?;
        let restricted = restrict(&extended, &sub).map_err(|e| format!("run {run}: {e}"))?;
        ensure(restricted == relative.sets(), || format!("run {run}: V ∩ A differs from V'"))?;
        ensure(nerve_of(&extended) == nerve_of(&relative), || format!("run {run}: nerves differ"))?;
    }
    Ok(format!("{runs} random metric spaces, restriction and nerve preserved in all"))
}

fn cohomology_fixtures() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("triangle boundary", fixtures::triangle_boundary(), vec![1, 1], 1),
        ("wedge of two circles", fixtures::wedge_of_circles(2), vec![1, 2], 2),
        ("7-vertex torus", fixtures::torus7(), vec![1, 2, 1], 2),
    ];
    let mut summary = Vec::new();
    for (name, k, betti, zcl) in cases {
        let got_betti = k.betti_z2();
        let got_zcl = zero_divisor_cup_length(&cohomology_ring_z2(&k), None).length;
        ensure(got_betti == betti && got_zcl == zcl, || {
            format!("{name}: betti {got_betti:?} zcl {got_zcl}, expected {betti:?} zcl {zcl}")
        })?;
        summary.push(format!("{name} {got_betti:?} zcl {got_zcl}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < COHOMOLOGY_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!("{} in {elapsed:.1?}", summary.join("; ")))
}

fn catalog_report(catalog: &Catalog, name: &str) -> Result<Report, String> {
    let entry = catalog.lookup(name).map_err(|e| e.to_string())?;
    bounds_for(&entry.descriptor).map_err(|e| format!("{name}: {e}"))
}

fn upper_from(report: &Report, rule: RuleId, q: &Quantity) -> Vec<u64> {
    report.entries(rule, q).filter_map(|e| e.candidate.hi()).collect()
}

fn engine_values() -> Outcome {
    let catalog = Catalog::builtin().map_err(|e| e.to_string())?;
    for (name, rule) in [("torus7", RuleId::R2), ("wedge2circles", RuleId::R3)] {
        let r = catalog_report(&catalog, name)?;
        let tc = r.tc(name);
        ensure(tc == Some(Interval::exact(2)), || format!("{name}: TC {tc:?}"))?;
        let group = &catalog.lookup(name).unwrap().descriptor.group.name;
        ensure(r.entries(rule, &Quantity::tc_group(group)).next().is_some(), || format!("{name}: no {rule} entry"))?;
        ensure(r.entries(RuleId::R0, &Quantity::tc_space(name)).next().is_some(), || format!("{name}: no R0 entry"))?;
    }
    let name = "circle_wedge_sphere";
    let r = catalog_report(&catalog, name)?;
    let tc = Quantity::tc_space(name);
    ensure(r.tc(name) == Interval::new(2, Some(3)), || format!("{name}: TC {:?}", r.tc(name)))?;
    let (r5, r6) = (upper_from(&r, RuleId::R5, &tc), upper_from(&r, RuleId::R6, &tc));
    ensure(r6.iter().min() < r5.iter().min() && !r6.is_empty(), || format!("R6 {r6:?} not tighter than R5 {r5:?}"))?;
    Ok(format!("torus [2, 2] (R2, R0); wedge of two circles [2, 2] (R3, R0); S1vS2 [2, 3] with R6 hi {r6:?} < R5 hi {r5:?}"))
}

fn route_equivalence() -> Outcome {
    let catalog = Catalog::builtin().map_err(|e| e.to_string())?;
    let name = "T2xS2";
    let r = catalog_report(&catalog, name)?;
    let tc = Quantity::tc_space(name);
    let via_r8 = upper_from(&r, RuleId::R8, &tc);
    let via_r6 = upper_from(&r, RuleId::R6, &tc);
    let star = Quantity::equivariant(QuantityKind::TcgStar, "R2xS2", "Z^2");
    ensure(r.entries(RuleId::R10, &star).next().is_some(), || "no R10 entry".to_string())?;
    let (h8, h6) = (via_r8.iter().min().copied(), via_r6.iter().min().copied());
    ensure(h8.is_some() && h8 == h6, || format!("R8 route {via_r8:?} vs R6 route {via_r6:?}"))?;

    let descriptor = &catalog.lookup(name).unwrap().descriptor;
    for off in [RuleId::R6, RuleId::R8] {
        let mut base = FactBase::for_descriptor(descriptor).map_err(|e| e.to_string())?;
        base.propagate_with(None, &[off]).map_err(|e| e.to_string())?;
        let hi = base.get(&tc).and_then(|i| i.hi());
        ensure(hi == h8, || format!("with {off} disabled hi is {hi:?}"))?;
    }
    Ok(format!("hi(TC) via R8+R10 = {} = via R6; each route alone reaches it", h8.unwrap()))
}

fn engine_soundness() -> Outcome {
    let catalog = Catalog::builtin().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut sandwiches, mut shuffles) = (0, 0);
    for entry in catalog.entries() {
        let mut base = FactBase::for_descriptor(&entry.descriptor).map_err(|e| e.to_string())?;
        base.propagate().map_err(|e| format!("{}: {e}", entry.name))?;
        base.check_consistency().map_err(|e| format!("{}: {e}", entry.name))?;

        for (space, zcl) in base.context().cup_length_bounds() {
            let tc = Quantity::tc_space(&space);
            for e in base.trace().iter().filter(|e| e.target == tc && e.rule != RuleId::Assert) {
                if let Some(hi) = e.candidate.hi() {
                    ensure(zcl as u64 <= hi, || format!("{}: zcl {zcl} > {} bound {hi} on {space}", entry.name, e.rule))?;
                    sandwiches += 1;
                }
            }
        }

        let mut order: Vec<usize> = (0..base.propagators().len()).collect();
        for _ in 0..20 {
            order.shuffle(&mut rng);
            let mut shuffled = FactBase::for_descriptor(&entry.descriptor).map_err(|e| e.to_string())?;
            shuffled.propagate_with(Some(&order), &[]).map_err(|e| e.to_string())?;
            ensure(shuffled.facts() == base.facts(), || format!("{}: shuffled fixpoint differs", entry.name))?;
            shuffled.check_consistency().map_err(|e| format!("{} shuffled: {e}", entry.name))?;
            shuffles += 1;
        }
    }
    Ok(format!(
        "{} entries consistent; {sandwiches} upper bounds all >= zcl; {shuffles} shuffled schedules reach the same fixpoint",
        catalog.entries().len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("order criterion equals brute force", order_criterion),
        ("Ostrand extension", ostrand_extension),
        ("pigeonhole product", pigeonhole_product),
        ("nerve extension", nerve_extension),
        ("cohomology fixtures", cohomology_fixtures),
        ("bound engine values", engine_values),
        ("route equivalence", route_equivalence),
        ("engine soundness", engine_soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| {
            failed += 1;
            e
        });
        println!("criterion {} {status} {name} ({:.1?}): {detail}", i + 1, start.elapsed());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
