//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use zom::behrend::{behrend_set, build_dense_s0t, verify_behrend, BehrendParams, VerifyOptions, VerifyOutcome};
use zom::classify::{degeneracy_class, is_covering, reduce_polylog, ReductionOutcome};
use zom::constructions::{audit_simple_properties, build_a, build_at, BuildLimits, LabeledMatrix};
use zom::contains::{contains_with, Outcome, SearchOptions};
use zom::extremal::{exact_ex, ExOptions};
use zom::marking::{audit_unmarked, default_zeta, run_marking, AuditOutcome, MarkOptions};
use zom::oracle::naive_contains;
use zom::registry::{corpus, registry_pattern};
use zom::rng::{random_matrix, SplitMix64};
use zom::tensor::{contains_r, lift_pattern, stack_matrix};
use zom::{pattern_as_matrix, Matrix01, Pattern};

fn pass(criterion: u32, detail: &str) {
    println!("criterion {criterion:02} PASS - {detail}");
}

fn limits() -> BuildLimits {
    BuildLimits::default()
}

fn named(name: &str) -> Pattern {
    registry_pattern(name, None).unwrap()
}

fn a_3_8() -> &'static LabeledMatrix {
    static CELL: OnceLock<LabeledMatrix> = OnceLock::new();
    CELL.get_or_init(|| build_a(3, 8, &limits()).unwrap())
}

fn at_4_6_2() -> &'static LabeledMatrix {
    static CELL: OnceLock<LabeledMatrix> = OnceLock::new();
    CELL.get_or_init(|| build_at(4, 6, 2, &limits()).unwrap())
}

fn at_4_4_3() -> &'static LabeledMatrix {
    static CELL: OnceLock<LabeledMatrix> = OnceLock::new();
    CELL.get_or_init(|| build_at(4, 4, 3, &limits()).unwrap())
}

fn assert_free_within(p: &Pattern, a: &Matrix01, cap: Duration, what: &str) -> Duration {
    let start = Instant::now();
    let outcome = contains_with(p, a, &SearchOptions::default());
    let elapsed = start.elapsed();
    assert_eq!(outcome, Outcome::Free, "{what} should be avoided");
    assert!(
        elapsed < cap,
        "{what} took {elapsed:?}, budget {cap:?}"
    );
    elapsed
}

#[test]
fn criterion_01_freeness_of_the_base_family() {
    let cap = Duration::from_secs(60);
    let mut worst = Duration::ZERO;
    for (b, m) in [(1u32, 2u32), (2, 4), (3, 8)] {
        let lm = if (b, m) == (3, 8) {
            a_3_8().clone()
        } else {
            build_a(b as usize, m, &limits()).unwrap()
        };
        if (b, m) == (3, 8) {
            assert_eq!(lm.matrix.rows(), 4096);
            assert_eq!(lm.matrix.cols(), 4096);
        }
        for name in ["s0", "s1"] {
            let took = assert_free_within(
                &named(name),
                &lm.matrix,
                cap,
                &format!("{name} in A[{b},{m}]"),
            );
            worst = worst.max(took);
        }
    }
    pass(1, &format!("s0 and s1 avoided on all three hosts, slowest check {worst:?}"));
}

#[test]
fn criterion_02_covering_patterns() {
    let host = build_a(2, 4, &limits()).unwrap();
    for name in ["s2", "s3"] {
        let outcome = contains_with(&named(name), &host.matrix, &SearchOptions::default());
        assert_eq!(outcome, Outcome::Free, "{name} should be avoided by A[2,4]");
    }
    for name in ["s0", "s1", "s2", "s3"] {
        assert!(is_covering(&named(name)).is_some(), "{name} must be covering");
    }
    for p in [named("p1"), named("q3")] {
        assert!(is_covering(&p).is_none());
    }
    for text in ["1", "1.1", "111"] {
        assert!(is_covering(&Pattern::parse(text).unwrap()).is_none());
    }
    pass(2, "s2/s3 avoided; covering witnesses exactly on s0..s3");
}

#[test]
fn criterion_03_alternating_freeness() {
    let cap = Duration::from_secs(120);
    let t2 = assert_free_within(
        &named("p2"),
        &at_4_6_2().matrix,
        cap,
        "p2 in At[4,6]",
    );
    let t3 = assert_free_within(
        &named("p3"),
        &at_4_4_3().matrix,
        cap,
        "p3 in At[4,4]",
    );
    pass(3, &format!("p2 and p3 avoided ({t2:?}, {t3:?})"));
}

#[test]
fn criterion_04_size_lemma() {
    for b in 1..=3usize {
        for m in 1..=8u32 {
            let lm = build_a(b, m, &limits()).unwrap();
            let bound = zom::constructions::weight_bound_a(b, m).unwrap();
            assert!(
                lm.matrix.weight() as u64 >= bound,
                "A[{b},{m}] weight {} below bound {bound}",
                lm.matrix.weight()
            );
        }
    }
    assert_eq!(build_a(1, 2, &limits()).unwrap().matrix.weight(), 5);
    pass(4, "weights dominate the ceil bound for b <= 3, m <= 8; A[1,2] has weight 5 exactly");
}

#[test]
fn criterion_05_behrend_soundness() {
    for n in [100u64, 10_000] {
        for h in [2u64, 3] {
            let set = behrend_set(n, h).unwrap();
            assert!(set.verified, "behrend_set({n}, {h}) must verify");
            if let BehrendParams::Shell { d, dim, .. } = set.params {
                let lhs = set.elements.len() as u128 * dim as u128 * (d as u128).pow(2);
                assert!(lhs >= (d as u128).pow(dim), "size bound broken at ({n}, {h})");
            }
        }
    }
    let out = verify_behrend(&[1, 2, 3], 2, &VerifyOptions::default()).unwrap();
    assert_eq!(out, VerifyOutcome::Counterexample(1, -2, 1, 1, 2, 3));
    pass(5, "all four sets verify; {1,2,3} yields the progression witness (1,-2,1,1,2,3)");
}

#[test]
fn criterion_06_dense_construction() {
    let (lm, set) = build_dense_s0t(2, 2, &limits()).unwrap();
    assert!(set.verified);
    let outcome = contains_with(&named("s0t2"), &lm.matrix, &SearchOptions::default());
    assert_eq!(outcome, Outcome::Free);
    pass(
        6,
        &format!(
            "dense host ({}x{}) avoids s0t(2)",
            lm.matrix.rows(),
            lm.matrix.cols()
        ),
    );
}

#[test]
fn criterion_07_marking_theorem() {
    let host = &at_4_6_2().matrix;
    let zeta = default_zeta(host, 2);
    let report = run_marking(host, 2, zeta, &MarkOptions::default()).unwrap();
    assert!(
        report.unmarked.is_empty(),
        "{} unmarked 1s on the alternating-free host",
        report.unmarked.len()
    );

    let mut with_unmarked = 0;
    for seed in 0..20u64 {
        // Half the hosts are dense enough that unmarked 1s actually occur.
        let (num, den) = if seed % 2 == 0 { (1, 2) } else { (9, 10) };
        let a = random_matrix(50, 50, num, den, seed);
        let zeta = default_zeta(&a, 2);
        let report = run_marking(&a, 2, zeta, &MarkOptions::default()).unwrap();
        if !report.unmarked.is_empty() {
            with_unmarked += 1;
            let audit = audit_unmarked(&a, 2, &report, &SearchOptions::default()).unwrap();
            assert!(matches!(audit, AuditOutcome::Occurrence { .. }));
        }
    }
    assert!(with_unmarked > 0, "expected at least one host with leftover 1s");
    pass(
        7,
        &format!("no unmarked 1s on At[4,6]; {with_unmarked}/20 random hosts left 1s and all audited consistent"),
    );
}

#[test]
fn criterion_08_reduction_engine() {
    let expectations = [
        ("p1", 1u32),
        ("p2", 2),
        ("p3", 3),
        ("r0", 2),
        ("r2", 2),
        ("r1", 3),
    ];
    for (name, exponent) in expectations {
        let report = reduce_polylog(&named(name));
        assert_eq!(report.outcome, ReductionOutcome::Success, "{name} must reduce");
        assert_eq!(report.exponent, exponent, "{name} exponent");
    }
    for name in ["s0", "s1"] {
        let report = reduce_polylog(&named(name));
        assert_eq!(report.outcome, ReductionOutcome::Stuck, "{name} must be stuck");
    }
    pass(8, "exponents p1=1 p2=2 p3=3 r0=2 r2=2 r1=3; s0 and s1 stuck");
}

#[test]
fn criterion_09_degeneracy() {
    for text in ["1", "1.1", "1111"] {
        assert_eq!(degeneracy_class(&Pattern::parse(text).unwrap()), Some(0));
    }
    assert_eq!(degeneracy_class(&named("s0")), Some(2));
    assert_eq!(degeneracy_class(&named("s1")), Some(2));
    pass(9, "single rows are class 0; s0 and s1 are class 2");
}

#[test]
fn criterion_10_exact_search_matches_brute_force() {
    // One mask sweep per host size, all corpus patterns at once; the
    // oracle side uses only the naive enumerator.
    let patterns = corpus();
    let mut dims: Vec<(usize, usize)> = Vec::new();
    for n in 1..=16 {
        for m in 1..=16 {
            if n * m <= 16 {
                dims.push((n, m));
            }
        }
    }
    let mut checked = 0u64;
    for &(n, m) in &dims {
        let cells = n * m;
        let mut best = vec![0u64; patterns.len()];
        for mask in 0u64..(1 << cells) {
            let weight = mask.count_ones() as u64;
            let ones: Vec<(u32, u32)> = (0..cells)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| ((i / m) as u32, (i % m) as u32))
                .collect();
            let host = Matrix01::from_sorted_ones(n, m, ones).unwrap();
            for (pi, (_, p)) in patterns.iter().enumerate() {
                if weight > best[pi] && naive_contains(p, &host).is_none() {
                    best[pi] = weight;
                }
            }
        }
        for (pi, (name, p)) in patterns.iter().enumerate() {
            let res = exact_ex(p, n, m, &ExOptions::default()).unwrap();
            assert!(res.exact);
            assert_eq!(
                res.value, best[pi],
                "{name} on {n}x{m}: search {} vs oracle {}",
                res.value, best[pi]
            );
            checked += 1;
        }
    }
    let identity2 = Pattern::parse("1.\n.1").unwrap();
    assert_eq!(exact_ex(&identity2, 3, 3, &ExOptions::default()).unwrap().value, 5);
    pass(
        10,
        &format!("{checked} (pattern, host-size) pairs match the 2^(nm) oracle; Ex(identity2, 3) = 5"),
    );
}

#[test]
fn criterion_11_audit_and_mutations() {
    let mut rng = SplitMix64::new(7);
    let hosts: Vec<&LabeledMatrix> = vec![
        a_3_8(),
        at_4_6_2(),
        at_4_4_3(),
    ];
    let small_a: Vec<LabeledMatrix> = vec![
        build_a(1, 2, &limits()).unwrap(),
        build_a(2, 4, &limits()).unwrap(),
    ];
    let all: Vec<&LabeledMatrix> = small_a.iter().chain(hosts.iter().copied()).collect();
    for lm in &all {
        let report = audit_simple_properties(lm);
        assert!(report.pass, "audit failed: {:?}", report.violation);
        for _ in 0..10 {
            let r = rng.below(lm.matrix.rows() as u64) as u32;
            let c = rng.below(lm.matrix.cols() as u64) as u32;
            let mutated = LabeledMatrix {
                matrix: lm.matrix.with_toggled(r, c),
                params: lm.params.clone(),
                row_labels: lm.row_labels.clone(),
                col_labels: lm.col_labels.clone(),
            };
            let report = audit_simple_properties(&mutated);
            assert!(!report.pass, "mutation at ({r}, {c}) went unnoticed");
        }
    }
    pass(11, "audits pass on all five constructions and fail on every sampled mutation");
}

#[test]
fn criterion_12_lift_agrees_with_planar_containment() {
    let s0 = named("s0");
    let host = build_a(1, 2, &limits()).unwrap();
    let planar = contains_with(&s0, &host.matrix, &SearchOptions::default());
    let lifted = contains_r(
        &lift_pattern(&s0, 3).unwrap(),
        &stack_matrix(&host.matrix, 3).unwrap(),
    )
    .unwrap();
    assert_eq!(planar.is_witness(), lifted);
    assert_eq!(planar, Outcome::Free);

    // And a positive case for the same equivalence.
    let p1 = named("p1");
    let dense_host = pattern_as_matrix(&p1);
    assert!(contains_r(
        &lift_pattern(&p1, 3).unwrap(),
        &stack_matrix(&dense_host, 3).unwrap()
    )
    .unwrap());
    pass(12, "3-D lift/stack containment agrees with the planar result");
}
