//! Desk-scale consequences the constructions must exhibit: defining
//! equations, size bounds, avoidance on the parameter grids, and the
//! agreement between the planar and lifted containment checks.

use zom::behrend::build_dense_s0t;
use zom::constructions::{build_a, build_at, weight_bound_a, BuildLimits};
use zom::contains::{contains_with, Outcome, SearchOptions};
use zom::extremal::{density_table, exact_ex, ExOptions};
use zom::registry::{alternating, registry_pattern, s0_general};
use zom::rng::SplitMix64;
use zom::tensor::{contains_r, lift_pattern, stack_matrix};
use zom::{pattern_as_matrix, Pattern, Transform};

fn limits() -> BuildLimits {
    BuildLimits::default()
}

fn opts() -> SearchOptions {
    SearchOptions::default()
}

#[test]
fn defining_equation_full_check_small() {
    // Every labeled cell of small builds matches the equation exactly.
    for lm in [
        build_a(1, 3, &limits()).unwrap(),
        build_a(2, 3, &limits()).unwrap(),
        build_at(2, 3, 2, &limits()).unwrap(),
    ] {
        for r in 0..lm.matrix.rows() as u32 {
            for c in 0..lm.matrix.cols() as u32 {
                let holds =
                    lm.equation_holds(&lm.row_labels[r as usize], &lm.col_labels[c as usize]);
                assert_eq!(holds, lm.matrix.get(r, c), "cell ({r}, {c})");
            }
        }
    }
}

#[test]
fn defining_equation_sampled_check_large() {
    let lm = build_a(3, 8, &limits()).unwrap();
    let mut rng = SplitMix64::new(11);
    for _ in 0..5000 {
        let r = rng.below(lm.matrix.rows() as u64) as u32;
        let c = rng.below(lm.matrix.cols() as u64) as u32;
        let holds = lm.equation_holds(&lm.row_labels[r as usize], &lm.col_labels[c as usize]);
        assert_eq!(holds, lm.matrix.get(r, c), "cell ({r}, {c})");
    }
}

#[test]
fn alternating_square_case_dimensions() {
    // m = C(b,t) makes the family square: 6^5 rows and 6^4 * 6 columns.
    let lm = build_at(4, 6, 2, &limits()).unwrap();
    assert_eq!(lm.matrix.rows(), 7776);
    assert_eq!(lm.matrix.cols(), 7776);
}

#[test]
fn alternating_size_bound_quarter_slack() {
    // weight >= cols * (floor(m/2) - 1) / 4^t for t in {2,3}, b <= 4, m <= 6.
    for t in [2u32, 3] {
        for b in t as usize..=4 {
            for m in 1..=6u32 {
                let lm = build_at(b, m, t, &limits()).unwrap();
                let cols = lm.matrix.cols() as i128;
                let bound_numer = cols * (m as i128 / 2 - 1);
                let lhs = lm.matrix.weight() as i128 * 4i128.pow(t);
                assert!(
                    lhs >= bound_numer,
                    "At[{b},{m},{t}]: weight {} * 4^{t} < {bound_numer}",
                    lm.matrix.weight()
                );
            }
        }
    }
}

#[test]
fn base_family_avoids_covering_patterns_small_grid() {
    for b in 1..=2usize {
        for m in 1..=4u32 {
            let lm = build_a(b, m, &limits()).unwrap();
            for name in ["s0", "s1", "s2", "s3"] {
                let p = registry_pattern(name, None).unwrap();
                assert_eq!(
                    contains_with(&p, &lm.matrix, &opts()),
                    Outcome::Free,
                    "{name} found in A[{b},{m}]"
                );
            }
        }
    }
}

#[test]
fn alternating_family_is_free_on_square_grid() {
    // m = C(b,t) gives the square instances.
    for (b, t, m) in [(2usize, 2u32, 1u32), (3, 2, 3), (3, 3, 1), (4, 2, 6)] {
        let lm = build_at(b, m, t, &limits()).unwrap();
        let p = alternating(t).unwrap();
        assert_eq!(
            contains_with(&p, &lm.matrix, &opts()),
            Outcome::Free,
            "p{t} found in At[{b},{m}]"
        );
    }
}

#[test]
fn dense_family_avoids_its_pattern_on_feasible_grid() {
    // (2,3) needs ~1e11 cells, far beyond the cap, so the grid stops here.
    for (b, t) in [(1usize, 2u32), (2, 2), (1, 3)] {
        let (lm, set) = build_dense_s0t(b, t, &limits()).unwrap();
        assert!(set.verified);
        // Column count is the full labeled product.
        assert_eq!(
            lm.matrix.cols() as u64,
            (lm.params.m as u64).pow(b as u32) * (t as u64).pow(b as u32)
        );
        let p = s0_general(t).unwrap();
        assert_eq!(
            contains_with(&p, &lm.matrix, &opts()),
            Outcome::Free,
            "s0t({t}) found in dense[{b}]"
        );
    }
}

#[test]
fn lift_and_stack_agree_with_planar_containment() {
    let cases = [
        ("s0", build_a(1, 2, &limits()).unwrap().matrix),
        ("p1", pattern_as_matrix(&registry_pattern("p2", None).unwrap())),
        ("q3", pattern_as_matrix(&registry_pattern("q3", None).unwrap())),
        ("p1", zom::rng::random_matrix(8, 8, 1, 2, 3)),
        ("s0", zom::rng::random_matrix(9, 9, 2, 3, 4)),
    ];
    for (name, host) in cases {
        let p = registry_pattern(name, None).unwrap();
        let planar = contains_with(&p, &host, &opts()).is_witness();
        for r in [3usize, 4] {
            let lifted = contains_r(
                &lift_pattern(&p, r).unwrap(),
                &stack_matrix(&host, r).unwrap(),
            )
            .unwrap();
            assert_eq!(lifted, planar, "{name} lift r={r}");
        }
    }
}

#[test]
fn weight_bound_monotone_sanity() {
    // The bound follows the ceil formula and never exceeds the real weight.
    for b in 1..=3usize {
        for m in 1..=8u32 {
            let bound = weight_bound_a(b, m).unwrap();
            let lm = build_a(b, m, &limits()).unwrap();
            assert!(lm.matrix.weight() as u64 >= bound);
        }
    }
}

#[test]
fn density_table_square_family_gets_denser() {
    let rows = density_table(
        zom::constructions::Variant::A,
        &[(1, 2, None), (2, 4, None), (3, 8, None)],
        &limits(),
    )
    .unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.windows(2).all(|w| w[0].density < w[1].density));
    assert!(rows.iter().all(|r| r.status == "ok"));
}

#[test]
fn exact_ex_monotone_in_dimensions() {
    let patterns = [
        Pattern::parse("1.\n.1").unwrap(),
        Pattern::parse("11").unwrap(),
        registry_pattern("p1", None).unwrap(),
    ];
    let ex = |p: &Pattern, n: usize, m: usize| {
        exact_ex(p, n, m, &ExOptions::default()).unwrap().value
    };
    for p in &patterns {
        for n in 1..=3 {
            for m in 1..=3 {
                let base = ex(p, n, m);
                assert!(ex(p, n + 1, m) >= base);
                assert!(ex(p, n, m + 1) >= base);
            }
        }
    }
}

#[test]
fn exact_ex_transpose_symmetry() {
    for name in ["p1", "q3", "r0"] {
        let p = registry_pattern(name, None).unwrap();
        let pt = p.transform(Transform::Transpose);
        for (n, m) in [(2usize, 3usize), (3, 3), (3, 4), (2, 5)] {
            let a = exact_ex(&p, n, m, &ExOptions::default()).unwrap().value;
            let b = exact_ex(&pt, m, n, &ExOptions::default()).unwrap().value;
            assert_eq!(a, b, "{name} on {n}x{m}");
        }
    }
}
