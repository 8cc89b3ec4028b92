//! Acceptance criteria 1 to 10, one test each.

use std::sync::Arc;
use std::time::{Duration, Instant};

use capbound::bounds::{
    check_additivity, fstar, fstar_full, make_minrank_oracle, make_theta_oracle,
    optimize_geometric_mean, path_union_table, AlphaOracle, BoundOracle, CliqueCoverOracle,
    ExactMinrankOracle, FractionalAlphaOracle, GeometricTerm, SubsetFamily,
};
use capbound::combinatorics::{
    clique_cover_number, fractional_independence, independence_number, MAX_EXACT_VERTICES,
};
use capbound::index_coding::{fixture_oracle, separation_witness};
use capbound::lp::verify_certificate;
use capbound::minrank::fixture::{
    apex_extended_matrix, appendix_script, fixture, t_set, validate_fixture, RESIDUAL_INDEPENDENT,
};
use capbound::minrank::{
    minrank_exact_small, minrank_upper, path_minrank, replay_deletion_proof, FieldSpec,
    FittingMatrix, Verdict,
};
use capbound::scalar::{rational, to_f64};
use capbound::theta::lovasz_theta;
use capbound::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
    out
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

#[test]
fn criterion_01_fractional_independence_of_odd_cycles() {
    for n in [5usize, 7, 9, 11] {
        let v = timed(Duration::from_secs(1), "α_f", || {
            fractional_independence(&Graph::cycle(n).unwrap())
                .unwrap()
                .value
        });
        assert_eq!(v, rational(n as i64, 2), "C{n}");
    }
}

#[test]
fn criterion_02_fstar_of_rational_minrank_on_odd_cycles() {
    for k in 1..=9 {
        let p = Graph::path(k).unwrap();
        assert_eq!(
            minrank_exact_small(&p, FieldSpec::Prime(2)).unwrap().value,
            path_minrank(k),
            "P{k}"
        );
        let alpha = independence_number(&p).unwrap();
        assert_eq!(alpha, path_minrank(k));
        assert_eq!(clique_cover_number(&p).unwrap(), alpha);
    }
    for n in [5usize, 7, 9] {
        let v = timed(Duration::from_secs(5), "minrk_Q f*", || {
            let g = Graph::cycle(n).unwrap();
            let table = path_union_table(&g, FieldSpec::Rationals).unwrap();
            let oracle = make_minrank_oracle(&g, FieldSpec::Rationals, table).unwrap();
            fstar(&g, &oracle, &SubsetFamily::all_subsets(&g).unwrap())
                .unwrap()
                .value
        });
        assert_eq!(v, rational(n as i64, 2), "C{n}");
    }
}

#[test]
fn criterion_03_schlafli_ranks() {
    timed(Duration::from_secs(1), "ranks", || {
        let g = Graph::schlafli_complement();
        for field in [FieldSpec::Rationals, FieldSpec::Prime(11)] {
            let b = FittingMatrix::adjacency_minus_identity(g.clone(), field);
            assert_eq!(minrank_upper(&g, &b).unwrap(), 7, "{field}");
        }
    });
}

#[test]
fn criterion_04_theta_of_c5_and_schlafli() {
    let c5 = lovasz_theta(&Graph::cycle(5).unwrap(), 1e-7)
        .unwrap()
        .interval();
    assert!(
        c5.contains(5f64.sqrt(), 1e-5) && c5.width() <= 2e-5,
        "{c5:?}"
    );
    let s = timed(Duration::from_secs(30), "27-vertex SDP", || {
        lovasz_theta(&Graph::schlafli_complement(), 1e-7)
            .unwrap()
            .interval()
    });
    assert!(s.contains(9.0, 1e-5) && s.width() <= 2e-5, "{s:?}");
}

#[test]
fn criterion_05_fixture_fstar_is_71_over_9() {
    let g = fixture().unwrap();
    let check = validate_fixture(&g).unwrap();
    assert!(
        check.is_valid(),
        "fixture discrepancy: {:?}",
        check.violations
    );
    let oracle = fixture_oracle(&g, FieldSpec::Prime(11)).unwrap();
    let mut family = SubsetFamily::maximal_cliques(&g).unwrap();
    family.extend([t_set()]).unwrap();
    let r = fstar(&g, &oracle, &family).unwrap();
    assert!(r.verify());
    assert_eq!(r.value, rational(71, 9));
}

#[test]
fn criterion_06_appendix_deletion_proof() {
    timed(Duration::from_secs(60), "appendix replay", || {
        let g = fixture().unwrap();
        let proof = replay_deletion_proof(&g, &appendix_script(&g).unwrap()).unwrap();
        assert_eq!(proof.trail.len(), 11);
        assert_eq!(proof.alpha_original, 7);
        assert_eq!(proof.alpha_residual, 8);
        let witness = g
            .vertex_set(RESIDUAL_INDEPENDENT.iter().map(|l| l - 1))
            .unwrap();
        assert_eq!(proof.residual_witness, witness);
        assert_eq!(proof.verdict, Verdict::MinrankExceedsAlpha);
        for field in [FieldSpec::Rationals, FieldSpec::Prime(11)] {
            assert_eq!(
                minrank_upper(&g, &apex_extended_matrix(&g, field).unwrap()).unwrap(),
                8
            );
        }
    });
}

#[test]
fn criterion_07_geometric_mean_optimum() {
    let (a, v) = timed(Duration::from_secs(1), "ternary search", || {
        let terms = [
            GeometricTerm {
                theta: 9.0,
                base: 7.0,
                multiplicity: 1,
            },
            GeometricTerm {
                theta: 5f64.sqrt(),
                base: 2.5,
                multiplicity: 7,
            },
        ];
        optimize_geometric_mean(&terms, 1e-9).unwrap()
    });
    assert!((v - 24.4721).abs() <= 1e-3, "{v}");
    assert!((a - 0.287291).abs() <= 1e-3, "{a}");
}

#[test]
fn criterion_08_separation_witness() {
    let w = timed(Duration::from_secs(300), "witness", || {
        separation_witness(1e-7).unwrap()
    });
    let want = 9.0 + 7.0 * 5f64.sqrt();
    assert!(w.theta_direct.contains(want, 1e-4), "{:?}", w.theta_direct);
    assert!(
        w.theta_additive.contains(want, 1e-4),
        "{:?}",
        w.theta_additive
    );
    let slack = w.theta_direct.width() + w.theta_additive.width() + 2e-7;
    assert!((w.theta_direct.midpoint() - w.theta_additive.midpoint()).abs() <= slack);
    assert_eq!(w.minrank_upper, 28);
    assert!(w.fstar.value <= rational(49, 2));
    assert!(to_f64(&w.fstar.value) < w.theta_direct.lower);
}

#[test]
fn criterion_09_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let oracles: Vec<Arc<dyn BoundOracle>> = vec![
        Arc::new(AlphaOracle),
        Arc::new(FractionalAlphaOracle),
        Arc::new(CliqueCoverOracle),
        Arc::new(ExactMinrankOracle::new(FieldSpec::Prime(2))),
        Arc::new(make_theta_oracle(1e-7).unwrap()),
    ];
    let mut violations = Vec::new();
    for i in 0..200 {
        let g = random_graph(&mut rng, 5);
        let h = random_graph(&mut rng, 5);
        let mut note = |ok: bool, what: &str| {
            if !ok {
                violations.push(format!("graph {i}: {what}"));
            }
        };
        let fi = fractional_independence(&g).unwrap();
        note(
            verify_certificate(&fi.problem(), &fi.certificate),
            "α_f certificate",
        );
        let mut licensed = f64::INFINITY;
        for f in &oracles {
            let full = fstar_full(&g, f.as_ref()).unwrap();
            note(full.verify(), "f* certificate");
            note(full.value <= f.evaluate_graph(&g).unwrap(), "f* <= f");
            let restricted =
                fstar(&g, f.as_ref(), &SubsetFamily::default_for(&g, []).unwrap()).unwrap();
            note(full.value <= restricted.value, "family monotonicity");
            if f.licence().capacity {
                licensed = licensed.min(to_f64(&full.value));
            }
            if f.name().starts_with("theta") || g.n() + h.n() > 8 {
                continue;
            }
            let sum = full.value.clone() + fstar_full(&h, f.as_ref()).unwrap().value;
            note(
                fstar_full(&g.disjoint_union(&h), f.as_ref()).unwrap().value <= sum,
                "subadditivity",
            );
            if f.flags().superadditive {
                note(check_additivity(&g, &h, f.as_ref()).unwrap(), "additivity");
            }
        }
        for k in 1..=3 {
            let p = g.power(k).unwrap();
            if p.n() <= MAX_EXACT_VERTICES {
                let a = independence_number(&p).unwrap() as f64;
                note(
                    a.powf(1.0 / k as f64) <= licensed + 1e-6,
                    "α(G^k)^(1/k) <= f*",
                );
            }
        }
        if g.n() * h.n() <= 16 {
            let t = |x: &Graph| lovasz_theta(x, 1e-7).unwrap().interval();
            let (tg, th) = (t(&g), t(&h));
            let tol = 1e-5;
            note(
                (t(&g.strong_product(&h)).midpoint() - tg.midpoint() * th.midpoint()).abs() <= tol,
                "ϑ multiplicative",
            );
            note(
                (t(&g.disjoint_union(&h)).midpoint() - tg.midpoint() - th.midpoint()).abs() <= tol,
                "ϑ additive",
            );
        }
    }
    assert!(violations.is_empty(), "{violations:#?}");
}

#[test]
fn criterion_10_theta_fixed_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let oracle = make_theta_oracle(1e-7).unwrap();
    timed(Duration::from_secs(600), "fixed point", || {
        for i in 0..20 {
            let g = random_graph(&mut rng, 7);
            let t = lovasz_theta(&g, 1e-7).unwrap().interval();
            let v = to_f64(&fstar_full(&g, &oracle).unwrap().value);
            assert!(t.contains(v, 1e-3), "graph {i}: f* = {v}, ϑ in {t:?}");
        }
    });
}
