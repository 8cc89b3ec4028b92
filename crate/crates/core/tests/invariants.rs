//! Randomized invariants of graphs, the exact LP, α, fitting matrices and ϑ.

use capbound::combinatorics::{clique_cover_number, fractional_independence, independence_number};
use capbound::lp::{solve, verify_certificate, Constraint, LpStatus, Relation};
use capbound::minrank::{check_fits, minrank_upper, rank, FieldSpec, FittingMatrix};
use capbound::scalar::{int, to_f64};
use capbound::theta::{lovasz_theta, theta_odd_cycle};
use capbound::{Graph, LpProblemQ, Rational};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0xa11ce),
        failure_persistence: None,
        ..Config::default()
    }
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// A fitting matrix with entries in -3..=3, nonzero diagonal.
fn fitting(g: Graph, seeds: Vec<i64>) -> FittingMatrix {
    let n = g.n();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = seeds[i * n + j];
                    if i == j {
                        int(if s == 0 { 1 } else { s })
                    } else if g.has_edge(i, j) {
                        int(s)
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect();
    FittingMatrix::new(g, FieldSpec::Rationals, entries).unwrap()
}

fn graph_with_matrix(max_n: usize) -> impl Strategy<Value = FittingMatrix> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |s| fitting(g.clone(), s))
    })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn strong_product_matches_definition(g in graph(4), h in graph(4)) {
        let p = g.strong_product(&h);
        prop_assert_eq!(p.n(), g.n() * h.n());
        let m = h.n();
        for x in 0..p.n() {
            for y in 0..p.n() {
                let (a, b, c, d) = (x / m, x % m, y / m, y % m);
                let close = |u: &Graph, s, t| s == t || u.has_edge(s, t);
                let want = x != y && close(&g, a, c) && close(&h, b, d);
                prop_assert_eq!(p.has_edge(x, y), want);
            }
        }
    }

    #[test]
    fn strong_product_is_associative(a in graph(3), b in graph(3), c in graph(3)) {
        prop_assert_eq!(a.strong_product(&b).strong_product(&c), a.strong_product(&b.strong_product(&c)));
    }

    #[test]
    fn induced_subgraphs_commute_with_products(g in graph(4), h in graph(4), s in any::<u8>(), t in any::<u8>()) {
        let sg = g.vertex_set((0..g.n()).filter(|v| s >> v & 1 == 1 || *v == 0)).unwrap();
        let th = h.vertex_set((0..h.n()).filter(|v| t >> v & 1 == 1 || *v == 0)).unwrap();
        let m = h.n();
        let cross = (0..g.n() * m).filter(|x| sg.contains(x / m) && th.contains(x % m));
        let p = g.strong_product(&h);
        let left = p.induced_subgraph(&p.vertex_set(cross).unwrap()).unwrap();
        let right = g.induced_subgraph(&sg).unwrap().strong_product(&h.induced_subgraph(&th).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn independence_chain(g in graph(5), h in graph(5)) {
        let a = independence_number(&g).unwrap();
        let af = fractional_independence(&g).unwrap().value;
        let cover = clique_cover_number(&g).unwrap();
        prop_assert!(int(a as i64) <= af && af <= int(cover as i64));
        let b = independence_number(&h).unwrap();
        prop_assert_eq!(independence_number(&g.disjoint_union(&h)).unwrap(), a + b);
        prop_assert!(independence_number(&g.strong_product(&h)).unwrap() >= a * b);
    }

    #[test]
    fn lp_duality_and_determinism(
        c in proptest::collection::vec(-4i64..=4, 3),
        rows in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 3), any::<bool>(), -5i64..=8), 1..6),
    ) {
        let constraints = rows
            .iter()
            .map(|(a, le, b)| Constraint {
                coefficients: a.iter().map(|&x| int(x)).collect(),
                relation: if *le { Relation::Le } else { Relation::Ge },
                rhs: int(*b),
            })
            .collect();
        let p = LpProblemQ::new(c.iter().map(|&x| int(x)).collect(), constraints).unwrap();
        let first = solve(&p).unwrap();
        prop_assert_eq!(&first, &solve(&p).unwrap());
        prop_assert!(verify_certificate(&p, &first));
        if first.status == LpStatus::Optimal {
            let primal: Rational = p.objective().iter().zip(&first.primal).map(|(a, x)| a * x).sum();
            let dual: Rational = p.constraints().iter().zip(&first.dual).map(|(r, y)| &r.rhs * y).sum();
            prop_assert_eq!(&primal, &first.objective);
            prop_assert_eq!(&dual, &first.objective);
        }
    }

    #[test]
    fn prime_rank_never_exceeds_rational_rank(
        m in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 1..5),
        p in prop::sample::select(vec![2u32, 3, 5, 7, 11]),
    ) {
        let m: Vec<Vec<Rational>> = m.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
        prop_assert!(rank(&m, FieldSpec::Prime(p)).unwrap() <= rank(&m, FieldSpec::Rationals).unwrap());
    }

    #[test]
    fn fitting_matrices_bound_alpha(b in graph_with_matrix(5)) {
        let g = b.graph().clone();
        prop_assert!(check_fits(&b));
        prop_assert!(independence_number(&g).unwrap() <= minrank_upper(&g, &b).unwrap());
    }

    #[test]
    fn block_diagonal_ranks_add(b in graph_with_matrix(4), c in graph_with_matrix(4)) {
        let d = b.block_diagonal(&c).unwrap();
        prop_assert!(check_fits(&d));
        prop_assert_eq!(d.rank(), b.rank() + c.rank());
    }

    #[test]
    fn theta_sandwich(g in graph(5)) {
        let t = lovasz_theta(&g, 1e-7).unwrap().interval();
        let a = independence_number(&g).unwrap() as f64;
        let af = to_f64(&fractional_independence(&g).unwrap().value);
        prop_assert!(a - 1e-7 <= t.upper && t.lower <= af + 1e-7);
    }
}

proptest! {
    #![proptest_config(config(60))]

    #[test]
    fn kronecker_squares_fit_strong_squares(b in graph_with_matrix(4)) {
        let k = b.kronecker(&b).unwrap();
        prop_assert_eq!(k.graph(), &b.graph().strong_product(b.graph()));
        prop_assert!(check_fits(&k));
    }

    #[test]
    fn theta_is_multiplicative_and_additive(g in graph(5), h in graph(5)) {
        prop_assume!(g.n() * h.n() <= 25);
        let t = |x: &Graph| lovasz_theta(x, 1e-7).unwrap().interval();
        let (tg, th) = (t(&g), t(&h));
        let p = t(&g.strong_product(&h));
        let u = t(&g.disjoint_union(&h));
        let slack = p.width() + tg.width() * th.upper + th.width() * tg.upper + 1e-6;
        prop_assert!(p.lower <= tg.upper * th.upper + slack && tg.lower * th.lower <= p.upper + slack);
        prop_assert!(u.lower <= tg.upper + th.upper + 1e-6 && tg.lower + th.lower <= u.upper + 1e-6);
    }
}

#[test]
fn theta_of_odd_cycles_matches_closed_form() {
    for n in (3..=13).step_by(2) {
        let t = lovasz_theta(&Graph::cycle(n).unwrap(), 1e-7)
            .unwrap()
            .interval();
        assert!(t.contains(theta_odd_cycle(n).unwrap(), 1e-7), "C{n}: {t:?}");
    }
}

#[test]
fn schlafli_complement_is_strongly_regular() {
    assert!(Graph::schlafli_complement().is_strongly_regular(27, 10, 1, 5));
}
